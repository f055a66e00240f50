#include <doctest.h>

#include "epddl/backend_mar.hpp"
#include "epddl/kripke.hpp"
#include "epddl/mar_reader.hpp"
#include "epddl/parser.hpp"
#include "test_util.hpp"

using namespace epddl;

namespace {

MarArtifact emit(const GroundedProblem& g, MarOptions opts = {}) {
    auto r = emit_mar(g, opts);
    REQUIRE(r.ok());
    return *r.value;
}

GroundedProblem coin() { return ground(testutil::coin_problem()); }

bool has_statement(const std::string& text, const std::string& stmt) {
    return text.find(stmt) != std::string::npos;
}

}  // namespace

TEST_CASE("the coin translation contains the reference statements") {
    MarArtifact a = emit(coin());
    CHECK(has_statement(a.text, "executable open_a if B(a,has_key_a);"));
    CHECK(has_statement(a.text, "open_a causes opened;"));
    CHECK(has_statement(a.text, "a observes open_a;"));
    CHECK(has_statement(a.text, "b observes open_a if looking_b;"));
    CHECK(has_statement(a.text, "c observes open_a if looking_c;"));
    CHECK(has_statement(a.text, "executable peek_a if B(a,opened),B(a,looking_a);"));
    CHECK(has_statement(a.text, "peek_a determines tails if looking_a;"));
    CHECK(has_statement(a.text, "b aware_of peek_a if looking_b;"));
    CHECK(has_statement(a.text, "announce_a announces tails;"));
    CHECK(has_statement(a.text, "initially C([a,b,c],has_key_a);"));
    CHECK(has_statement(a.text, "initially C([a,b,c],-opened);"));
    CHECK(has_statement(a.text, "goal B(a,tails);"));
}

TEST_CASE("the rename map produces the abbreviated fluent names") {
    MarOptions opts;
    opts.rename["looking"] = "look";
    MarArtifact a = emit(coin(), opts);
    CHECK(has_statement(a.text, "b observes open_a if look_b;"));
    CHECK(has_statement(a.text, "peek_a determines tails if look_a;"));
    CHECK(has_statement(a.text, "executable peek_a if B(a,opened),B(a,look_a);"));
    CHECK(has_statement(a.text, "initially C([a,b,c],look_a);"));
    CHECK(!has_statement(a.text, "looking"));
}

TEST_CASE("every statement ends with a semicolon and sections precede statements") {
    MarArtifact a = emit(coin());
    std::istringstream is(a.text);
    std::string line;
    size_t statements = 0;
    bool seen_fluent = false, seen_exec = false;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        CHECK(line.back() == ';');
        ++statements;
        if (line.rfind("fluent ", 0) == 0) {
            seen_fluent = true;
            CHECK(!seen_exec);
        }
        if (line.rfind("executable ", 0) == 0) {
            CHECK(seen_fluent);
            seen_exec = true;
        }
    }
    CHECK(statements == a.statement_count);
}

TEST_CASE("statement counts follow the per-action formula") {
    GroundedProblem g = coin();
    MarArtifact a = emit(g);
    // declarations: fluent, action, agent
    size_t expected = 3;
    for (const auto& act : g.actions) {
        expected += 1;  // executable
        expected += act.act_type == ActionType::Ontic ? act.effects.size() : 1;
        expected += act.full_observers.size() + act.partial_observers.size();
    }
    // initially: positives, negatives, one per common entry; goal: one conjunct
    expected += 2 + g.init_beliefs.size() + 1;
    CHECK(a.statement_count == expected);
}

TEST_CASE("exp_effect never reaches the mar output") {
    GroundedProblem g = coin();
    MarArtifact before = emit(g);
    for (auto& act : g.actions)
        act.exp_effect = Formula::believes(Term::constant("a"),
                                           Formula::atom(Fluent{"tails", {}}));
    MarArtifact after = emit(g);
    CHECK(before.text == after.text);
}

TEST_CASE("an empty precondition renders as executable if true") {
    auto domain = parse_domain(
        "(define (domain d) (:requirements :mep) (:predicates (f))"
        " (:action act :act_type ontic :parameters (?i - agent) :effect (f)"
        "  :observers (?i)))");
    REQUIRE(domain.ok());
    auto inst = parse_instance(
        "(define (problem p) (:domain d) (:agent a) (:depth 1) (:init) (:goal (f)))");
    REQUIRE(inst.ok());
    auto validated = validate(*domain.value, *inst.value);
    REQUIRE(validated.ok());
    MarArtifact a = emit(ground(*validated.value));
    CHECK(has_statement(a.text, "executable act_a if true;"));
}

TEST_CASE("implication in the goal is rejected with a diagnostic") {
    GroundedProblem g = coin();
    g.goal = Formula::implication(Formula::atom(Fluent{"tails", {}}),
                                  Formula::atom(Fluent{"opened", {}}));
    auto r = emit_mar(g);
    CHECK(!r.ok());
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics[0].code == codes::unsupported_goal);
}

TEST_CASE("disjunction in an executability condition is rejected") {
    GroundedProblem g = coin();
    g.actions[0].precondition = Formula::disjunction(
        {Formula::atom(Fluent{"tails", {}}), Formula::atom(Fluent{"opened", {}})});
    auto r = emit_mar(g);
    CHECK(!r.ok());
    CHECK(r.diagnostics[0].code == codes::unsupported_cond);
}

TEST_CASE("the internal reader round-trips the emitted problem") {
    GroundedProblem g = coin();
    MarArtifact a = emit(g);
    auto re = read_mar(a.text);
    REQUIRE(re.ok());
    const GroundedProblem& h = *re.value;
    CHECK(h.fluents.size() == g.fluents.size());
    CHECK(h.actions.size() == g.actions.size());
    CHECK(h.agents.size() == g.agents.size());
    for (const auto& act : g.actions) {
        const GroundAction* other = h.find_action(act.name);
        REQUIRE(other);
        CHECK(other->act_type == act.act_type);
        CHECK(other->full_observers.size() == act.full_observers.size());
        CHECK(other->partial_observers.size() == act.partial_observers.size());
    }
    std::set<std::string> w1, w2;
    for (const auto& f : g.init_world) w1.insert(f.ground_name());
    for (const auto& f : h.init_world) w2.insert(f.ground_name());
    CHECK(w1 == w2);
    CHECK(h.init_beliefs.size() == g.init_beliefs.size());

    // translation preserves plan existence and length on the toy problem
    SearchLimits limits;
    limits.max_plan_length = 4;
    PlanResult original = bfs_plan(g, limits);
    PlanResult roundtrip = bfs_plan(h, limits);
    REQUIRE(original.found());
    REQUIRE(roundtrip.found());
    CHECK(original.actions == roundtrip.actions);
}

TEST_CASE("emission is deterministic") {
    GroundedProblem g = coin();
    CHECK(emit(g).text == emit(g).text);
}
