#include <doctest.h>

#include "epddl/parser.hpp"
#include "epddl/validator.hpp"
#include "test_util.hpp"

using namespace epddl;

namespace {

std::vector<std::string> codes_of(const std::vector<Diagnostic>& diags) {
    std::vector<std::string> out;
    for (const auto& d : diags) out.push_back(d.code);
    return out;
}

bool has_code(const std::vector<Diagnostic>& diags, const char* code) {
    for (const auto& d : diags)
        if (d.code == code) return true;
    return false;
}

}  // namespace

TEST_CASE("the coin pair validates with zero errors and zero warnings") {
    auto r = validate(testutil::coin_domain(), testutil::coin_instance());
    REQUIRE(r.ok());
    CHECK(r.value->warnings.empty());
}

TEST_CASE("disjunctive ontic effects are rejected") {
    EpddlDomain d = testutil::coin_domain();
    d.actions[0].effect = Formula::disjunction(
        {Formula::atom(Fluent{"opened", {}}), Formula::atom(Fluent{"tails", {}})});
    auto r = validate(d, testutil::coin_instance());
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::effect_shape));
}

TEST_CASE("sensing effects must be a single fluent") {
    EpddlDomain d = testutil::coin_domain();
    d.actions[1].effect = Formula::conjunction(
        {Formula::atom(Fluent{"tails", {}}), Formula::atom(Fluent{"opened", {}})});
    auto r = validate(d, testutil::coin_instance());
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::effect_shape));
}

TEST_CASE("agent-level init knowledge warns about finitary S5") {
    auto inst = parse_instance(
        "(define (problem p) (:domain coininthebox) (:agent a b c) (:depth 2)"
        " (:init ([a](tails))) (:goal ([a](tails))))");
    REQUIRE(inst.ok());
    auto r = validate(testutil::coin_domain(), *inst.value);
    REQUIRE(r.ok());
    CHECK(has_code(r.value->warnings, codes::not_finitary_s5));
}

TEST_CASE("subset common knowledge in init warns about finitary S5") {
    auto inst = parse_instance(
        "(define (problem p) (:domain coininthebox) (:agent a b c) (:depth 2)"
        " (:init ([a b](tails))) (:goal ([a](tails))))");
    REQUIRE(inst.ok());
    auto r = validate(testutil::coin_domain(), *inst.value);
    REQUIRE(r.ok());
    CHECK(has_code(r.value->warnings, codes::not_finitary_s5));
}

TEST_CASE("domain name mismatch is an error") {
    EpddlInstance inst = testutil::coin_instance();
    inst.domain_name = "other";
    auto r = validate(testutil::coin_domain(), inst);
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::domain_mismatch));
}

TEST_CASE("undeclared predicates and arity mismatches are errors") {
    EpddlInstance inst = testutil::coin_instance();
    inst.init.push_back(Formula::atom(Fluent{"unknown_pred", {}}));
    auto r = validate(testutil::coin_domain(), inst);
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::undeclared_predicate));

    EpddlInstance inst2 = testutil::coin_instance();
    inst2.init.push_back(Formula::atom(Fluent{"opened", {Term::constant("a")}}));
    auto r2 = validate(testutil::coin_domain(), inst2);
    CHECK(!r2.ok());
    CHECK(has_code(r2.diagnostics, codes::arity_mismatch));
}

TEST_CASE("unbound variables are errors") {
    EpddlDomain d = testutil::coin_domain();
    d.actions[0].precondition = Formula::atom(Fluent{"has_key", {Term::variable("z")}});
    auto r = validate(d, testutil::coin_instance());
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::unbound_variable));
}

TEST_CASE("unknown agent constants in init and goal are errors") {
    EpddlInstance inst = testutil::coin_instance();
    inst.goal = Formula::believes(Term::constant("z"), Formula::atom(Fluent{"tails", {}}));
    auto r = validate(testutil::coin_domain(), inst);
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::unknown_agent));
}

TEST_CASE("missing :mep requirement is an error") {
    EpddlDomain d = testutil::coin_domain();
    d.requirements = {":strips"};
    auto r = validate(d, testutil::coin_instance());
    CHECK(!r.ok());
    CHECK(has_code(r.diagnostics, codes::missing_mep));
}

TEST_CASE("goal depth beyond the instance depth warns") {
    EpddlInstance inst = testutil::coin_instance();
    Formula deep = Formula::atom(Fluent{"tails", {}});
    for (int i = 0; i < 3; ++i) deep = Formula::believes(Term::constant("a"), deep);
    inst.goal = deep;
    auto r = validate(testutil::coin_domain(), inst);
    REQUIRE(r.ok());
    CHECK(has_code(r.value->warnings, codes::depth_exceeded));
}

TEST_CASE("ontic actions with partial observers warn") {
    EpddlDomain d = testutil::coin_domain();
    d.actions[0].p_observers = d.actions[1].p_observers;
    auto r = validate(d, testutil::coin_instance());
    REQUIRE(r.ok());
    CHECK(has_code(r.value->warnings, codes::ontic_partial));
}

TEST_CASE("arbitrary exp_effect formulae are accepted") {
    EpddlDomain d = testutil::coin_domain();
    d.actions[0].exp_effect = Formula::implication(
        Formula::atom(Fluent{"tails", {}}),
        Formula::believes(Term::variable("i"), Formula::atom(Fluent{"opened", {}})));
    auto r = validate(d, testutil::coin_instance());
    CHECK(r.ok());
}

TEST_CASE("validation is deterministic") {
    EpddlDomain d = testutil::coin_domain();
    d.requirements = {":strips"};
    d.actions[0].effect = Formula::disjunction(
        {Formula::atom(Fluent{"opened", {}}), Formula::atom(Fluent{"tails", {}})});
    EpddlInstance inst = testutil::coin_instance();
    inst.domain_name = "other";
    auto r1 = validate(d, inst);
    auto r2 = validate(d, inst);
    CHECK(codes_of(r1.diagnostics) == codes_of(r2.diagnostics));
    REQUIRE(r1.diagnostics.size() == r2.diagnostics.size());
    for (size_t i = 0; i < r1.diagnostics.size(); ++i)
        CHECK(r1.diagnostics[i].message == r2.diagnostics[i].message);
}

TEST_CASE("effect-shape checks re-verify on a validated problem") {
    ValidatedProblem p = testutil::coin_problem();
    for (const auto& a : p.domain.actions) {
        if (a.act_type == ActionType::Ontic) {
            for (const auto& c : a.effect.conjuncts()) {
                bool literal = c.kind() == FormulaKind::Atom ||
                               (c.kind() == FormulaKind::Not &&
                                c.children()[0].kind() == FormulaKind::Atom);
                CHECK(literal);
            }
        } else {
            CHECK(a.effect.kind() == FormulaKind::Atom);
        }
    }
}

TEST_CASE("diagnostics render in the documented line format") {
    EpddlDomain d = testutil::coin_domain();
    d.requirements = {":strips"};
    auto r = validate(d, testutil::coin_instance());
    REQUIRE(!r.ok());
    std::string line = render_diagnostic(r.diagnostics[0], {"dom.epddl", "inst.epddl"});
    // severity CODE file:line:col message
    CHECK(line.rfind("error E_MISSING_MEP dom.epddl:", 0) == 0);
    CHECK(line.find(" domain is missing the :mep requirement") != std::string::npos);

    std::string colored = render_diagnostic(r.diagnostics[0], {"dom.epddl"}, true);
    CHECK(colored.find("\033[31m") != std::string::npos);
}
