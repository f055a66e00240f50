#include <doctest.h>

#include "epddl/backend_pdkb.hpp"
#include "epddl/parser.hpp"
#include "test_util.hpp"

using namespace epddl;
using testutil::contains_tokens;

namespace {

PdkbArtifact emit(const ValidatedProblem& p, PdkbOptions opts = {}) {
    auto r = emit_pdkb(p, opts);
    REQUIRE(r.ok());
    return *r.value;
}

// counts balance across the whole text
bool balanced(const std::string& text) {
    int depth = 0;
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ';') {
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (c == '(') ++depth;
        if (c == ')' && --depth < 0) return false;
    }
    return depth == 0;
}

}  // namespace

TEST_CASE("listing-faithful open block matches the reference layout") {
    PdkbOptions opts;
    opts.listing_faithful = true;
    PdkbArtifact a = emit(testutil::coin_problem(), opts);
    CHECK(contains_tokens(a.domain_text,
                          "(action: open"
                          " :parameters (?i - agent)"
                          " :derive (looking $agent$)"
                          " :precondition ([?i](has_key ?i))"
                          " :effects (and (opened)))"));
}

TEST_CASE("default mode widens the derive condition with an executor disjunct") {
    PdkbArtifact a = emit(testutil::coin_problem());
    CHECK(contains_tokens(a.domain_text,
                          ":derive (or (looking $agent$) (= $agent$ ?i))"));
    bool open_widened = false;
    for (const auto& rec : a.manifest)
        if (rec.action == "open") open_widened = rec.widened_derive;
    CHECK(open_widened);
}

TEST_CASE("sensing actions derive never and carry explicit effects") {
    PdkbOptions opts;
    opts.listing_faithful = true;
    PdkbArtifact a = emit(testutil::coin_problem(), opts);
    CHECK(contains_tokens(
        a.domain_text,
        "(action: peek"
        " :parameters (?i - agent)"
        " :derive (never)"
        " :precondition (and ([?i](opened)) ([?i](looking ?i)))"
        " :effects (and [?i](tails)"
        "  (forall (?j - agent) (when (looking ?j) [?j][?i](or (tails) (!tails)))))"));
    for (const auto& rec : a.manifest)
        if (rec.action == "peek") CHECK(rec.strategy == PdkbStrategy::ExplicitEffects);
}

TEST_CASE("canonical sensing effects condition the executor belief on the value") {
    PdkbArtifact a = emit(testutil::coin_problem());
    CHECK(contains_tokens(a.domain_text, "(when (tails) [?i](tails))"));
    CHECK(contains_tokens(a.domain_text, "(when (not (tails)) [?i](not (tails)))"));
}

TEST_CASE("the instance carries the fixed fields and both chain blocks") {
    PdkbArtifact a = emit(testutil::coin_problem());
    CHECK(a.instance_text.find("(:depth 2)") != std::string::npos);
    CHECK(a.instance_text.find("(:projection )") != std::string::npos);
    CHECK(a.instance_text.find("(:task valid_generation)") != std::string::npos);
    CHECK(a.instance_text.find("(:init-type complete)") != std::string::npos);
    CHECK(a.instance_text.find(";Length 1") != std::string::npos);
    CHECK(a.instance_text.find(";Length 2") != std::string::npos);
    CHECK(contains_tokens(a.instance_text,
                          "(forall ?ag1 - agent [?ag1](has_key a))"));
    CHECK(contains_tokens(
        a.instance_text,
        "(forall ?ag1 - agent (forall ?ag2 - agent [?ag2][?ag1](has_key a)))"));
    CHECK(a.instance_text.find(";Length 3") == std::string::npos);
}

TEST_CASE("an unconditional-observer ontic action derives always at depth 1") {
    auto domain = parse_domain(
        "(define (domain d) (:requirements :mep) (:predicates (f))"
        " (:action act :act_type ontic :parameters (?i - agent) :effect (f)"
        "  :observers (and (?i) (forall (diff (?j - agent) (?i)) (?j)))))");
    REQUIRE(domain.ok());
    auto inst = parse_instance(
        "(define (problem p) (:domain d) (:agent a b) (:depth 1) (:init (f))"
        " (:goal (f)))");
    REQUIRE(inst.ok());
    auto validated = validate(*domain.value, *inst.value);
    REQUIRE(validated.ok());
    PdkbArtifact a = emit(*validated.value);
    CHECK(contains_tokens(a.domain_text, ":derive (true)"));
    CHECK(a.instance_text.find(";Length 1") == std::string::npos);  // no common entries
    CHECK(a.instance_text.find("(:depth 1)") != std::string::npos);
}

TEST_CASE("unrepresentable ontic observers fail without the fallback") {
    auto domain = parse_domain(
        "(define (domain d) (:requirements :mep) (:predicates (f) (watch ?i - agent))"
        " (:action act :act_type ontic :parameters (?i - agent ?k - agent) :effect (f)"
        "  :observers (and (?i) (when (watch ?k) (?k)))))");
    REQUIRE(domain.ok());
    auto inst = parse_instance(
        "(define (problem p) (:domain d) (:agent a b) (:depth 1) (:init (f))"
        " (:goal (f)))");
    REQUIRE(inst.ok());
    auto validated = validate(*domain.value, *inst.value);
    REQUIRE(validated.ok());
    auto r = emit_pdkb(*validated.value);
    CHECK(!r.ok());
    REQUIRE(!r.diagnostics.empty());
    CHECK(r.diagnostics[0].code == codes::unrepresentable);

    PdkbOptions opts;
    opts.explicit_fallback = true;
    auto r2 = emit_pdkb(*validated.value, opts);
    CHECK(r2.ok());
    CHECK(contains_tokens(r2.value->domain_text, ":derive (never)"));
}

TEST_CASE("exp_effect is emitted verbatim as the effects") {
    ValidatedProblem p = testutil::coin_problem();
    Formula override_f = Formula::believes(Term::constant("a"),
                                           Formula::atom(Fluent{"tails", {}}));
    for (auto& act : p.domain.actions)
        if (act.name == "open") act.exp_effect = override_f;
    PdkbArtifact a = emit(p);
    CHECK(contains_tokens(a.domain_text,
                          "(action: open"
                          " :parameters (?i - agent)"
                          " :derive (never)"
                          " :precondition ([?i](has_key ?i))"
                          " :effects ([a](tails)))"));
    for (const auto& rec : a.manifest)
        if (rec.action == "open") CHECK(rec.strategy == PdkbStrategy::ExpEffectOverride);
}

TEST_CASE("emitted texts are balanced and the manifest covers every action") {
    for (bool faithful : {false, true}) {
        PdkbOptions opts;
        opts.listing_faithful = faithful;
        PdkbArtifact a = emit(testutil::coin_problem(), opts);
        CHECK(balanced(a.domain_text));
        CHECK(balanced(a.instance_text));
        CHECK(a.manifest.size() == 3);
        CHECK(a.depth_used == 2);
    }
}

TEST_CASE("a tiny reader can re-extract the action list and init entry count") {
    PdkbArtifact a = emit(testutil::coin_problem());
    size_t actions = 0;
    for (size_t pos = 0; (pos = a.domain_text.find("(action:", pos)) != std::string::npos;
         ++pos)
        ++actions;
    CHECK(actions == 3);
    // world literals in the instance
    size_t init_pos = a.instance_text.find("(:init");
    size_t goal_pos = a.instance_text.find("(:goal");
    REQUIRE(init_pos != std::string::npos);
    std::string init_block = a.instance_text.substr(init_pos, goal_pos - init_pos);
    CHECK(init_block.find("(tails)") != std::string::npos);
    CHECK(init_block.find("(has_key a)") != std::string::npos);
    CHECK(init_block.find("(looking a)") != std::string::npos);
}

TEST_CASE("emission is a pure function of the validated problem") {
    ValidatedProblem p = testutil::coin_problem();
    PdkbArtifact a1 = emit(p);
    PdkbArtifact a2 = emit(p);
    CHECK(a1.domain_text == a2.domain_text);
    CHECK(a1.instance_text == a2.instance_text);
}

TEST_CASE("subset common knowledge falls back to enumerated chains") {
    auto inst = parse_instance(
        "(define (problem p) (:domain coininthebox) (:agent a b c) (:depth 2)"
        " (:init (tails) ([a b](tails))) (:goal ([a](tails))))");
    REQUIRE(inst.ok());
    auto validated = validate(testutil::coin_domain(), *inst.value);
    REQUIRE(validated.ok());
    PdkbArtifact a = emit(*validated.value);
    CHECK(contains_tokens(a.instance_text, "[a](tails)"));
    CHECK(contains_tokens(a.instance_text, "[b][a](tails)"));
    CHECK(!contains_tokens(a.instance_text, "[c](tails)"));
}
