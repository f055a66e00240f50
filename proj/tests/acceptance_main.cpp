// Acceptance suite: runs every criterion at its stated tolerance and
// prints one pass/fail line per criterion.

#include <cctype>
#include <chrono>
#include <deque>
#include <fstream>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "epddl/backend_mar.hpp"
#include "epddl/backend_pdkb.hpp"
#include "epddl/expansion.hpp"
#include "epddl/grounder.hpp"
#include "epddl/kripke.hpp"
#include "epddl/parser.hpp"
#include "epddl/printer.hpp"
#include "epddl/validator.hpp"

using namespace epddl;

namespace {

int failures = 0;

struct Criterion {
    std::string name;
    std::chrono::steady_clock::time_point start;
    double limit_seconds;
    bool ok = true;
    std::string detail;

    Criterion(std::string n, double limit)
        : name(std::move(n)), start(std::chrono::steady_clock::now()),
          limit_seconds(limit) {}

    void require(bool cond, const std::string& what) {
        if (!cond && ok) {
            ok = false;
            detail = what;
        }
    }

    void finish() {
        double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (elapsed > limit_seconds) {
            ok = false;
            if (detail.empty())
                detail = "exceeded the runtime limit of " +
                         std::to_string(limit_seconds) + "s";
        }
        std::ostringstream line;
        line << (ok ? "PASS" : "FAIL") << " " << name << " (" << elapsed << "s)";
        if (!ok) line << " -- " << detail;
        std::cout << line.str() << std::endl;
        if (!ok) ++failures;
    }
};

std::string data_file(const std::string& name) {
    std::ifstream in(std::string(EPDDL_TEST_DATA_DIR) + "/" + name, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ValidatedProblem coin_problem() {
    auto d = parse_domain(data_file("coin_domain.epddl"));
    auto i = parse_instance(data_file("coin_instance.epddl"));
    auto v = validate(*d.value, *i.value);
    return *v.value;
}

// variant instance where b is also attentive, exercising partial observers
ValidatedProblem coin_looker_problem() {
    auto d = parse_domain(data_file("coin_domain.epddl"));
    auto i = parse_instance(
        "(define (problem looker) (:domain coininthebox) (:agent a b c) (:depth 2)"
        " (:init (tails) (has_key a) (looking a) (looking b)"
        "        ([a b c](has_key a)) ([a b c](not (has_key b)))"
        "        ([a b c](not (has_key c))) ([a b c](not (opened)))"
        "        ([a b c](looking a)) ([a b c](looking b)) ([a b c](not (looking c))))"
        " (:goal ([a](tails))))");
    auto v = validate(*d.value, *i.value);
    return *v.value;
}

std::vector<std::string> tokens_of(const std::string& text) {
    std::vector<std::string> out;
    std::string cur;
    auto flush = [&]() {
        if (!cur.empty()) {
            out.push_back(cur);
            cur.clear();
        }
    };
    for (size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == ';') {
            flush();
            while (i < text.size() && text[i] != '\n') ++i;
            continue;
        }
        if (std::isspace(static_cast<unsigned char>(c))) {
            flush();
            continue;
        }
        if (c == '(' || c == ')' || c == '[' || c == ']') {
            flush();
            out.push_back(std::string(1, c));
            continue;
        }
        cur += c;
    }
    flush();
    return out;
}

bool token_contains(const std::string& haystack, const std::string& needle) {
    auto h = tokens_of(haystack), n = tokens_of(needle);
    if (n.empty()) return true;
    if (n.size() > h.size()) return false;
    for (size_t i = 0; i + n.size() <= h.size(); ++i) {
        bool match = true;
        for (size_t j = 0; j < n.size() && match; ++j) match = h[i + j] == n[j];
        if (match) return true;
    }
    return false;
}

std::string strip_spaces(const std::string& s) {
    std::string out;
    for (char c : s)
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    return out;
}

Formula atom(const std::string& name) { return Formula::atom(Fluent{name, {}}); }
Term ag(const std::string& name) { return Term::constant(name); }
Formula B(const std::string& who, Formula f) { return Formula::believes(ag(who), f); }

// ---------------------------------------------------------------------------

void criterion_1_reference_fidelity() {
    Criterion c("criterion 1: reference-layout fidelity (PDKB open block, chain blocks, mAr "
                "statements)", 1.0);
    ValidatedProblem p = coin_problem();

    PdkbOptions faithful;
    faithful.listing_faithful = true;
    auto pdkb = emit_pdkb(p, faithful);
    c.require(pdkb.ok(), "PDKB emission failed");
    if (pdkb.ok()) {
        // reference open block, token for token
        c.require(token_contains(pdkb.value->domain_text,
                                 "(action: open"
                                 " :parameters (?i - agent)"
                                 " :derive (looking $agent$)"
                                 " :precondition ([?i](has_key ?i))"
                                 " :effects (and (opened)))"),
                  "open block does not match the reference layout");
        const std::string& inst = pdkb.value->instance_text;
        c.require(inst.find("(:depth 2)") != std::string::npos, "missing (:depth 2)");
        c.require(inst.find(";Length 1") != std::string::npos, "missing ;Length 1 block");
        c.require(inst.find(";Length 2") != std::string::npos, "missing ;Length 2 block");
        c.require(token_contains(inst, "(forall ?ag1 - agent [?ag1](has_key a))"),
                  "missing the length-1 chain block for has_key a");
        c.require(token_contains(
                      inst,
                      "(forall ?ag1 - agent (forall ?ag2 - agent [?ag2][?ag1](has_key a)))"),
                  "missing the length-2 chain block for has_key a");
    }

    MarOptions mar_opts;
    mar_opts.rename["looking"] = "look";
    auto mar = emit_mar(ground(p), mar_opts);
    c.require(mar.ok(), "mAr emission failed");
    if (mar.ok()) {
        const char* reference[] = {
            "executable open_a if B(a,has_key_a);",
            "open_a causes opened;",
            "b observes open_a if look_b;",
            "c observes open_a if look_c;",
            "a observes open_a;",
            "executable peek_a if B(a,opened),B(a,look_a);",
            "peek_a determines tails if look_a;",
            "a observes peek_a;",
            "b aware_of peek_a if look_b;",
            "c aware_of peek_a if look_c;",
            "executable announce_a if B(a,tails);",
            "announce_a announces tails;",
            "b observes announce_a if look_b;",
            "c observes announce_a if look_c;",
            "a observes announce_a;",
            "initially C([a,b,c],has_key_a);",
        };
        std::string flat = strip_spaces(mar.value->text);
        for (const char* stmt : reference)
            c.require(flat.find(strip_spaces(stmt)) != std::string::npos,
                      std::string("missing statement: ") + stmt);
    }
    c.finish();
}

void criterion_2_expansion_cardinality() {
    Criterion c("criterion 2: common-knowledge expansion cardinality", 1.0);

    // independent oracle: brute-force sequence enumerator
    auto brute_count = [](size_t n_agents, int depth) {
        size_t total = 0;
        for (int len = 1; len <= depth; ++len) {
            size_t seqs = 1;
            for (int i = 0; i < len; ++i) seqs *= n_agents;
            total += seqs;
        }
        return total;
    };

    Formula f = atom("f");
    auto two = expand_common(Formula::common({ag("a"), ag("b")}, f), 2);
    c.require(two.size() == 6, "|{a,b}| chains != 6 (got " + std::to_string(two.size()) + ")");
    c.require(two.size() == brute_count(2, 2), "mismatch with the brute-force enumerator");

    auto three = expand_common(Formula::common({ag("a"), ag("b"), ag("c")}, f), 2);
    c.require(three.size() == 12,
              "|{a,b,c}| chains != 12 (got " + std::to_string(three.size()) + ")");
    c.require(three.size() == brute_count(3, 2), "mismatch with the brute-force enumerator");

    // the chain sets themselves match an independent enumeration
    std::set<std::string> expected;
    for (const std::string& x : {"a", "b"}) {
        expected.insert(B(x, f).to_string());
        for (const std::string& y : {"a", "b"})
            expected.insert(B(x, B(y, f)).to_string());
    }
    std::set<std::string> got;
    for (const auto& chain : two) got.insert(chain.to_string());
    c.require(got == expected, "chain sets differ from the enumeration");
    c.finish();
}

void criterion_3_plan_preservation() {
    Criterion c("criterion 3: plan preservation (BFS vs exhaustive enumeration)", 5.0);
    GroundedProblem g = ground(coin_problem());
    c.require(g.actions.size() == 9, "expected 9 ground actions");

    SearchLimits limits;
    limits.max_plan_length = 4;
    PlanResult plan = bfs_plan(g, limits);
    c.require(plan.found(), "BFS found no plan");
    c.require(plan.actions.size() == 2, "BFS plan length != 2");
    c.require(plan.actions == std::vector<std::string>{"open_a", "peek_a"},
              "BFS plan is not [open_a, peek_a]");

    // exhaustive enumeration of all <=2-step sequences over the 9 actions
    KripkeState init = initial_state(g);
    size_t one_step_hits = 0, two_step_hits = 0, sequences_checked = 0;
    for (const auto& first : g.actions) {
        if (!init.entails(first.precondition)) {
            sequences_checked += 1 + g.actions.size();
            continue;
        }
        KripkeState s1 = apply(init, first);
        ++sequences_checked;
        if (s1.entails(g.goal)) ++one_step_hits;
        for (const auto& second : g.actions) {
            ++sequences_checked;
            if (!s1.entails(second.precondition)) continue;
            KripkeState s2 = apply(s1, second);
            if (s2.entails(g.goal)) {
                ++two_step_hits;
                c.require(first.name == "open_a" && second.name == "peek_a",
                          "unexpected two-step plan " + first.name + "," + second.name);
            }
        }
    }
    c.require(sequences_checked == 9 + 81, "enumeration did not cover 90 sequences");
    c.require(one_step_hits == 0, "a one-step plan exists; BFS length-2 result is wrong");
    c.require(two_step_hits == 1, "expected exactly one two-step plan");
    c.require(!init.entails(g.goal), "goal already holds initially");
    c.finish();
}

void criterion_4_semantics_properties() {
    Criterion c("criterion 4: semantics property suite (200 random finitary-S5 states)",
                60.0);
    std::mt19937 rng(424242);
    std::uniform_int_distribution<int> nf(1, 3), na(1, 3), coin2(0, 1);

    for (int round = 0; round < 200 && c.ok; ++round) {
        // random finitary-S5 construction
        GroundedProblem g;
        int fluents = nf(rng), agents = na(rng);
        for (int i = 0; i < agents; ++i) g.agents.push_back({std::string(1, 'a' + i)});
        for (int i = 0; i < fluents; ++i)
            g.fluents.push_back(Fluent{"f" + std::to_string(i), {}});
        std::vector<Term> all;
        for (const auto& a : g.agents) all.push_back(ag(a.name));
        for (int i = 0; i < fluents; ++i) {
            bool value = coin2(rng);
            if (value) g.init_world.push_back(g.fluents[i]);
            if (coin2(rng)) {
                Formula lit = Formula::atom(g.fluents[i]);
                if (!value) lit = Formula::negation(lit);
                g.init_beliefs.push_back(
                    all.size() == 1 ? B(g.agents[0].name, lit) : Formula::common(all, lit));
            }
        }
        g.goal = Formula::truth();
        g.depth = 2;
        KripkeState s = initial_state(g);
        c.require(s.relations_are_equivalence(), "initial state is not S5");

        // formula family: literals plus one and two levels of modal operators
        std::vector<Formula> level0, level1, level2;
        for (const auto& f : g.fluents) {
            level0.push_back(Formula::atom(f));
            level0.push_back(Formula::negation(Formula::atom(f)));
        }
        auto add_modal_layer = [&](const std::vector<Formula>& base,
                                   std::vector<Formula>& out) {
            for (const auto& phi : base) {
                for (const auto& a : g.agents) {
                    out.push_back(B(a.name, phi));
                    out.push_back(Formula::negation(B(a.name, phi)));
                }
                if (all.size() >= 2) {
                    out.push_back(Formula::common(all, phi));
                    out.push_back(Formula::negation(Formula::common(all, phi)));
                }
            }
        };
        add_modal_layer(level0, level1);
        add_modal_layer(level1, level2);

        // K axiom: B phi and B(phi -> psi) entail B psi
        for (const auto& a : g.agents) {
            for (const auto& phi : level0) {
                for (const auto& psi : level1) {
                    if (s.entails(B(a.name, phi)) &&
                        s.entails(B(a.name, Formula::implication(phi, psi))))
                        c.require(s.entails(B(a.name, psi)), "K axiom violated");
                }
            }
        }

        // common-knowledge fixpoint: C phi entails B_i C phi for i in the group
        if (all.size() >= 2) {
            for (const auto& phi : level0) {
                Formula ck = Formula::common(all, phi);
                if (s.entails(ck))
                    for (const auto& a : g.agents)
                        c.require(s.entails(B(a.name, ck)), "CK fixpoint violated");
            }
        }

        // sensing/announcement preserve S5 for observant agents
        GroundAction act;
        act.name = "sense";
        act.base_name = "sense";
        act.act_type = coin2(rng) ? ActionType::Sensing : ActionType::Announcement;
        act.precondition = Formula::truth();
        act.effect_fluent = g.fluents[static_cast<size_t>(
            std::uniform_int_distribution<int>(0, fluents - 1)(rng))];
        std::vector<bool> observant(g.agents.size(), false);
        for (size_t i = 0; i < g.agents.size(); ++i) {
            int role = std::uniform_int_distribution<int>(0, 2)(rng);
            if (role == 0)
                act.full_observers.push_back({g.agents[i].name, Formula::truth()});
            else if (role == 1)
                act.partial_observers.push_back({g.agents[i].name, Formula::truth()});
            observant[i] = role < 2;
        }
        KripkeState t = apply(s, act);
        for (size_t i = 0; i < g.agents.size(); ++i)
            if (observant[i])
                c.require(t.relation_is_equivalence(i),
                          "sensing/announcement broke S5 for an observant agent");

        // bisimulation minimization preserves every family formula
        KripkeState m = t.minimize();
        c.require(m.world_count() <= t.world_count(), "minimize grew the state");
        for (const auto& family : {&level0, &level1, &level2})
            for (const auto& phi : *family)
                c.require(m.entails(phi) == t.entails(phi),
                          "minimization changed the truth of " + phi.to_string());
    }
    c.finish();
}

void criterion_5_expansion_soundness() {
    Criterion c("criterion 5: expansion soundness vs oracle", 10.0);

    size_t actions_exercised = 0, guarded_checks = 0, partial_checks = 0;
    for (ValidatedProblem p : {coin_problem(), coin_looker_problem()}) {
        GroundedProblem g = ground(p);

        // reachable states up to three steps, deduplicated
        std::vector<KripkeState> states;
        std::set<std::string> seen;
        std::deque<KripkeState> frontier;
        KripkeState init = initial_state(g).minimize();
        seen.insert(init.canonical_key());
        frontier.push_back(init);
        states.push_back(init);
        for (int depth = 0; depth < 3; ++depth) {
            std::deque<KripkeState> next;
            for (const auto& s : frontier) {
                for (const auto& act : g.actions) {
                    if (!s.entails(act.precondition)) continue;
                    KripkeState t = apply(s, act).minimize();
                    if (seen.insert(t.canonical_key()).second) {
                        states.push_back(t);
                        next.push_back(t);
                    }
                }
            }
            frontier = std::move(next);
        }

        std::set<std::string> exercised;
        for (const auto& s : states) {
            for (const auto& act : g.actions) {
                if (!s.entails(act.precondition)) continue;
                exercised.insert(act.name);
                KripkeState post = apply(s, act);
                for (const auto& ce : derive_explicit_updates(act, g.depth)) {
                    if (!s.entails(ce.condition)) continue;
                    ++guarded_checks;
                    if (ce.origin == UpdateOrigin::PartialChain) ++partial_checks;
                    c.require(post.entails(ce.formula),
                              act.name + ": post-state does not entail " +
                                  ce.formula.to_string());
                }
            }
        }
        actions_exercised += exercised.size();
    }
    c.require(actions_exercised >= 4, "too few applicable actions exercised");
    c.require(guarded_checks > 50, "too few guard-satisfied updates checked");
    c.require(partial_checks > 0, "no partial-observer updates were exercised");
    c.finish();
}

void criterion_6_exp_effect_override() {
    Criterion c("criterion 6: exp_effect override metamorphic pair", 1.0);
    ValidatedProblem base = coin_problem();
    Formula override_f = B("a", atom("tails"));

    auto mar_before = emit_mar(ground(base));
    c.require(mar_before.ok(), "mAr emission failed");

    for (size_t idx = 0; idx < base.domain.actions.size(); ++idx) {
        ValidatedProblem p = base;
        p.domain.actions[idx].exp_effect = override_f;

        auto pdkb = emit_pdkb(p);
        c.require(pdkb.ok(), "PDKB emission failed with exp_effect");
        if (pdkb.ok()) {
            std::string expected = "(action: " + p.domain.actions[idx].name +
                                   " :parameters (?i - agent) :derive (never)";
            c.require(token_contains(pdkb.value->domain_text, expected),
                      "overridden action does not derive (never)");
            c.require(token_contains(pdkb.value->domain_text, ":effects ([a](tails))"),
                      "PDKB effects are not exactly the override formula");
            bool recorded = false;
            for (const auto& rec : pdkb.value->manifest)
                if (rec.action == p.domain.actions[idx].name &&
                    rec.strategy == PdkbStrategy::ExpEffectOverride)
                    recorded = true;
            c.require(recorded, "manifest does not record the override");
        }

        auto mar_after = emit_mar(ground(p));
        c.require(mar_after.ok(), "mAr emission failed with exp_effect");
        if (mar_before.ok() && mar_after.ok())
            c.require(mar_after.value->text == mar_before.value->text,
                      "mAr output changed under exp_effect");
    }
    c.finish();
}

void criterion_7_fuzzing() {
    Criterion c("criterion 7: parser robustness (100000 fuzzed inputs)", 60.0);
    std::mt19937 rng(70221);
    std::uniform_int_distribution<int> byte_dist(0, 255);
    std::uniform_int_distribution<int> len_dist(0, 160);
    std::uniform_int_distribution<int> mode_dist(0, 2);
    const std::string soup_chars = "()[]?:;- abdefinot123\n\"";
    std::uniform_int_distribution<size_t> soup_dist(0, soup_chars.size() - 1);
    std::string coin = data_file("coin_domain.epddl");
    std::uniform_int_distribution<size_t> pos_dist(0, coin.size() - 1);

    for (int i = 0; i < 100000; ++i) {
        std::string input;
        switch (mode_dist(rng)) {
            case 0: {  // raw random bytes
                int len = len_dist(rng);
                for (int j = 0; j < len; ++j)
                    input += static_cast<char>(byte_dist(rng));
                break;
            }
            case 1: {  // structured soup
                int len = len_dist(rng);
                for (int j = 0; j < len; ++j) input += soup_chars[soup_dist(rng)];
                break;
            }
            default: {  // mutated real input
                input = coin;
                for (int j = 0; j < 8; ++j)
                    input[pos_dist(rng)] = static_cast<char>(byte_dist(rng));
                break;
            }
        }
        auto r = (i % 2 == 0) ? parse_domain(input).diagnostics
                              : [&]() {
                                    auto pr = parse_instance(input);
                                    return pr.diagnostics;
                                }();
        bool ok = (i % 2 == 0) ? parse_domain(input).ok() : parse_instance(input).ok();
        if (!ok) {
            if (r.empty()) {
                c.require(false, "a rejection carried no diagnostic");
                break;
            }
            int lines = 1;
            for (char ch : input)
                if (ch == '\n') ++lines;
            for (const auto& d : r) {
                if (d.span.start_line < 1 || d.span.start_line > lines ||
                    d.span.start_col < 1) {
                    c.require(false, "diagnostic span out of bounds");
                    break;
                }
            }
        }
        if (!c.ok) break;
    }
    c.finish();
}

}  // namespace

int main() {
    criterion_1_reference_fidelity();
    criterion_2_expansion_cardinality();
    criterion_3_plan_preservation();
    criterion_4_semantics_properties();
    criterion_5_expansion_soundness();
    criterion_6_exp_effect_override();
    criterion_7_fuzzing();
    if (failures) {
        std::cout << failures << " criterion(s) failed" << std::endl;
        return 1;
    }
    std::cout << "all acceptance criteria passed" << std::endl;
    return 0;
}
