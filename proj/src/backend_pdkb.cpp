#include "epddl/backend_pdkb.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "epddl/expansion.hpp"

namespace epddl {

namespace {

bool is_modal(const Formula& f) {
    return f.kind() == FormulaKind::Believes || f.kind() == FormulaKind::Common;
}

// Surface rendering of a belief formula in PDKB syntax. `bang_negation`
// renders (not (f)) as (!f), the layout used inside modal or-pairs.
std::string render(const Formula& f, bool bang_negation) {
    std::ostringstream os;
    switch (f.kind()) {
        case FormulaKind::Atom: {
            os << "(" << f.fluent().predicate;
            for (const auto& t : f.fluent().args) os << " " << t.to_string();
            os << ")";
            break;
        }
        case FormulaKind::Not: {
            const Formula& inner = f.children()[0];
            if (bang_negation && inner.kind() == FormulaKind::Atom &&
                inner.fluent().args.empty()) {
                os << "(!" << inner.fluent().predicate << ")";
            } else {
                os << "(not " << render(inner, bang_negation) << ")";
            }
            break;
        }
        case FormulaKind::And: {
            os << "(and";
            for (const auto& c : f.children()) os << " " << render(c, bang_negation);
            os << ")";
            break;
        }
        case FormulaKind::Or: {
            os << "(or";
            for (const auto& c : f.children()) os << " " << render(c, bang_negation);
            os << ")";
            break;
        }
        case FormulaKind::Implies:
            os << "(imply " << render(f.children()[0], bang_negation) << " "
               << render(f.children()[1], bang_negation) << ")";
            break;
        case FormulaKind::Believes:
            os << "[" << f.agent().to_string() << "]"
               << render(f.children()[0], bang_negation);
            break;
        case FormulaKind::Common: {
            os << "[";
            for (size_t i = 0; i < f.agents().size(); ++i) {
                if (i) os << " ";
                os << f.agents()[i].to_string();
            }
            os << "]" << render(f.children()[0], bang_negation);
            break;
        }
    }
    return os.str();
}

// One schematic observer slot of an action: a concrete term (executor or
// named agent) or a quantified agent with an optional condition template.
struct SchematicSlot {
    Term term;                         // ?i, constant, or the bound variable
    std::optional<Formula> condition;  // over `term` when quantified
    bool quantified = false;
};

std::vector<SchematicSlot> slots_of(const ObserverSpec& spec) {
    std::vector<SchematicSlot> out;
    for (const auto& c : spec.clauses) {
        SchematicSlot s;
        s.term = c.agent;
        s.condition = c.condition;
        s.quantified = c.quantifier.has_value();
        if (c.quantifier) s.term = c.quantifier->bound;
        out.push_back(std::move(s));
    }
    return out;
}

struct PdkbWriter {
    const ValidatedProblem& problem;
    const PdkbOptions& opts;
    std::vector<Diagnostic> diags;
    std::vector<PdkbActionRecord> manifest;

    const EpddlDomain& domain() const { return problem.domain; }
    const EpddlInstance& instance() const { return problem.instance; }
    int depth() const { return instance().depth; }

    // --- derive templates ---------------------------------------------------

    struct DeriveTemplate {
        std::string text;   // rendered condition with $agent$ substituted
        bool widened = false;
    };

    // The observer spec is representable when the non-executor part is a
    // single quantified clause; its condition over the bound variable is the
    // template with $agent$ substituted for the variable.
    std::optional<DeriveTemplate> derive_template(const EpddlAction& action) {
        const Term executor = action.parameters.empty()
                                  ? Term{}
                                  : Term::variable(action.parameters.front().name);
        std::vector<const ObserverClause*> others;
        bool executor_unconditional = action.parameters.empty();
        for (const auto& c : action.observers.clauses) {
            if (!c.quantifier && !c.condition && c.agent == executor) {
                executor_unconditional = true;
                continue;
            }
            others.push_back(&c);
        }
        if (!executor_unconditional) return std::nullopt;

        DeriveTemplate t;
        if (others.empty()) {
            if (opts.listing_faithful || action.parameters.empty()) {
                // no template at all: nobody beyond the executor derives
                t.text = "(never)";
            } else {
                t.text = executor_equality(action);
                t.widened = true;
            }
            return t;
        }
        if (others.size() != 1 || !others[0]->quantifier) return std::nullopt;
        const ObserverClause& c = *others[0];
        if (!c.condition) {
            t.text = "(true)";
            return t;
        }
        std::map<std::string, std::string> subst{{c.quantifier->bound.name, "$agent$"}};
        std::string cond = render(c.condition->substitute(subst), false);
        if (opts.listing_faithful || action.parameters.empty()) {
            t.text = cond;
        } else {
            t.text = "(or " + cond + " " + executor_equality(action) + ")";
            t.widened = true;
        }
        return t;
    }

    static std::string executor_equality(const EpddlAction& action) {
        std::string var =
            action.parameters.empty() ? "?i" : "?" + action.parameters.front().name;
        return "(= $agent$ " + var + ")";
    }

    // --- schematic explicit effects -----------------------------------------

    // Renders the chain body for one slot sequence. Quantified slots add
    // forall binders; conditions are conjoined into a single when-guard.
    std::string chain_formula(const std::vector<SchematicSlot>& seq, const Formula& body,
                              std::optional<Formula> extra_guard, bool bang) {
        // fresh names for repeated quantified slots
        std::vector<Term> terms;
        std::vector<std::pair<std::string, SchematicSlot>> binders;  // bound name -> slot
        std::map<std::string, int> uses;
        std::vector<Formula> guards;
        for (const auto& s : seq) {
            if (!s.quantified) {
                terms.push_back(s.term);
                if (s.condition) guards.push_back(*s.condition);
                continue;
            }
            int n = ++uses[s.term.name];
            std::string bound = s.term.name + (n == 1 ? "" : std::to_string(n));
            terms.push_back(Term::variable(bound));
            if (s.condition)
                guards.push_back(rename_variable(*s.condition, s.term.name, bound));
            binders.push_back({bound, s});
        }
        if (extra_guard && !extra_guard->is_true()) guards.push_back(*extra_guard);

        Formula chained = body;
        for (auto it = terms.rbegin(); it != terms.rend(); ++it)
            chained = Formula::believes(*it, chained);

        std::string text = render(chained, bang);
        if (!guards.empty()) {
            std::string guard_text = guards.size() == 1
                                         ? field_text(guards[0])
                                         : field_text(Formula::conjunction(guards));
            text = "(when " + guard_text + " " + text + ")";
        }
        for (auto it = binders.rbegin(); it != binders.rend(); ++it)
            text = "(forall (?" + it->first + " - agent) " + text + ")";
        return text;
    }

    // Field-level layout: a bare modal formula is wrapped in parens, and a
    // top-level conjunction wraps its modal children ("(and ([?i](opened))
    // ([?i](looking ?i)))").
    static std::string field_text(const Formula& f) {
        if (is_modal(f)) return "(" + render(f, false) + ")";
        if (f.kind() == FormulaKind::And && !f.children().empty()) {
            std::string out = "(and";
            for (const auto& c : f.children()) {
                std::string s = render(c, false);
                out += " " + (is_modal(c) ? "(" + s + ")" : s);
            }
            return out + ")";
        }
        return render(f, false);
    }

    static Formula rename_variable(const Formula& f, const std::string& from,
                                   const std::string& to) {
        switch (f.kind()) {
            case FormulaKind::Atom: {
                Fluent fl = f.fluent();
                for (auto& a : fl.args)
                    if (a.is_variable() && a.name == from) a = Term::variable(to);
                return Formula::atom(std::move(fl));
            }
            case FormulaKind::Not:
                return Formula::negation(rename_variable(f.children()[0], from, to));
            case FormulaKind::And:
            case FormulaKind::Or: {
                std::vector<Formula> cs;
                for (const auto& c : f.children())
                    cs.push_back(rename_variable(c, from, to));
                return f.kind() == FormulaKind::And
                           ? Formula::conjunction(std::move(cs))
                           : Formula::disjunction(std::move(cs));
            }
            case FormulaKind::Implies:
                return Formula::implication(rename_variable(f.children()[0], from, to),
                                            rename_variable(f.children()[1], from, to));
            case FormulaKind::Believes: {
                Term a = f.agent();
                if (a.is_variable() && a.name == from) a = Term::variable(to);
                return Formula::believes(a, rename_variable(f.children()[0], from, to));
            }
            case FormulaKind::Common: {
                std::vector<Term> as = f.agents();
                for (auto& a : as)
                    if (a.is_variable() && a.name == from) a = Term::variable(to);
                return Formula::common(std::move(as), rename_variable(f.children()[0], from, to));
            }
        }
        return f;
    }

    template <typename Fn>
    void for_each_slot_sequence(const std::vector<SchematicSlot>& pool, int len, Fn&& fn) {
        if (len <= 0 || pool.empty()) return;
        std::vector<size_t> idx(static_cast<size_t>(len), 0);
        while (true) {
            bool skip = false;
            if (opts.dedupe_chains)
                for (size_t i = 1; i < idx.size(); ++i)
                    if (idx[i] == idx[i - 1]) skip = true;
            if (!skip) {
                std::vector<SchematicSlot> seq;
                seq.reserve(idx.size());
                for (size_t k : idx) seq.push_back(pool[k]);
                fn(seq);
            }
            size_t pos = idx.size();
            while (pos > 0) {
                --pos;
                if (++idx[pos] < pool.size()) break;
                idx[pos] = 0;
                if (pos == 0) return;
            }
        }
    }

    // Explicit effect block for sensing actions (and the explicit fallback):
    // full-observer chains of the effect, then partial-observer prefixes of
    // knows-whether chains, then deeper mixed prefixes.
    std::vector<std::string> explicit_effects(const EpddlAction& action, size_t& chains) {
        const Formula effect = action.effect;
        const Formula not_effect = Formula::negation(effect);
        const Formula knows_whether = Formula::disjunction({effect, not_effect});
        const bool sensing = action.act_type == ActionType::Sensing;

        std::vector<SchematicSlot> full = slots_of(action.observers);
        std::vector<SchematicSlot> partial = slots_of(action.p_observers);

        std::vector<std::string> out;
        if (opts.listing_faithful) {
            // reference layout: unconditional executor belief plus one
            // quantified knows-whether block per partial clause
            for (const auto& s : full) {
                std::vector<SchematicSlot> seq{s};
                out.push_back(chain_formula(seq, effect, std::nullopt, false));
                ++chains;
            }
            for (const auto& p : partial) {
                for (const auto& s : full) {
                    std::vector<SchematicSlot> seq{p, s};
                    out.push_back(chain_formula(seq, knows_whether, std::nullopt, true));
                    ++chains;
                }
            }
            return out;
        }

        if (action.act_type == ActionType::Ontic) {
            out.push_back(render(effect, false));
        }
        for (int len = 1; len <= depth(); ++len) {
            for_each_slot_sequence(full, len, [&](const std::vector<SchematicSlot>& seq) {
                if (sensing) {
                    out.push_back(chain_formula(seq, effect, effect, false));
                    out.push_back(chain_formula(seq, not_effect, not_effect, false));
                    chains += 2;
                } else {
                    out.push_back(chain_formula(seq, effect, std::nullopt, false));
                    ++chains;
                }
            });
        }
        for (const auto& p : partial) {
            for (int len = 1; len <= depth() - 1; ++len) {
                for_each_slot_sequence(full, len, [&](std::vector<SchematicSlot> seq) {
                    seq.insert(seq.begin(), p);
                    out.push_back(chain_formula(seq, knows_whether, std::nullopt, false));
                    ++chains;
                });
            }
        }
        // deeper mixed prefixes over the partial layer
        std::vector<SchematicSlot> mixed = full;
        mixed.insert(mixed.end(), partial.begin(), partial.end());
        for (int outer = 1; outer <= depth() - 2; ++outer) {
            for_each_slot_sequence(mixed, outer, [&](const std::vector<SchematicSlot>& prefix) {
                for (const auto& p : partial) {
                    for (int len = 1; len + outer + 1 + knows_whether.depth() <= depth();
                         ++len) {
                        for_each_slot_sequence(
                            full, len, [&](std::vector<SchematicSlot> seq) {
                                seq.insert(seq.begin(), p);
                                seq.insert(seq.begin(), prefix.begin(), prefix.end());
                                out.push_back(
                                    chain_formula(seq, knows_whether, std::nullopt, false));
                                ++chains;
                            });
                    }
                }
            });
        }
        return out;
    }

    // --- domain --------------------------------------------------------------

    std::optional<std::string> action_block(const EpddlAction& action) {
        PdkbActionRecord record;
        record.action = action.name;

        std::ostringstream os;
        os << " (action: " << action.name << "\n";
        os << "  :parameters\t(";
        for (size_t i = 0; i < action.parameters.size(); ++i) {
            if (i) os << " ";
            os << "?" << action.parameters[i].name << " - " << action.parameters[i].type;
        }
        os << ")\n";

        std::string derive;
        std::string effects;
        if (action.exp_effect) {
            record.strategy = PdkbStrategy::ExpEffectOverride;
            derive = "(never)";
            effects = field_text(*action.exp_effect);
        } else if (action.act_type == ActionType::Sensing) {
            record.strategy = PdkbStrategy::ExplicitEffects;
            derive = "(never)";
            std::vector<std::string> parts = explicit_effects(action, record.chain_count);
            effects = "(and";
            for (const auto& p : parts) effects += " " + p;
            effects += ")";
        } else {
            auto t = derive_template(action);
            if (!t && action.act_type == ActionType::Ontic && !opts.explicit_fallback) {
                diags.push_back(
                    {Severity::Error, codes::unrepresentable,
                     "observers of ontic action '" + action.name +
                         "' cannot be rendered as a single derive-condition template",
                     action.span});
                return std::nullopt;
            }
            if (t) {
                record.strategy = PdkbStrategy::DeriveCondition;
                record.widened_derive = t->widened;
                derive = t->text;
                std::string world = render(action.effect, false);
                effects = action.effect.kind() == FormulaKind::And ? world
                                                                   : "(and " + world + ")";
            } else {
                record.strategy = PdkbStrategy::ExplicitEffects;
                derive = "(never)";
                std::vector<std::string> parts = explicit_effects(action, record.chain_count);
                effects = "(and";
                for (const auto& p : parts) effects += " " + p;
                effects += ")";
            }
        }

        os << "  :derive       " << derive << "\n";
        os << "  :precondition " << field_text(action.precondition) << "\n";
        os << "  :effects      " << effects << "\n";
        os << " )\n";
        manifest.push_back(record);
        return os.str();
    }

    std::optional<std::string> domain_text() {
        std::ostringstream os;
        os << "(define (domain " << domain().name << ")\n";
        os << " (:agents";
        for (const auto& a : instance().agents) os << " " << a.name;
        os << ")\n";
        os << " (:constants)\n";
        os << " (:types)\n";
        os << " (:predicates";
        for (const auto& p : domain().predicates) {
            os << " (" << p.name;
            for (const auto& param : p.parameters)
                os << " ?" << param.name << " - " << param.type;
            os << ")";
        }
        os << ")\n";
        for (const auto& action : domain().actions) {
            auto block = action_block(action);
            if (!block) return std::nullopt;
            os << "\n" << *block;
        }
        os << ")\n";
        return os.str();
    }

    // --- instance --------------------------------------------------------------

    // Quantified chain block in the reference layout: binders outermost
    // first, modal prefix innermost first.
    static std::string quantified_block(int len, const std::string& body) {
        std::ostringstream os;
        std::string indent = " ";
        for (int i = 1; i <= len; ++i) {
            os << indent << "(forall ?ag" << i << " - agent\n";
            indent += "  ";
        }
        os << indent;
        for (int i = len; i >= 1; --i) os << "[?ag" << i << "]";
        os << body;
        for (int i = 0; i < len; ++i) os << ")";
        os << "\n";
        return os.str();
    }

    bool is_full_agent_set(const std::vector<Term>& terms) const {
        if (terms.size() != instance().agents.size()) return false;
        for (const auto& a : instance().agents) {
            bool found = std::any_of(terms.begin(), terms.end(), [&](const Term& t) {
                return !t.is_variable() && t.name == a.name;
            });
            if (!found) return false;
        }
        return true;
    }

    std::string instance_text() {
        std::ostringstream os;
        os << "(define (problem " << instance().name << ")\n";
        os << " (:domain " << instance().domain_name << ")\n";
        os << " (:depth " << depth() << ")\n";
        os << " (:projection )\n";
        os << " (:task valid_generation)\n";
        os << " (:init-type complete)\n";
        os << "\n (:init\n";
        for (const auto& entry : instance().init) {
            if (entry.kind() == FormulaKind::Atom)
                os << "  " << render(entry, false) << "\n";
        }
        for (const auto& entry : instance().init) {
            if (entry.kind() == FormulaKind::Atom) continue;
            if (entry.kind() == FormulaKind::Common && is_full_agent_set(entry.agents())) {
                const Formula& body = entry.children()[0];
                std::string body_text = render(body, false);
                int max_len = depth() - body.depth();
                for (int len = 1; len <= max_len; ++len) {
                    os << "\n  ;Length " << len << "\n";
                    os << quantified_block(len, body_text);
                }
                continue;
            }
            if (entry.kind() == FormulaKind::Common) {
                // subset common knowledge: enumerate the chains
                ExpansionOptions eo;
                eo.dedupe_chains = opts.dedupe_chains;
                std::vector<Formula> chains = expand_common(entry, depth(), eo);
                os << "\n  ;Chains of " << render(entry, false) << "\n";
                for (const auto& c : chains) os << "  " << render(c, false) << "\n";
                continue;
            }
            os << "  " << render(entry, false) << "\n";
        }
        os << " )\n";
        os << "\n (:goal\n";
        for (const auto& part : instance().goal.conjuncts())
            os << "  " << render(part, false) << "\n";
        os << " )\n";
        os << ")\n";
        return os.str();
    }
};

}  // namespace

std::string to_string(PdkbStrategy s) {
    switch (s) {
        case PdkbStrategy::DeriveCondition: return "derive-condition";
        case PdkbStrategy::ExplicitEffects: return "explicit-effects";
        case PdkbStrategy::ExpEffectOverride: return "exp-effect-override";
    }
    return "derive-condition";
}

Result<PdkbArtifact> emit_pdkb(const ValidatedProblem& problem, const PdkbOptions& opts) {
    PdkbWriter writer{problem, opts, {}, {}};
    auto domain_text = writer.domain_text();
    if (!domain_text || has_errors(writer.diags))
        return Result<PdkbArtifact>::failure(std::move(writer.diags));
    PdkbArtifact artifact;
    artifact.domain_text = std::move(*domain_text);
    artifact.instance_text = writer.instance_text();
    artifact.depth_used = problem.instance.depth;
    artifact.manifest = std::move(writer.manifest);
    return Result<PdkbArtifact>::success(std::move(artifact), std::move(writer.diags));
}

}  // namespace epddl
