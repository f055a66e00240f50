#include "epddl/expansion.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace epddl {

namespace {

// All sequences over `pool` of exactly length len, in pool order.
template <typename Fn>
void for_each_sequence(size_t pool_size, size_t len, bool dedupe, Fn&& fn) {
    if (len == 0 || pool_size == 0) return;
    std::vector<size_t> idx(len, 0);
    while (true) {
        bool skip = false;
        if (dedupe) {
            for (size_t i = 1; i < len; ++i)
                if (idx[i] == idx[i - 1]) skip = true;
        }
        if (!skip) fn(idx);
        size_t pos = len;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < pool_size) break;
            idx[pos] = 0;
            if (pos == 0) return;
        }
    }
}

Formula chain_over(const std::vector<Term>& prefix, Formula body) {
    for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
        body = Formula::believes(*it, std::move(body));
    return body;
}

Formula pre_expand(const Formula& f, int budget, const ExpansionOptions& opts);

// All chains B_i1 ... B_il body over alpha with total depth <= budget.
// A body with nested Common operators is pre-expanded with the budget that
// remains after the prefix, so deeper prefixes carry shallower expansions.
std::vector<Formula> common_chains(const std::vector<Term>& alpha, const Formula& raw_body,
                                   int budget, const ExpansionOptions& opts) {
    std::vector<Formula> out;
    const bool nested = raw_body.contains_kind(FormulaKind::Common);
    for (int len = 1; len <= budget; ++len) {
        if (nested && budget - len < 1) continue;  // no room for the inner chains
        Formula body = nested ? pre_expand(raw_body, budget - len, opts) : raw_body;
        if (body.depth() + len > budget) continue;
        for_each_sequence(alpha.size(), static_cast<size_t>(len), opts.dedupe_chains,
                          [&](const std::vector<size_t>& idx) {
                              std::vector<Term> prefix;
                              prefix.reserve(idx.size());
                              for (size_t k : idx) prefix.push_back(alpha[k]);
                              out.push_back(chain_over(prefix, body));
                          });
    }
    return out;
}

// Replaces every Common node by the conjunction of its chains, deepest
// nodes first.
Formula pre_expand(const Formula& f, int budget, const ExpansionOptions& opts) {
    if (!f.contains_kind(FormulaKind::Common)) return f;
    switch (f.kind()) {
        case FormulaKind::Common:
            return Formula::conjunction(
                common_chains(f.agents(), f.children()[0], budget, opts));
        case FormulaKind::Not:
            return Formula::negation(pre_expand(f.children()[0], budget, opts));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            cs.reserve(f.children().size());
            for (const auto& c : f.children()) cs.push_back(pre_expand(c, budget, opts));
            return f.kind() == FormulaKind::And ? Formula::conjunction(std::move(cs))
                                                : Formula::disjunction(std::move(cs));
        }
        case FormulaKind::Implies:
            return Formula::implication(pre_expand(f.children()[0], budget, opts),
                                        pre_expand(f.children()[1], budget, opts));
        case FormulaKind::Believes:
            return Formula::believes(f.agent(), pre_expand(f.children()[0], budget, opts));
        case FormulaKind::Atom:
            return f;
    }
    return f;
}

// Deduplicated observer list: an unconditional entry wins; repeated
// conditional entries for one agent disjoin. Order of first appearance.
struct ObserverSlot {
    std::string agent;
    Formula condition;
};

std::vector<ObserverSlot> merge_observers(const std::vector<GroundObserver>& list) {
    std::vector<ObserverSlot> out;
    for (const auto& o : list) {
        auto it = std::find_if(out.begin(), out.end(),
                               [&](const ObserverSlot& s) { return s.agent == o.agent; });
        if (it == out.end()) {
            out.push_back({o.agent, o.condition});
            continue;
        }
        if (it->condition.is_true() || o.condition.is_true())
            it->condition = Formula::truth();
        else if (!(it->condition == o.condition))
            it->condition = Formula::disjunction({it->condition, o.condition});
    }
    return out;
}

Formula conjoin_guards(std::vector<Formula> parts) {
    std::vector<Formula> kept;
    for (auto& p : parts) {
        if (p.is_true()) continue;
        if (std::find(kept.begin(), kept.end(), p) == kept.end()) kept.push_back(std::move(p));
    }
    if (kept.size() == 1) return kept.front();
    return Formula::conjunction(std::move(kept));
}

// Guard for one chain: each distinct involved agent's condition, once.
Formula sequence_guard(const std::vector<ObserverSlot>& pool,
                       const std::vector<size_t>& idx) {
    std::vector<Formula> parts;
    std::vector<size_t> seen;
    for (size_t k : idx) {
        if (std::find(seen.begin(), seen.end(), k) != seen.end()) continue;
        seen.push_back(k);
        parts.push_back(pool[k].condition);
    }
    return conjoin_guards(std::move(parts));
}

std::vector<Term> slots_to_terms(const std::vector<ObserverSlot>& pool,
                                 const std::vector<size_t>& idx) {
    std::vector<Term> out;
    out.reserve(idx.size());
    for (size_t k : idx) out.push_back(Term::constant(pool[k].agent));
    return out;
}

}  // namespace

std::vector<Formula> expand_common(const Formula& common_formula, int depth,
                                   const ExpansionOptions& opts) {
    if (depth < 1) throw std::invalid_argument("expansion depth must be >= 1");
    if (common_formula.kind() != FormulaKind::Common &&
        common_formula.kind() != FormulaKind::Believes)
        throw std::invalid_argument("expand_common expects a common-knowledge formula");

    // Believes arises from the singleton-Common normalization
    std::vector<Term> alpha = common_formula.kind() == FormulaKind::Common
                                  ? common_formula.agents()
                                  : std::vector<Term>{common_formula.agent()};
    return common_chains(alpha, common_formula.children()[0], depth, opts);
}

std::vector<ConditionalEffect> derive_explicit_updates(const GroundAction& action, int depth,
                                                       const ExpansionOptions& opts) {
    if (depth < 1) throw std::invalid_argument("expansion depth must be >= 1");

    if (action.exp_effect)
        return {{Formula::truth(), *action.exp_effect, UpdateOrigin::Override}};

    std::vector<ObserverSlot> full = merge_observers(action.full_observers);
    std::vector<ObserverSlot> partial;
    for (const auto& slot : merge_observers(action.partial_observers)) {
        bool shadowed = std::any_of(full.begin(), full.end(), [&](const ObserverSlot& f) {
            return f.agent == slot.agent;
        });
        if (!shadowed) partial.push_back(slot);
    }

    const bool sensing = action.act_type == ActionType::Sensing;
    Formula effect_body;
    if (action.act_type == ActionType::Ontic) {
        std::vector<Formula> lits;
        for (const auto& l : action.effects) {
            Formula atom = Formula::atom(l.fluent);
            lits.push_back(l.negated ? Formula::negation(std::move(atom)) : std::move(atom));
        }
        effect_body = lits.size() == 1 ? lits.front() : Formula::conjunction(std::move(lits));
    } else {
        effect_body = Formula::atom(action.effect_fluent);
    }
    Formula knows_whether = Formula::disjunction({effect_body, Formula::negation(effect_body)});

    std::vector<ConditionalEffect> out;

    // length-0 chain: the world change itself (ontic only)
    if (action.act_type == ActionType::Ontic)
        out.push_back({Formula::truth(), effect_body, UpdateOrigin::WorldEffect});

    // (1) chains of fully observant agents, 1 <= l <= d
    for (int len = 1; len <= depth; ++len) {
        for_each_sequence(full.size(), static_cast<size_t>(len), opts.dedupe_chains,
                          [&](const std::vector<size_t>& idx) {
                              Formula guard = sequence_guard(full, idx);
                              std::vector<Term> prefix = slots_to_terms(full, idx);
                              if (sensing) {
                                  // the chain target depends on the sensed value
                                  out.push_back({conjoin_guards({guard, effect_body}),
                                                 chain_over(prefix, effect_body),
                                                 UpdateOrigin::FullChain});
                                  out.push_back(
                                      {conjoin_guards({guard, Formula::negation(effect_body)}),
                                       chain_over(prefix, Formula::negation(effect_body)),
                                       UpdateOrigin::FullChain});
                              } else {
                                  out.push_back({guard, chain_over(prefix, effect_body),
                                                 UpdateOrigin::FullChain});
                              }
                          });
    }

    // (2) a partial observer knows that full chains know whether
    std::vector<ConditionalEffect> partial_layer;
    for (const auto& p : partial) {
        for (int len = 1; len <= depth - 1; ++len) {
            for_each_sequence(
                full.size(), static_cast<size_t>(len), opts.dedupe_chains,
                [&](const std::vector<size_t>& idx) {
                    Formula guard =
                        conjoin_guards({p.condition, sequence_guard(full, idx)});
                    Formula inner = chain_over(slots_to_terms(full, idx), knows_whether);
                    partial_layer.push_back({std::move(guard),
                                             Formula::believes(Term::constant(p.agent), inner),
                                             UpdateOrigin::PartialChain});
                });
        }
    }
    out.insert(out.end(), partial_layer.begin(), partial_layer.end());

    // (3) mixed full/partial prefixes over the layer above, l <= d-2
    std::vector<ObserverSlot> mixed = full;
    mixed.insert(mixed.end(), partial.begin(), partial.end());
    for (int len = 1; len <= depth - 2; ++len) {
        for_each_sequence(mixed.size(), static_cast<size_t>(len), opts.dedupe_chains,
                          [&](const std::vector<size_t>& idx) {
                              Formula prefix_guard = sequence_guard(mixed, idx);
                              std::vector<Term> prefix = slots_to_terms(mixed, idx);
                              for (const auto& base : partial_layer) {
                                  if (len + base.formula.depth() > depth) continue;
                                  out.push_back(
                                      {conjoin_guards({prefix_guard, base.condition}),
                                       chain_over(prefix, base.formula),
                                       UpdateOrigin::OuterChain});
                              }
                          });
    }
    return out;
}

}  // namespace epddl
