// Knowledge-chain derivation: turns implicit observability into explicit
// depth-bounded belief updates, and expands common knowledge into bounded
// chains of nested single-agent beliefs.

#pragma once

#include <vector>

#include "epddl/grounder.hpp"

namespace epddl {

struct ExpansionOptions {
    // Drop chains with consecutive duplicate agents (B_a B_a f). Sound in
    // S5; off by default to mirror the unrestricted quantified output.
    bool dedupe_chains = false;
};

// Where a derived update came from; used by backends and tests.
enum class UpdateOrigin {
    WorldEffect,    // the bare effect itself (ontic only)
    FullChain,      // chains over fully observant agents
    PartialChain,   // a partial observer prefixing a full chain
    OuterChain,     // mixed full/partial prefix over a PartialChain
    Override,       // :exp_effect supplied by the user
};

struct ConditionalEffect {
    Formula condition;  // guard; true() when unconditional
    Formula formula;
    UpdateOrigin origin = UpdateOrigin::FullChain;
};

// Expands C_alpha(body) into every belief chain B_i1 ... B_il body with
// 1 <= l and total depth <= depth. Nested Common operators inside the body
// are pre-expanded innermost-first. Throws std::invalid_argument when the
// formula is not a Common node or depth < 1.
std::vector<Formula> expand_common(const Formula& common_formula, int depth,
                                   const ExpansionOptions& opts = {});

// Explicit update schema for one ground action:
//   - ontic actions contribute their world effect (length-0 chain);
//   - every chain of fully observant agents up to the depth bound knows
//     the effect (for sensing, a conditional pair over the sensed value);
//   - every partial observer knows that full-observer chains know whether
//     the effect holds;
//   - mixed full/partial prefixes extend those up to the depth bound.
// Each update is guarded by the involved agents' observability conditions.
// A present :exp_effect overrides everything.
std::vector<ConditionalEffect> derive_explicit_updates(const GroundAction& action, int depth,
                                                       const ExpansionOptions& opts = {});

}  // namespace epddl
