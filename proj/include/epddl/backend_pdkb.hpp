// PDKB-PDDL emission: a domain whose actions carry either a
// derive-condition template (implicit update) or explicit depth-bounded
// effects, and an instance whose common-knowledge entries are expanded
// into quantified belief-chain blocks.

#pragma once

#include <string>
#include <vector>

#include "epddl/validator.hpp"
#include "epddl/result.hpp"

namespace epddl {

enum class PdkbStrategy { DeriveCondition, ExplicitEffects, ExpEffectOverride };

struct PdkbActionRecord {
    std::string action;
    PdkbStrategy strategy = PdkbStrategy::DeriveCondition;
    bool widened_derive = false;  // executor disjunct added to the template
    size_t chain_count = 0;       // explicit chain formulae emitted
};

struct PdkbOptions {
    // Reproduce the reference layout exactly: unwidened derive templates,
    // unconditional executor belief for sensing effects, and `!` negation
    // inside modal or-pairs.
    bool listing_faithful = false;
    bool dedupe_chains = false;
    // Render ontic actions with unrepresentable observer specifications
    // through explicit effects instead of failing.
    bool explicit_fallback = false;
};

struct PdkbArtifact {
    std::string domain_text;
    std::string instance_text;
    int depth_used = 1;
    std::vector<PdkbActionRecord> manifest;
};

Result<PdkbArtifact> emit_pdkb(const ValidatedProblem& problem, const PdkbOptions& opts = {});

std::string to_string(PdkbStrategy s);

}  // namespace epddl
