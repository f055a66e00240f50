// mAr emission from a grounded problem: declarations, executability,
// effects by action-type keyword, observability statements, initial
// conditions and goals. Statement grammar is documented in
// docs/formats.md and accepted by the internal mAr reader.

#pragma once

#include <map>
#include <string>

#include "epddl/grounder.hpp"
#include "epddl/result.hpp"

namespace epddl {

struct MarOptions {
    // Ground-fluent rename map applied on output (predicate name level),
    // e.g. {"looking" -> "look"} for byte-compatibility with consumers
    // that abbreviate.
    std::map<std::string, std::string> rename;
};

struct MarArtifact {
    std::string text;
    size_t fluent_count = 0;
    size_t action_count = 0;
    size_t statement_count = 0;
};

// :exp_effect never reaches this backend: planners with a full epistemic
// transition function derive updates themselves.
Result<MarArtifact> emit_mar(const GroundedProblem& g, const MarOptions& opts = {});

}  // namespace epddl
