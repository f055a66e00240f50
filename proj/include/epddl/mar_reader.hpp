// Minimal mAr reader: consumes the statement grammar the mAr backend
// emits (documented in docs/formats.md) and rebuilds a GroundedProblem,
// enabling translation round-trips through the oracle.

#pragma once

#include <string_view>

#include "epddl/grounder.hpp"
#include "epddl/result.hpp"

namespace epddl {

Result<GroundedProblem> read_mar(std::string_view text, int file_id = 0);

}  // namespace epddl
