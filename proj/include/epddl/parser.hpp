// E-PDDL domain and instance parsing.
//
// Both entry points consume UTF-8 text and either produce a typed AST or a
// list of spanned diagnostics; they accept arbitrary byte input without
// throwing. `file_id` tags every span so multi-file drivers can map
// diagnostics back to paths.

#pragma once

#include <string_view>

#include "epddl/ast.hpp"
#include "epddl/result.hpp"

namespace epddl {

Result<EpddlDomain> parse_domain(std::string_view text, int file_id = 0);
Result<EpddlInstance> parse_instance(std::string_view text, int file_id = 0);

}  // namespace epddl
