// Canonical E-PDDL pretty-printing. Output re-parses to a structurally
// equal AST; requirement flags are emitted in a normalized order with
// :mep last.

#pragma once

#include <string>

#include "epddl/ast.hpp"

namespace epddl {

std::string print_domain(const EpddlDomain& d);
std::string print_instance(const EpddlInstance& i);
std::string print_formula(const Formula& f);

}  // namespace epddl
