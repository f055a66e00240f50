// Static semantic checks on a linked (domain, instance) pair. A
// ValidatedProblem exists only when no error-severity diagnostic was
// produced; warnings ride along. validate() is deterministic: equal
// inputs yield the identical diagnostic list.

#pragma once

#include "epddl/ast.hpp"
#include "epddl/result.hpp"

namespace epddl {

struct ValidatedProblem {
    EpddlDomain domain;
    EpddlInstance instance;
    std::vector<Diagnostic> warnings;
};

// Checks, in order: domain-name linkage, effect shape per action type,
// predicate declarations and arities, variable scoping, agent constants,
// the :mep requirement, finitary-S5 shape of :init (warning), and
// formula depth against the instance depth (warning).
Result<ValidatedProblem> validate(const EpddlDomain& domain, const EpddlInstance& instance);

}  // namespace epddl
