// Instantiation of parametric predicates and actions over the instance's
// agent set. The result is variable-free: the substrate for the mAr
// backend and the Kripke oracle.

#pragma once

#include <string>
#include <vector>

#include "epddl/validator.hpp"

namespace epddl {

struct GroundLiteral {
    Fluent fluent;  // ground
    bool negated = false;

    std::string to_string() const {
        return negated ? "(not " + fluent.to_string() + ")" : fluent.to_string();
    }
    bool operator==(const GroundLiteral&) const = default;
};

struct GroundObserver {
    std::string agent;
    Formula condition;  // ground; true() when unconditional

    bool unconditional() const { return condition.is_true(); }
    bool operator==(const GroundObserver&) const = default;
};

struct GroundAction {
    std::string name;       // e.g. "open_a"
    std::string base_name;  // e.g. "open"
    std::vector<std::string> args;
    ActionType act_type = ActionType::Ontic;
    Formula precondition;
    std::vector<GroundLiteral> effects;  // ontic
    Fluent effect_fluent;                // sensing / announcement
    std::vector<GroundObserver> full_observers;
    std::vector<GroundObserver> partial_observers;
    // For sensing: the action's observability condition template
    // instantiated at the executor (e.g. looking_a for peek_a), when the
    // action has one. Rendered as the `determines ... if` condition.
    std::optional<Formula> sensed_condition;
    std::optional<Formula> exp_effect;
};

struct GroundedProblem {
    std::vector<Agent> agents;
    std::vector<Fluent> fluents;           // every ground fluent, declaration order
    std::vector<GroundAction> actions;
    std::vector<Fluent> init_world;        // true fluents, closed world
    std::vector<Formula> init_beliefs;     // non-atom init entries
    Formula goal;
    int depth = 1;

    const GroundAction* find_action(const std::string& name) const;
    bool has_fluent(const std::string& ground_name) const;
};

GroundedProblem ground(const ValidatedProblem& problem);

// One line per ground action; stable layout for golden tests.
std::string dump_grounded(const GroundedProblem& g);

}  // namespace epddl
