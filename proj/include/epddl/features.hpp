// Static feature extraction over a validated problem with a rule-based
// planner recommendation (rule table in docs/selection.md).

#pragma once

#include <string>

#include "epddl/validator.hpp"

namespace epddl {

enum class PlannerChoice { Pdkb, Mar, Either };

struct FeatureReport {
    size_t agent_count = 0;
    int depth = 1;
    size_t ontic_actions = 0;
    size_t sensing_actions = 0;
    size_t announcement_actions = 0;
    bool has_partial_observers = false;
    int max_init_formula_depth = 0;
    int max_goal_formula_depth = 0;
    bool common_knowledge_used = false;
    PlannerChoice recommendation = PlannerChoice::Either;
    std::string rationale;
};

FeatureReport analyze_features(const ValidatedProblem& problem);

std::string to_string(PlannerChoice c);

}  // namespace epddl
