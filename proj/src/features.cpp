#include "epddl/features.hpp"

#include <algorithm>

namespace epddl {

std::string to_string(PlannerChoice c) {
    switch (c) {
        case PlannerChoice::Pdkb: return "PDKB";
        case PlannerChoice::Mar: return "MAR";
        case PlannerChoice::Either: return "Either";
    }
    return "Either";
}

FeatureReport analyze_features(const ValidatedProblem& problem) {
    const EpddlDomain& d = problem.domain;
    const EpddlInstance& inst = problem.instance;

    FeatureReport r;
    r.agent_count = inst.agents.size();
    r.depth = inst.depth;
    for (const auto& a : d.actions) {
        switch (a.act_type) {
            case ActionType::Ontic: ++r.ontic_actions; break;
            case ActionType::Sensing: ++r.sensing_actions; break;
            case ActionType::Announcement: ++r.announcement_actions; break;
        }
        if (!a.p_observers.empty()) r.has_partial_observers = true;
    }
    for (const auto& f : inst.init) {
        r.max_init_formula_depth = std::max(r.max_init_formula_depth, f.depth());
        if (f.contains_kind(FormulaKind::Common)) r.common_knowledge_used = true;
    }
    r.max_goal_formula_depth = inst.goal.depth();
    if (inst.goal.contains_kind(FormulaKind::Common)) r.common_knowledge_used = true;
    for (const auto& a : d.actions) {
        if (a.precondition.contains_kind(FormulaKind::Common)) r.common_knowledge_used = true;
    }

    bool depth_sensitive = r.max_goal_formula_depth > inst.depth ||
                           r.max_init_formula_depth > inst.depth;
    if (r.has_partial_observers) {
        r.recommendation = PlannerChoice::Mar;
        r.rationale =
            "partial observers present; the depth-bounded explicit conversion of partial "
            "observability is an approximation";
    } else if (depth_sensitive) {
        r.recommendation = PlannerChoice::Mar;
        r.rationale = "formulae exceed the instance depth, which grounding-based planners "
                      "truncate";
    } else {
        r.recommendation = PlannerChoice::Either;
        r.rationale = "fully observable updates within the depth bound suit both targets";
    }
    return r;
}

}  // namespace epddl
