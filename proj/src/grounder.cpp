#include "epddl/grounder.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace epddl {

namespace {

// Enumerates |agents|^k assignments in declaration order (odometer with
// the first position slowest).
std::vector<std::vector<std::string>> agent_tuples(const std::vector<Agent>& agents,
                                                   size_t k) {
    std::vector<std::vector<std::string>> out;
    std::vector<size_t> idx(k, 0);
    while (true) {
        std::vector<std::string> tuple;
        tuple.reserve(k);
        for (size_t i = 0; i < k; ++i) tuple.push_back(agents[idx[i]].name);
        out.push_back(std::move(tuple));
        size_t pos = k;
        while (pos > 0) {
            --pos;
            if (++idx[pos] < agents.size()) break;
            idx[pos] = 0;
            if (pos == 0) return out;
        }
        if (k == 0) return out;
    }
}

std::vector<GroundObserver> ground_observers(const ObserverSpec& spec,
                                             const std::map<std::string, std::string>& subst,
                                             const std::vector<Agent>& agents) {
    std::vector<GroundObserver> out;
    for (const auto& clause : spec.clauses) {
        if (!clause.quantifier) {
            std::string who = clause.agent.is_variable() ? subst.at(clause.agent.name)
                                                         : clause.agent.name;
            Formula cond = clause.condition ? clause.condition->substitute(subst)
                                            : Formula::truth();
            out.push_back({std::move(who), std::move(cond)});
            continue;
        }
        // forall (diff (?j - agent) (excluded...)): one entry per non-excluded agent
        std::vector<std::string> excluded;
        for (const auto& x : clause.quantifier->excluded)
            excluded.push_back(x.is_variable() ? subst.at(x.name) : x.name);
        for (const auto& ag : agents) {
            if (std::find(excluded.begin(), excluded.end(), ag.name) != excluded.end())
                continue;
            std::map<std::string, std::string> inner = subst;
            inner[clause.quantifier->bound.name] = ag.name;
            std::string who = clause.agent.is_variable() ? inner.at(clause.agent.name)
                                                         : clause.agent.name;
            Formula cond = clause.condition ? clause.condition->substitute(inner)
                                            : Formula::truth();
            out.push_back({std::move(who), std::move(cond)});
        }
    }
    return out;
}

// The condition under which the executor senses: its own clause condition
// when present, else the quantified observability template of the action
// (:observers first, then :p_observers) instantiated at the executor.
std::optional<Formula> executor_sense_condition(
    const EpddlAction& action, const std::map<std::string, std::string>& subst,
    const std::string& executor) {
    const std::string& executor_var = action.parameters.front().name;
    for (const auto& c : action.observers.clauses) {
        if (c.quantifier || !c.condition) continue;
        if (c.agent.is_variable() && c.agent.name == executor_var)
            return c.condition->substitute(subst);
    }
    for (const auto* spec : {&action.observers, &action.p_observers}) {
        for (const auto& c : spec->clauses) {
            if (!c.quantifier || !c.condition) continue;
            std::map<std::string, std::string> inner = subst;
            inner[c.quantifier->bound.name] = executor;
            return c.condition->substitute(inner);
        }
    }
    return std::nullopt;
}

std::vector<GroundLiteral> effect_literals(const Formula& effect,
                                           const std::map<std::string, std::string>& subst) {
    std::vector<GroundLiteral> out;
    for (const auto& c : effect.conjuncts()) {
        Formula g = c.substitute(subst);
        if (g.kind() == FormulaKind::Atom) {
            out.push_back({g.fluent(), false});
        } else {
            // validator guarantees Not(Atom)
            out.push_back({g.children()[0].fluent(), true});
        }
    }
    return out;
}

}  // namespace

const GroundAction* GroundedProblem::find_action(const std::string& name) const {
    for (const auto& a : actions)
        if (a.name == name) return &a;
    return nullptr;
}

bool GroundedProblem::has_fluent(const std::string& ground_name) const {
    return std::any_of(fluents.begin(), fluents.end(),
                       [&](const Fluent& f) { return f.ground_name() == ground_name; });
}

GroundedProblem ground(const ValidatedProblem& problem) {
    const EpddlDomain& domain = problem.domain;
    const EpddlInstance& instance = problem.instance;

    GroundedProblem g;
    g.agents = instance.agents;
    g.depth = instance.depth;
    g.goal = instance.goal;

    // fluent universe: every predicate instantiated over all agent tuples
    for (const auto& pred : domain.predicates) {
        for (auto& tuple : agent_tuples(instance.agents, pred.parameters.size())) {
            Fluent f;
            f.predicate = pred.name;
            for (auto& a : tuple) f.args.push_back(Term::constant(std::move(a)));
            g.fluents.push_back(std::move(f));
        }
    }

    for (const auto& action : domain.actions) {
        for (const auto& tuple : agent_tuples(instance.agents, action.parameters.size())) {
            std::map<std::string, std::string> subst;
            for (size_t i = 0; i < action.parameters.size(); ++i)
                subst[action.parameters[i].name] = tuple[i];

            GroundAction ga;
            ga.base_name = action.name;
            ga.args = tuple;
            ga.name = action.name;
            for (const auto& a : tuple) ga.name += "_" + a;
            ga.act_type = action.act_type;
            ga.precondition = action.precondition.substitute(subst);
            if (action.act_type == ActionType::Ontic) {
                ga.effects = effect_literals(action.effect, subst);
            } else {
                ga.effect_fluent = action.effect.substitute(subst).fluent();
            }
            ga.full_observers = ground_observers(action.observers, subst, instance.agents);
            ga.partial_observers =
                ground_observers(action.p_observers, subst, instance.agents);
            if (action.exp_effect) ga.exp_effect = action.exp_effect->substitute(subst);
            if (action.act_type == ActionType::Sensing && !tuple.empty())
                ga.sensed_condition =
                    executor_sense_condition(action, subst, tuple.front());

            // the executor observes unconditionally
            if (!tuple.empty()) {
                const std::string& executor = tuple.front();
                bool present = std::any_of(
                    ga.full_observers.begin(), ga.full_observers.end(),
                    [&](const GroundObserver& o) {
                        return o.agent == executor && o.unconditional();
                    });
                if (!present)
                    ga.full_observers.insert(ga.full_observers.begin(),
                                             {executor, Formula::truth()});
            }
            g.actions.push_back(std::move(ga));
        }
    }

    // closed world: listed positive atoms are true, everything else false
    for (const auto& entry : instance.init) {
        if (entry.kind() == FormulaKind::Atom)
            g.init_world.push_back(entry.fluent());
        else if (!entry.is_true())
            g.init_beliefs.push_back(entry);
    }
    return g;
}

std::string dump_grounded(const GroundedProblem& g) {
    std::ostringstream os;
    os << "agents:";
    for (const auto& a : g.agents) os << " " << a.name;
    os << "\nfluents:";
    for (const auto& f : g.fluents) os << " " << f.ground_name();
    os << "\ndepth: " << g.depth << "\n";
    for (const auto& a : g.actions) {
        os << "action " << a.name << " type=" << to_string(a.act_type)
           << " pre=" << a.precondition.to_string();
        if (a.act_type == ActionType::Ontic) {
            os << " effects=";
            for (size_t i = 0; i < a.effects.size(); ++i)
                os << (i ? "," : "") << a.effects[i].to_string();
        } else {
            os << " effect=" << a.effect_fluent.ground_name();
        }
        os << " full=[";
        for (size_t i = 0; i < a.full_observers.size(); ++i) {
            if (i) os << ",";
            os << a.full_observers[i].agent;
            if (!a.full_observers[i].unconditional())
                os << " if " << a.full_observers[i].condition.to_string();
        }
        os << "] partial=[";
        for (size_t i = 0; i < a.partial_observers.size(); ++i) {
            if (i) os << ",";
            os << a.partial_observers[i].agent;
            if (!a.partial_observers[i].unconditional())
                os << " if " << a.partial_observers[i].condition.to_string();
        }
        os << "]";
        if (a.sensed_condition)
            os << " determines_if=" << a.sensed_condition->to_string();
        if (a.exp_effect) os << " exp_effect=" << a.exp_effect->to_string();
        os << "\n";
    }
    os << "init_world:";
    for (const auto& f : g.init_world) os << " " << f.ground_name();
    os << "\ninit_beliefs:";
    for (const auto& f : g.init_beliefs) os << " " << f.to_string();
    os << "\ngoal: " << g.goal.to_string() << "\n";
    return os.str();
}

}  // namespace epddl
