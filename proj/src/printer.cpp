#include "epddl/printer.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace epddl {

namespace {

// A bare modal formula at a field position is wrapped in parens, the
// layout the surface syntax uses: `:precondition ([?i](has_key ?i))`.
std::string field_text(const Formula& f) {
    std::string s = f.to_string();
    if (f.kind() == FormulaKind::Believes || f.kind() == FormulaKind::Common)
        return "(" + s + ")";
    return s;
}

std::string params_to_string(const std::vector<Parameter>& params) {
    std::string out = "(";
    for (size_t i = 0; i < params.size(); ++i) {
        if (i) out += " ";
        out += "?" + params[i].name + " - " + params[i].type;
    }
    out += ")";
    return out;
}

std::string clause_to_string(const ObserverClause& c) {
    std::string inner = "(" + c.agent.to_string() + ")";
    if (c.condition)
        inner = "(when " + field_text(*c.condition) + " " + inner + ")";
    if (c.quantifier) {
        std::string binder = "(?" + c.quantifier->bound.name + " - agent)";
        if (!c.quantifier->excluded.empty()) {
            std::string excl = "(";
            for (size_t i = 0; i < c.quantifier->excluded.size(); ++i) {
                if (i) excl += " ";
                excl += c.quantifier->excluded[i].to_string();
            }
            excl += ")";
            binder = "(diff " + binder + " " + excl + ")";
        }
        inner = "(forall " + binder + " " + inner + ")";
    }
    return inner;
}

std::string observers_to_string(const ObserverSpec& spec) {
    if (spec.clauses.size() == 1) return clause_to_string(spec.clauses[0]);
    std::string out = "(and";
    for (const auto& c : spec.clauses) out += " " + clause_to_string(c);
    out += ")";
    return out;
}

// Known flags first in a fixed order, then unknown flags sorted, :mep last.
std::vector<std::string> normalized_requirements(std::vector<std::string> reqs) {
    static const std::vector<std::string> known = {
        ":strips", ":typing", ":negative-preconditions", ":equality", ":adl"};
    std::vector<std::string> out;
    bool mep = false;
    std::vector<std::string> rest;
    for (const auto& k : known) {
        if (std::find(reqs.begin(), reqs.end(), k) != reqs.end()) out.push_back(k);
    }
    for (const auto& r : reqs) {
        if (r == ":mep") {
            mep = true;
            continue;
        }
        if (std::find(known.begin(), known.end(), r) == known.end() &&
            std::find(rest.begin(), rest.end(), r) == rest.end())
            rest.push_back(r);
    }
    std::sort(rest.begin(), rest.end());
    out.insert(out.end(), rest.begin(), rest.end());
    if (mep) out.push_back(":mep");
    return out;
}

}  // namespace

std::string print_formula(const Formula& f) { return f.to_string(); }

std::string print_domain(const EpddlDomain& d) {
    std::ostringstream os;
    os << "(define (domain " << d.name << ")\n";
    os << " (:requirements";
    for (const auto& r : normalized_requirements(d.requirements)) os << " " << r;
    os << ")\n";
    os << " (:predicates";
    if (d.predicates.empty()) os << ")";
    for (size_t i = 0; i < d.predicates.size(); ++i) {
        const auto& p = d.predicates[i];
        os << (i == 0 ? " " : "\n              ") << "(" << p.name;
        for (const auto& param : p.parameters)
            os << " ?" << param.name << " - " << param.type;
        os << ")";
        if (i + 1 == d.predicates.size()) os << ")";
    }
    os << "\n";
    for (const auto& a : d.actions) {
        os << "\n (:action " << a.name << "\n";
        os << "   :act_type     " << to_string(a.act_type) << "\n";
        os << "   :parameters   " << params_to_string(a.parameters) << "\n";
        os << "   :precondition " << field_text(a.precondition) << "\n";
        os << "   :effect       " << field_text(a.effect) << "\n";
        if (!a.observers.empty())
            os << "   :observers    " << observers_to_string(a.observers) << "\n";
        if (!a.p_observers.empty())
            os << "   :p_observers  " << observers_to_string(a.p_observers) << "\n";
        if (a.exp_effect)
            os << "   :exp_effect   " << field_text(*a.exp_effect) << "\n";
        os << " )\n";
    }
    os << ")\n";
    return os.str();
}

std::string print_instance(const EpddlInstance& inst) {
    std::ostringstream os;
    os << "(define (problem " << inst.name << ")\n";
    os << " (:domain " << inst.domain_name << ")\n";
    os << " (:agent";
    for (const auto& a : inst.agents) os << " " << a.name;
    os << ")\n";
    os << " (:depth " << inst.depth << ")\n";
    os << " (:init";
    for (const auto& f : inst.init) os << "\n        " << field_text(f);
    os << ")\n";
    os << " (:goal " << field_text(inst.goal) << ")\n";
    os << ")\n";
    return os.str();
}

}  // namespace epddl
