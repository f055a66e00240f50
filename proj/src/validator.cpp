#include "epddl/validator.hpp"

#include <algorithm>
#include <set>
#include <string>

namespace epddl {

namespace {

struct Checker {
    const EpddlDomain& domain;
    const EpddlInstance& instance;
    std::vector<Diagnostic> diags;

    void error(const char* code, std::string msg, const SourceSpan& span) {
        diags.push_back({Severity::Error, code, std::move(msg), span});
    }
    void warn(const char* code, std::string msg, const SourceSpan& span) {
        diags.push_back({Severity::Warning, code, std::move(msg), span});
    }

    // (a) linkage
    void check_linkage() {
        if (instance.domain_name != domain.name)
            error(codes::domain_mismatch,
                  "instance references domain '" + instance.domain_name +
                      "' but the domain is named '" + domain.name + "'",
                  instance.span);
    }

    // (b) effect shape per action type
    bool is_fluent_literal(const Formula& f) {
        if (f.kind() == FormulaKind::Atom) return true;
        return f.kind() == FormulaKind::Not &&
               f.children()[0].kind() == FormulaKind::Atom;
    }

    void check_effect_shape(const EpddlAction& a) {
        const Formula& e = a.effect;
        if (a.act_type == ActionType::Ontic) {
            bool ok = is_fluent_literal(e);
            if (!ok && e.kind() == FormulaKind::And && !e.children().empty())
                ok = std::all_of(e.children().begin(), e.children().end(),
                                 [&](const Formula& c) { return is_fluent_literal(c); });
            if (!ok)
                error(codes::effect_shape,
                      "ontic action '" + a.name +
                          "' must have a conjunction of fluent literals as effect",
                      a.span);
        } else {
            if (e.kind() != FormulaKind::Atom)
                error(codes::effect_shape,
                      std::string(a.act_type == ActionType::Sensing ? "sensing" : "announcement") +
                          " action '" + a.name + "' must have a single fluent as effect",
                      a.span);
        }
    }

    // (c) predicates declared with matching arity
    void check_fluent(const Fluent& f, const SourceSpan& span, const std::string& where) {
        const PredicateDecl* decl = domain.find_predicate(f.predicate);
        if (!decl) {
            error(codes::undeclared_predicate,
                  "predicate '" + f.predicate + "' used in " + where + " is not declared",
                  span);
            return;
        }
        if (decl->parameters.size() != f.args.size())
            error(codes::arity_mismatch,
                  "predicate '" + f.predicate + "' takes " +
                      std::to_string(decl->parameters.size()) + " arguments but " +
                      std::to_string(f.args.size()) + " were given in " + where,
                  span);
    }

    void check_formula_fluents(const Formula& f, const SourceSpan& span,
                               const std::string& where) {
        if (f.kind() == FormulaKind::Atom) check_fluent(f.fluent(), span, where);
        for (const auto& c : f.children()) check_formula_fluents(c, span, where);
    }

    // (d) variable scoping
    void check_bound(const Formula& f, const std::set<std::string>& bound,
                     const SourceSpan& span, const std::string& where) {
        for (const auto& v : f.free_variables()) {
            if (!bound.count(v))
                error(codes::unbound_variable,
                      "variable ?" + v + " in " + where + " is not bound", span);
        }
    }

    void check_observers(const EpddlAction& a, const ObserverSpec& spec,
                         const std::set<std::string>& params, const std::string& where) {
        for (const auto& c : spec.clauses) {
            std::set<std::string> bound = params;
            if (c.quantifier) {
                bound.insert(c.quantifier->bound.name);
                for (const auto& x : c.quantifier->excluded) {
                    if (x.is_variable() && !params.count(x.name))
                        error(codes::unbound_variable,
                              "diff exclusion ?" + x.name + " in " + where +
                                  " of action '" + a.name + "' is not a parameter",
                              c.span);
                }
            }
            if (c.agent.is_variable() && !bound.count(c.agent.name))
                error(codes::unbound_variable,
                      "observer variable ?" + c.agent.name + " in " + where +
                          " of action '" + a.name + "' is not bound",
                      c.span);
            if (c.condition)
                check_bound(*c.condition, bound, c.span,
                            where + " condition of action '" + a.name + "'");
        }
    }

    void check_action(const EpddlAction& a) {
        std::set<std::string> params;
        for (const auto& p : a.parameters) {
            params.insert(p.name);
            if (p.type != "agent")
                error(codes::unknown_type,
                      "parameter ?" + p.name + " of action '" + a.name +
                          "' has unknown type '" + p.type + "' (only 'agent' exists)",
                      p.span);
        }
        check_effect_shape(a);
        std::string act = "action '" + a.name + "'";
        check_formula_fluents(a.precondition, a.span, "precondition of " + act);
        check_formula_fluents(a.effect, a.span, "effect of " + act);
        check_bound(a.precondition, params, a.span, "precondition of " + act);
        check_bound(a.effect, params, a.span, "effect of " + act);
        check_observers(a, a.observers, params, ":observers");
        check_observers(a, a.p_observers, params, ":p_observers");
        for (const auto& spec : {a.observers, a.p_observers})
            for (const auto& c : spec.clauses)
                if (c.condition)
                    check_formula_fluents(*c.condition, c.span, "observer condition of " + act);
        if (a.exp_effect) {
            check_formula_fluents(*a.exp_effect, a.span, ":exp_effect of " + act);
            check_bound(*a.exp_effect, params, a.span, ":exp_effect of " + act);
        }
        if (a.act_type == ActionType::Ontic && !a.p_observers.empty())
            warn(codes::ontic_partial,
                 "ontic action '" + a.name +
                     "' declares partial observers; partial observability is typically "
                     "meaningful only for sensing and announcement actions",
                 a.span);
    }

    // (e) agent constants in formulas must be declared
    void check_agent_constants(const Formula& f, const SourceSpan& span,
                               const std::string& where) {
        if (f.kind() == FormulaKind::Believes && !f.agent().is_variable() &&
            !instance.has_agent(f.agent().name))
            error(codes::unknown_agent,
                  "agent '" + f.agent().name + "' in " + where + " is not declared in :agent",
                  span);
        if (f.kind() == FormulaKind::Common) {
            for (const auto& t : f.agents())
                if (!t.is_variable() && !instance.has_agent(t.name))
                    error(codes::unknown_agent,
                          "agent '" + t.name + "' in " + where + " is not declared in :agent",
                          span);
        }
        if (f.kind() == FormulaKind::Atom) {
            // fluent arguments are agent-typed; constants must be known agents
            for (const auto& t : f.fluent().args)
                if (!t.is_variable() && !instance.has_agent(t.name))
                    error(codes::unknown_agent,
                          "constant '" + t.name + "' in " + where +
                              " is not declared in :agent",
                          span);
        }
        for (const auto& c : f.children()) check_agent_constants(c, span, where);
    }

    // (f) :mep requirement
    void check_mep() {
        if (std::find(domain.requirements.begin(), domain.requirements.end(), ":mep") ==
            domain.requirements.end())
            error(codes::missing_mep, "domain is missing the :mep requirement", domain.span);
    }

    // (g) finitary-S5 advisory: each init entry should be a bare world
    // literal or common knowledge, among all agents, of a literal
    bool is_literal(const Formula& f) {
        return f.kind() == FormulaKind::Atom ||
               (f.kind() == FormulaKind::Not && f.children()[0].kind() == FormulaKind::Atom);
    }

    bool is_full_agent_set(const std::vector<Term>& terms) {
        if (terms.size() != instance.agents.size()) return false;
        std::set<std::string> names;
        for (const auto& t : terms) {
            if (t.is_variable()) return false;
            names.insert(t.name);
        }
        return names.size() == instance.agents.size() &&
               std::all_of(instance.agents.begin(), instance.agents.end(),
                           [&](const Agent& a) { return names.count(a.name) > 0; });
    }

    void check_init_shape() {
        for (const auto& f : instance.init) {
            if (f.kind() == FormulaKind::Atom) continue;  // world literal
            if (f.kind() == FormulaKind::Common && is_full_agent_set(f.agents()) &&
                is_literal(f.children()[0]))
                continue;
            // singleton common knowledge normalizes to Believes
            if (f.kind() == FormulaKind::Believes && instance.agents.size() == 1 &&
                !f.agent().is_variable() && f.agent().name == instance.agents[0].name &&
                is_literal(f.children()[0]))
                continue;
            warn(codes::not_finitary_s5,
                 "init entry " + f.to_string() +
                     " is not a world literal or common knowledge of a literal among all "
                     "agents; planners that build the initial state may not support it",
                 instance.span);
        }
    }

    // (h) depth advisory
    void check_depths() {
        for (const auto& f : instance.init) {
            if (f.depth() > instance.depth)
                warn(codes::depth_exceeded,
                     "init entry " + f.to_string() + " has depth " +
                         std::to_string(f.depth()) + " exceeding the instance depth " +
                         std::to_string(instance.depth),
                     instance.span);
        }
        if (instance.goal.depth() > instance.depth)
            warn(codes::depth_exceeded,
                 "goal has depth " + std::to_string(instance.goal.depth()) +
                     " exceeding the instance depth " + std::to_string(instance.depth),
                 instance.span);
    }

    void run() {
        check_linkage();
        for (const auto& a : domain.actions) check_action(a);
        for (const auto& f : instance.init) {
            check_formula_fluents(f, instance.span, ":init");
            check_bound(f, {}, instance.span, ":init");
            check_agent_constants(f, instance.span, ":init");
        }
        check_formula_fluents(instance.goal, instance.span, ":goal");
        check_bound(instance.goal, {}, instance.span, ":goal");
        check_agent_constants(instance.goal, instance.span, ":goal");
        check_mep();
        check_init_shape();
        check_depths();
    }
};

}  // namespace

Result<ValidatedProblem> validate(const EpddlDomain& domain, const EpddlInstance& instance) {
    Checker checker{domain, instance, {}};
    checker.run();
    if (has_errors(checker.diags))
        return Result<ValidatedProblem>::failure(std::move(checker.diags));
    ValidatedProblem vp{domain, instance, checker.diags};
    return Result<ValidatedProblem>::success(std::move(vp), std::move(checker.diags));
}

}  // namespace epddl
