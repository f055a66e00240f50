// Core domain types: terms, fluents, belief formulae, observer
// specifications and the two file-level ASTs (domain and instance).
//
// Everything here is immutable after construction and freely copyable;
// Formula shares its nodes, so copies are cheap. Identifiers are stored
// lowercase (input is case-insensitive).

#pragma once

#include <compare>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "epddl/diagnostics.hpp"

namespace epddl {

enum class TermKind { Variable, Constant };

// A variable (`?i`) or constant (`a`) occurring as a fluent argument or
// as the subject of a modal operator. Variable names are stored without
// the `?` prefix.
struct Term {
    TermKind kind = TermKind::Constant;
    std::string name;

    static Term variable(std::string n) { return {TermKind::Variable, std::move(n)}; }
    static Term constant(std::string n) { return {TermKind::Constant, std::move(n)}; }

    bool is_variable() const { return kind == TermKind::Variable; }
    std::string to_string() const { return is_variable() ? "?" + name : name; }

    auto operator<=>(const Term&) const = default;
};

struct Agent {
    std::string name;
    auto operator<=>(const Agent&) const = default;
};

// A propositional atom, possibly parametric. Ground fluents have no
// variable arguments; their flat name joins predicate and arguments with
// underscores (`has_key a` -> `has_key_a`).
struct Fluent {
    std::string predicate;
    std::vector<Term> args;

    bool is_ground() const;
    std::string ground_name() const;
    std::string to_string() const;  // "(has_key ?i)"

    auto operator<=>(const Fluent&) const = default;
};

enum class FormulaKind { Atom, Not, And, Or, Implies, Believes, Common };

// Recursive belief formula: fluents, boolean connectives, B_i and C_alpha.
// And/Or are n-ary (the surface syntax is a list); the empty conjunction
// plays the role of "true". Modal depth is precomputed at construction.
//
// Construction-time normalization: Common over a single agent becomes
// Believes, and Common over an empty agent set is rejected.
class Formula {
public:
    Formula() : Formula(truth()) {}

    static Formula atom(Fluent f);
    static Formula negation(Formula f);
    static Formula conjunction(std::vector<Formula> fs);
    static Formula disjunction(std::vector<Formula> fs);
    static Formula implication(Formula lhs, Formula rhs);
    static Formula believes(Term agent, Formula f);
    static Formula common(std::vector<Term> agents, Formula f);
    static Formula truth() { return conjunction({}); }

    FormulaKind kind() const;
    const Fluent& fluent() const;                // Atom
    const std::vector<Formula>& children() const;
    const Term& agent() const;                   // Believes
    const std::vector<Term>& agents() const;     // Common

    // Modal nesting depth: 0 for fluent formulae, +1 per Believes/Common,
    // max over children for connectives.
    int depth() const;

    bool is_true() const { return kind() == FormulaKind::And && children().empty(); }
    bool is_ground() const;
    bool contains_kind(FormulaKind k) const;

    std::set<std::string> free_variables() const;
    Formula substitute(const std::map<std::string, std::string>& var_to_const) const;

    // Lists the conjuncts of a top-level conjunction, or the formula itself.
    std::vector<Formula> conjuncts() const;

    // Canonical E-PDDL surface syntax, e.g. "[?i](has_key ?i)".
    std::string to_string() const;

    bool operator==(const Formula& other) const;
    bool operator!=(const Formula& other) const { return !(*this == other); }

private:
    struct Node;
    explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
    std::shared_ptr<const Node> node_;
};

std::set<std::string> free_variables(const Formula& f);
int depth_of(const Formula& f);

enum class ActionType { Ontic, Sensing, Announcement };

std::string to_string(ActionType t);
std::optional<ActionType> action_type_from_string(const std::string& s);

// One observer clause: either a plain (possibly conditional) agent term,
// or a `forall`-quantified clause with `diff` exclusions that unrolls to
// one entry per non-excluded agent at grounding time.
struct ObserverClause {
    struct Quantifier {
        Term bound;                   // the `?j` of (diff (?j - agent) (?i))
        std::vector<Term> excluded;   // typically the executor
        bool operator==(const Quantifier&) const = default;
    };

    std::optional<Quantifier> quantifier;
    Term agent;
    std::optional<Formula> condition;  // absent = unconditional
    SourceSpan span;

    bool operator==(const ObserverClause& o) const {
        return quantifier == o.quantifier && agent == o.agent && condition == o.condition;
    }
};

struct ObserverSpec {
    std::vector<ObserverClause> clauses;

    bool empty() const { return clauses.empty(); }
    bool operator==(const ObserverSpec&) const = default;
};

struct Parameter {
    std::string name;  // without '?'
    std::string type;  // "agent" is the only object type
    SourceSpan span;

    bool operator==(const Parameter& o) const { return name == o.name && type == o.type; }
};

struct EpddlAction {
    std::string name;
    ActionType act_type = ActionType::Ontic;
    std::vector<Parameter> parameters;
    Formula precondition;  // defaults to true
    Formula effect;
    ObserverSpec observers;
    ObserverSpec p_observers;
    std::optional<Formula> exp_effect;
    SourceSpan span;

    bool operator==(const EpddlAction& o) const {
        return name == o.name && act_type == o.act_type && parameters == o.parameters &&
               precondition == o.precondition && effect == o.effect &&
               observers == o.observers && p_observers == o.p_observers &&
               exp_effect == o.exp_effect;
    }
};

struct PredicateDecl {
    std::string name;
    std::vector<Parameter> parameters;
    SourceSpan span;

    bool operator==(const PredicateDecl& o) const {
        return name == o.name && parameters == o.parameters;
    }
};

struct EpddlDomain {
    std::string name;
    std::vector<std::string> requirements;  // ":mep" must be present (validator)
    std::vector<PredicateDecl> predicates;
    std::vector<EpddlAction> actions;
    SourceSpan span;

    const PredicateDecl* find_predicate(const std::string& n) const;

    bool operator==(const EpddlDomain& o) const {
        return name == o.name && requirements == o.requirements &&
               predicates == o.predicates && actions == o.actions;
    }
};

struct EpddlInstance {
    std::string name;
    std::string domain_name;
    std::vector<Agent> agents;
    int depth = 1;
    std::vector<Formula> init;  // conjunctive entries
    Formula goal;               // conjunction
    SourceSpan span;

    bool has_agent(const std::string& n) const;

    bool operator==(const EpddlInstance& o) const {
        return name == o.name && domain_name == o.domain_name && agents == o.agents &&
               depth == o.depth && init == o.init && goal == o.goal;
    }
};

}  // namespace epddl
