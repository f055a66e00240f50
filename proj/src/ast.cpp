#include "epddl/ast.hpp"

#include <algorithm>
#include <sstream>

namespace epddl {

bool Fluent::is_ground() const {
    return std::none_of(args.begin(), args.end(),
                        [](const Term& t) { return t.is_variable(); });
}

std::string Fluent::ground_name() const {
    std::string out = predicate;
    for (const auto& a : args) {
        out += "_";
        out += a.name;
    }
    return out;
}

std::string Fluent::to_string() const {
    std::string out = "(" + predicate;
    for (const auto& a : args) out += " " + a.to_string();
    out += ")";
    return out;
}

struct Formula::Node {
    FormulaKind kind;
    Fluent fluent;                  // Atom
    std::vector<Formula> children;  // Not: 1, Implies: 2, And/Or: n
    Term agent;                     // Believes
    std::vector<Term> agents;       // Common
    int depth = 0;
    bool ground = true;
};

Formula Formula::atom(Fluent f) {
    Node n;
    n.kind = FormulaKind::Atom;
    n.ground = f.is_ground();
    n.fluent = std::move(f);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::negation(Formula f) {
    Node n;
    n.kind = FormulaKind::Not;
    n.depth = f.depth();
    n.ground = f.is_ground();
    n.children.push_back(std::move(f));
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
    Node n;
    n.kind = FormulaKind::And;
    for (const auto& f : fs) {
        n.depth = std::max(n.depth, f.depth());
        n.ground = n.ground && f.is_ground();
    }
    n.children = std::move(fs);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
    Node n;
    n.kind = FormulaKind::Or;
    for (const auto& f : fs) {
        n.depth = std::max(n.depth, f.depth());
        n.ground = n.ground && f.is_ground();
    }
    n.children = std::move(fs);
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::implication(Formula lhs, Formula rhs) {
    Node n;
    n.kind = FormulaKind::Implies;
    n.depth = std::max(lhs.depth(), rhs.depth());
    n.ground = lhs.is_ground() && rhs.is_ground();
    n.children.push_back(std::move(lhs));
    n.children.push_back(std::move(rhs));
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::believes(Term agent, Formula f) {
    Node n;
    n.kind = FormulaKind::Believes;
    n.depth = 1 + f.depth();
    n.ground = !agent.is_variable() && f.is_ground();
    n.agent = std::move(agent);
    n.children.push_back(std::move(f));
    return Formula(std::make_shared<const Node>(std::move(n)));
}

Formula Formula::common(std::vector<Term> agents, Formula f) {
    if (agents.empty())
        throw std::invalid_argument("common knowledge requires a non-empty agent set");
    if (agents.size() == 1) return believes(agents.front(), std::move(f));
    Node n;
    n.kind = FormulaKind::Common;
    n.depth = 1 + f.depth();
    n.ground = f.is_ground() &&
               std::none_of(agents.begin(), agents.end(),
                            [](const Term& t) { return t.is_variable(); });
    n.agents = std::move(agents);
    n.children.push_back(std::move(f));
    return Formula(std::make_shared<const Node>(std::move(n)));
}

FormulaKind Formula::kind() const { return node_->kind; }
const Fluent& Formula::fluent() const { return node_->fluent; }
const std::vector<Formula>& Formula::children() const { return node_->children; }
const Term& Formula::agent() const { return node_->agent; }
const std::vector<Term>& Formula::agents() const { return node_->agents; }
int Formula::depth() const { return node_->depth; }
bool Formula::is_ground() const { return node_->ground; }

bool Formula::contains_kind(FormulaKind k) const {
    if (kind() == k) return true;
    return std::any_of(children().begin(), children().end(),
                       [k](const Formula& c) { return c.contains_kind(k); });
}

namespace {

void collect_free(const Formula& f, std::set<std::string>& out) {
    switch (f.kind()) {
        case FormulaKind::Atom:
            for (const auto& t : f.fluent().args)
                if (t.is_variable()) out.insert(t.name);
            return;
        case FormulaKind::Believes:
            if (f.agent().is_variable()) out.insert(f.agent().name);
            break;
        case FormulaKind::Common:
            for (const auto& t : f.agents())
                if (t.is_variable()) out.insert(t.name);
            break;
        default:
            break;
    }
    for (const auto& c : f.children()) collect_free(c, out);
}

Term subst_term(const Term& t, const std::map<std::string, std::string>& m) {
    if (!t.is_variable()) return t;
    auto it = m.find(t.name);
    return it == m.end() ? t : Term::constant(it->second);
}

}  // namespace

std::set<std::string> Formula::free_variables() const {
    std::set<std::string> out;
    collect_free(*this, out);
    return out;
}

Formula Formula::substitute(const std::map<std::string, std::string>& m) const {
    switch (kind()) {
        case FormulaKind::Atom: {
            Fluent f = fluent();
            for (auto& a : f.args) a = subst_term(a, m);
            return atom(std::move(f));
        }
        case FormulaKind::Not:
            return negation(children()[0].substitute(m));
        case FormulaKind::And: {
            std::vector<Formula> cs;
            cs.reserve(children().size());
            for (const auto& c : children()) cs.push_back(c.substitute(m));
            return conjunction(std::move(cs));
        }
        case FormulaKind::Or: {
            std::vector<Formula> cs;
            cs.reserve(children().size());
            for (const auto& c : children()) cs.push_back(c.substitute(m));
            return disjunction(std::move(cs));
        }
        case FormulaKind::Implies:
            return implication(children()[0].substitute(m), children()[1].substitute(m));
        case FormulaKind::Believes:
            return believes(subst_term(agent(), m), children()[0].substitute(m));
        case FormulaKind::Common: {
            std::vector<Term> as = agents();
            for (auto& a : as) a = subst_term(a, m);
            return common(std::move(as), children()[0].substitute(m));
        }
    }
    return *this;
}

std::vector<Formula> Formula::conjuncts() const {
    if (kind() == FormulaKind::And) return children();
    return {*this};
}

std::string Formula::to_string() const {
    std::ostringstream os;
    switch (kind()) {
        case FormulaKind::Atom:
            os << fluent().to_string();
            break;
        case FormulaKind::Not:
            os << "(not " << children()[0].to_string() << ")";
            break;
        case FormulaKind::And: {
            os << "(and";
            for (const auto& c : children()) os << " " << c.to_string();
            os << ")";
            break;
        }
        case FormulaKind::Or: {
            os << "(or";
            for (const auto& c : children()) os << " " << c.to_string();
            os << ")";
            break;
        }
        case FormulaKind::Implies:
            os << "(imply " << children()[0].to_string() << " "
               << children()[1].to_string() << ")";
            break;
        case FormulaKind::Believes:
            os << "[" << agent().to_string() << "]" << children()[0].to_string();
            break;
        case FormulaKind::Common: {
            os << "[";
            for (size_t i = 0; i < agents().size(); ++i) {
                if (i) os << " ";
                os << agents()[i].to_string();
            }
            os << "]" << children()[0].to_string();
            break;
        }
    }
    return os.str();
}

bool Formula::operator==(const Formula& other) const {
    if (node_ == other.node_) return true;
    if (kind() != other.kind() || depth() != other.depth()) return false;
    switch (kind()) {
        case FormulaKind::Atom:
            return fluent() == other.fluent();
        case FormulaKind::Believes:
            if (agent() != other.agent()) return false;
            break;
        case FormulaKind::Common:
            if (agents() != other.agents()) return false;
            break;
        default:
            break;
    }
    return children() == other.children();
}

std::set<std::string> free_variables(const Formula& f) { return f.free_variables(); }
int depth_of(const Formula& f) { return f.depth(); }

std::string to_string(ActionType t) {
    switch (t) {
        case ActionType::Ontic: return "ontic";
        case ActionType::Sensing: return "sensing";
        case ActionType::Announcement: return "announcement";
    }
    return "ontic";
}

std::optional<ActionType> action_type_from_string(const std::string& s) {
    if (s == "ontic") return ActionType::Ontic;
    if (s == "sensing") return ActionType::Sensing;
    if (s == "announcement") return ActionType::Announcement;
    return std::nullopt;
}

const PredicateDecl* EpddlDomain::find_predicate(const std::string& n) const {
    for (const auto& p : predicates)
        if (p.name == n) return &p;
    return nullptr;
}

bool EpddlInstance::has_agent(const std::string& n) const {
    return std::any_of(agents.begin(), agents.end(),
                       [&](const Agent& a) { return a.name == n; });
}

}  // namespace epddl
