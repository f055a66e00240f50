#include "epddl/parser.hpp"

#include <map>
#include <set>

#include "sexpr.hpp"

namespace epddl {

namespace {

using detail::SExpr;

struct AstReader {
    std::vector<Diagnostic> diags;
    bool failed = false;

    void error(std::string msg, const SourceSpan& span, const char* code = codes::syntax) {
        diags.push_back({Severity::Error, code, std::move(msg), span});
        failed = true;
    }

    // --- terms -----------------------------------------------------------

    std::optional<Term> term(const SExpr& e) {
        if (e.is(SExpr::Kind::Variable)) return Term::variable(e.text);
        if (e.is(SExpr::Kind::Symbol) && e.text != "-") return Term::constant(e.text);
        error("expected a variable or constant", e.span);
        return std::nullopt;
    }

    // --- formulae ---------------------------------------------------------

    // Reads one formula from items[i...], consuming modal bracket prefixes:
    // `[?j][?i](f)` is Brackets Brackets List.
    std::optional<Formula> formula_at(const std::vector<SExpr>& items, size_t& i,
                                      const SourceSpan& span) {
        if (i >= items.size()) {
            error("expected a formula", span);
            return std::nullopt;
        }
        const SExpr& e = items[i];
        if (e.is(SExpr::Kind::Brackets)) {
            std::vector<Term> agents;
            for (const auto& a : e.items) {
                auto t = term(a);
                if (!t) return std::nullopt;
                agents.push_back(*t);
            }
            if (agents.empty()) {
                error("modal operator needs at least one agent", e.span);
                return std::nullopt;
            }
            ++i;
            auto body = formula_at(items, i, e.span);
            if (!body) return std::nullopt;
            if (agents.size() == 1) return Formula::believes(agents.front(), *body);
            return Formula::common(std::move(agents), *body);
        }
        if (e.is(SExpr::Kind::List)) {
            ++i;
            return formula_from_list(e);
        }
        if (e.is(SExpr::Kind::Symbol) && e.text != "-") {
            // bare fluent name, e.g. (not f)
            ++i;
            return Formula::atom(Fluent{e.text, {}});
        }
        error("expected a formula", e.span);
        return std::nullopt;
    }

    std::optional<Formula> formula(const SExpr& e) {
        if (e.is(SExpr::Kind::List) && !e.items.empty() &&
            e.items[0].is(SExpr::Kind::Brackets)) {
            // wrapped modal formula: ([?i](f))
            size_t i = 0;
            auto f = formula_at(e.items, i, e.span);
            if (f && i != e.items.size()) {
                error("unexpected trailing expressions in formula", e.items[i].span);
                return std::nullopt;
            }
            return f;
        }
        if (e.is(SExpr::Kind::List)) return formula_from_list(e);
        if (e.is(SExpr::Kind::Brackets)) {
            error("modal operator must be followed by a formula", e.span);
            return std::nullopt;
        }
        std::vector<SExpr> one{e};
        size_t i = 0;
        return formula_at(one, i, e.span);
    }

    std::optional<Formula> formula_from_list(const SExpr& e) {
        if (e.items.empty()) {
            error("empty formula", e.span);
            return std::nullopt;
        }
        const SExpr& head = e.items[0];
        if (head.is(SExpr::Kind::Brackets)) {
            size_t i = 0;
            auto f = formula_at(e.items, i, e.span);
            if (f && i != e.items.size()) {
                error("unexpected trailing expressions in formula", e.items[i].span);
                return std::nullopt;
            }
            return f;
        }
        if (!head.is(SExpr::Kind::Symbol)) {
            error("expected an operator or predicate name", head.span);
            return std::nullopt;
        }
        const std::string& op = head.text;
        if (op == "and" || op == "or") {
            std::vector<Formula> children;
            size_t i = 1;
            while (i < e.items.size()) {
                auto c = formula_at(e.items, i, e.span);
                if (!c) return std::nullopt;
                children.push_back(std::move(*c));
            }
            if (op == "or" && children.empty()) {
                error("disjunction needs at least one operand", e.span);
                return std::nullopt;
            }
            return op == "and" ? Formula::conjunction(std::move(children))
                               : Formula::disjunction(std::move(children));
        }
        if (op == "not") {
            size_t i = 1;
            auto body = formula_at(e.items, i, e.span);
            if (!body) return std::nullopt;
            if (i != e.items.size()) {
                error("'not' takes exactly one operand", e.span);
                return std::nullopt;
            }
            return Formula::negation(std::move(*body));
        }
        if (op == "imply" || op == "implies") {
            size_t i = 1;
            auto lhs = formula_at(e.items, i, e.span);
            if (!lhs) return std::nullopt;
            auto rhs = formula_at(e.items, i, e.span);
            if (!rhs) return std::nullopt;
            if (i != e.items.size()) {
                error("'imply' takes exactly two operands", e.span);
                return std::nullopt;
            }
            return Formula::implication(std::move(*lhs), std::move(*rhs));
        }
        if (op == "forall" || op == "exists" || op == "when" || op == "diff") {
            error("'" + op + "' is not allowed inside a belief formula", head.span);
            return std::nullopt;
        }
        if (op == "-") {
            error("expected a predicate name", head.span);
            return std::nullopt;
        }
        // predicate atom
        Fluent f;
        f.predicate = op;
        for (size_t i = 1; i < e.items.size(); ++i) {
            auto t = term(e.items[i]);
            if (!t) return std::nullopt;
            f.args.push_back(std::move(*t));
        }
        return Formula::atom(std::move(f));
    }

    // --- typed parameter lists --------------------------------------------

    // PDDL style: (?i ?j - agent ?k - agent); a dangling group without a
    // type defaults to agent.
    std::optional<std::vector<Parameter>> parameters(const SExpr& e) {
        std::vector<Parameter> out;
        std::vector<Parameter> pending;
        for (size_t i = 0; i < e.items.size(); ++i) {
            const SExpr& it = e.items[i];
            if (it.is(SExpr::Kind::Variable)) {
                pending.push_back({it.text, "agent", it.span});
                continue;
            }
            if (it.is_symbol("-")) {
                if (i + 1 >= e.items.size() || !e.items[i + 1].is(SExpr::Kind::Symbol)) {
                    error("expected a type name after '-'", it.span);
                    return std::nullopt;
                }
                const std::string& type = e.items[i + 1].text;
                for (auto& p : pending) p.type = type;
                out.insert(out.end(), pending.begin(), pending.end());
                pending.clear();
                ++i;
                continue;
            }
            error("expected a variable in parameter list", it.span);
            return std::nullopt;
        }
        out.insert(out.end(), pending.begin(), pending.end());
        return out;
    }

    // --- observer specifications -------------------------------------------

    std::optional<ObserverClause> observer_clause(const SExpr& e) {
        if (!e.is(SExpr::Kind::List) || e.items.empty()) {
            error("expected an observer clause", e.span);
            return std::nullopt;
        }
        const SExpr& head = e.items[0];

        // (?i) or (a): unconditional plain clause
        if (e.items.size() == 1 &&
            (head.is(SExpr::Kind::Variable) || head.is(SExpr::Kind::Symbol))) {
            auto t = term(head);
            if (!t) return std::nullopt;
            ObserverClause c;
            c.agent = *t;
            c.span = e.span;
            return c;
        }
        if (head.is_symbol("when")) {
            if (e.items.size() != 3) {
                error("'when' clause takes a condition and an agent", e.span);
                return std::nullopt;
            }
            auto cond = formula(e.items[1]);
            if (!cond) return std::nullopt;
            auto inner = observer_clause(e.items[2]);
            if (!inner) return std::nullopt;
            if (inner->condition || inner->quantifier) {
                error("'when' must wrap a plain agent clause", e.items[2].span);
                return std::nullopt;
            }
            inner->condition = std::move(*cond);
            inner->span = e.span;
            return inner;
        }
        if (head.is_symbol("forall")) {
            if (e.items.size() != 3) {
                error("'forall' clause takes a binder and a body", e.span);
                return std::nullopt;
            }
            ObserverClause::Quantifier q;
            const SExpr& binder = e.items[1];
            if (binder.is(SExpr::Kind::List) && !binder.items.empty() &&
                binder.items[0].is_symbol("diff")) {
                // (diff (?j - agent) (?i ...))
                if (binder.items.size() != 3) {
                    error("'diff' takes a typed variable and an exclusion list", binder.span);
                    return std::nullopt;
                }
                auto bound = typed_variable(binder.items[1]);
                if (!bound) return std::nullopt;
                q.bound = *bound;
                const SExpr& excl = binder.items[2];
                if (!excl.is(SExpr::Kind::List)) {
                    error("'diff' exclusions must be a list", excl.span);
                    return std::nullopt;
                }
                for (const auto& x : excl.items) {
                    auto t = term(x);
                    if (!t) return std::nullopt;
                    q.excluded.push_back(std::move(*t));
                }
            } else {
                auto bound = typed_variable(binder);
                if (!bound) return std::nullopt;
                q.bound = *bound;
            }
            auto inner = observer_clause(e.items[2]);
            if (!inner) return std::nullopt;
            if (inner->quantifier) {
                error("nested 'forall' in observer clause", e.items[2].span);
                return std::nullopt;
            }
            inner->quantifier = std::move(q);
            inner->span = e.span;
            return inner;
        }
        error("unrecognized observer clause", e.span);
        return std::nullopt;
    }

    // (?j - agent) or bare ?j inside a binder
    std::optional<Term> typed_variable(const SExpr& e) {
        if (e.is(SExpr::Kind::Variable)) return Term::variable(e.text);
        if (e.is(SExpr::Kind::List)) {
            if (e.items.size() == 3 && e.items[0].is(SExpr::Kind::Variable) &&
                e.items[1].is_symbol("-") && e.items[2].is(SExpr::Kind::Symbol)) {
                if (e.items[2].text != "agent")
                    error("only the 'agent' type may be quantified", e.items[2].span,
                          codes::unknown_type);
                return Term::variable(e.items[0].text);
            }
            if (e.items.size() == 1 && e.items[0].is(SExpr::Kind::Variable))
                return Term::variable(e.items[0].text);
        }
        error("expected a typed variable like (?j - agent)", e.span);
        return std::nullopt;
    }

    std::optional<ObserverSpec> observers(const SExpr& e) {
        ObserverSpec spec;
        if (e.is(SExpr::Kind::List) && !e.items.empty() && e.items[0].is_symbol("and")) {
            for (size_t i = 1; i < e.items.size(); ++i) {
                auto c = observer_clause(e.items[i]);
                if (!c) return std::nullopt;
                spec.clauses.push_back(std::move(*c));
            }
            return spec;
        }
        auto c = observer_clause(e);
        if (!c) return std::nullopt;
        spec.clauses.push_back(std::move(*c));
        return spec;
    }

    // --- domain -------------------------------------------------------------

    std::optional<EpddlAction> action(const SExpr& e) {
        EpddlAction act;
        act.span = e.span;
        act.precondition = Formula::truth();
        if (e.items.size() < 2 || !e.items[1].is(SExpr::Kind::Symbol)) {
            error("expected an action name", e.span);
            return std::nullopt;
        }
        act.name = e.items[1].text;
        bool has_type = false, has_effect = false;
        std::set<std::string> seen;
        size_t i = 2;
        while (i < e.items.size()) {
            const SExpr& key = e.items[i];
            if (!key.is(SExpr::Kind::Keyword)) {
                error("expected an action field keyword", key.span);
                return std::nullopt;
            }
            if (i + 1 >= e.items.size()) {
                error("missing value for :" + key.text, key.span, codes::missing_field);
                return std::nullopt;
            }
            const SExpr& val = e.items[i + 1];
            if (!seen.insert(key.text).second) {
                error("duplicate field :" + key.text, key.span, codes::duplicate_section);
                return std::nullopt;
            }
            if (key.text == "act_type") {
                if (!val.is(SExpr::Kind::Symbol)) {
                    error("expected ontic, sensing or announcement", val.span,
                          codes::bad_act_type);
                    return std::nullopt;
                }
                auto t = action_type_from_string(val.text);
                if (!t) {
                    error("unknown action type '" + val.text + "'", val.span,
                          codes::bad_act_type);
                    return std::nullopt;
                }
                act.act_type = *t;
                has_type = true;
            } else if (key.text == "parameters") {
                if (!val.is(SExpr::Kind::List)) {
                    error("expected a parameter list", val.span);
                    return std::nullopt;
                }
                auto ps = parameters(val);
                if (!ps) return std::nullopt;
                act.parameters = std::move(*ps);
            } else if (key.text == "precondition") {
                auto f = formula(val);
                if (!f) return std::nullopt;
                act.precondition = std::move(*f);
            } else if (key.text == "effect") {
                auto f = formula(val);
                if (!f) return std::nullopt;
                act.effect = std::move(*f);
                has_effect = true;
            } else if (key.text == "observers") {
                auto o = observers(val);
                if (!o) return std::nullopt;
                act.observers = std::move(*o);
            } else if (key.text == "p_observers") {
                auto o = observers(val);
                if (!o) return std::nullopt;
                act.p_observers = std::move(*o);
            } else if (key.text == "exp_effect") {
                auto f = formula(val);
                if (!f) return std::nullopt;
                act.exp_effect = std::move(*f);
            } else {
                error("unknown action field :" + key.text, key.span, codes::unknown_section);
                return std::nullopt;
            }
            i += 2;
        }
        if (!has_type) {
            error("action '" + act.name + "' is missing :act_type", e.span,
                  codes::missing_field);
            return std::nullopt;
        }
        if (!has_effect) {
            error("action '" + act.name + "' is missing :effect", e.span,
                  codes::missing_field);
            return std::nullopt;
        }
        return act;
    }

    std::optional<std::vector<PredicateDecl>> predicates(const SExpr& e) {
        std::vector<PredicateDecl> out;
        std::set<std::string> names;
        for (size_t i = 1; i < e.items.size(); ++i) {
            const SExpr& p = e.items[i];
            if (!p.is(SExpr::Kind::List) || p.items.empty() ||
                !p.items[0].is(SExpr::Kind::Symbol)) {
                error("expected a predicate declaration", p.span);
                return std::nullopt;
            }
            if (!names.insert(p.items[0].text).second) {
                error("duplicate predicate '" + p.items[0].text + "'", p.span,
                      codes::duplicate_predicate);
                return std::nullopt;
            }
            PredicateDecl decl;
            decl.name = p.items[0].text;
            decl.span = p.span;
            SExpr rest = p;
            rest.items.erase(rest.items.begin());
            auto ps = parameters(rest);
            if (!ps) return std::nullopt;
            decl.parameters = std::move(*ps);
            out.push_back(std::move(decl));
        }
        return out;
    }

    std::optional<EpddlDomain> domain(const SExpr& e) {
        EpddlDomain d;
        d.span = e.span;
        if (!e.is(SExpr::Kind::List) || e.items.size() < 2 || !e.items[0].is_symbol("define")) {
            error("expected (define (domain ...) ...)", e.span);
            return std::nullopt;
        }
        const SExpr& head = e.items[1];
        if (!head.is(SExpr::Kind::List) || head.items.size() != 2 ||
            !head.items[0].is_symbol("domain") || !head.items[1].is(SExpr::Kind::Symbol)) {
            error("expected (domain <name>)", head.span);
            return std::nullopt;
        }
        d.name = head.items[1].text;

        std::set<std::string> seen_sections;
        std::set<std::string> action_names;
        for (size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& sec = e.items[i];
            if (!sec.is(SExpr::Kind::List) || sec.items.empty() ||
                !sec.items[0].is(SExpr::Kind::Keyword)) {
                error("expected a (:section ...) form", sec.span, codes::unknown_section);
                return std::nullopt;
            }
            const std::string& name = sec.items[0].text;
            if (name == "requirements") {
                if (!seen_sections.insert(name).second) {
                    error("duplicate :requirements section", sec.span,
                          codes::duplicate_section);
                    return std::nullopt;
                }
                for (size_t j = 1; j < sec.items.size(); ++j) {
                    if (!sec.items[j].is(SExpr::Kind::Keyword)) {
                        error("requirement flags must be keywords", sec.items[j].span);
                        return std::nullopt;
                    }
                    d.requirements.push_back(":" + sec.items[j].text);
                }
            } else if (name == "predicates") {
                if (!seen_sections.insert(name).second) {
                    error("duplicate :predicates section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                auto ps = predicates(sec);
                if (!ps) return std::nullopt;
                d.predicates = std::move(*ps);
            } else if (name == "action") {
                auto a = action(sec);
                if (!a) return std::nullopt;
                if (!action_names.insert(a->name).second) {
                    error("duplicate action name '" + a->name + "'", sec.span,
                          codes::duplicate_action);
                    return std::nullopt;
                }
                d.actions.push_back(std::move(*a));
            } else {
                error("unknown domain section :" + name, sec.span, codes::unknown_section);
                return std::nullopt;
            }
        }
        return d;
    }

    // --- instance -------------------------------------------------------------

    std::optional<EpddlInstance> instance(const SExpr& e) {
        EpddlInstance inst;
        inst.span = e.span;
        inst.goal = Formula::truth();
        if (!e.is(SExpr::Kind::List) || e.items.size() < 2 || !e.items[0].is_symbol("define")) {
            error("expected (define (problem ...) ...)", e.span);
            return std::nullopt;
        }
        const SExpr& head = e.items[1];
        if (!head.is(SExpr::Kind::List) || head.items.size() != 2 ||
            !head.items[0].is_symbol("problem") || !head.items[1].is(SExpr::Kind::Symbol)) {
            error("expected (problem <name>)", head.span);
            return std::nullopt;
        }
        inst.name = head.items[1].text;

        bool saw_domain = false, saw_agents = false, saw_depth = false, saw_goal = false,
             saw_init = false;
        for (size_t i = 2; i < e.items.size(); ++i) {
            const SExpr& sec = e.items[i];
            if (!sec.is(SExpr::Kind::List) || sec.items.empty() ||
                !sec.items[0].is(SExpr::Kind::Keyword)) {
                error("expected a (:section ...) form", sec.span, codes::unknown_section);
                return std::nullopt;
            }
            const std::string& name = sec.items[0].text;
            if (name == "domain") {
                if (saw_domain) {
                    error("duplicate :domain section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                saw_domain = true;
                if (sec.items.size() != 2 || !sec.items[1].is(SExpr::Kind::Symbol)) {
                    error("expected (:domain <name>)", sec.span);
                    return std::nullopt;
                }
                inst.domain_name = sec.items[1].text;
            } else if (name == "agent" || name == "agents") {
                if (saw_agents) {
                    error("duplicate :agent section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                saw_agents = true;
                std::set<std::string> names;
                for (size_t j = 1; j < sec.items.size(); ++j) {
                    if (!sec.items[j].is(SExpr::Kind::Symbol)) {
                        error("agent names must be constants", sec.items[j].span);
                        return std::nullopt;
                    }
                    if (!names.insert(sec.items[j].text).second) {
                        error("duplicate agent '" + sec.items[j].text + "'",
                              sec.items[j].span, codes::duplicate_agent);
                        return std::nullopt;
                    }
                    inst.agents.push_back({sec.items[j].text});
                }
            } else if (name == "depth") {
                if (saw_depth) {
                    error("duplicate :depth section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                saw_depth = true;
                if (sec.items.size() != 2 || !sec.items[1].is(SExpr::Kind::Integer)) {
                    error("depth must be an integer", sec.span, codes::bad_depth);
                    return std::nullopt;
                }
                if (sec.items[1].value < 1) {
                    error("depth must be >= 1", sec.items[1].span, codes::bad_depth);
                    return std::nullopt;
                }
                inst.depth = static_cast<int>(sec.items[1].value);
            } else if (name == "init") {
                if (saw_init) {
                    error("duplicate :init section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                saw_init = true;
                size_t j = 1;
                while (j < sec.items.size()) {
                    auto f = formula_at(sec.items, j, sec.span);
                    if (!f) return std::nullopt;
                    inst.init.push_back(std::move(*f));
                }
            } else if (name == "goal") {
                if (saw_goal) {
                    error("duplicate :goal section", sec.span, codes::duplicate_section);
                    return std::nullopt;
                }
                saw_goal = true;
                std::vector<Formula> goals;
                size_t j = 1;
                while (j < sec.items.size()) {
                    auto f = formula_at(sec.items, j, sec.span);
                    if (!f) return std::nullopt;
                    goals.push_back(std::move(*f));
                }
                inst.goal = goals.size() == 1 ? goals.front()
                                              : Formula::conjunction(std::move(goals));
            } else {
                error("unknown instance section :" + name, sec.span, codes::unknown_section);
                return std::nullopt;
            }
        }
        if (!saw_domain) {
            error("missing :domain section", e.span, codes::missing_field);
            return std::nullopt;
        }
        if (!saw_agents || inst.agents.empty()) {
            error("instance declares no agents", e.span, codes::no_agents);
            return std::nullopt;
        }
        if (!saw_depth) {
            error("missing :depth section", e.span, codes::missing_field);
            return std::nullopt;
        }
        if (!saw_goal) {
            error("missing :goal section", e.span, codes::missing_field);
            return std::nullopt;
        }
        return inst;
    }
};

// Clamp spans to stay inside the input text.
void clamp_spans(std::vector<Diagnostic>& diags, std::string_view text) {
    int last_line = 1, last_col = 1;
    for (char c : text) {
        if (c == '\n') {
            ++last_line;
            last_col = 1;
        } else {
            ++last_col;
        }
    }
    for (auto& d : diags) {
        auto clamp = [&](int& line, int& col) {
            if (line > last_line) {
                line = last_line;
                col = last_col;
            }
            if (line < 1) line = 1;
            if (col < 1) col = 1;
        };
        clamp(d.span.start_line, d.span.start_col);
        clamp(d.span.end_line, d.span.end_col);
    }
}

template <typename T, typename Fn>
Result<T> parse_file(std::string_view text, int file_id, Fn&& read) {
    detail::ReadOutput sexprs = detail::read_sexprs(text, file_id);
    AstReader reader;
    reader.diags = std::move(sexprs.diagnostics);
    reader.failed = has_errors(reader.diags);

    std::optional<T> value;
    if (!reader.failed) {
        if (sexprs.forms.empty()) {
            reader.error("empty input", SourceSpan{file_id, 1, 1, 1, 1});
        } else if (sexprs.forms.size() > 1) {
            reader.error("expected a single top-level (define ...) form",
                         sexprs.forms[1].span);
        } else {
            value = read(reader, sexprs.forms[0]);
        }
    }
    clamp_spans(reader.diags, text);
    if (!value || has_errors(reader.diags)) {
        if (reader.diags.empty())
            reader.error("parse failed", SourceSpan{file_id, 1, 1, 1, 1});
        return Result<T>::failure(std::move(reader.diags));
    }
    return Result<T>::success(std::move(*value), std::move(reader.diags));
}

}  // namespace

Result<EpddlDomain> parse_domain(std::string_view text, int file_id) {
    return parse_file<EpddlDomain>(text, file_id, [](AstReader& r, const SExpr& form) {
        return r.domain(form);
    });
}

Result<EpddlInstance> parse_instance(std::string_view text, int file_id) {
    return parse_file<EpddlInstance>(text, file_id, [](AstReader& r, const SExpr& form) {
        return r.instance(form);
    });
}

}  // namespace epddl
