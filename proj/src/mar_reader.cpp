#include "epddl/mar_reader.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

namespace epddl {

namespace {

struct MarParser {
    std::string_view text;
    int file_id;
    std::vector<Diagnostic> diags;
    GroundedProblem problem;
    std::map<std::string, size_t> action_index;
    int depth_hint = 2;

    void error(std::string msg, int line) {
        diags.push_back({Severity::Error, codes::syntax, std::move(msg),
                         SourceSpan{file_id, line, 1, line, 1}});
    }

    static std::string trim(std::string s) {
        auto not_space = [](unsigned char c) { return !std::isspace(c); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), not_space));
        s.erase(std::find_if(s.rbegin(), s.rend(), not_space).base(), s.end());
        return s;
    }

    // split on top-level commas (ignoring those inside parentheses/brackets)
    static std::vector<std::string> split_commas(const std::string& s) {
        std::vector<std::string> out;
        int nest = 0;
        std::string cur;
        for (char c : s) {
            if (c == '(' || c == '[') ++nest;
            if (c == ')' || c == ']') --nest;
            if (c == ',' && nest == 0) {
                out.push_back(trim(cur));
                cur.clear();
            } else {
                cur += c;
            }
        }
        if (!trim(cur).empty()) out.push_back(trim(cur));
        return out;
    }

    static std::vector<std::string> split_words(const std::string& s) {
        std::istringstream is(s);
        std::vector<std::string> out;
        std::string w;
        while (is >> w) out.push_back(w);
        return out;
    }

    std::optional<Formula> formula(const std::string& raw, int line) {
        std::string s = trim(raw);
        if (s.empty()) {
            error("empty condition", line);
            return std::nullopt;
        }
        auto parts = split_commas(s);
        if (parts.size() > 1) {
            std::vector<Formula> fs;
            for (const auto& p : parts) {
                auto f = formula(p, line);
                if (!f) return std::nullopt;
                fs.push_back(std::move(*f));
            }
            return Formula::conjunction(std::move(fs));
        }
        if (s == "true") return Formula::truth();
        if (s[0] == '-') {
            auto inner = formula(s.substr(1), line);
            if (!inner) return std::nullopt;
            return Formula::negation(std::move(*inner));
        }
        char head = static_cast<char>(std::tolower(static_cast<unsigned char>(s[0])));
        if ((head == 'b' || head == 'c') && s.size() > 1 && s[1] == '(') {
            if (s.back() != ')') {
                error("unbalanced parentheses in '" + s + "'", line);
                return std::nullopt;
            }
            std::string body = s.substr(2, s.size() - 3);
            if (head == 'b') {
                auto parts2 = split_commas(body);
                if (parts2.size() != 2) {
                    error("B(...) takes an agent and a formula", line);
                    return std::nullopt;
                }
                auto inner = formula(parts2[1], line);
                if (!inner) return std::nullopt;
                return Formula::believes(Term::constant(parts2[0]), std::move(*inner));
            }
            // C([a,b,c], formula)
            auto close = body.find(']');
            if (body.empty() || body[0] != '[' || close == std::string::npos) {
                error("C(...) takes an agent list in brackets", line);
                return std::nullopt;
            }
            std::vector<Term> agents;
            for (const auto& a : split_commas(body.substr(1, close - 1)))
                agents.push_back(Term::constant(a));
            std::string rest = trim(body.substr(close + 1));
            if (rest.empty() || rest[0] != ',') {
                error("expected ',' after the agent list in C(...)", line);
                return std::nullopt;
            }
            auto inner = formula(rest.substr(1), line);
            if (!inner) return std::nullopt;
            if (agents.empty()) {
                error("C(...) needs at least one agent", line);
                return std::nullopt;
            }
            return Formula::common(std::move(agents), std::move(*inner));
        }
        // plain ground fluent name
        if (!std::all_of(s.begin(), s.end(), [](unsigned char c) {
                return std::isalnum(c) || c == '_';
            })) {
            error("cannot parse condition '" + s + "'", line);
            return std::nullopt;
        }
        return Formula::atom(Fluent{s, {}});
    }

    GroundAction& action_for(const std::string& name) {
        auto it = action_index.find(name);
        if (it != action_index.end()) return problem.actions[it->second];
        GroundAction a;
        a.name = name;
        a.base_name = name;
        a.precondition = Formula::truth();
        action_index[name] = problem.actions.size();
        problem.actions.push_back(std::move(a));
        return problem.actions.back();
    }

    bool statement(const std::string& stmt, int line) {
        auto words = split_words(stmt);
        if (words.empty()) return true;
        const std::string& head = words[0];

        auto rest_after = [&](size_t word_count) {
            size_t pos = 0;
            for (size_t i = 0; i < word_count; ++i) {
                pos = stmt.find(words[i], pos);
                pos += words[i].size();
            }
            return trim(stmt.substr(pos));
        };

        if (head == "fluent" || head == "action" || head == "agent") {
            for (const auto& name : split_commas(rest_after(1))) {
                if (name.empty()) continue;
                if (head == "fluent")
                    problem.fluents.push_back(Fluent{name, {}});
                else if (head == "action")
                    action_for(name);
                else
                    problem.agents.push_back({name});
            }
            return true;
        }
        if (head == "executable") {
            if (words.size() < 2) {
                error("executable statement needs an action name", line);
                return false;
            }
            GroundAction& a = action_for(words[1]);
            if (words.size() > 2 && words[2] == "if") {
                auto f = formula(rest_after(3), line);
                if (!f) return false;
                a.precondition = std::move(*f);
            }
            return true;
        }
        if (head == "initially") {
            std::string body = rest_after(1);
            auto f = formula(body, line);
            if (!f) return false;
            for (const auto& part : f->conjuncts()) {
                if (part.kind() == FormulaKind::Atom)
                    problem.init_world.push_back(part.fluent());
                else if (part.kind() == FormulaKind::Not &&
                         part.children()[0].kind() == FormulaKind::Atom)
                    ;  // closed world: negated literals are implicit
                else
                    problem.init_beliefs.push_back(part);
            }
            return true;
        }
        if (head == "goal") {
            auto f = formula(rest_after(1), line);
            if (!f) return false;
            problem.goal = std::move(*f);
            return true;
        }
        // effect and observability statements: <name> keyword ...
        if (words.size() >= 2 && words[1] == "causes") {
            GroundAction& a = action_for(head);
            a.act_type = ActionType::Ontic;
            std::string lit = rest_after(2);
            bool neg = !lit.empty() && lit[0] == '-';
            if (neg) lit = trim(lit.substr(1));
            a.effects.push_back({Fluent{lit, {}}, neg});
            return true;
        }
        if (words.size() >= 2 && (words[1] == "determines" || words[1] == "announces")) {
            GroundAction& a = action_for(head);
            a.act_type = words[1] == "determines" ? ActionType::Sensing
                                                  : ActionType::Announcement;
            std::string body = rest_after(2);
            auto if_pos = body.find(" if ");
            if (if_pos != std::string::npos) {
                std::string cond = trim(body.substr(if_pos + 4));
                auto f = formula(cond, line);
                if (!f) return false;
                a.sensed_condition = std::move(*f);
                body = trim(body.substr(0, if_pos));
            }
            a.effect_fluent = Fluent{body, {}};
            return true;
        }
        if (words.size() >= 3 && (words[1] == "observes" || words[1] == "aware_of")) {
            GroundAction& a = action_for(words[2]);
            Formula cond = Formula::truth();
            if (words.size() > 3 && words[3] == "if") {
                auto f = formula(rest_after(4), line);
                if (!f) return false;
                cond = std::move(*f);
            }
            if (words[1] == "observes")
                a.full_observers.push_back({head, std::move(cond)});
            else
                a.partial_observers.push_back({head, std::move(cond)});
            return true;
        }
        error("unrecognized statement '" + stmt + "'", line);
        return false;
    }

    void run() {
        problem.goal = Formula::truth();
        std::string stmt;
        int line = 1, stmt_line = 1;
        bool in_comment = false;
        for (char c : text) {
            if (c == '\n') {
                ++line;
                in_comment = false;
                continue;
            }
            if (in_comment) continue;
            if (c == '%') {  // comment to end of line
                in_comment = true;
                continue;
            }
            if (c == ';') {
                if (!trim(stmt).empty())
                    if (!statement(trim(stmt), stmt_line)) return;
                stmt.clear();
                stmt_line = line;
                continue;
            }
            stmt += c;
        }
        if (!trim(stmt).empty())
            error("missing ';' after '" + trim(stmt) + "'", stmt_line);
        problem.depth = depth_hint;
    }
};

}  // namespace

Result<GroundedProblem> read_mar(std::string_view text, int file_id) {
    MarParser p{text, file_id, {}, {}, {}, 2};
    p.run();
    if (has_errors(p.diags)) return Result<GroundedProblem>::failure(std::move(p.diags));
    return Result<GroundedProblem>::success(std::move(p.problem), std::move(p.diags));
}

}  // namespace epddl
