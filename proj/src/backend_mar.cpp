#include "epddl/backend_mar.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace epddl {

namespace {

struct MarWriter {
    const GroundedProblem& g;
    const MarOptions& opts;
    std::vector<Diagnostic> diags;
    size_t statements = 0;

    std::string fluent_name(const Fluent& f) const {
        auto it = opts.rename.find(f.predicate);
        if (it == opts.rename.end()) return f.ground_name();
        Fluent renamed = f;
        renamed.predicate = it->second;
        return renamed.ground_name();
    }

    void unsupported(const Formula& f, const std::string& where) {
        const char* code =
            where == "goal" ? codes::unsupported_goal : codes::unsupported_cond;
        diags.push_back({Severity::Error, code,
                         "cannot render " + f.to_string() + " in the " + where +
                             ": mAr conditions support literals, conjunction, B(...) "
                             "and C(...) only",
                         SourceSpan{}});
    }

    // B(i,f), C([i,j],f), -f, comma-joined conjunction at the top level
    std::optional<std::string> render(const Formula& f, const std::string& where,
                                      bool top_level) {
        switch (f.kind()) {
            case FormulaKind::Atom:
                return fluent_name(f.fluent());
            case FormulaKind::Not: {
                FormulaKind inner_kind = f.children()[0].kind();
                if (inner_kind != FormulaKind::Atom && inner_kind != FormulaKind::Believes &&
                    inner_kind != FormulaKind::Common) {
                    unsupported(f, where);
                    return std::nullopt;
                }
                auto inner = render(f.children()[0], where, false);
                if (!inner) return std::nullopt;
                return "-" + *inner;
            }
            case FormulaKind::And: {
                if (f.children().empty()) return std::string("true");
                if (!top_level) {
                    // conjunction only exists as the comma-joined statement level
                    unsupported(f, where);
                    return std::nullopt;
                }
                std::string out;
                for (const auto& c : f.children()) {
                    auto inner = render(c, where, false);
                    if (!inner) return std::nullopt;
                    if (!out.empty()) out += ",";
                    out += *inner;
                }
                return out;
            }
            case FormulaKind::Believes: {
                auto inner = render(f.children()[0], where, false);
                if (!inner) return std::nullopt;
                return "B(" + f.agent().name + "," + *inner + ")";
            }
            case FormulaKind::Common: {
                auto inner = render(f.children()[0], where, false);
                if (!inner) return std::nullopt;
                std::string agents;
                for (size_t i = 0; i < f.agents().size(); ++i) {
                    if (i) agents += ",";
                    agents += f.agents()[i].name;
                }
                return "C([" + agents + "]," + *inner + ")";
            }
            case FormulaKind::Or:
            case FormulaKind::Implies:
                unsupported(f, where);
                return std::nullopt;
        }
        return std::nullopt;
    }

    void line(std::ostringstream& os, const std::string& stmt) {
        os << stmt << ";\n";
        ++statements;
    }

    std::optional<std::string> build() {
        std::ostringstream os;

        std::string fluents;
        for (size_t i = 0; i < g.fluents.size(); ++i) {
            if (i) fluents += ", ";
            fluents += fluent_name(g.fluents[i]);
        }
        line(os, "fluent " + fluents);

        std::string actions;
        for (size_t i = 0; i < g.actions.size(); ++i) {
            if (i) actions += ", ";
            actions += g.actions[i].name;
        }
        line(os, "action " + actions);

        std::string agents;
        for (size_t i = 0; i < g.agents.size(); ++i) {
            if (i) agents += ", ";
            agents += g.agents[i].name;
        }
        line(os, "agent " + agents);
        os << "\n";

        for (const auto& a : g.actions) {
            auto pre = render(a.precondition, "executability condition of " + a.name, true);
            if (!pre) return std::nullopt;
            line(os, "executable " + a.name + " if " + *pre);

            switch (a.act_type) {
                case ActionType::Ontic:
                    for (const auto& lit : a.effects)
                        line(os, a.name + " causes " + (lit.negated ? "-" : "") +
                                     fluent_name(lit.fluent));
                    break;
                case ActionType::Sensing: {
                    std::string suffix;
                    if (a.sensed_condition && !a.sensed_condition->is_true()) {
                        auto cond = render(*a.sensed_condition,
                                           "observability condition of " + a.name, true);
                        if (!cond) return std::nullopt;
                        suffix = " if " + *cond;
                    }
                    line(os, a.name + " determines " + fluent_name(a.effect_fluent) + suffix);
                    break;
                }
                case ActionType::Announcement:
                    line(os, a.name + " announces " + fluent_name(a.effect_fluent));
                    break;
            }

            // oblivious agents get no statement at all
            std::vector<std::pair<const GroundObserver*, bool>> entries;
            for (const auto& o : a.full_observers) entries.push_back({&o, true});
            for (const auto& o : a.partial_observers) entries.push_back({&o, false});
            for (const auto& [o, full] : entries) {
                std::string stmt =
                    o->agent + (full ? " observes " : " aware_of ") + a.name;
                if (!o->unconditional()) {
                    auto cond =
                        render(o->condition, "observability condition of " + a.name, true);
                    if (!cond) return std::nullopt;
                    stmt += " if " + *cond;
                }
                line(os, stmt);
            }
            os << "\n";
        }

        // closed world: positives first, then every remaining fluent negated
        std::vector<std::string> positives, negatives;
        std::set<std::string> true_names;
        for (const auto& f : g.init_world) true_names.insert(f.ground_name());
        for (const auto& f : g.fluents) {
            if (true_names.count(f.ground_name()))
                positives.push_back(fluent_name(f));
            else
                negatives.push_back("-" + fluent_name(f));
        }
        auto join = [](const std::vector<std::string>& parts) {
            std::string out;
            for (size_t i = 0; i < parts.size(); ++i) {
                if (i) out += ", ";
                out += parts[i];
            }
            return out;
        };
        if (!positives.empty()) line(os, "initially " + join(positives));
        if (!negatives.empty()) line(os, "initially " + join(negatives));

        for (const auto& belief : g.init_beliefs) {
            auto rendered = render(belief, "initial condition", true);
            if (!rendered) return std::nullopt;
            line(os, "initially " + *rendered);
        }
        os << "\n";

        std::vector<Formula> goal_parts = g.goal.conjuncts();
        if (goal_parts.empty()) {
            line(os, "goal true");
        } else {
            for (const auto& part : goal_parts) {
                auto one = render(part, "goal", true);
                if (!one) return std::nullopt;
                line(os, "goal " + *one);
            }
        }
        return os.str();
    }
};

}  // namespace

Result<MarArtifact> emit_mar(const GroundedProblem& g, const MarOptions& opts) {
    MarWriter writer{g, opts, {}, 0};
    auto text = writer.build();
    if (!text || has_errors(writer.diags))
        return Result<MarArtifact>::failure(std::move(writer.diags));
    MarArtifact artifact;
    artifact.text = std::move(*text);
    artifact.fluent_count = g.fluents.size();
    artifact.action_count = g.actions.size();
    artifact.statement_count = writer.statements;
    return Result<MarArtifact>::success(std::move(artifact), std::move(writer.diags));
}

}  // namespace epddl
