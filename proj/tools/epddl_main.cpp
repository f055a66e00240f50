// Command-line front door: validate, ground, translate, solve and report
// features over E-PDDL domain/instance files.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "epddl/backend_mar.hpp"
#include "epddl/backend_pdkb.hpp"
#include "epddl/features.hpp"
#include "epddl/grounder.hpp"
#include "epddl/kripke.hpp"
#include "epddl/parser.hpp"
#include "epddl/validator.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitIo = 2;
constexpr int kExitResources = 3;

bool color_enabled() {
    const char* v = std::getenv("EPDDL_COLOR");
    return v != nullptr && std::string(v) != "0";
}

json diagnostic_to_json(const epddl::Diagnostic& d,
                        const std::vector<std::string>& files) {
    std::string file = "<input>";
    if (d.span.file_id >= 0 && d.span.file_id < static_cast<int>(files.size()))
        file = files[d.span.file_id];
    return json{{"severity", d.is_error() ? "error" : "warning"},
                {"code", d.code},
                {"file", file},
                {"line", d.span.start_line},
                {"col", d.span.start_col},
                {"end_line", d.span.end_line},
                {"end_col", d.span.end_col},
                {"message", d.message}};
}

struct Session {
    std::vector<std::string> files;
    std::ostringstream out;
    std::ostringstream err;
    bool json_mode = false;
    json diagnostics = json::array();

    void emit_diags(const std::vector<epddl::Diagnostic>& diags) {
        for (const auto& d : diags) {
            if (json_mode)
                diagnostics.push_back(diagnostic_to_json(d, files));
            else
                err << epddl::render_diagnostic(d, files, color_enabled()) << "\n";
        }
    }

    std::optional<std::string> read_file(const std::string& path) {
        std::ifstream in(path, std::ios::binary);
        if (!in) return std::nullopt;
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }
};

struct LoadResult {
    std::optional<epddl::ValidatedProblem> problem;
    int exit_code = kExitOk;
};

LoadResult load_and_validate(Session& s, const std::string& domain_path,
                             const std::string& instance_path) {
    auto domain_text = s.read_file(domain_path);
    if (!domain_text) {
        s.err << "error E_IO cannot read '" << domain_path << "'\n";
        return {std::nullopt, kExitIo};
    }
    auto instance_text = s.read_file(instance_path);
    if (!instance_text) {
        s.err << "error E_IO cannot read '" << instance_path << "'\n";
        return {std::nullopt, kExitIo};
    }
    s.files = {domain_path, instance_path};

    auto domain = epddl::parse_domain(*domain_text, 0);
    s.emit_diags(domain.diagnostics);
    auto instance = epddl::parse_instance(*instance_text, 1);
    s.emit_diags(instance.diagnostics);
    if (!domain.ok() || !instance.ok()) return {std::nullopt, kExitError};

    auto validated = epddl::validate(*domain.value, *instance.value);
    s.emit_diags(validated.diagnostics);
    if (!validated.ok()) return {std::nullopt, kExitError};
    return {std::move(validated.value), kExitOk};
}

// Atomic file write: temp file in the target directory, renamed into place.
bool write_file_atomic(const fs::path& target, const std::string& content,
                       std::string& error) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            error = "cannot open '" + tmp.string() + "' for writing";
            return false;
        }
        out << content;
        if (!out) {
            error = "failed while writing '" + tmp.string() + "'";
            return false;
        }
    }
    fs::rename(tmp, target, ec);
    if (ec) {
        error = "cannot rename '" + tmp.string() + "' to '" + target.string() + "'";
        fs::remove(tmp, ec);
        return false;
    }
    return true;
}

struct TranslateConfig {
    std::vector<std::string> targets;
    std::string out_dir = ".";
    bool listing_faithful = false;
    bool dedupe_chains = false;
    bool explicit_fallback = false;
    std::vector<std::string> renames;  // old=new
};

int run_translate(Session& s, const std::string& domain_path,
                  const std::string& instance_path, const TranslateConfig& cfg) {
    LoadResult loaded = load_and_validate(s, domain_path, instance_path);
    if (!loaded.problem) return loaded.exit_code;
    const epddl::ValidatedProblem& problem = *loaded.problem;
    const std::string base = problem.instance.name;
    json manifest{{"problem", base}, {"depth", problem.instance.depth}, {"outputs", json::array()}};

    for (const auto& target : cfg.targets) {
        if (target == "pdkb") {
            epddl::PdkbOptions opts;
            opts.listing_faithful = cfg.listing_faithful;
            opts.dedupe_chains = cfg.dedupe_chains;
            opts.explicit_fallback = cfg.explicit_fallback;
            auto artifact = epddl::emit_pdkb(problem, opts);
            s.emit_diags(artifact.diagnostics);
            if (!artifact.ok()) return kExitError;
            fs::path dom = fs::path(cfg.out_dir) / (base + ".pdkb-domain.pddl");
            fs::path ins = fs::path(cfg.out_dir) / (base + ".pdkb-problem.pddl");
            std::string error;
            if (!write_file_atomic(dom, artifact.value->domain_text, error) ||
                !write_file_atomic(ins, artifact.value->instance_text, error)) {
                s.err << "error E_IO " << error << "\n";
                return kExitIo;
            }
            json actions = json::array();
            for (const auto& rec : artifact.value->manifest)
                actions.push_back({{"action", rec.action},
                                   {"strategy", epddl::to_string(rec.strategy)},
                                   {"widened_derive", rec.widened_derive},
                                   {"chains", rec.chain_count}});
            manifest["outputs"].push_back({{"target", "pdkb"},
                                           {"domain", dom.filename().string()},
                                           {"instance", ins.filename().string()},
                                           {"depth_used", artifact.value->depth_used},
                                           {"actions", actions}});
            s.out << "wrote " << dom.string() << "\n";
            s.out << "wrote " << ins.string() << "\n";
        } else if (target == "mar") {
            epddl::MarOptions opts;
            for (const auto& r : cfg.renames) {
                auto eq = r.find('=');
                if (eq == std::string::npos) {
                    s.err << "error E_IO bad --rename '" << r << "', expected OLD=NEW\n";
                    return kExitIo;
                }
                opts.rename[r.substr(0, eq)] = r.substr(eq + 1);
            }
            auto grounded = epddl::ground(problem);
            auto artifact = epddl::emit_mar(grounded, opts);
            s.emit_diags(artifact.diagnostics);
            if (!artifact.ok()) return kExitError;
            fs::path out = fs::path(cfg.out_dir) / (base + ".mar");
            std::string error;
            if (!write_file_atomic(out, artifact.value->text, error)) {
                s.err << "error E_IO " << error << "\n";
                return kExitIo;
            }
            manifest["outputs"].push_back({{"target", "mar"},
                                           {"file", out.filename().string()},
                                           {"fluents", artifact.value->fluent_count},
                                           {"actions", artifact.value->action_count},
                                           {"statements", artifact.value->statement_count}});
            s.out << "wrote " << out.string() << "\n";
        } else {
            s.err << "error E_IO unknown target '" << target << "'\n";
            return kExitIo;
        }
    }

    fs::path manifest_path = fs::path(cfg.out_dir) / (base + ".manifest.json");
    std::string error;
    if (!write_file_atomic(manifest_path, manifest.dump(2) + "\n", error)) {
        s.err << "error E_IO " << error << "\n";
        return kExitIo;
    }
    s.out << "wrote " << manifest_path.string() << "\n";
    return kExitOk;
}

int run_validate(Session& s, const std::string& domain_path,
                 const std::string& instance_path) {
    LoadResult loaded = load_and_validate(s, domain_path, instance_path);
    if (s.json_mode) {
        json out{{"ok", loaded.problem.has_value()}, {"diagnostics", s.diagnostics}};
        s.out << out.dump(2) << "\n";
    } else if (loaded.problem) {
        s.out << "ok\n";
    }
    return loaded.exit_code;
}

int run_solve(Session& s, const std::string& domain_path, const std::string& instance_path,
              int max_len, size_t max_states) {
    LoadResult loaded = load_and_validate(s, domain_path, instance_path);
    if (!loaded.problem) return loaded.exit_code;
    auto grounded = epddl::ground(*loaded.problem);
    try {
        epddl::SearchLimits limits;
        limits.max_plan_length = max_len;
        limits.max_states = max_states;
        epddl::PlanResult plan = epddl::bfs_plan(grounded, limits);
        switch (plan.status) {
            case epddl::PlanResult::Status::Found:
                for (const auto& a : plan.actions) s.out << a << "\n";
                return kExitOk;
            case epddl::PlanResult::Status::NotFound:
                s.out << "NO PLAN within " << max_len << "\n";
                return kExitOk;
            case epddl::PlanResult::Status::ResourceExhausted:
                s.err << "error E_RESOURCES state cap of " << max_states << " exceeded\n";
                return kExitResources;
        }
    } catch (const epddl::OracleError& e) {
        s.err << "error " << e.code() << " " << e.what() << "\n";
        return kExitError;
    }
    return kExitOk;
}

int run_features(Session& s, const std::string& domain_path,
                 const std::string& instance_path) {
    LoadResult loaded = load_and_validate(s, domain_path, instance_path);
    if (!loaded.problem) return loaded.exit_code;
    epddl::FeatureReport r = epddl::analyze_features(*loaded.problem);
    if (s.json_mode) {
        json out{{"agents", r.agent_count},
                 {"depth", r.depth},
                 {"ontic_actions", r.ontic_actions},
                 {"sensing_actions", r.sensing_actions},
                 {"announcement_actions", r.announcement_actions},
                 {"has_partial_observers", r.has_partial_observers},
                 {"max_init_formula_depth", r.max_init_formula_depth},
                 {"max_goal_formula_depth", r.max_goal_formula_depth},
                 {"common_knowledge_used", r.common_knowledge_used},
                 {"recommendation", epddl::to_string(r.recommendation)},
                 {"rationale", r.rationale},
                 {"diagnostics", s.diagnostics}};
        s.out << out.dump(2) << "\n";
    } else {
        s.out << "agents: " << r.agent_count << "\n";
        s.out << "depth: " << r.depth << "\n";
        s.out << "ontic actions: " << r.ontic_actions << "\n";
        s.out << "sensing actions: " << r.sensing_actions << "\n";
        s.out << "announcement actions: " << r.announcement_actions << "\n";
        s.out << "partial observers: " << (r.has_partial_observers ? "yes" : "no") << "\n";
        s.out << "max init formula depth: " << r.max_init_formula_depth << "\n";
        s.out << "max goal formula depth: " << r.max_goal_formula_depth << "\n";
        s.out << "common knowledge: " << (r.common_knowledge_used ? "yes" : "no") << "\n";
        s.out << "recommendation: " << epddl::to_string(r.recommendation) << " ("
              << r.rationale << ")\n";
    }
    return kExitOk;
}

std::vector<std::pair<std::string, std::string>> read_batch(const std::string& path,
                                                            std::string& error) {
    std::ifstream in(path);
    std::vector<std::pair<std::string, std::string>> pairs;
    if (!in) {
        error = "cannot read batch file '" + path + "'";
        return pairs;
    }
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string a, b;
        if (!(ls >> a)) continue;  // blank line
        if (!(ls >> b)) {
            error = "batch line '" + line + "' needs two paths";
            pairs.clear();
            return pairs;
        }
        pairs.emplace_back(a, b);
    }
    return pairs;
}

// Runs fn per problem pair concurrently, printing results in input order.
template <typename Fn>
int run_batch(const std::string& batch_path, bool json_mode, Fn&& fn) {
    std::string error;
    auto pairs = read_batch(batch_path, error);
    if (!error.empty()) {
        std::cerr << "error E_IO " << error << "\n";
        return kExitIo;
    }
    std::vector<std::future<std::tuple<int, std::string, std::string>>> futures;
    futures.reserve(pairs.size());
    for (const auto& [dom, ins] : pairs) {
        futures.push_back(std::async(std::launch::async, [&, dom, ins]() {
            Session session;
            session.json_mode = json_mode;
            int code = fn(session, dom, ins);
            return std::tuple<int, std::string, std::string>{code, session.out.str(),
                                                             session.err.str()};
        }));
    }
    int exit_code = kExitOk;
    for (size_t i = 0; i < futures.size(); ++i) {
        auto [code, out, err] = futures[i].get();
        std::cout << "== " << pairs[i].first << " " << pairs[i].second << "\n" << out;
        std::cerr << err;
        exit_code = std::max(exit_code, code);
    }
    return exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"E-PDDL toolkit: validate, translate, solve and analyze epistemic "
                 "planning problems"};
    app.require_subcommand(1);

    std::string domain_path, instance_path, batch_path;
    bool json_mode = false;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("domain", domain_path, "E-PDDL domain file");
        cmd->add_option("instance", instance_path, "E-PDDL instance file");
        cmd->add_option("--batch", batch_path,
                        "file of '<domain> <instance>' lines processed concurrently");
        cmd->add_flag("--json", json_mode, "structured output");
    };

    CLI::App* validate_cmd = app.add_subcommand("validate", "parse and statically check");
    add_common(validate_cmd);

    CLI::App* translate_cmd = app.add_subcommand("translate", "emit planner inputs");
    TranslateConfig tcfg;
    add_common(translate_cmd);
    translate_cmd->add_option("--target", tcfg.targets, "pdkb or mar (repeatable)")
        ->required();
    translate_cmd->add_option("--out", tcfg.out_dir, "output directory");
    translate_cmd->add_flag("--listing-faithful", tcfg.listing_faithful,
                            "reproduce the reference PDKB layout exactly");
    translate_cmd->add_flag("--dedupe-chains", tcfg.dedupe_chains,
                            "drop chains with consecutive duplicate agents");
    translate_cmd->add_flag("--explicit-fallback", tcfg.explicit_fallback,
                            "render unrepresentable ontic observers as explicit effects");
    translate_cmd->add_option("--rename", tcfg.renames,
                              "predicate rename OLD=NEW applied to mar output");

    CLI::App* solve_cmd = app.add_subcommand("solve", "breadth-first plan search");
    int max_len = 8;
    std::size_t max_states = 200000;
    add_common(solve_cmd);
    solve_cmd->add_option("--max-len", max_len, "maximum plan length")->required();
    solve_cmd->add_option("--max-states", max_states, "visited-state cap");

    CLI::App* features_cmd = app.add_subcommand("features", "feature report and "
                                                            "planner recommendation");
    add_common(features_cmd);

    CLI11_PARSE(app, argc, argv);

    auto dispatch = [&](Session& s, const std::string& dom, const std::string& ins) -> int {
        s.json_mode = json_mode;
        if (validate_cmd->parsed()) return run_validate(s, dom, ins);
        if (translate_cmd->parsed()) return run_translate(s, dom, ins, tcfg);
        if (solve_cmd->parsed()) return run_solve(s, dom, ins, max_len, max_states);
        if (features_cmd->parsed()) return run_features(s, dom, ins);
        return kExitIo;
    };

    if (!batch_path.empty()) return run_batch(batch_path, json_mode, dispatch);

    if (domain_path.empty() || instance_path.empty()) {
        std::cerr << "error E_IO domain and instance paths are required\n";
        return kExitIo;
    }
    Session session;
    int code = dispatch(session, domain_path, instance_path);
    std::cout << session.out.str();
    std::cerr << session.err.str();
    return code;
}
