// Python bindings for the E-PDDL toolkit: parsing, validation, grounding,
// expansion, both backends and the Kripke oracle.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "epddl/backend_mar.hpp"
#include "epddl/backend_pdkb.hpp"
#include "epddl/expansion.hpp"
#include "epddl/features.hpp"
#include "epddl/grounder.hpp"
#include "epddl/kripke.hpp"
#include "epddl/mar_reader.hpp"
#include "epddl/parser.hpp"
#include "epddl/printer.hpp"
#include "epddl/validator.hpp"

namespace py = pybind11;
using namespace epddl;

namespace {

// Raises ValueError carrying the rendered diagnostics when a Result is empty.
template <typename T>
T unwrap(Result<T> r, const std::vector<std::string>& files = {"<domain>", "<instance>"}) {
    if (r.ok()) return std::move(*r.value);
    std::string message;
    for (const auto& d : r.diagnostics) {
        if (!message.empty()) message += "\n";
        message += render_diagnostic(d, files);
    }
    throw py::value_error(message.empty() ? "operation failed" : message);
}

py::dict diagnostic_to_dict(const Diagnostic& d) {
    py::dict out;
    out["severity"] = d.is_error() ? "error" : "warning";
    out["code"] = d.code;
    out["line"] = d.span.start_line;
    out["col"] = d.span.start_col;
    out["message"] = d.message;
    return out;
}

}  // namespace

PYBIND11_MODULE(_epddl, m) {
    m.doc() = "E-PDDL toolkit: parse, validate, ground, expand, translate and solve "
              "multi-agent epistemic planning problems";

    py::class_<Term>(m, "Term")
        .def_static("variable", &Term::variable, py::arg("name"))
        .def_static("constant", &Term::constant, py::arg("name"))
        .def_property_readonly("name", [](const Term& t) { return t.name; })
        .def_property_readonly("is_variable", &Term::is_variable)
        .def("__repr__", &Term::to_string)
        .def("__eq__", [](const Term& a, const Term& b) { return a == b; });

    py::class_<Fluent>(m, "Fluent")
        .def(py::init([](const std::string& predicate, const std::vector<Term>& args) {
                 return Fluent{predicate, args};
             }),
             py::arg("predicate"), py::arg("args") = std::vector<Term>{})
        .def_property_readonly("predicate", [](const Fluent& f) { return f.predicate; })
        .def_property_readonly("args", [](const Fluent& f) { return f.args; })
        .def("ground_name", &Fluent::ground_name)
        .def("__repr__", &Fluent::to_string);

    py::class_<Formula>(m, "Formula")
        .def_static("atom", &Formula::atom, py::arg("fluent"))
        .def_static("negation", &Formula::negation)
        .def_static("conjunction", &Formula::conjunction)
        .def_static("disjunction", &Formula::disjunction)
        .def_static("implication", &Formula::implication)
        .def_static("believes", &Formula::believes, py::arg("agent"), py::arg("body"))
        .def_static("common", &Formula::common, py::arg("agents"), py::arg("body"))
        .def_static("truth", &Formula::truth)
        .def_property_readonly("depth", &Formula::depth)
        .def("free_variables", &Formula::free_variables)
        .def("is_ground", &Formula::is_ground)
        .def("__eq__", [](const Formula& a, const Formula& b) { return a == b; })
        .def("__repr__", &Formula::to_string)
        .def("__str__", &Formula::to_string);

    py::enum_<ActionType>(m, "ActionType")
        .value("ONTIC", ActionType::Ontic)
        .value("SENSING", ActionType::Sensing)
        .value("ANNOUNCEMENT", ActionType::Announcement);

    py::class_<EpddlAction>(m, "Action")
        .def_property_readonly("name", [](const EpddlAction& a) { return a.name; })
        .def_property_readonly("act_type", [](const EpddlAction& a) { return a.act_type; })
        .def_property_readonly("precondition",
                               [](const EpddlAction& a) { return a.precondition; })
        .def_property_readonly("effect", [](const EpddlAction& a) { return a.effect; });

    py::class_<EpddlDomain>(m, "Domain")
        .def_property_readonly("name", [](const EpddlDomain& d) { return d.name; })
        .def_property_readonly("requirements",
                               [](const EpddlDomain& d) { return d.requirements; })
        .def_property_readonly("actions", [](const EpddlDomain& d) { return d.actions; })
        .def("__repr__",
             [](const EpddlDomain& d) { return "<Domain " + d.name + ">"; });

    py::class_<EpddlInstance>(m, "Instance")
        .def_property_readonly("name", [](const EpddlInstance& i) { return i.name; })
        .def_property_readonly("domain_name",
                               [](const EpddlInstance& i) { return i.domain_name; })
        .def_property_readonly("agents",
                               [](const EpddlInstance& i) {
                                   std::vector<std::string> out;
                                   for (const auto& a : i.agents) out.push_back(a.name);
                                   return out;
                               })
        .def_property_readonly("depth", [](const EpddlInstance& i) { return i.depth; })
        .def_property_readonly("init", [](const EpddlInstance& i) { return i.init; })
        .def_property_readonly("goal", [](const EpddlInstance& i) { return i.goal; })
        .def("__repr__",
             [](const EpddlInstance& i) { return "<Instance " + i.name + ">"; });

    py::class_<ValidatedProblem>(m, "ValidatedProblem")
        .def_property_readonly("domain",
                               [](const ValidatedProblem& p) { return p.domain; })
        .def_property_readonly("instance",
                               [](const ValidatedProblem& p) { return p.instance; })
        .def_property_readonly("warnings", [](const ValidatedProblem& p) {
            py::list out;
            for (const auto& d : p.warnings) out.append(diagnostic_to_dict(d));
            return out;
        });

    py::class_<GroundAction>(m, "GroundAction")
        .def_property_readonly("name", [](const GroundAction& a) { return a.name; })
        .def_property_readonly("act_type", [](const GroundAction& a) { return a.act_type; })
        .def_property_readonly("precondition",
                               [](const GroundAction& a) { return a.precondition; })
        .def("__repr__",
             [](const GroundAction& a) { return "<GroundAction " + a.name + ">"; });

    py::class_<GroundedProblem>(m, "GroundedProblem")
        .def_property_readonly("fluents",
                               [](const GroundedProblem& g) {
                                   std::vector<std::string> out;
                                   for (const auto& f : g.fluents)
                                       out.push_back(f.ground_name());
                                   return out;
                               })
        .def_property_readonly("actions",
                               [](const GroundedProblem& g) { return g.actions; })
        .def_property_readonly("depth", [](const GroundedProblem& g) { return g.depth; })
        .def("dump", &dump_grounded);

    py::class_<KripkeState>(m, "KripkeState")
        .def_property_readonly("world_count", &KripkeState::world_count)
        .def("entails", &KripkeState::entails, py::arg("formula"))
        .def("minimize", &KripkeState::minimize)
        .def("canonical_key", &KripkeState::canonical_key)
        .def("dump", &KripkeState::dump);

    py::class_<ConditionalEffect>(m, "ConditionalEffect")
        .def_property_readonly("condition",
                               [](const ConditionalEffect& c) { return c.condition; })
        .def_property_readonly("formula",
                               [](const ConditionalEffect& c) { return c.formula; });

    py::class_<PdkbArtifact>(m, "PdkbArtifact")
        .def_property_readonly("domain_text",
                               [](const PdkbArtifact& a) { return a.domain_text; })
        .def_property_readonly("instance_text",
                               [](const PdkbArtifact& a) { return a.instance_text; })
        .def_property_readonly("depth_used",
                               [](const PdkbArtifact& a) { return a.depth_used; });

    py::class_<MarArtifact>(m, "MarArtifact")
        .def_property_readonly("text", [](const MarArtifact& a) { return a.text; })
        .def_property_readonly("statement_count",
                               [](const MarArtifact& a) { return a.statement_count; });

    py::class_<FeatureReport>(m, "FeatureReport")
        .def_property_readonly("agent_count",
                               [](const FeatureReport& r) { return r.agent_count; })
        .def_property_readonly("depth", [](const FeatureReport& r) { return r.depth; })
        .def_property_readonly("has_partial_observers",
                               [](const FeatureReport& r) { return r.has_partial_observers; })
        .def_property_readonly("recommendation",
                               [](const FeatureReport& r) {
                                   return to_string(r.recommendation);
                               })
        .def_property_readonly("rationale",
                               [](const FeatureReport& r) { return r.rationale; });

    m.def("parse_domain",
          [](const std::string& text) { return unwrap(parse_domain(text, 0)); },
          py::arg("text"), "Parse an E-PDDL domain from text.");
    m.def("parse_instance",
          [](const std::string& text) { return unwrap(parse_instance(text, 1)); },
          py::arg("text"), "Parse an E-PDDL instance from text.");
    m.def("validate",
          [](const EpddlDomain& d, const EpddlInstance& i) { return unwrap(validate(d, i)); },
          py::arg("domain"), py::arg("instance"));
    m.def("ground", &ground, py::arg("problem"));
    m.def("print_domain", &print_domain);
    m.def("print_instance", &print_instance);

    m.def("expand_common",
          [](const Formula& f, int depth, bool dedupe) {
              ExpansionOptions opts;
              opts.dedupe_chains = dedupe;
              return expand_common(f, depth, opts);
          },
          py::arg("formula"), py::arg("depth"), py::arg("dedupe_chains") = false);
    m.def("derive_explicit_updates",
          [](const GroundAction& a, int depth, bool dedupe) {
              ExpansionOptions opts;
              opts.dedupe_chains = dedupe;
              return derive_explicit_updates(a, depth, opts);
          },
          py::arg("action"), py::arg("depth"), py::arg("dedupe_chains") = false);

    m.def("emit_pdkb",
          [](const ValidatedProblem& p, bool listing_faithful, bool dedupe) {
              PdkbOptions opts;
              opts.listing_faithful = listing_faithful;
              opts.dedupe_chains = dedupe;
              return unwrap(emit_pdkb(p, opts));
          },
          py::arg("problem"), py::arg("listing_faithful") = false,
          py::arg("dedupe_chains") = false);
    m.def("emit_mar",
          [](const GroundedProblem& g, const std::map<std::string, std::string>& rename) {
              MarOptions opts;
              opts.rename = rename;
              return unwrap(emit_mar(g, opts));
          },
          py::arg("problem"), py::arg("rename") = std::map<std::string, std::string>{});
    m.def("read_mar",
          [](const std::string& text) { return unwrap(read_mar(text, 0)); },
          py::arg("text"));

    m.def("initial_state", &initial_state, py::arg("problem"));
    m.def("apply", &apply, py::arg("state"), py::arg("action"));
    m.def("bfs_plan",
          [](const GroundedProblem& g, int max_len, size_t max_states) {
              SearchLimits limits;
              limits.max_plan_length = max_len;
              limits.max_states = max_states;
              PlanResult r = bfs_plan(g, limits);
              py::dict out;
              out["status"] = r.status == PlanResult::Status::Found ? "found"
                              : r.status == PlanResult::Status::NotFound
                                  ? "not_found"
                                  : "resource_exhausted";
              out["plan"] = r.actions;
              return out;
          },
          py::arg("problem"), py::arg("max_len") = 8, py::arg("max_states") = 200000);

    m.def("analyze_features", &analyze_features, py::arg("problem"));

    py::register_exception<OracleError>(m, "OracleError");
}
