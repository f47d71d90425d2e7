#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "deon/cli.hpp"
#include "deon/dsl.hpp"
#include "deon/principles.hpp"
#include "deon/sat.hpp"

namespace py = pybind11;

namespace {

py::object json_loads(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict diagnostic_dict(const deon::ParseDiagnostic& d) {
  py::dict out;
  out["code"] = d.code;
  out["message"] = d.message;
  out["line"] = d.span.line;
  out["column"] = d.span.column;
  out["length"] = d.span.length;
  out["expected"] = d.expected;
  return out;
}

deon::GroundClauseSet clause_set(std::size_t atoms, const std::vector<std::vector<int>>& clauses) {
  deon::GroundClauseSet cs;
  for (std::size_t i = 0; i < atoms; ++i) cs.atoms.push_back({"x" + std::to_string(i + 1), false});
  cs.clauses = clauses;
  return cs;
}

py::tuple sat_tuple(const deon::SatResult& r) {
  switch (r.status) {
    case deon::SatStatus::Satisfiable:
      return py::make_tuple("sat", r.model->values, py::none());
    case deon::SatStatus::Unsatisfiable:
      return py::make_tuple("unsat", py::none(), r.conflict->clauses);
    default:
      return py::make_tuple("budget", py::none(), py::none());
  }
}

class ParseFailure : public std::exception {
public:
  explicit ParseFailure(std::vector<deon::ParseDiagnostic> ds) : diagnostics(std::move(ds)) {
    for (const auto& d : diagnostics) text += d.str() + "\n";
  }
  const char* what() const noexcept override { return text.c_str(); }
  std::vector<deon::ParseDiagnostic> diagnostics;
  std::string text;
};

deon::Scenario parse_or_throw(const std::string& text, const std::string& file) {
  deon::ParseOptions options;
  options.file = file;
  auto r = deon::parse_scenario(text, options);
  if (!r.ok()) throw ParseFailure(std::move(r.diagnostics));
  return std::move(*r.scenario);
}

}  // namespace

PYBIND11_MODULE(_deon, m) {
  m.doc() = "Deontological checks of action plans over finite scenarios";

  static py::exception<ParseFailure> parse_error(m, "ParseError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ParseFailure& e) {
      py::list ds;
      for (const auto& d : e.diagnostics) ds.append(diagnostic_dict(d));
      py::object err = py::reinterpret_borrow<py::object>(parse_error.ptr())(e.what());
      err.attr("diagnostics") = ds;
      PyErr_SetObject(parse_error.ptr(), err.ptr());
    }
  });

  py::class_<deon::Scenario>(m, "Scenario")
      .def_readonly("name", &deon::Scenario::name)
      .def_readonly("agents", &deon::Scenario::agents)
      .def_readonly("objects", &deon::Scenario::objects)
      .def_property_readonly("plans",
                             [](const deon::Scenario& s) {
                               std::vector<std::string> ids;
                               for (const auto& p : s.plans) ids.push_back(p.id);
                               return ids;
                             })
      .def("to_text", &deon::print_scenario)
      .def(
          "evaluate",
          [](const deon::Scenario& s, std::uint64_t budget) {
            deon::CheckOptions options;
            options.solver.decision_budget = budget;
            deon::VerdictSet v;
            {
              py::gil_scoped_release release;
              v = deon::evaluate(s, options);
            }
            return json_loads(deon::cli::render_structured(v));
          },
          py::arg("budget") = deon::SolverOptions{}.decision_budget)
      .def("query_ids", &deon::query_ids)
      .def("clauses", [](const deon::Scenario& s, const std::string& id) { return deon::query_clauses(s, id).dimacs(); })
      .def("__eq__", [](const deon::Scenario& a, const deon::Scenario& b) { return a == b; });

  m.def("parse", &parse_or_throw, py::arg("text"), py::arg("file") = "<input>",
        "Parse and validate scenario source; raises ParseError with .diagnostics");

  m.def(
      "check",
      [](const std::string& text, std::uint64_t budget) {
        deon::cli::RunConfig config;
        config.mode = deon::cli::OutputMode::Structured;
        config.budget = budget;
        auto r = deon::cli::run_text(config, "<input>", text);
        return py::make_tuple(r.exit, r.out.empty() ? py::object(py::none()) : json_loads(r.out), r.err);
      },
      py::arg("text"), py::arg("budget") = deon::SolverOptions{}.decision_budget,
      "Run the check command on source text: (exit code, verdict document or None, diagnostics)");

  m.def(
      "solve",
      [](std::size_t atoms, const std::vector<std::vector<int>>& clauses, std::uint64_t budget) {
        deon::SolverOptions options;
        options.decision_budget = budget;
        return sat_tuple(deon::solve(clause_set(atoms, clauses), options));
      },
      py::arg("atoms"), py::arg("clauses"), py::arg("budget") = deon::SolverOptions{}.decision_budget);

  m.def("brute_force", [](std::size_t atoms, const std::vector<std::vector<int>>& clauses) {
    return sat_tuple(deon::brute_force(clause_set(atoms, clauses)));
  });
}
