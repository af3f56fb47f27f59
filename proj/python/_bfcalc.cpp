#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "bfcalc/calculus.hpp"
#include "bfcalc/suites.hpp"

namespace py = pybind11;
using namespace bfcalc;

namespace {

Json parse_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw SpecError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_bfcalc, m) {
  m.doc() = "Bernstein functions and sectorial matrix calculi";

  // translators are tried newest first, so the base class goes first
  auto& error = py::register_exception<Error>(m, "BfcalcError", PyExc_RuntimeError);
  py::register_exception<SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<QuadratureError>(m, "QuadratureError", error.ptr());

  m.def("suite_ids", &suite_ids);
  m.def("plot_kinds", &plot_kinds);

  m.def(
      "run_suite",
      [](const std::string& suite, std::uint64_t seed, const std::string& config, double tol_scale, int threads,
         bool timing) {
        SuiteConfig cfg;
        cfg.suite = suite;
        cfg.seed = seed;
        cfg.config = parse_text(config);
        cfg.tol_scale = tol_scale;
        cfg.threads = threads;
        cfg.timing = timing;
        SuiteResult r;
        {
          py::gil_scoped_release release;
          r = run_suite_safe(cfg);
        }
        return py::make_tuple(r.report.dump(2), r.exit_code);
      },
      py::arg("suite"), py::arg("seed") = 0, py::arg("config") = "{}", py::arg("tol_scale") = 1.0,
      py::arg("threads") = 0, py::arg("timing") = false);

  m.def(
      "emit_plotdata", [](const std::string& report, const std::string& kind) { return emit_plotdata(parse_text(report), kind); },
      py::arg("report"), py::arg("kind"));

  m.def(
      "psi", [](const std::string& spec, Complex z) { return parse_psi(parse_text(spec))(z); }, py::arg("spec"),
      py::arg("z"));

  m.def(
      "levy_apply",
      [](const std::string& spec, const Matrix& A) { return levy_apply(parse_psi(parse_text(spec)), make_sectorial(A)); },
      py::arg("spec"), py::arg("A"));

  m.def(
      "hirsch_apply",
      [](const std::string& spec, const Matrix& A) {
        const auto psi = parse_psi(parse_text(spec));
        const auto st = psi.stieltjes();
        if (!st) throw UnsupportedError("no Stieltjes representation is known for " + psi.describe());
        return hirsch_apply(*st, make_sectorial(A));
      },
      py::arg("spec"), py::arg("A"));

  m.def(
      "subordinate_matrix",
      [](const std::string& family, const Matrix& A, double t) {
        return subordinate_matrix(parse_family(parse_text(family)), make_sectorial(A), t);
      },
      py::arg("family"), py::arg("A"), py::arg("t"));

  m.def(
      "check_inequality",
      [](const std::string& id, const std::string& spec, int radii, int angles) {
        SamplingPlan plan;
        plan.radii = radii;
        plan.angles = angles;
        return report_to_json(check_inequality(id, parse_psi(parse_text(spec)), plan)).dump();
      },
      py::arg("id"), py::arg("spec"), py::arg("radii") = 64, py::arg("angles") = 32);
}
