// Python bindings: jorbit._core.

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jorbit/cayley.hpp"
#include "jorbit/errors.hpp"
#include "jorbit/measures.hpp"
#include "jorbit/rankk.hpp"
#include "jorbit/spherical.hpp"
#include "jorbit/suite.hpp"

namespace py = pybind11;
using namespace jorbit;

namespace {

std::string reports_json(const std::vector<VerificationReport>& reports) {
  return emit_report(reports, ReportFormat::json);
}

py::tuple rational_tuple(const Rational& q) { return py::make_tuple(q.numerator(), q.denominator()); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orbit measures, spherical vectors and Bessel kernels in matrix models";

  static py::exception<Error> error(m, "JorbitError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = error;
      py::object instance = exc(e.what());
      instance.attr("kind") = std::string(to_string(e.kind()));
      PyErr_SetObject(error.ptr(), instance.ptr());
    }
  });

  py::class_<CaseDescriptor>(m, "CaseDescriptor")
      .def_readonly("case_id", &CaseDescriptor::case_id)
      .def_readonly("group_name", &CaseDescriptor::group_name)
      .def_readonly("n", &CaseDescriptor::n)
      .def_readonly("d", &CaseDescriptor::d)
      .def_readonly("e", &CaseDescriptor::e)
      .def_readonly("ambient_dim", &CaseDescriptor::ambient_dim)
      .def_readonly("backend_available", &CaseDescriptor::backend_available)
      .def_readonly("family_parameter", &CaseDescriptor::family_parameter)
      .def_property_readonly("r", &CaseDescriptor::r)
      .def_property_readonly("base_field", [](const CaseDescriptor& c) { return std::string(to_string(c.base_field)); })
      .def_property_readonly("model_kind", [](const CaseDescriptor& c) { return std::string(to_string(c.model_kind)); })
      .def("__repr__", [](const CaseDescriptor& c) {
        return "CaseDescriptor(" + c.case_id + ", n=" + std::to_string(c.n) + ", d=" + std::to_string(c.d) +
               ", e=" + std::to_string(c.e) + ")";
      });

  py::class_<QuadratureSpec>(m, "QuadratureSpec")
      .def(py::init<>())
      .def_readwrite("points_per_axis", &QuadratureSpec::points_per_axis)
      .def_readwrite("truncation_radii", &QuadratureSpec::truncation_radii)
      .def_readwrite("mc_samples", &QuadratureSpec::mc_samples)
      .def_readwrite("seed", &QuadratureSpec::seed)
      .def_readwrite("angle_points", &QuadratureSpec::angle_points)
      .def_readwrite("workers", &QuadratureSpec::workers)
      .def_property(
          "mode", [](const QuadratureSpec& q) { return std::string(to_string(q.mode)); },
          [](QuadratureSpec& q, const std::string& s) { q.mode = parse_quad_mode(s); })
      .def("validate", &QuadratureSpec::validate);

  m.def("list_cases", &list_cases, py::arg("default_rank") = 2);
  m.def("lookup_case", &lookup_case, py::arg("case_id"), py::arg("n"), py::arg("family_parameter") = py::none());
  m.def("l2_threshold", &l2_threshold);
  m.def("bessel_parameter", &bessel_parameter);
  m.def("equivariance_exponent", &equivariance_exponent);

  m.def("bessel_k", &bessel_k, py::arg("tau"), py::arg("z"));
  m.def("upsilon", py::overload_cast<double, double>(&upsilon), py::arg("tau"), py::arg("z"));
  m.def("bessel_mellin", &bessel_mellin, py::arg("nu"), py::arg("s"));
  m.def("k0_cosine_transform", &k0_cosine_transform);
  m.def("rank1_mass_closed_form", &rank1_mass_closed_form);
  m.def("rank1_l2_closed_form", &rank1_l2_closed_form);

  m.def(
      "jordan_norm", [](const CaseDescriptor& c, const CMatrix& x) { return jordan_norm(make_element(c, x)); },
      py::arg("case"), py::arg("x"));
  m.def(
      "singular_spectrum",
      [](const CaseDescriptor& c, const CMatrix& x) { return Eigen::VectorXd(singular_spectrum(make_element(c, x))); },
      py::arg("case"), py::arg("x"));
  m.def(
      "orbit_rank", [](const CaseDescriptor& c, const CMatrix& x, double tol) { return orbit_rank(make_element(c, x), tol); },
      py::arg("case"), py::arg("x"), py::arg("tol") = kDefaultRankTolerance);
  m.def(
      "phi_t", [](double t, const CaseDescriptor& c, const CMatrix& x) { return phi_t(t, make_element(c, x)); },
      py::arg("t"), py::arg("case"), py::arg("x"));
  m.def(
      "character_nu",
      [](const CaseDescriptor& c, const CMatrix& a, const CMatrix& b) { return character_nu(c, make_levi(c, a, b)); },
      py::arg("case"), py::arg("a"), py::arg("b") = CMatrix());
  m.def(
      "frame",
      [](const CaseDescriptor& c) {
        std::vector<CMatrix> out;
        for (const auto& y : frame(c)) out.push_back(y.entries);
        return out;
      },
      py::arg("case"));

  m.def(
      "cayley_constant",
      [](int n, unsigned s) -> py::object {
        const auto c = cayley_constant(n, s);
        if (!c) return py::none();
        return rational_tuple(*c);
      },
      py::arg("n"), py::arg("s"));
  m.def(
      "l2_certificate",
      [](const CaseDescriptor& c, int k) {
        const L2Certificate cert = l2_certificate(c, k);
        py::dict d;
        d["case_id"] = cert.case_id;
        d["n"] = cert.n;
        d["k"] = cert.k;
        d["t"] = rational_tuple(cert.t);
        d["s"] = rational_tuple(cert.s);
        d["l1"] = rational_tuple(cert.l1);
        d["l2"] = rational_tuple(cert.l2);
        d["branch"] = std::string(to_string(cert.branch));
        d["valid"] = cert.valid();
        return d;
      },
      py::arg("case"), py::arg("k"));

  // Report producers return the JSON document; the Python layer decodes it.
  m.def(
      "_run_suite",
      [](const std::string& case_id, int n, const QuadratureSpec& spec, std::optional<int> family) {
        py::gil_scoped_release release;
        return reports_json(run_suite(case_id, n, spec, SuiteOptions{}, family));
      },
      py::arg("case_id"), py::arg("n"), py::arg("spec"), py::arg("family_parameter") = py::none());
  m.def(
      "_verify_polar",
      [](const CaseDescriptor& c, int k, const QuadratureSpec& spec) {
        py::gil_scoped_release release;
        return reports_json({k == c.n ? polar_formula_report(c, spec) : polar_homogeneity_report(c, k, spec)});
      },
      py::arg("case"), py::arg("k"), py::arg("spec"));
  m.def(
      "_verify_equivariance",
      [](const CaseDescriptor& c, int k, const CMatrix& a, const CMatrix& b, const QuadratureSpec& spec,
         double tolerance) {
        const LeviElement l = make_levi(c, a, b);
        py::gil_scoped_release release;
        return reports_json({check_equivariance(c, k, l, spec, tolerance)});
      },
      py::arg("case"), py::arg("k"), py::arg("a"), py::arg("b"), py::arg("spec"), py::arg("tolerance"));
  m.def(
      "_phi_l2_scan",
      [](const std::string& case_id, int n, double t, const QuadratureSpec& spec) {
        py::gil_scoped_release release;
        return reports_json({phi_l2_verdict(SphericalParams{case_id, t}, n, spec)});
      },
      py::arg("case_id"), py::arg("n"), py::arg("t"), py::arg("spec"));
  m.def("_bessel_selftest", [] { return reports_json(bessel_selftest()); });
  m.def(
      "_cayley_check",
      [](int n, double s, int points, std::uint64_t seed) {
        return reports_json(cayley_check(lookup_case("sp_c", n), s, points, seed));
      },
      py::arg("n"), py::arg("s"), py::arg("points"), py::arg("seed"));
}
