#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "antagonistic/error.hpp"
#include "antagonistic/exact.hpp"
#include "antagonistic/experiments.hpp"
#include "antagonistic/laws.hpp"
#include "antagonistic/perturb.hpp"
#include "antagonistic/spec_io.hpp"
#include "antagonistic/spectral.hpp"

namespace py = pybind11;
using namespace antag;

namespace {

// Specs and reports cross the boundary as plain dicts, through JSON text.
Json from_python(const py::object& o) {
  if (py::isinstance<py::str>(o)) return Json::parse(o.cast<std::string>());
  return Json::parse(py::module_::import("json").attr("dumps")(o).cast<std::string>());
}

py::object to_python(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

EnsembleSpec spec_arg(const py::object& o) {
  try {
    return spec_from_json(from_python(o));
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_spec, std::string("malformed JSON: ") + e.what());
  }
}

py::array_t<std::complex<double>> complex_array(const std::vector<Complex>& v) {
  return py::array_t<std::complex<double>>(static_cast<py::ssize_t>(v.size()), v.data());
}

PerturbationInput perturbation_input(std::vector<double> d, const RealMatrix& a, double eps) {
  PerturbationInput in;
  in.d = std::move(d);
  in.a = a;
  in.eps = eps;
  return in;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Antagonistic random matrices";

  static py::exception<Error> error(m, "Error", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error)(e.what());
      py::setattr(exc, "code", py::str(to_string(e.code())));
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  m.def("derive_seed", &derive_seed, py::arg("seed"), py::arg("index"));

  m.def(
      "sample_matrix",
      [](const py::object& spec, std::uint64_t index) { return sample_matrix(spec_arg(spec), index); },
      py::arg("spec"), py::arg("index") = 0,
      "Draws matrix `index` of the ensemble described by a spec dict or JSON string.");
  m.def(
      "validate_spec", [](const py::object& spec) { return to_python(to_json(spec_arg(spec))); },
      py::arg("spec"), "Parses a spec and returns its normalized form.");

  m.def(
      "eigenvalues", [](const RealMatrix& a) { return complex_array(eigenvalues(a).eigenvalues); },
      py::arg("matrix"), "Eigenvalues sorted by real part, then imaginary part.");
  m.def(
      "bendixson_box",
      [](const RealMatrix& a) {
        const BendixsonBox b = bendixson_box(a);
        return py::make_tuple(b.re_lo, b.re_hi, b.im_lo, b.im_hi);
      },
      py::arg("matrix"));
  m.def(
      "stability_report", [](const RealMatrix& a) { return to_python(to_json(stability_report(eigenvalues(a)))); },
      py::arg("matrix"));

  m.def("pfaffian", &pfaffian, py::arg("matrix"));
  m.def("determinant", &determinant, py::arg("matrix"));
  m.def(
      "expected_char_poly",
      [](const py::object& spec) { return expected_char_poly(theta_array(spec_arg(spec))).coefficients; },
      py::arg("spec"), "Coefficients of E det(zI - A), constant term first.");
  m.def(
      "expected_det", [](const py::object& spec) { return expected_det(theta_array(spec_arg(spec))); },
      py::arg("spec"));
  m.def(
      "expect",
      [](const py::object& spec, const std::string& functional, std::size_t trials, double z,
         unsigned threads) {
        const EnsembleSpec s = spec_arg(spec);
        const Functional f = parse_functional(functional, z);
        Json r;
        {
          py::gil_scoped_release release;
          r = expect_report(s, f, trials, threads);
        }
        return to_python(r);
      },
      py::arg("spec"), py::arg("functional") = "det", py::arg("trials") = 10000, py::arg("z") = 0.0,
      py::arg("threads") = 1);

  m.def(
      "predict_extremes",
      [](std::vector<double> d, const RealMatrix& a, double eps) {
        return to_python(to_json(predict_extremes(perturbation_input(std::move(d), a, eps))));
      },
      py::arg("d"), py::arg("a"), py::arg("eps"));
  m.def(
      "predict_degenerate",
      [](std::vector<double> d, const RealMatrix& a, double eps) {
        return to_python(to_json(predict_degenerate(perturbation_input(std::move(d), a, eps))));
      },
      py::arg("d"), py::arg("a"), py::arg("eps"));

  m.def(
      "rho",
      [](const py::object& pair) { return rho_from_density(pair_density_from_json(from_python(pair))); },
      py::arg("pair"), "Correlation E[xy] / E[x^2] of a pair density dict.");
  m.def(
      "elliptic_fit",
      [](const py::object& spec, double eta) { return to_python(to_json(elliptic_fit_ensemble(spec_arg(spec), eta))); },
      py::arg("spec"), py::arg("eta") = 0.05);
  m.def(
      "radius_check",
      [](const py::object& spec) { return to_python(to_json(circular_radius_check(spec_arg(spec)))); },
      py::arg("spec"));

  m.def(
      "figure",
      [](const std::string& id, std::uint64_t seed, unsigned threads) {
        FigureResult fig;
        {
          py::gil_scoped_release release;
          fig = run_figure(parse_figure_id(id), seed, threads);
        }
        py::dict panels;
        for (const auto& p : fig.panels) panels[py::str(p.label)] = complex_array(p.eigenvalues);
        return panels;
      },
      py::arg("id"), py::arg("seed") = 0, py::arg("threads") = 1,
      "Eigenvalues of every panel of a figure preset, keyed by panel label.");
  m.def(
      "verify",
      [](const std::string& suite, std::uint64_t seed, unsigned threads) {
        Json r;
        {
          py::gil_scoped_release release;
          r = run_verify(parse_suite(suite), seed, threads);
        }
        return to_python(r);
      },
      py::arg("suite"), py::arg("seed") = 0, py::arg("threads") = 1);
}
