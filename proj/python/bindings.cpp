#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "jacobi_lab/boundary.hpp"
#include "jacobi_lab/bounds.hpp"
#include "jacobi_lab/dos.hpp"
#include "jacobi_lab/errors.hpp"
#include "jacobi_lab/harness.hpp"
#include "jacobi_lab/kernel.hpp"
#include "jacobi_lab/models.hpp"
#include "jacobi_lab/polynomials.hpp"
#include "jacobi_lab/transfer.hpp"
#include "jacobi_lab/zeros.hpp"

namespace py = pybind11;
using namespace jlab;

namespace {

std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

py::array_t<double> grid_array(const KernelGrid& g) {
  const auto k = static_cast<py::ssize_t>(g.offsets.size());
  py::array_t<double> out({k, k});
  std::copy(g.values.begin(), g.values.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Orthogonal polynomials, Christoffel-Darboux kernels and ergodic Jacobi matrices";

  py::register_exception<ParameterExhausted>(m, "ParameterExhausted", PyExc_IndexError);
  py::register_exception<HerglotzViolation>(m, "HerglotzViolation", PyExc_ArithmeticError);
  py::register_exception<CdFormulaMismatch>(m, "CdFormulaMismatch", PyExc_ArithmeticError);
  py::register_exception<DegenerateCenter>(m, "DegenerateCenter", PyExc_ValueError);
  py::register_exception<InsufficientZeros>(m, "InsufficientZeros", PyExc_ValueError);
  py::register_exception<WindowTooLarge>(m, "WindowTooLarge", PyExc_ValueError);
  py::register_exception<UnsupportedModel>(m, "UnsupportedModel", PyExc_ValueError);
  py::register_exception<InvalidPerturbation>(m, "InvalidPerturbation", PyExc_ValueError);

  py::class_<JacobiParams>(m, "JacobiParams")
      .def(py::init<std::vector<double>, std::vector<double>>(), py::arg("a"), py::arg("b"))
      .def_static("free", &JacobiParams::free, py::arg("n"))
      .def("__len__", &JacobiParams::size)
      .def_property_readonly("a", [](const JacobiParams& p) { return as_vector(p.a_values()); })
      .def_property_readonly("b", [](const JacobiParams& p) { return as_vector(p.b_values()); })
      .def_property_readonly("alpha_minus", py::overload_cast<>(&JacobiParams::alpha_minus, py::const_))
      .def_property_readonly("alpha_plus", &JacobiParams::alpha_plus)
      .def_property_readonly("beta", &JacobiParams::beta);

  py::class_<ErgodicModel>(m, "ErgodicModel")
      .def_static("free", &ErgodicModel::free)
      .def_static("periodic", &ErgodicModel::periodic, py::arg("a"), py::arg("b"), py::arg("offset") = 0)
      .def_static("almost_mathieu", &ErgodicModel::almost_mathieu, py::arg("lam"), py::arg("alpha"),
                  py::arg("theta"))
      .def_static("anderson", &ErgodicModel::anderson, py::arg("coupling"), py::arg("seed"))
      .def_property_readonly("name", &ErgodicModel::name)
      .def("__repr__", [](const ErgodicModel& e) { return "<ErgodicModel " + e.name() + ">"; });

  m.def("realize", &realize, py::arg("model"), py::arg("shift"), py::arg("n"));

  m.def(
      "polys",
      [](const JacobiParams& p, double x, std::size_t n) {
        const auto s = evaluate_polys(p, x, n);
        return py::make_tuple(s.p, s.q, s.scale_log);
      },
      py::arg("params"), py::arg("x"), py::arg("n"), "(p_0..p_n, q_0..q_n, scale_log) at x");
  m.def(
      "transfer_matrix",
      [](const JacobiParams& p, std::complex<double> z, std::size_t n) {
        const auto T = transfer_matrix(p, z, n);
        return std::vector<std::vector<std::complex<double>>>{{T.m11, T.m12}, {T.m21, T.m22}};
      },
      py::arg("params"), py::arg("z"), py::arg("n"));

  m.def("kernel", &kernel, py::arg("params"), py::arg("x"), py::arg("y"), py::arg("n"), py::arg("check_cd") = true);
  m.def(
      "scaled_grid",
      [](const JacobiParams& p, double x0, std::size_t n, std::vector<double> offsets, bool weak,
         std::optional<double> w) {
        return grid_array(scaled_grid(p, x0, n, offsets, weak ? ScalingMode::weak : ScalingMode::plain, w));
      },
      py::arg("params"), py::arg("x0"), py::arg("n"), py::arg("offsets"), py::arg("weak") = false,
      py::arg("w") = py::none());
  m.def("symmetric_offsets", &symmetric_offsets, py::arg("limit"), py::arg("step"));
  m.def("sinc_reference", &sinc_reference, py::arg("rho"), py::arg("s"));
  m.def("wiggle_deviation", &wiggle_deviation, py::arg("params"), py::arg("x0"), py::arg("n"), py::arg("A"));
  m.def("derivative_via_identity", &derivative_via_identity, py::arg("params"), py::arg("x0"), py::arg("n"));
  m.def("diagonal_derivative", &diagonal_derivative, py::arg("params"), py::arg("x0"), py::arg("n"));

  m.def("eig_count", &eig_count, py::arg("params"), py::arg("n"), py::arg("E"));
  m.def("all_zeros", &all_zeros, py::arg("params"), py::arg("n"));
  m.def(
      "zeros_in_window",
      [](const JacobiParams& p, std::size_t n, double x0, double W) {
        const auto w = zeros_in_window(p, n, x0, W);
        return py::make_tuple(w.zeros, w.first_index);
      },
      py::arg("params"), py::arg("n"), py::arg("x0"), py::arg("W"),
      "(zeros in [x0 - W, x0 + W], index of the first zero >= x0)");
  m.def("interlacing_defect", &interlacing_defect, py::arg("params"), py::arg("params_shifted"), py::arg("n"),
        py::arg("lo"), py::arg("hi"));

  m.def(
      "boundary_m",
      [](const ErgodicModel& model, double x, std::int64_t shift) {
        const auto o = boundary_orbit(model, shift, x, 0);
        return py::make_tuple(o.m[0], o.extrapolated, o.error_estimate);
      },
      py::arg("model"), py::arg("x"), py::arg("shift") = 0, "(m(x + i0), extrapolated, error estimate)");
  m.def(
      "wave_diagnostics",
      [](const ErgodicModel& model, double x, std::size_t n, double eps) {
        const auto w = deift_simon_wave(model, 0, x, eps, n);
        py::dict d;
        d["wronskian_defect"] = wronskian_defect(w);
        d["phase_defect"] = phase_factorization_defect(w);
        d["p_recovery_error"] = p_recovery_error(w, model, 0, n);
        d["extrapolated"] = w.extrapolated;
        d["u"] = w.u;
        return d;
      },
      py::arg("model"), py::arg("x"), py::arg("n"), py::arg("eps") = 1e-4);
  m.def(
      "cesaro_averages",
      [](const ErgodicModel& model, double x, std::size_t n, double eps) {
        const auto c = cesaro_averages(model, 0, x, eps, n);
        py::dict d;
        d["avg_p2"] = c.avg_p2;
        d["avg_q2"] = c.avg_q2;
        d["avg_im_u2"] = c.avg_im_u2;
        d["avg_u2"] = c.avg_u2;
        d["rho_L"] = c.rho_L;
        d["w"] = c.w;
        d["nu_below"] = c.nu_below;
        return d;
      },
      py::arg("model"), py::arg("x"), py::arg("n"), py::arg("eps") = 1e-4);

  m.def(
      "dos_counting",
      [](const ErgodicModel& model, std::size_t n, std::vector<double> grid, std::int64_t shift) {
        const auto d = dos_counting(model, shift, n, grid);
        return py::make_tuple(d.nu_cdf, d.rho);
      },
      py::arg("model"), py::arg("n"), py::arg("grid"), py::arg("shift") = 0, "(nu_cdf, rho) on the grid");
  m.def(
      "dos_kotani",
      [](const ErgodicModel& model, double x, double eps, std::size_t samples, std::uint64_t seed) {
        const auto k = dos_kotani(model, x, eps, samples, seed);
        return py::make_tuple(k.rho, k.std_error);
      },
      py::arg("model"), py::arg("x"), py::arg("eps") = 1e-4, py::arg("samples") = 1000, py::arg("seed") = 0);
  m.def("equilibrium_density", &equilibrium_density, py::arg("lo"), py::arg("hi"), py::arg("x"));

  py::class_<BoundReport>(m, "BoundReport")
      .def_readonly("lhs", &BoundReport::lhs)
      .def_readonly("rhs", &BoundReport::rhs)
      .def_readonly("log_lhs", &BoundReport::log_lhs)
      .def_readonly("log_rhs", &BoundReport::log_rhs)
      .def_readonly("constant_C", &BoundReport::constant_C)
      .def_readonly("holds", &BoundReport::holds)
      .def_readonly("margin", &BoundReport::margin);
  m.def(
      "check_cesaro_bound",
      [](const JacobiParams& p, double x0, std::complex<double> z, std::size_t n) {
        return check_cesaro_bound(p, x0, z, n);
      },
      py::arg("params"), py::arg("x0"), py::arg("z"), py::arg("n"));
  m.def(
      "check_sup_bound",
      [](const JacobiParams& p, double x0, std::complex<double> z, std::size_t n) {
        return check_sup_bound(p, x0, z, n);
      },
      py::arg("params"), py::arg("x0"), py::arg("z"), py::arg("n"));

  m.def(
      "run_config",
      [](const std::string& json_text) {
        const auto r = run(parse_config(json_text));
        std::vector<std::string> diags;
        for (const auto& d : r.diagnostics) diags.push_back(d.message);
        return py::make_tuple(r.exit_code, r.files, diags);
      },
      py::arg("json_text"), "Run an experiment config; returns (exit_code, files, diagnostics)");
  m.def(
      "validate_config",
      [](const std::string& json_text) {
        std::vector<std::string> out;
        for (const auto& d : validate(parse_config(json_text))) {
          out.push_back((d.severity == Diagnostic::Severity::error ? "error: " : "warning: ") + d.message);
        }
        return out;
      },
      py::arg("json_text"));
}
