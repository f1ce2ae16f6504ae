#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "spectral_poisson/basis.hpp"
#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/poisson_cube.hpp"
#include "spectral_poisson/poisson_cylinder.hpp"
#include "spectral_poisson/poisson_fd.hpp"
#include "spectral_poisson/poisson_square.hpp"
#include "spectral_poisson/special_functions.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace py = pybind11;
using namespace spoisson;

namespace {

CoeffMatrix2D cheb2d(const Eigen::MatrixXd& v) {
  CoeffMatrix2D c;
  c.values = v;
  return c;
}

SpectralIntervals intervals(double a, double b, double c, double d) { return {a, b, c, d}; }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Spectral Poisson solvers with Zolotarev-optimal ADI shifts";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_RuntimeError);

  py::class_<SolveReport>(m, "SolveReport")
      .def_readonly("solver", &SolveReport::solver)
      .def_readonly("n", &SolveReport::n)
      .def_readonly("eps", &SolveReport::eps)
      .def_readonly("iterations", &SolveReport::iterations)
      .def_readonly("residual", &SolveReport::residual)
      .def_readonly("seconds", &SolveReport::seconds)
      .def_readonly("warnings", &SolveReport::warnings);

  // special functions and shifts
  m.def("ellipk", py::overload_cast<double>(&ellipk), py::arg("k"));
  m.def("jacobi_dn", py::overload_cast<double, double>(&jacobi_dn), py::arg("z"), py::arg("k"));
  m.def("grotzsch_mu", &grotzsch_mu, py::arg("lam"));
  m.def(
      "zolotarev_bound",
      [](int J, double gamma) {
        const ZolotarevBound b = zolotarev_bound(J, gamma);
        return py::make_tuple(b.sharp, b.relaxed);
      },
      py::arg("J"), py::arg("gamma"), "(sharp, relaxed) upper bounds on Z_J");
  m.def(
      "cross_ratio_gamma", [](double a, double b, double c, double d) { return cross_ratio_gamma(intervals(a, b, c, d)); },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"));
  m.def(
      "adi_shifts",
      [](double a, double b, double c, double d, double eps, int iterations) {
        const SpectralIntervals iv = intervals(a, b, c, d);
        const ShiftSchedule s = iterations > 0 ? adi_shifts_for(iv, iterations) : adi_shifts(iv, eps);
        return py::make_tuple(s.p, s.q);
      },
      py::arg("a"), py::arg("b"), py::arg("c"), py::arg("d"), py::arg("eps") = 1e-6, py::arg("iterations") = 0,
      "(p, q) shift lists; iterations > 0 overrides eps");
  m.def(
      "iteration_count",
      [](const std::string& formula, double parameter, double eps) {
        return iteration_count(parse_count_formula(formula), parameter, eps);
      },
      py::arg("formula"), py::arg("parameter"), py::arg("eps"));

  // Chebyshev transforms
  m.def("cheb_points", &cheb_points, py::arg("n"));
  m.def("cheb_transform_2d", &cheb_transform_2d, py::arg("values"));
  m.def("cheb_inverse_transform_2d", &cheb_inverse_transform_2d, py::arg("coeffs"));
  m.def("cheb_eval_2d", &cheb_eval_2d, py::arg("coeffs"), py::arg("x"), py::arg("y"));

  // square
  m.def(
      "verify_bounds",
      [](int n) {
        const SquareDiscretization d = assemble_square(n);
        const Interval g = square_gershgorin(d), e = square_eigen_range(d);
        py::dict out;
        out["delta"] = d.delta;
        out["gershgorin"] = py::make_tuple(g.lo, g.hi);
        out["eigen"] = py::make_tuple(e.lo, e.hi);
        out["contained"] = g.lo >= -1.0 && g.hi <= -d.delta;
        return out;
      },
      py::arg("n"));

  py::class_<SquareSolution>(m, "SquareSolution")
      .def_readonly("X", &SquareSolution::X)
      .def("evaluate", py::overload_cast<double, double>(&SquareSolution::evaluate, py::const_), py::arg("x"),
           py::arg("y"))
      .def("to_chebyshev", [](const SquareSolution& s) { return s.to_chebyshev().values; });

  m.def(
      "solve_square",
      [](const Eigen::MatrixXd& f_cheb, double eps, int n, int iterations, std::vector<double> domain) {
        SquareOptions opts;
        opts.n = n;
        opts.iterations = iterations;
        SolveReport rep;
        SquareSolution s;
        if (domain.empty()) {
          s = solve_square(cheb2d(f_cheb), eps, &rep, opts);
        } else {
          if (domain.size() != 4) throw PreconditionError("solve_square: domain must be [x0, x1, y0, y1]");
          s = solve_rectangle(cheb2d(f_cheb), {domain[0], domain[1], domain[2], domain[3]}, eps, &rep, opts);
        }
        return py::make_tuple(s, rep);
      },
      py::arg("f_cheb"), py::arg("eps") = 1e-13, py::arg("n") = 0, py::arg("iterations") = 0,
      py::arg("domain") = std::vector<double>{},
      "Chebyshev coefficients of f (rows y, columns x) -> (SquareSolution, SolveReport)");

  // finite differences
  m.def(
      "solve_fd",
      [](const Eigen::MatrixXd& F, int n, double eps, const std::string& method, const std::string& count) {
        const FDProblem prob{n, F};
        SolveReport rep;
        Eigen::MatrixXd X;
        if (method == "dst") {
          X = solve_fd_dst(prob, &rep);
        } else if (method == "adi") {
          FDOptions opts;
          opts.count = parse_count_formula(count);
          X = solve_fd_adi(prob, eps, &rep, opts);
        } else {
          throw PreconditionError("solve_fd: method must be 'adi' or 'dst'");
        }
        return py::make_tuple(X, rep);
      },
      py::arg("F"), py::arg("n"), py::arg("eps") = 1e-10, py::arg("method") = "adi", py::arg("count") = "general");

  // cylinder
  py::class_<CylinderSolution>(m, "CylinderSolution")
      .def_readonly("n", &CylinderSolution::n)
      .def("evaluate", &CylinderSolution::evaluate, py::arg("r"), py::arg("theta"), py::arg("z"))
      .def("evaluate_cartesian", &CylinderSolution::evaluate_cartesian, py::arg("x"), py::arg("y"), py::arg("z"));

  m.def(
      "solve_cylinder",
      [](const std::function<double(double, double, double)>& f, int n, double eps, int threads) {
        const CylinderSamples samples = sample_cylinder(f, n);
        SolveReport rep;
        CylinderOptions opts;
        opts.threads = threads;
        CylinderSolution s;
        {
          py::gil_scoped_release release;
          s = solve_cylinder(samples, eps, &rep, opts);
        }
        return py::make_tuple(s, rep);
      },
      py::arg("f"), py::arg("n"), py::arg("eps") = 1e-10, py::arg("threads") = 1,
      "f(r, theta, z) sampled on the half Chebyshev x uniform x Chebyshev grid");

  // cube
  py::class_<CubeSolution>(m, "CubeSolution")
      .def_readonly("n", &CubeSolution::n)
      .def_readonly("X", &CubeSolution::X)
      .def("evaluate", &CubeSolution::evaluate, py::arg("x"), py::arg("y"), py::arg("z"))
      .def("to_chebyshev", &CubeSolution::to_chebyshev);

  m.def("sample_cube", &sample_cube, py::arg("f"), py::arg("n"));
  m.def("cheb_coeffs_3d", &cheb_coeffs_3d, py::arg("values"));
  m.def(
      "solve_cube",
      [](const Eigen::MatrixXd& f_cheb, double eps, int max_n) {
        CubeOptions opts;
        opts.max_n = max_n;
        SolveReport rep;
        CubeSolution s;
        {
          py::gil_scoped_release release;
          s = solve_cube(f_cheb, eps, &rep, opts);
        }
        return py::make_tuple(s, rep);
      },
      py::arg("f_cheb"), py::arg("eps") = 1e-8, py::arg("max_n") = 64,
      "Chebyshev coefficients of f as an n x n^2 array (x fastest, then y, then z); experimental");
}
