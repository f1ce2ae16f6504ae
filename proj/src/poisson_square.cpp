#include "spectral_poisson/poisson_square.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/parallel.hpp"

namespace spoisson {

void check_rectangle(const Rectangle& r) {
  const bool finite = std::isfinite(r.x0) && std::isfinite(r.x1) && std::isfinite(r.y0) && std::isfinite(r.y1);
  if (!finite || !(r.x1 > r.x0) || !(r.y1 > r.y0)) {
    std::ostringstream os;
    os << "degenerate domain [" << r.x0 << ", " << r.x1 << "] x [" << r.y0 << ", " << r.y1 << "]";
    throw PreconditionError(os.str());
  }
}

SquareDiscretization assemble_square(int n) {
  if (n < 1) throw PreconditionError("assemble_square: n must be >= 1");
  SquareDiscretization d;
  d.n = n;
  d.D = build_D(n);
  d.M = build_M(n);
  d.A = BandedMatrix::diagonal(d.D.cwiseInverse()) * d.M;
  d.Ds = Eigen::VectorXd::Ones(n);
  for (int j = 0; j + 2 < n; ++j) {
    const double ratio = d.A(j + 2, j) / d.A(j, j + 2);
    if (!(ratio > 0.0)) throw NumericalError("assemble_square: sign inconsistency in symmetrizer");
    d.Ds(j + 2) = d.Ds(j) * std::sqrt(ratio);
  }
  d.A_sym = BandedMatrix(n, 2, 2);
  for (int j = 0; j < n; ++j) {
    d.A_sym.at(j, j) = d.A(j, j);
    if (j + 2 < n) {
      const double up = d.A(j, j + 2) * d.Ds(j + 2) / d.Ds(j);
      const double lo = d.A(j + 2, j) * d.Ds(j) / d.Ds(j + 2);
      if (std::abs(up - lo) > 1e-13 * std::abs(up))
        throw NumericalError("assemble_square: symmetrized matrix is not symmetric");
      d.A_sym.at(j, j + 2) = up;
      d.A_sym.at(j + 2, j) = up;
    }
  }
  d.delta = 1.0 / (30.0 * std::pow(static_cast<double>(n), 4));
  d.iv = {-1.0, -d.delta, d.delta, 1.0};
  return d;
}

Interval square_gershgorin(const SquareDiscretization& disc) {
  Eigen::VectorXd s(disc.n);
  for (int i = 0; i < disc.n; ++i) s(i) = i / 2 + 1;
  return gershgorin_intervals(disc.A_sym, s);
}

Interval square_eigen_range(const SquareDiscretization& disc) {
  Interval r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int parity = 0; parity < 2; ++parity) {
    const int m = (disc.n - parity + 1) / 2;
    if (m == 0) continue;
    Eigen::VectorXd diag(m), off(std::max(m - 1, 1));
    for (int k = 0; k < m; ++k) diag(k) = disc.A_sym(2 * k + parity, 2 * k + parity);
    for (int k = 0; k + 1 < m; ++k) off(k) = disc.A_sym(2 * k + parity, 2 * k + 2 + parity);
    if (m == 1) {
      r.lo = std::min(r.lo, diag(0));
      r.hi = std::max(r.hi, diag(0));
      continue;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
    es.computeFromTridiagonal(diag, off.head(m - 1), Eigen::EigenvaluesOnly);
    r.lo = std::min(r.lo, es.eigenvalues()(0));
    r.hi = std::max(r.hi, es.eigenvalues()(m - 1));
  }
  return r;
}

CoeffMatrix2D rhs_to_C32(const CoeffMatrix2D& f_cheb) {
  if (f_cheb.values.rows() != f_cheb.values.cols())
    throw PreconditionError("rhs_to_C32: coefficient matrix must be square");
  return convert(f_cheb, BasisTag::UltraC32, BasisTag::UltraC32);
}

Eigen::MatrixXd resize_coeffs(const Eigen::MatrixXd& C, int n) {
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n, n);
  const Eigen::Index r = std::min<Eigen::Index>(n, C.rows()), c = std::min<Eigen::Index>(n, C.cols());
  R.topLeftCorner(r, c) = C.topLeftCorner(r, c);
  return R;
}

namespace {

// Reference coordinate in [-1, 1]; throws outside the (slightly padded) interval.
double to_reference(double v, double lo, double hi, const char* axis) {
  const double t = (2.0 * v - (lo + hi)) / (hi - lo);
  if (!(std::abs(t) <= 1.0 + 1e-14)) {
    std::ostringstream os;
    os << "evaluation point " << axis << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw DomainError(os.str());
  }
  return std::clamp(t, -1.0, 1.0);
}

Eigen::MatrixXd with_domain_chebyshev(const Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  const BandedMatrix M2 = build_M(n + 2);
  Eigen::MatrixXd P = resize_coeffs(X, n + 2), T, U;
  M2.apply_left(P, T);
  M2.apply_right(T, U);  // M symmetric
  convert_columns(U, BasisTag::UltraC32, BasisTag::ChebyshevT);
  convert_rows(U, BasisTag::UltraC32, BasisTag::ChebyshevT);
  return U;
}

}  // namespace

double SquareSolution::evaluate(double x, double y) const {
  const double xi = to_reference(x, domain.x0, domain.x1, "x");
  const double eta = to_reference(y, domain.y0, domain.y1, "y");
  const int n = static_cast<int>(X.rows());
  const double w = (1.0 - xi * xi) * (1.0 - eta * eta);
  if (w == 0.0 || n == 0) return 0.0;
  return w * ultra_eval_all(n, eta).dot(X * ultra_eval_all(n, xi));
}

Eigen::VectorXd SquareSolution::evaluate(const Eigen::MatrixX2d& points) const {
  Eigen::VectorXd v(points.rows());
  for (Eigen::Index i = 0; i < points.rows(); ++i) v(i) = evaluate(points(i, 0), points(i, 1));
  return v;
}

CoeffMatrix2D SquareSolution::to_chebyshev() const {
  return {with_domain_chebyshev(X), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
}

SquareSolution solve_square_ultra(const SquareDiscretization& disc, const Eigen::MatrixXd& F_ultra,
                                  const Rectangle& domain, double eps, const SquareOptions& opts,
                                  SolveReport* report) {
  check_rectangle(domain);
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_square: eps must lie in (0, 1)");
  const int n = disc.n;
  if (F_ultra.rows() != n || F_ultra.cols() != n)
    throw PreconditionError("solve_square: right-hand side size does not match the discretization");
  Stopwatch clock;
  const double ax = std::pow(2.0 / (domain.x1 - domain.x0), 2);
  const double by = std::pow(2.0 / (domain.y1 - domain.y0), 2);

  // R = D^-1 F D^-1, then the symmetrized right-hand side D_s^-1 R D_s^-1
  const Eigen::VectorXd Dinv = disc.D.cwiseInverse();
  const Eigen::MatrixXd R = Dinv.asDiagonal() * F_ultra * Dinv.asDiagonal();
  const Eigen::VectorXd Dsinv = disc.Ds.cwiseInverse();
  Eigen::MatrixXd Rs = Dsinv.asDiagonal() * R * Dsinv.asDiagonal();

  const BandedMatrix& At = disc.A_sym;
  SylvesterProblem prob;
  prob.iv = {-ax, -ax * disc.delta, by * disc.delta, by};
  prob.ops.apply_A = [&At, ax](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
    At.apply_left(X, out);
    out *= ax;
  };
  prob.ops.apply_B = [&At, by](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
    At.apply_right(X, out);
    out *= -by;
  };
  prob.ops.solve_A_shifted = [&At, ax](double q, Eigen::MatrixXd& X) {
    EvenOddSolver(At, q / ax).solve_left(X);
    X /= ax;
  };
  prob.ops.solve_B_shifted = [&At, by](double p, Eigen::MatrixXd& X) {
    EvenOddSolver(At, -p / by).solve_right(X);
    X /= -by;
  };
  prob.F = std::move(Rs);

  int J = opts.iterations;
  if (J <= 0)
    J = opts.count == CountFormula::General ? iteration_count(CountFormula::General, cross_ratio_gamma(prob.iv), eps)
                                            : iteration_count(opts.count, n, eps);
  const ShiftSchedule schedule = adi_shifts_for(prob.iv, J);
  const double t_setup = clock.lap();

  const Eigen::MatrixXd Y = adi_solve(prob, schedule);
  const double t_adi = clock.lap();

  SquareSolution sol;
  sol.domain = domain;
  sol.X = disc.Ds.asDiagonal() * Y * disc.Ds.asDiagonal();
  const double t_recover = clock.lap();

  if (report) {
    // residual of ax A X - by X B = D^-1 F D^-1 with the unsymmetrized A = D^-1 M, B = -M D^-1
    Eigen::MatrixXd MX, XM;
    disc.M.apply_left(sol.X, MX);
    disc.M.apply_right(sol.X, XM);
    const Eigen::MatrixXd defect = ax * (Dinv.asDiagonal() * MX) + by * (XM * Dinv.asDiagonal()) - R;
    const double scale = R.norm();
    report->n = n;
    report->eps = eps;
    report->iterations = J;
    report->residual = scale > 0.0 ? defect.norm() / scale : defect.norm();
    report->add_stage("setup", t_setup);
    report->add_stage("adi", t_adi);
    report->add_stage("recover", t_recover);
  }
  return sol;
}

SquareSolution solve_rectangle(const CoeffMatrix2D& f_cheb, const Rectangle& domain, double eps,
                               SolveReport* report, const SquareOptions& opts) {
  check_rectangle(domain);
  if (f_cheb.basis_x != BasisTag::ChebyshevT || f_cheb.basis_y != BasisTag::ChebyshevT)
    throw PreconditionError("solve_square: right-hand side must be in Chebyshev coefficients");
  const int n = opts.n > 0 ? opts.n : static_cast<int>(f_cheb.values.rows());
  if (n < 1) throw PreconditionError("solve_square: empty right-hand side");
  Stopwatch clock;
  CoeffMatrix2D f{resize_coeffs(f_cheb.values, n), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
  const Eigen::MatrixXd F = rhs_to_C32(f).values;
  const SquareDiscretization disc = assemble_square(n);
  const double t_rhs = clock.lap();
  if (report) {
    report->solver = (domain.x0 == -1.0 && domain.x1 == 1.0 && domain.y0 == -1.0 && domain.y1 == 1.0)
                         ? "square"
                         : "rectangle";
    report->add_stage("rhs_to_ultra", t_rhs);
  }
  return solve_square_ultra(disc, F, domain, eps, opts, report);
}

SquareSolution solve_square(const CoeffMatrix2D& f_cheb, double eps, SolveReport* report,
                            const SquareOptions& opts) {
  return solve_rectangle(f_cheb, Rectangle{}, eps, report, opts);
}

// ---------------------------------------------------------------------------

double corner_defect(const EdgeData& g) {
  auto at = [](const Eigen::VectorXd& c, double x) { return c.size() ? cheb_series(c, x) : 0.0; };
  return std::max({std::abs(at(g.left, -1) - at(g.bottom, -1)), std::abs(at(g.left, 1) - at(g.top, -1)),
                   std::abs(at(g.right, -1) - at(g.bottom, 1)), std::abs(at(g.right, 1) - at(g.top, 1))});
}

double DirichletSolution::evaluate(double x, double y) const {
  const Rectangle& d = interior.domain;
  const double xi = to_reference(x, d.x0, d.x1, "x");
  const double eta = to_reference(y, d.y0, d.y1, "y");
  return interior.evaluate(x, y) + cheb_eval_2d(lift, xi, eta);
}

CoeffMatrix2D DirichletSolution::to_chebyshev() const {
  const Eigen::MatrixXd U = with_domain_chebyshev(interior.X);
  const int m = static_cast<int>(std::max(U.rows(), lift.rows()));
  return {resize_coeffs(U, m) + resize_coeffs(lift, m), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
}

DirichletSolution solve_dirichlet(const CoeffMatrix2D& f_cheb, const EdgeData& g, double eps,
                                  const Rectangle& domain, SolveReport* report, const SquareOptions& opts) {
  check_rectangle(domain);
  const double defect = corner_defect(g);
  if (!(defect <= 1e-10)) {
    std::ostringstream os;
    os << "incompatible Dirichlet data: worst corner defect " << defect << " exceeds 1e-10";
    throw PreconditionError(os.str());
  }
  const int n = opts.n > 0 ? opts.n : static_cast<int>(f_cheb.values.rows());
  const int m = static_cast<int>(std::max<Eigen::Index>(
      {static_cast<Eigen::Index>(n), g.left.size(), g.right.size(), g.bottom.size(), g.top.size(), 2}));
  auto pad = [m](const Eigen::VectorXd& c) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(m);
    v.head(std::min<Eigen::Index>(m, c.size())) = c.head(std::min<Eigen::Index>(m, c.size()));
    return v;
  };
  const Eigen::VectorXd L = pad(g.left), R = pad(g.right), B = pad(g.bottom), T = pad(g.top);
  // Transfinite (Coons) blend; rows are eta (y), columns xi (x).
  Eigen::MatrixXd U = Eigen::MatrixXd::Zero(m, m);
  U.col(0) += 0.5 * (L + R);
  U.col(1) += 0.5 * (R - L);
  U.row(0) += 0.5 * (B + T).transpose();
  U.row(1) += 0.5 * (T - B).transpose();
  const double cLB = 0.5 * (cheb_series(L, -1) + cheb_series(B, -1));
  const double cLT = 0.5 * (cheb_series(L, 1) + cheb_series(T, -1));
  const double cRB = 0.5 * (cheb_series(R, -1) + cheb_series(B, 1));
  const double cRT = 0.5 * (cheb_series(R, 1) + cheb_series(T, 1));
  // bilinear corner interpolant: (1 -+ xi)(1 -+ eta)/4 in T0/T1 coefficients
  U(0, 0) -= 0.25 * (cLB + cLT + cRB + cRT);
  U(0, 1) -= 0.25 * (-cLB - cLT + cRB + cRT);
  U(1, 0) -= 0.25 * (-cLB + cLT - cRB + cRT);
  U(1, 1) -= 0.25 * (cLB - cLT - cRB + cRT);

  // Laplacian of the lift in coefficient space
  const double ax = std::pow(2.0 / (domain.x1 - domain.x0), 2);
  const double by = std::pow(2.0 / (domain.y1 - domain.y0), 2);
  Eigen::MatrixXd Uxx(m, m), Uyy(m, m);
  for (int i = 0; i < m; ++i) Uxx.row(i) = cheb_derivative(cheb_derivative(U.row(i).transpose())).transpose();
  for (int j = 0; j < m; ++j) Uyy.col(j) = cheb_derivative(cheb_derivative(U.col(j)));
  const int mf = static_cast<int>(std::max<Eigen::Index>(m, f_cheb.values.rows()));
  CoeffMatrix2D f2{resize_coeffs(f_cheb.values, mf) - resize_coeffs(ax * Uxx + by * Uyy, mf), f_cheb.basis_x,
                   f_cheb.basis_y};
  SquareOptions o = opts;
  o.n = n;
  DirichletSolution sol;
  sol.interior = solve_rectangle(f2, domain, eps, report, o);
  sol.lift = U;
  if (report) report->solver = "dirichlet";
  return sol;
}

}  // namespace spoisson
