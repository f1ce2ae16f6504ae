#include "spectral_poisson/poisson_cube.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "spectral_poisson/basis.hpp"
#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/parallel.hpp"
#include "spectral_poisson/poisson_square.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace spoisson {

namespace {

int cube_size(const Eigen::MatrixXd& X) {
  const auto n = X.rows();
  if (n < 1 || X.cols() != n * n) throw PreconditionError("cube tensor must be stored as n x n^2");
  return static_cast<int>(n);
}

// out = X P^T for a banded P, on column views
void banded_right_transposed(const BandedMatrix& P, const Eigen::Ref<const Eigen::MatrixXd>& X,
                             Eigen::Ref<Eigen::MatrixXd> out) {
  const int n = P.size();
  out.setZero();
  for (int i = 0; i < n; ++i)
    for (int j = std::max(0, i - P.lower()); j <= std::min(n - 1, i + P.upper()); ++j) {
      const double v = P(i, j);
      if (v != 0.0) out.col(i) += v * X.col(j);
    }
}

// Solve with a symmetric shifted matrix along one dimension, in place.
void solve_along(const EvenOddSolver& S, int dim, Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows();
  if (dim == 0) {
    S.solve_left(X);
  } else if (dim == 1) {
    for (Eigen::Index k = 0; k < n; ++k) S.solve_right(Eigen::Map<Eigen::MatrixXd>(X.data() + k * n * n, n, n));
  } else {
    S.solve_right(Eigen::Map<Eigen::MatrixXd>(X.data(), n * n, n));
  }
}

int other_dim(int d, int which) {
  const int a = d == 0 ? 1 : 0;
  const int b = d == 2 ? 1 : 2;
  return which == 0 ? a : b;
}

// Alternate shift pairs from both ends of the schedule. Exact results are order independent
// (all operators commute); interleaving keeps the partial products of the sweep bounded, so
// rounding from inexact nested solves is not amplified.
ShiftSchedule interleaved(const ShiftSchedule& s) {
  ShiftSchedule out;
  const int J = s.iterations();
  for (int lo = 0, hi = J - 1; lo <= hi; ++lo, --hi) {
    out.p.push_back(s.p[lo]);
    out.q.push_back(s.q[lo]);
    if (hi != lo) {
      out.p.push_back(s.p[hi]);
      out.q.push_back(s.q[hi]);
    }
  }
  return out;
}

int op_dim(KronOp op) { return op == KronOp::Dxx ? 0 : op == KronOp::Dyy ? 1 : 2; }

std::string level_error(const char* level, const std::exception& e) {
  return std::string(level) + " ADI: " + e.what();
}

// Nested-ADI context on the symmetrized operators Op_d (A_sym along the two dims other than d).
struct CubeContext {
  int n;
  double delta;
  BandedMatrix At;
  EvenOddSolver inv0;
  double inner_eps;

  CubeContext(const SquareDiscretization& sq, double ieps)
      : n(sq.n), delta(sq.delta), At(sq.A_sym), inv0(sq.A_sym, 0.0), inner_eps(ieps) {}

  Eigen::MatrixXd op(int d, const Eigen::MatrixXd& X) const {
    return apply_along(At, other_dim(d, 1), apply_along(At, other_dim(d, 0), X));
  }

  // (Op_d + q) Z = R, q > 0: q A_a^-1 Z - Z(-A_b) = A_a^-1 R along dims a, b
  Eigen::MatrixXd inner(int d, double q, const Eigen::MatrixXd& R) const {
    const int a = other_dim(d, 0), b = other_dim(d, 1);
    const BandedMatrix& P = At;
    const EvenOddSolver& S0 = inv0;
    SylvesterProblem prob;
    prob.iv = {-q / delta, -q, delta, 1.0};
    prob.ops.apply_A = [&, q, a](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
      out = X;
      solve_along(S0, a, out);
      out *= q;
    };
    prob.ops.apply_B = [&, b](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) { out = -apply_along(P, b, X); };
    prob.ops.solve_A_shifted = [&, q, a](double s, Eigen::MatrixXd& X) {
      // (q A^-1 - s)^-1 = (q - s A)^-1 A = -(1/s)(A - q/s)^-1 A
      X = apply_along(P, a, X);
      solve_along(EvenOddSolver(P, q / s), a, X);
      X /= -s;
    };
    prob.ops.solve_B_shifted = [&, b](double p, Eigen::MatrixXd& X) {
      solve_along(EvenOddSolver(P, -p), b, X);
      X = -X;
    };
    prob.F = R;
    solve_along(S0, a, prob.F);
    Eigen::MatrixXd Z;
    try {
      Z = adi_solve(prob, interleaved(adi_shifts(prob.iv, inner_eps)));
    } catch (const std::exception& e) {
      throw NumericalError(level_error("inner", e));
    }
    const double rn = R.norm();
    const double res = (op(d, Z) + q * Z - R).norm();
    if (rn > 0.0 && !(res <= 1e-8 * rn)) {
      std::ostringstream os;
      os << "inner ADI: slice solve did not converge (relative residual " << res / rn << ", shift " << q << ")";
      throw NumericalError(os.str());
    }
    return Z;
  }

  static SpectralIntervals inflate(const SpectralIntervals& iv) {
    return {2.0 * iv.a, 0.5 * iv.b, 0.5 * iv.c, 2.0 * iv.d};
  }

  // (Op_x + Op_y - p) Z = R with p < 0, as A_m Z - B_m Z = -R,
  // A_m = p/2 - Op_y, B_m = Op_x - p/2
  Eigen::MatrixXd middle(double p, const Eigen::MatrixXd& R, double eps) const {
    const double d2 = delta * delta;
    SylvesterProblem prob;
    prob.iv = inflate({p / 2 - 1.0, p / 2 - d2, d2 - p / 2, 1.0 - p / 2});
    prob.ops.apply_A = [this, p](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) { out = 0.5 * p * X - op(1, X); };
    prob.ops.apply_B = [this, p](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) { out = op(0, X) - 0.5 * p * X; };
    prob.ops.solve_A_shifted = [this, p](double s, Eigen::MatrixXd& X) { X = -inner(1, s - p / 2, X); };
    prob.ops.solve_B_shifted = [this, p](double s, Eigen::MatrixXd& X) { X = inner(0, -p / 2 - s, X); };
    prob.F = -R;
    try {
      return adi_solve(prob, interleaved(adi_shifts(prob.iv, eps)));
    } catch (const NumericalError& e) {
      throw NumericalError(std::string("middle ADI: ") + e.what());
    }
  }
};

}  // namespace

Eigen::MatrixXd apply_along(const BandedMatrix& P, int dim, const Eigen::MatrixXd& X) {
  const int n = cube_size(X);
  if (P.size() != n) throw PreconditionError("apply_along: operator size does not match the tensor");
  Eigen::MatrixXd out(n, static_cast<Eigen::Index>(n) * n);
  if (dim == 0) {
    P.apply_left(X, out);
  } else if (dim == 1) {
    for (int k = 0; k < n; ++k) {
      const Eigen::Index off = static_cast<Eigen::Index>(k) * n * n;
      banded_right_transposed(P, Eigen::Map<const Eigen::MatrixXd>(X.data() + off, n, n),
                              Eigen::Map<Eigen::MatrixXd>(out.data() + off, n, n));
    }
  } else if (dim == 2) {
    banded_right_transposed(P, Eigen::Map<const Eigen::MatrixXd>(X.data(), n * n, n),
                            Eigen::Map<Eigen::MatrixXd>(out.data(), n * n, n));
  } else {
    throw PreconditionError("apply_along: dimension must be 0, 1 or 2");
  }
  return out;
}

Eigen::MatrixXd apply_along(const Eigen::MatrixXd& P, int dim, const Eigen::MatrixXd& X) {
  const Eigen::Index n = X.rows(), m = P.rows();
  if (X.cols() != n * n || P.cols() != n) throw PreconditionError("apply_along: shape mismatch");
  // result has size m along dim and n along the others
  if (dim == 0) return P * X;
  if (dim == 1) {
    Eigen::MatrixXd out(n, m * n);
    for (Eigen::Index k = 0; k < n; ++k)
      out.middleCols(k * m, m) = Eigen::Map<const Eigen::MatrixXd>(X.data() + k * n * n, n, n) * P.transpose();
    return out;
  }
  if (dim == 2) {
    Eigen::MatrixXd out(n, n * m);
    Eigen::Map<Eigen::MatrixXd>(out.data(), n * n, m) = Eigen::Map<const Eigen::MatrixXd>(X.data(), n * n, n) * P.transpose();
    return out;
  }
  throw PreconditionError("apply_along: dimension must be 0, 1 or 2");
}

Eigen::MatrixXd apply_kron(KronOp op, const BandedMatrix& A, const Eigen::MatrixXd& X) {
  const int d = op_dim(op);
  return apply_along(A, other_dim(d, 1), apply_along(A, other_dim(d, 0), X));
}

Eigen::MatrixXd sample_cube(const std::function<double(double, double, double)>& f, int n) {
  if (n < 1) throw PreconditionError("sample_cube: n must be >= 1");
  const Eigen::VectorXd t = cheb_points(n);
  Eigen::MatrixXd V(n, static_cast<Eigen::Index>(n) * n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) V(i, j + n * k) = f(t(i), t(j), t(k));
  return V;
}

Eigen::MatrixXd cheb_coeffs_3d(const Eigen::MatrixXd& values) {
  const int n = cube_size(values);
  const Eigen::MatrixXd T = cheb_vals2coeffs_matrix(n);
  return apply_along(T, 2, apply_along(T, 1, apply_along(T, 0, values)));
}

double CubeSolution::evaluate(double x, double y, double z) const {
  for (double v : {x, y, z})
    if (!(std::abs(v) <= 1.0 + 1e-14)) throw DomainError("evaluation point outside [-1, 1]^3");
  x = std::clamp(x, -1.0, 1.0);
  y = std::clamp(y, -1.0, 1.0);
  z = std::clamp(z, -1.0, 1.0);
  const double w = (1 - x * x) * (1 - y * y) * (1 - z * z);
  if (w == 0.0) return 0.0;
  const Eigen::RowVectorXd t = ultra_eval_all(n, x).transpose() * X;
  const Eigen::Map<const Eigen::MatrixXd> T(t.data(), n, n);
  return w * ultra_eval_all(n, y).dot(T * ultra_eval_all(n, z));
}

Eigen::MatrixXd CubeSolution::to_chebyshev() const {
  const int m = n + 2;
  Eigen::MatrixXd P = Eigen::MatrixXd::Zero(m, static_cast<Eigen::Index>(m) * m);
  for (int k = 0; k < n; ++k) P.block(0, static_cast<Eigen::Index>(k) * m, n, n) = X.middleCols(static_cast<Eigen::Index>(k) * n, n);
  // multiply by (1 - t^2) along every dimension, then Ct -> Chebyshev
  Eigen::MatrixXd C = build_M(m).dense();
  Eigen::MatrixXd conv = Eigen::MatrixXd::Identity(m, m);
  convert_columns(conv, BasisTag::UltraC32, BasisTag::ChebyshevT);
  C = conv * C;
  return apply_along(C, 2, apply_along(C, 1, apply_along(C, 0, P)));
}

Eigen::MatrixXd cube_shifted_pair_solve(KronOp op, double q, const Eigen::MatrixXd& R, double eps) {
  const int n = cube_size(R);
  if (!(q > 0.0)) throw DomainError("cube_shifted_pair_solve: shift must be positive");
  const SquareDiscretization sq = assemble_square(n);
  const CubeContext ctx(sq, eps);
  return ctx.inner(op_dim(op), q, R);
}

CubeSolution solve_cube_ultra(const Eigen::MatrixXd& F_ultra, double eps, SolveReport* report,
                              const CubeOptions& opts) {
  const int n = cube_size(F_ultra);
  if (n > opts.max_n) {
    std::ostringstream os;
    os << "solve_cube: n = " << n << " exceeds the size guard " << opts.max_n;
    throw PreconditionError(os.str());
  }
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_cube: eps must lie in (0, 1)");
  Stopwatch clock;
  const SquareDiscretization sq = assemble_square(n);
  const CubeContext ctx(sq, opts.inner_eps);

  // G = (Ds^-1 D^-1)^{x3} F
  const Eigen::VectorXd w = (sq.D.cwiseProduct(sq.Ds)).cwiseInverse();
  const BandedMatrix W = BandedMatrix::diagonal(w);
  const Eigen::MatrixXd G = apply_along(W, 2, apply_along(W, 1, apply_along(W, 0, F_ultra)));

  // outer: A' = -Op_z, B' = Op_x + Op_y, A'Y - B'Y = -G
  const double d2 = sq.delta * sq.delta;
  SylvesterProblem prob;
  prob.iv = CubeContext::inflate({-1.0, -d2, 2.0 * d2, 2.0});
  prob.ops.apply_A = [&ctx](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) { out = -ctx.op(2, X); };
  prob.ops.apply_B = [&ctx](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) { out = ctx.op(0, X) + ctx.op(1, X); };
  prob.ops.solve_A_shifted = [&ctx](double q, Eigen::MatrixXd& X) { X = -ctx.inner(2, q, X); };
  prob.ops.solve_B_shifted = [&ctx, eps](double p, Eigen::MatrixXd& X) { X = ctx.middle(p, X, eps / 4); };
  prob.F = -G;
  const ShiftSchedule sched = interleaved(adi_shifts(prob.iv, eps / 4));
  const double t_rhs = clock.lap();

  Eigen::MatrixXd Y;
  try {
    Y = adi_solve(prob, sched);
  } catch (const NumericalError& e) {
    throw NumericalError(std::string("solve_cube: outer ADI: ") + e.what());
  }
  const double t_adi = clock.lap();

  const BandedMatrix S = BandedMatrix::diagonal(sq.Ds);
  CubeSolution sol;
  sol.n = n;
  sol.X = apply_along(S, 2, apply_along(S, 1, apply_along(S, 0, Y)));
  const double t_rec = clock.lap();

  if (report) {
    const Eigen::MatrixXd R0 = apply_along(BandedMatrix::diagonal(sq.D.cwiseInverse()), 0, F_ultra);
    const BandedMatrix Dinv = BandedMatrix::diagonal(sq.D.cwiseInverse());
    const Eigen::MatrixXd rhs = apply_along(Dinv, 2, apply_along(Dinv, 1, R0));
    const Eigen::MatrixXd lhs = apply_kron(KronOp::Dxx, sq.A, sol.X) + apply_kron(KronOp::Dyy, sq.A, sol.X) +
                                apply_kron(KronOp::Dzz, sq.A, sol.X);
    const double scale = rhs.norm();
    report->solver = "cube";
    report->n = n;
    report->eps = eps;
    report->iterations = sched.iterations();
    report->residual = scale > 0 ? (lhs - rhs).norm() / scale : (lhs - rhs).norm();
    report->add_stage("rhs_to_ultra", t_rhs);
    report->add_stage("adi", t_adi);
    report->add_stage("recover", t_rec);
  }
  return sol;
}

CubeSolution solve_cube(const Eigen::MatrixXd& f_cheb, double eps, SolveReport* report, const CubeOptions& opts) {
  const int n = cube_size(f_cheb);
  if (n > opts.max_n) {
    std::ostringstream os;
    os << "solve_cube: n = " << n << " exceeds the size guard " << opts.max_n;
    throw PreconditionError(os.str());
  }
  Stopwatch clock;
  Eigen::MatrixXd conv = Eigen::MatrixXd::Identity(n, n);
  convert_columns(conv, BasisTag::ChebyshevT, BasisTag::UltraC32);
  const Eigen::MatrixXd F = apply_along(conv, 2, apply_along(conv, 1, apply_along(conv, 0, f_cheb)));
  const double t = clock.lap();
  if (report) report->add_stage("rhs_to_ultra", t);
  return solve_cube_ultra(F, eps, report, opts);
}

}  // namespace spoisson
