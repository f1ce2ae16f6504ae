#include "spectral_poisson/poisson_fd.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/parallel.hpp"

namespace spoisson {

namespace {

void check_n(int n, const char* who) {
  if (n < 2) {
    std::ostringstream os;
    os << who << ": n must be >= 2 (got " << n << ")";
    throw PreconditionError(os.str());
  }
}

void check_rhs(const FDProblem& prob) {
  check_n(prob.n, "poisson_fd");
  if (prob.F.rows() != prob.n - 1 || prob.F.cols() != prob.n - 1)
    throw PreconditionError("poisson_fd: right-hand side must be (n-1) x (n-1) interior values");
}

// Thomas elimination for the constant tridiagonal matrix (diag d, off o), precomputed
// multipliers shared by every column/row of a matrix right-hand side.
class ConstTridiagSolver {
 public:
  ConstTridiagSolver(int m, double d, double o) : o_(o), piv_(m), mult_(m) {
    piv_(0) = d;
    mult_(0) = 0.0;
    for (int i = 1; i < m; ++i) {
      if (piv_(i - 1) == 0.0) fail(d, i - 1);
      mult_(i) = o / piv_(i - 1);
      piv_(i) = d - mult_(i) * o;
    }
    if (piv_(m - 1) == 0.0) fail(d, m - 1);
  }
  double pivot(Eigen::Index i) const { return piv_(i); }
  double mult(Eigen::Index i) const { return mult_(i); }
  double off() const { return o_; }
  // x <- T^{-1} x for one contiguous vector
  void solve(double* x) const {
    const Eigen::Index m = piv_.size();
    for (Eigen::Index i = 1; i < m; ++i) x[i] -= mult_(i) * x[i - 1];
    x[m - 1] /= piv_(m - 1);
    for (Eigen::Index i = m - 2; i >= 0; --i) x[i] = (x[i] - o_ * x[i + 1]) / piv_(i);
  }

 private:
  [[noreturn]] static void fail(double d, Eigen::Index i) {
    std::ostringstream os;
    os << "singular shifted system (diagonal " << d << ") at pivot index " << i;
    throw NumericalError(os.str());
  }
  double o_;
  Eigen::VectorXd piv_, mult_;
};

// out = K X (left) or X K (right) for the constant tridiagonal K
void apply_K_left(double d, double o, const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
  const Eigen::Index m = X.rows();
  out = d * X;
  if (m > 1) {
    out.topRows(m - 1) += o * X.bottomRows(m - 1);
    out.bottomRows(m - 1) += o * X.topRows(m - 1);
  }
}
void apply_K_right(double d, double o, const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
  const Eigen::Index m = X.cols();
  out = d * X;
  if (m > 1) {
    out.leftCols(m - 1) += o * X.rightCols(m - 1);
    out.rightCols(m - 1) += o * X.leftCols(m - 1);
  }
}

}  // namespace

BandedMatrix build_K(int n) {
  check_n(n, "build_K");
  const int m = n - 1;
  const double h2 = std::pow(2.0 / n, 2);
  BandedMatrix K(m, 1, 1);
  for (int i = 0; i < m; ++i) {
    K.at(i, i) = -2.0 / h2;
    if (i + 1 < m) {
      K.at(i, i + 1) = 1.0 / h2;
      K.at(i + 1, i) = 1.0 / h2;
    }
  }
  return K;
}

Eigen::VectorXd fd_eigenvalues(int n) {
  check_n(n, "fd_eigenvalues");
  const double h2 = std::pow(2.0 / n, 2);
  Eigen::VectorXd ev(n - 1);
  for (int k = 1; k < n; ++k) ev(k - 1) = -(4.0 / h2) * std::pow(std::sin(std::numbers::pi * k / (2.0 * n)), 2);
  return ev;
}

Eigen::MatrixXd dst1_matrix(int n) {
  check_n(n, "dst1_matrix");
  Eigen::MatrixXd S(n - 1, n - 1);
  const double c = std::sqrt(2.0 / n);
  // sin(pi j k / n) with the argument reduced mod 2n for accuracy at large n
  for (int j = 1; j < n; ++j)
    for (int k = 1; k < n; ++k)
      S(j - 1, k - 1) = c * std::sin(std::numbers::pi * static_cast<double>((static_cast<long long>(j) * k) % (2 * n)) / n);
  return S;
}

SpectralIntervals fd_intervals(int n) {
  check_n(n, "fd_intervals");
  const double n2 = static_cast<double>(n) * n;
  return {-n2, -1.0, 1.0, n2};
}

void fd_adi_sweep(int n, double p, double q, const Eigen::MatrixXd& F, Eigen::MatrixXd& X) {
  const Eigen::Index m = n - 1;
  const double h2 = std::pow(2.0 / n, 2), d = -2.0 / h2, o = 1.0 / h2;
  const ConstTridiagSolver right(static_cast<int>(m), -d - p, -o), left(static_cast<int>(m), d - q, o);
  // Both half steps are fused into column passes so each column is touched while it is in cache.
  thread_local Eigen::MatrixXd Xh;
  Xh.resize(m, m);
  // X_h (B - p) = F - (A - p) X with A = K, B = -K: build column c, then eliminate against c - 1
  for (Eigen::Index c = 0; c < m; ++c) {
    const double* x = X.col(c).data();
    const double* f = F.col(c).data();
    double* xh = Xh.col(c).data();
    for (Eigen::Index i = 0; i < m; ++i) {
      const double nb = (i > 0 ? x[i - 1] : 0.0) + (i + 1 < m ? x[i + 1] : 0.0);
      xh[i] = f[i] - (d - p) * x[i] - o * nb;
    }
    if (c > 0) Xh.col(c) -= right.mult(c) * Xh.col(c - 1);
  }
  Xh.col(m - 1) /= right.pivot(m - 1);
  for (Eigen::Index c = m - 2; c >= 0; --c) Xh.col(c) = (Xh.col(c) - right.off() * Xh.col(c + 1)) / right.pivot(c);
  // (A - q) X = F - X_h (B - q) = F + X_h K + q X_h, solved column by column
  for (Eigen::Index c = 0; c < m; ++c) {
    auto xc = X.col(c);
    xc = F.col(c) + (d + q) * Xh.col(c);
    if (c > 0) xc += o * Xh.col(c - 1);
    if (c + 1 < m) xc += o * Xh.col(c + 1);
    left.solve(xc.data());
  }
}

Eigen::MatrixXd solve_fd_adi(const FDProblem& prob, double eps, SolveReport* report, const FDOptions& opts) {
  check_rhs(prob);
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_fd_adi: eps must lie in (0, 1)");
  Stopwatch clock;
  const int n = prob.n;
  const SpectralIntervals iv = fd_intervals(n);
  int J = opts.iterations;
  if (J <= 0)
    J = opts.count == CountFormula::General ? iteration_count(CountFormula::General, cross_ratio_gamma(iv), eps)
                                            : iteration_count(opts.count, n, eps);
  const ShiftSchedule sched = adi_shifts_for(iv, J);
  const double t_setup = clock.lap();

  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(n - 1, n - 1);
  for (int j = 0; j < J; ++j) {
    try {
      fd_adi_sweep(n, sched.p[j], sched.q[j], prob.F, X);
    } catch (const NumericalError& e) {
      std::ostringstream os;
      os << "ADI iteration " << j << ": " << e.what();
      throw NumericalError(os.str());
    }
  }
  const double t_adi = clock.lap();
  if (report) {
    report->solver = "fd";
    report->n = n;
    report->eps = eps;
    report->iterations = J;
    report->residual = fd_residual(prob, X);
    report->add_stage("setup", t_setup);
    report->add_stage("adi", t_adi);
  }
  return X;
}

Eigen::MatrixXd solve_fd_dst(const FDProblem& prob, SolveReport* report) {
  check_rhs(prob);
  Stopwatch clock;
  const Eigen::MatrixXd S = dst1_matrix(prob.n);
  const Eigen::VectorXd lam = fd_eigenvalues(prob.n);
  Eigen::MatrixXd G = S * prob.F * S;
  for (Eigen::Index k = 0; k < G.cols(); ++k)
    for (Eigen::Index j = 0; j < G.rows(); ++j) G(j, k) /= lam(j) + lam(k);
  Eigen::MatrixXd X = S * G * S;
  const double t = clock.lap();
  if (report) {
    report->solver = "fd-dst";
    report->n = prob.n;
    report->iterations = 0;
    report->residual = fd_residual(prob, X);
    report->add_stage("transform", t);
  }
  return X;
}

double fd_residual(const FDProblem& prob, const Eigen::MatrixXd& X) {
  check_rhs(prob);
  const double h2 = std::pow(2.0 / prob.n, 2);
  Eigen::MatrixXd KX, XK;
  apply_K_left(-2.0 / h2, 1.0 / h2, X, KX);
  apply_K_right(-2.0 / h2, 1.0 / h2, X, XK);
  const double scale = prob.F.norm();
  const double r = (KX + XK - prob.F).norm();
  return scale > 0.0 ? r / scale : r;
}

}  // namespace spoisson
