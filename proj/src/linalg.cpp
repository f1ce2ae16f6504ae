#include "spectral_poisson/linalg.hpp"

#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "spectral_poisson/errors.hpp"

namespace spoisson {

BandedMatrix::BandedMatrix(int n, int lower, int upper)
    : n_(n), lower_(std::min(lower, std::max(n - 1, 0))), upper_(std::min(upper, std::max(n - 1, 0))) {
  if (n < 0 || lower < 0 || upper < 0) throw PreconditionError("BandedMatrix: negative dimension");
  diags_ = Eigen::MatrixXd::Zero(n_, lower_ + upper_ + 1);
}

double BandedMatrix::operator()(int i, int j) const {
  const int o = j - i;
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || o < -lower_ || o > upper_) return 0.0;
  return diags_(i, o + lower_);
}

double& BandedMatrix::at(int i, int j) {
  const int o = j - i;
  if (i < 0 || j < 0 || i >= n_ || j >= n_ || o < -lower_ || o > upper_)
    throw PreconditionError("BandedMatrix::at: (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside band");
  return diags_(i, o + lower_);
}

bool BandedMatrix::zero_odd_offsets() const {
  for (int o = -lower_; o <= upper_; ++o)
    if (o % 2 != 0 && !diags_.col(o + lower_).isZero(0.0)) return false;
  return true;
}

Eigen::MatrixXd BandedMatrix::dense() const {
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n_, n_);
  for (int o = -lower_; o <= upper_; ++o)
    for (int i = std::max(0, -o); i < std::min(n_, n_ - o); ++i) A(i, i + o) = diags_(i, o + lower_);
  return A;
}

BandedMatrix BandedMatrix::transpose() const {
  BandedMatrix T(n_, upper_, lower_);
  for (int o = -lower_; o <= upper_; ++o)
    for (int i = std::max(0, -o); i < std::min(n_, n_ - o); ++i) T.at(i + o, i) = diags_(i, o + lower_);
  return T;
}

Eigen::VectorXd BandedMatrix::operator*(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd out;
  apply_left(x, out);
  return out.col(0);
}

void BandedMatrix::apply_left(const Eigen::MatrixXd& X, Eigen::MatrixXd& out) const {
  if (X.rows() != n_) throw PreconditionError("BandedMatrix::apply_left: shape mismatch");
  out.setZero(n_, X.cols());
  for (int o = -lower_; o <= upper_; ++o) {
    const auto d = diags_.col(o + lower_);
    const int i0 = std::max(0, -o), len = std::min(n_, n_ - o) - i0;
    if (len <= 0 || d.isZero(0.0)) continue;
    out.middleRows(i0, len).noalias() += d.segment(i0, len).asDiagonal() * X.middleRows(i0 + o, len);
  }
}

void BandedMatrix::apply_right(const Eigen::MatrixXd& X, Eigen::MatrixXd& out) const {
  if (X.cols() != n_) throw PreconditionError("BandedMatrix::apply_right: shape mismatch");
  out.setZero(X.rows(), n_);
  for (int o = -lower_; o <= upper_; ++o) {
    const auto d = diags_.col(o + lower_);
    if (d.isZero(0.0)) continue;
    for (int i = std::max(0, -o); i < std::min(n_, n_ - o); ++i) out.col(i + o) += d(i) * X.col(i);
  }
}

BandedMatrix BandedMatrix::operator+(const BandedMatrix& o) const {
  if (o.n_ != n_) throw PreconditionError("BandedMatrix: size mismatch");
  BandedMatrix C(n_, std::max(lower_, o.lower_), std::max(upper_, o.upper_));
  for (int i = 0; i < n_; ++i)
    for (int j = std::max(0, i - C.lower_); j <= std::min(n_ - 1, i + C.upper_); ++j)
      C.at(i, j) = (*this)(i, j) + o(i, j);
  return C;
}

BandedMatrix BandedMatrix::operator-(const BandedMatrix& o) const { return *this + o * -1.0; }

BandedMatrix BandedMatrix::operator*(double s) const {
  BandedMatrix C = *this;
  C.diags_ *= s;
  return C;
}

BandedMatrix BandedMatrix::operator*(const BandedMatrix& o) const {
  if (o.n_ != n_) throw PreconditionError("BandedMatrix: size mismatch");
  BandedMatrix C(n_, lower_ + o.lower_, upper_ + o.upper_);
  for (int i = 0; i < n_; ++i)
    for (int k = std::max(0, i - lower_); k <= std::min(n_ - 1, i + upper_); ++k) {
      const double aik = (*this)(i, k);
      if (aik == 0.0) continue;
      for (int j = std::max(0, k - o.lower_); j <= std::min(n_ - 1, k + o.upper_); ++j)
        C.at(i, j) += aik * o(k, j);
    }
  return C;
}

BandedMatrix BandedMatrix::shifted(double s) const {
  BandedMatrix C = *this;
  C.diags_.col(lower_).array() -= s;
  return C;
}

BandedMatrix BandedMatrix::leading(int m) const {
  if (m < 0 || m > n_) throw PreconditionError("BandedMatrix::leading: bad size");
  BandedMatrix C(m, lower_, upper_);
  for (int i = 0; i < m; ++i)
    for (int j = std::max(0, i - C.lower_); j <= std::min(m - 1, i + C.upper_); ++j) C.at(i, j) = (*this)(i, j);
  return C;
}

BandedMatrix BandedMatrix::identity(int n) {
  BandedMatrix I(n, 0, 0);
  I.diags_.setOnes();
  return I;
}

BandedMatrix BandedMatrix::diagonal(const Eigen::VectorXd& d) {
  BandedMatrix D(static_cast<int>(d.size()), 0, 0);
  D.diags_.col(0) = d;
  return D;
}

// ---------------------------------------------------------------------------

EvenOddSolver::EvenOddSolver(const BandedMatrix& P, double shift) : n_(P.size()) {
  if (!P.zero_odd_offsets() || P.lower() > 2 || P.upper() > 2)
    throw PreconditionError("EvenOddSolver: matrix must be pentadiagonal with zero first off-diagonals");
  d_.resize(n_);
  l_ = Eigen::VectorXd::Zero(n_);
  u_ = Eigen::VectorXd::Zero(n_);
  constexpr double tiny = 64 * std::numeric_limits<double>::epsilon();
  for (int i = 0; i < n_; ++i) {
    const double sub = P(i, i - 2), sup = P(i, i + 2), diag = P(i, i) - shift;
    u_(i) = sup;
    double d = diag;
    if (i >= 2) {
      l_(i) = sub / d_(i - 2);
      d -= l_(i) * u_(i - 2);
    }
    if (!std::isfinite(d) || std::abs(d) <= tiny * (std::abs(diag) + std::abs(sub) + std::abs(sup)))
      throw NumericalError("singular shifted system (shift " + std::to_string(shift) +
                           ") at pivot index " + std::to_string(i));
    d_(i) = d;
  }
}

void EvenOddSolver::solve(Eigen::VectorXd& x) const {
  Eigen::Map<Eigen::MatrixXd> X(x.data(), x.size(), 1);
  Eigen::MatrixXd tmp = X;
  solve_left(tmp);
  x = tmp.col(0);
}

void EvenOddSolver::solve_left(Eigen::Ref<Eigen::MatrixXd> X) const {
  if (X.rows() != n_) throw PreconditionError("EvenOddSolver: shape mismatch");
  const double* l = l_.data();
  const double* u = u_.data();
  const double* d = d_.data();
  for (Eigen::Index c = 0; c < X.cols(); ++c) {
    double* x = X.col(c).data();
    for (int i = 2; i < n_; ++i) x[i] -= l[i] * x[i - 2];
    for (int i = n_ - 1; i >= 0; --i) {
      if (i + 2 < n_) x[i] -= u[i] * x[i + 2];
      x[i] /= d[i];
    }
  }
}

void EvenOddSolver::solve_right(Eigen::Ref<Eigen::MatrixXd> X) const {
  if (X.cols() != n_) throw PreconditionError("EvenOddSolver: shape mismatch");
  // X (L U) = R: first Z U = R, then X L = Z.
  for (int j = 0; j < n_; ++j) {
    if (j >= 2) X.col(j) -= u_(j - 2) * X.col(j - 2);
    X.col(j) /= d_(j);
  }
  for (int j = n_ - 3; j >= 0; --j) X.col(j) -= l_(j + 2) * X.col(j + 2);
}

Eigen::VectorXd solve_penta_evenodd(const BandedMatrix& P, double shift, const Eigen::VectorXd& rhs) {
  if (rhs.size() != P.size()) throw PreconditionError("solve_penta_evenodd: size mismatch");
  Eigen::VectorXd x = rhs;
  EvenOddSolver(P, shift).solve(x);
  return x;
}

// ---------------------------------------------------------------------------

BandedLU::BandedLU(const BandedMatrix& B) : n_(B.size()), kl_(B.lower()), ku_(B.upper()) {
  const int ldab = 2 * kl_ + ku_ + 1;
  ab_.assign(static_cast<size_t>(ldab) * std::max(n_, 1), 0.0);
  ipiv_.assign(std::max(n_, 1), 0);
  for (int j = 0; j < n_; ++j)
    for (int i = std::max(0, j - ku_); i <= std::min(n_ - 1, j + kl_); ++i)
      ab_[(kl_ + ku_ + i - j) + static_cast<size_t>(j) * ldab] = B(i, j);
  if (n_ == 0) return;
  const int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku_, ab_.data(), ldab, ipiv_.data());
  if (info > 0)
    throw NumericalError("singular banded system at pivot index " + std::to_string(info - 1));
  if (info < 0) throw NumericalError("dgbtrf: invalid argument " + std::to_string(-info));
}

void BandedLU::solve_left(Eigen::MatrixXd& X) const {
  if (X.rows() != n_) throw PreconditionError("BandedLU: shape mismatch");
  if (n_ == 0 || X.cols() == 0) return;
  LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, ku_, static_cast<int>(X.cols()), ab_.data(),
                 2 * kl_ + ku_ + 1, ipiv_.data(), X.data(), n_);
}

void BandedLU::solve_right(Eigen::MatrixXd& X) const {
  if (X.cols() != n_) throw PreconditionError("BandedLU: shape mismatch");
  if (n_ == 0 || X.rows() == 0) return;
  Eigen::MatrixXd Y = X.transpose();
  LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'T', n_, kl_, ku_, static_cast<int>(Y.cols()), ab_.data(),
                 2 * kl_ + ku_ + 1, ipiv_.data(), Y.data(), n_);
  X = Y.transpose();
}

Eigen::VectorXd solve_banded(const BandedMatrix& B, const Eigen::VectorXd& rhs) {
  if (rhs.size() != B.size()) throw PreconditionError("solve_banded: size mismatch");
  Eigen::MatrixXd X = rhs;
  BandedLU(B).solve_left(X);
  return X.col(0);
}

Interval gershgorin_intervals(const BandedMatrix& M, const Eigen::VectorXd& scaling) {
  const int n = M.size();
  if (scaling.size() != n || (scaling.array() <= 0.0).any())
    throw PreconditionError("gershgorin_intervals: scaling must be positive with matching size");
  Interval hull{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (int i = 0; i < n; ++i) {
    double radius = 0.0;
    for (int j = std::max(0, i - M.lower()); j <= std::min(n - 1, i + M.upper()); ++j)
      if (j != i) radius += std::abs(M(i, j)) * scaling(j) / scaling(i);
    hull.lo = std::min(hull.lo, M(i, i) - radius);
    hull.hi = std::max(hull.hi, M(i, i) + radius);
  }
  return hull;
}

// ---------------------------------------------------------------------------

Eigen::MatrixXd adi_solve(const SylvesterProblem& prob, const ShiftSchedule& schedule) {
  const auto& ops = prob.ops;
  const Eigen::MatrixXd& F = prob.F;
  if (schedule.p.size() != schedule.q.size())
    throw PreconditionError("adi_solve: shift lists of different length");
  Eigen::MatrixXd X = Eigen::MatrixXd::Zero(F.rows(), F.cols());
  Eigen::MatrixXd Xh, W;
  for (int j = 0; j < schedule.iterations(); ++j) {
    const double p = schedule.p[j], q = schedule.q[j];
    try {
      if (j == 0) {
        Xh = F;
      } else {
        ops.apply_A(X, W);
        Xh = F - W + p * X;
      }
      ops.solve_B_shifted(p, Xh);
      ops.apply_B(Xh, W);
      X = F - W + q * Xh;
      ops.solve_A_shifted(q, X);
    } catch (const NumericalError& e) {
      throw NumericalError("ADI iteration " + std::to_string(j) + ": " + e.what());
    }
  }
  return X;
}

Eigen::MatrixXd adi_solve(const SylvesterProblem& prob, double eps) {
  return adi_solve(prob, adi_shifts(prob.iv, eps));
}

double sylvester_residual(const SylvesterOperators& ops, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& F) {
  Eigen::MatrixXd AX, XB;
  ops.apply_A(X, AX);
  ops.apply_B(X, XB);
  const double defect = (AX - XB - F).norm();
  const double scale = F.norm();
  return scale > 0.0 ? defect / scale : defect;
}

std::vector<Eigen::MatrixXd> kron_sum_dense_solve(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>& terms,
    const std::vector<Eigen::MatrixXd>& Fs) {
  if (Fs.empty()) return {};
  const Eigen::Index r = Fs.front().rows(), c = Fs.front().cols(), N = r * c;
  if (r > 128 || c > 128 || N > 8192)
    throw NumericalError("dense Kronecker solve: size guard exceeded (" + std::to_string(r) + " x " +
                         std::to_string(c) + ")");
  Eigen::MatrixXd K = Eigen::MatrixXd::Zero(N, N);
  for (const auto& [L, R] : terms) {
    if (L.rows() != r || L.cols() != r || R.rows() != c || R.cols() != c)
      throw PreconditionError("dense Kronecker solve: term shape mismatch");
    for (Eigen::Index l = 0; l < c; ++l)
      for (Eigen::Index j = 0; j < c; ++j) {
        const double rlj = R(l, j);
        if (rlj != 0.0) K.block(j * r, l * r, r, r) += rlj * L;
      }
  }
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
  if (!(lu.rcond() > 1e3 * std::numeric_limits<double>::epsilon()))
    throw NumericalError("dense Kronecker solve: operator is singular (spectra overlap)");
  Eigen::MatrixXd rhs(N, static_cast<Eigen::Index>(Fs.size()));
  for (size_t i = 0; i < Fs.size(); ++i) {
    if (Fs[i].rows() != r || Fs[i].cols() != c)
      throw PreconditionError("dense Kronecker solve: right-hand side shape mismatch");
    rhs.col(static_cast<Eigen::Index>(i)) = Eigen::Map<const Eigen::VectorXd>(Fs[i].data(), N);
  }
  const Eigen::MatrixXd x = lu.solve(rhs);
  std::vector<Eigen::MatrixXd> out;
  for (Eigen::Index i = 0; i < x.cols(); ++i) out.emplace_back(Eigen::Map<const Eigen::MatrixXd>(x.col(i).data(), r, c));
  return out;
}

Eigen::MatrixXd kron_sum_dense_solve(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>& terms,
    const Eigen::MatrixXd& F) {
  return kron_sum_dense_solve(terms, std::vector<Eigen::MatrixXd>{F}).front();
}

Eigen::MatrixXd sylvester_dense_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                       const Eigen::MatrixXd& F) {
  const Eigen::Index r = F.rows(), c = F.cols();
  return kron_sum_dense_solve({{A, Eigen::MatrixXd::Identity(c, c)},
                               {-Eigen::MatrixXd::Identity(r, r), B}},
                              F);
}

}  // namespace spoisson
