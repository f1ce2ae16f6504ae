#pragma once

#include <Eigen/Dense>
#include <functional>
#include <utility>
#include <vector>

#include "spectral_poisson/zolotarev.hpp"

namespace spoisson {

/// Square n x n matrix stored by diagonals: diag(i, o + lower) = A(i, i + o).
class BandedMatrix {
 public:
  BandedMatrix() = default;
  BandedMatrix(int n, int lower, int upper);

  int size() const { return n_; }
  int lower() const { return lower_; }
  int upper() const { return upper_; }

  double operator()(int i, int j) const;
  double& at(int i, int j);  // throws PreconditionError outside the band

  // True when every odd-offset diagonal is exactly zero (even/odd decoupled).
  bool zero_odd_offsets() const;

  Eigen::MatrixXd dense() const;
  BandedMatrix transpose() const;

  Eigen::VectorXd operator*(const Eigen::VectorXd& x) const;
  void apply_left(const Eigen::MatrixXd& X, Eigen::MatrixXd& out) const;   // out = A X
  void apply_right(const Eigen::MatrixXd& X, Eigen::MatrixXd& out) const;  // out = X A

  BandedMatrix operator+(const BandedMatrix& o) const;
  BandedMatrix operator-(const BandedMatrix& o) const;
  BandedMatrix operator*(double s) const;
  // Product truncated to n x n.
  BandedMatrix operator*(const BandedMatrix& o) const;
  BandedMatrix shifted(double s) const;  // A - s I
  // Leading m x m block.
  BandedMatrix leading(int m) const;

  static BandedMatrix identity(int n);
  static BandedMatrix diagonal(const Eigen::VectorXd& d);

 private:
  int n_ = 0, lower_ = 0, upper_ = 0;
  Eigen::MatrixXd diags_;
};

/// LU of (P - sI) for P with zero odd off-diagonals and bandwidth 2. The two
/// parity chains are tridiagonal; factored by Thomas elimination without pivoting.
class EvenOddSolver {
 public:
  EvenOddSolver(const BandedMatrix& P, double shift);
  void solve(Eigen::VectorXd& x) const;
  void solve_left(Eigen::Ref<Eigen::MatrixXd> X) const;   // X <- (P - sI)^{-1} X
  void solve_right(Eigen::Ref<Eigen::MatrixXd> X) const;  // X <- X (P - sI)^{-1}

 private:
  int n_;
  Eigen::VectorXd d_, l_, u_;  // pivots, multipliers (row i vs i-2), superdiagonal (i, i+2)
};

Eigen::VectorXd solve_penta_evenodd(const BandedMatrix& P, double shift, const Eigen::VectorXd& rhs);

/// Banded LU with partial pivoting (LAPACK gbtrf/gbtrs).
class BandedLU {
 public:
  explicit BandedLU(const BandedMatrix& B);
  void solve_left(Eigen::MatrixXd& X) const;   // X <- B^{-1} X
  void solve_right(Eigen::MatrixXd& X) const;  // X <- X B^{-1}

 private:
  int n_, kl_, ku_;
  std::vector<double> ab_;
  std::vector<int> ipiv_;
};

Eigen::VectorXd solve_banded(const BandedMatrix& B, const Eigen::VectorXd& rhs);

struct Interval {
  double lo, hi;
};

// Hull of the Gershgorin discs of S^{-1} M S, S = diag(scaling).
Interval gershgorin_intervals(const BandedMatrix& M, const Eigen::VectorXd& scaling);

/// Operator handles for A X - X B = F.
struct SylvesterOperators {
  std::function<void(const Eigen::MatrixXd&, Eigen::MatrixXd&)> apply_A;  // out = A X
  std::function<void(const Eigen::MatrixXd&, Eigen::MatrixXd&)> apply_B;  // out = X B
  std::function<void(double, Eigen::MatrixXd&)> solve_A_shifted;          // R <- (A - sI)^{-1} R
  std::function<void(double, Eigen::MatrixXd&)> solve_B_shifted;          // R <- R (B - sI)^{-1}
};

struct SylvesterProblem {
  SylvesterOperators ops;
  Eigen::MatrixXd F;
  SpectralIntervals iv;
};

// Fixed-J ADI: X_{j+1/2}(B - p_j) = F - (A - p_j)X_j, (A - q_j)X_{j+1} = F - X_{j+1/2}(B - q_j).
Eigen::MatrixXd adi_solve(const SylvesterProblem& prob, const ShiftSchedule& schedule);
Eigen::MatrixXd adi_solve(const SylvesterProblem& prob, double eps);

// ||A X - X B - F||_F / ||F||_F (0 when F = 0 and the defect is 0).
double sylvester_residual(const SylvesterOperators& ops, const Eigen::MatrixXd& X,
                          const Eigen::MatrixXd& F);

/// Sum_i L_i X R_i = F by dense LU of sum_i kron(R_i^T, L_i). Small sizes only.
Eigen::MatrixXd kron_sum_dense_solve(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>& terms,
    const Eigen::MatrixXd& F);
// Same operator, several right-hand sides sharing one factorization.
std::vector<Eigen::MatrixXd> kron_sum_dense_solve(
    const std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>>& terms,
    const std::vector<Eigen::MatrixXd>& Fs);

// A X - X B = F by dense Kronecker LU; dimensions limited to 128.
Eigen::MatrixXd sylvester_dense_oracle(const Eigen::MatrixXd& A, const Eigen::MatrixXd& B,
                                       const Eigen::MatrixXd& F);

}  // namespace spoisson
