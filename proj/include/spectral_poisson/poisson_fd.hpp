#pragma once

#include <Eigen/Dense>

#include "spectral_poisson/linalg.hpp"
#include "spectral_poisson/report.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace spoisson {

/// Five-point discretization of u_xx + u_yy = f on [-1,1]^2, h = 2/n, zero Dirichlet data:
/// K X + X K^T = F with X_jk = u(-1 + k h, -1 + j h) over interior points.
struct FDProblem {
  int n = 0;
  Eigen::MatrixXd F;  // (n-1) x (n-1) interior values of f
};

// Tridiagonal second-difference matrix: -2/h^2 on the diagonal, 1/h^2 off it.
BandedMatrix build_K(int n);

// Closed-form eigenvalues -(4/h^2) sin^2(pi k / (2n)), k = 1..n-1.
Eigen::VectorXd fd_eigenvalues(int n);

// Orthogonal type-I sine transform matrix S_jk = sqrt(2/n) sin(pi j k / n); S = S^T = S^-1.
Eigen::MatrixXd dst1_matrix(int n);

// Intervals [-n^2, -1] and [1, n^2] containing the spectra of K and -K.
SpectralIntervals fd_intervals(int n);

struct FDOptions {
  int iterations = 0;                          // 0: derive from eps
  CountFormula count = CountFormula::General;  // FiniteDifference selects the log(2n) count
};

Eigen::MatrixXd solve_fd_adi(const FDProblem& prob, double eps, SolveReport* report = nullptr,
                             const FDOptions& opts = {});
Eigen::MatrixXd solve_fd_dst(const FDProblem& prob, SolveReport* report = nullptr);

// ||K X + X K - F||_F / ||F||_F
double fd_residual(const FDProblem& prob, const Eigen::MatrixXd& X);

// One ADI double sweep (both shifted solves) at shifts (p, q); exposed for timing.
void fd_adi_sweep(int n, double p, double q, const Eigen::MatrixXd& F, Eigen::MatrixXd& X);

}  // namespace spoisson
