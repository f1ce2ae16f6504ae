#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <string>
#include <vector>

#include "spectral_poisson/linalg.hpp"
#include "spectral_poisson/report.hpp"

namespace spoisson {

/// Samples of f on the half grid r in (0, 1] (the positive Chebyshev points of an n-point
/// grid on [-1, 1]), theta uniform on [-pi, pi) and z Chebyshev on [-1, 1]; n even.
/// slices[t](i, j) = f(r_half(i), theta(t), z(j)).
struct CylinderSamples {
  int n = 0;
  std::vector<Eigen::MatrixXd> slices;
};

Eigen::VectorXd cylinder_r_half(int n);
CylinderSamples sample_cylinder(const std::function<double(double, double, double)>& f, int n);

// Doubled samples on the full r grid: f~(r, theta, z) = f(-r, theta + pi, z) for r < 0.
std::vector<Eigen::MatrixXd> dfs_double(const CylinderSamples& s);

// Chebyshev(r) x Chebyshev(z) coefficients of each Fourier mode of the doubled samples;
// entry k + n/2 holds mode k = -n/2 .. n/2-1.
std::vector<Eigen::MatrixXcd> cylinder_mode_coeffs(const std::vector<Eigen::MatrixXd>& doubled);

/// omega_k in Ct(r) x Ct(z); u~_k = (1-r^2)(1-z^2) r^min(|k|,2) omega_k.
struct ModeSolution {
  int k = 0;
  Eigen::MatrixXcd omega;
  int iterations = 0;   // ADI iterations (0 for the direct cases)
  double residual = 0;  // relative residual of the mode equation
  bool dense_fallback = false;

  int power() const { return std::min(std::abs(k), 2); }
  std::complex<double> value(double r, double z) const;
  // Chebyshev(r) x Chebyshev(z) coefficients of u~_k, size (n+4) x (n+2).
  Eigen::MatrixXcd to_chebyshev() const;
};

/// Banded mode operators. Case 1 (|k| >= 2): L Y M + N Y D = F with L = L1 - k^2 M,
/// N = M_{r^2} M. Case 2 (|k| = 1): L3 Y M + M_r M Y D = F. Case 3: L4 Y M + M_{r^2} M Y D = M_{r^2} F.
struct ModeOperators {
  BandedMatrix L, N;
  BandedMatrix M;     // multiplication by 1 - z^2 (and 1 - r^2)
  Eigen::VectorXd D;  // diagonal z operator
  BandedMatrix rhs_weight;  // identity for |k| >= 1, M_{r^2} for k = 0
};
ModeOperators mode_operators(int n, int k);

// All three take Ct x Ct coefficients F_k (rows r, columns z); wrong-parity rows are ignored.
ModeSolution solve_mode_case1(int k, const Eigen::MatrixXcd& F, double eps,
                              std::vector<std::string>* warnings = nullptr);
ModeSolution solve_mode_case2(int k, const Eigen::MatrixXcd& F);
ModeSolution solve_mode_case3(const Eigen::MatrixXcd& F);
ModeSolution solve_mode(int k, const Eigen::MatrixXcd& F, double eps, std::vector<std::string>* warnings = nullptr);

// Relative residual of the mode equation for omega; scale = |L Y M| + |N Y D| + |rhs|.
double mode_residual(int k, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& omega);

struct CylinderSolution {
  int n = 0;
  std::vector<ModeSolution> modes;  // index k + n/2

  // Doubled coordinates: r in [-1, 1], any theta.
  double evaluate(double r, double theta, double z) const;
  double evaluate_cartesian(double x, double y, double z) const;
};

struct CylinderOptions {
  int threads = 1;
};

CylinderSolution solve_cylinder(const std::vector<Eigen::MatrixXcd>& mode_coeffs, double eps,
                                SolveReport* report = nullptr, const CylinderOptions& opts = {});
CylinderSolution solve_cylinder(const CylinderSamples& samples, double eps, SolveReport* report = nullptr,
                                const CylinderOptions& opts = {});

}  // namespace spoisson
