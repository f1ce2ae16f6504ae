#pragma once

#include <Eigen/Dense>
#include <functional>

#include "spectral_poisson/linalg.hpp"
#include "spectral_poisson/report.hpp"

namespace spoisson {

/// Cubic coefficient tensors are stored as n x n^2 matrices: entry (i, j + n k) holds
/// the (x-index i, y-index j, z-index k) coefficient.

// Apply an n x n matrix along one dimension (0 = x, 1 = y, 2 = z) of a cubic tensor.
Eigen::MatrixXd apply_along(const BandedMatrix& P, int dim, const Eigen::MatrixXd& X);
Eigen::MatrixXd apply_along(const Eigen::MatrixXd& P, int dim, const Eigen::MatrixXd& X);

/// The three second-derivative operators after the D^-1 scaling: Dxx applies A along y and z
/// (identity in x), Dyy along x and z, Dzz along x and y.
enum class KronOp { Dxx, Dyy, Dzz };
Eigen::MatrixXd apply_kron(KronOp op, const BandedMatrix& A, const Eigen::MatrixXd& X);

// Tensor of f at Chebyshev points (x fastest) and its Chebyshev coefficients.
Eigen::MatrixXd sample_cube(const std::function<double(double, double, double)>& f, int n);
Eigen::MatrixXd cheb_coeffs_3d(const Eigen::MatrixXd& values);

struct CubeOptions {
  int max_n = 64;            // desk-scale guard
  double inner_eps = 1e-15;  // inner slice solves run to machine precision
};

struct CubeSolution {
  int n = 0;
  Eigen::MatrixXd X;  // weighted Ct x Ct x Ct coefficients

  double evaluate(double x, double y, double z) const;
  // Chebyshev coefficients of u, size (n+2) x (n+2)^2.
  Eigen::MatrixXd to_chebyshev() const;
};

// Shifted pair solve (Op + q) Z = R on the symmetrized operators, q > 0; one 2-D problem per
// slice of the identity dimension, all slices advanced together.
Eigen::MatrixXd cube_shifted_pair_solve(KronOp op, double q, const Eigen::MatrixXd& R, double eps = 1e-15);

// Core: (Dxx + Dyy + Dzz) X = (D^-1 x D^-1 x D^-1) F for Ct coefficients F.
CubeSolution solve_cube_ultra(const Eigen::MatrixXd& F_ultra, double eps, SolveReport* report = nullptr,
                              const CubeOptions& opts = {});
// From Chebyshev coefficients of f.
CubeSolution solve_cube(const Eigen::MatrixXd& f_cheb, double eps, SolveReport* report = nullptr,
                        const CubeOptions& opts = {});

}  // namespace spoisson
