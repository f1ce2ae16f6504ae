#pragma once

#include <Eigen/Dense>

#include "spectral_poisson/basis.hpp"
#include "spectral_poisson/linalg.hpp"
#include "spectral_poisson/report.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace spoisson {

struct Rectangle {
  double x0 = -1.0, x1 = 1.0, y0 = -1.0, y1 = 1.0;
};

void check_rectangle(const Rectangle& r);

/// Discretization of u_xx + u_yy = f in the weighted basis (1-y^2)(1-x^2) Ct_i(y) Ct_j(x):
/// M X D + D X M = F, rewritten as A X - X B = D^-1 F D^-1 with A = D^-1 M, B = -M D^-1,
/// then symmetrized by D_s: A_sym = D_s^-1 A D_s.
struct SquareDiscretization {
  int n = 0;
  Eigen::VectorXd D;
  BandedMatrix M;
  BandedMatrix A;
  Eigen::VectorXd Ds;
  BandedMatrix A_sym;
  double delta = 0.0;  // 1/(30 n^4)
  SpectralIntervals iv;
};

SquareDiscretization assemble_square(int n);

// Gershgorin hull of A_sym after the similarity S_ii = (index within its parity block) + 1.
Interval square_gershgorin(const SquareDiscretization& disc);
// Smallest and largest eigenvalue of A_sym from its two tridiagonal parity chains.
Interval square_eigen_range(const SquareDiscretization& disc);

// Chebyshev-Chebyshev coefficients of f -> Ct-Ct coefficients.
CoeffMatrix2D rhs_to_C32(const CoeffMatrix2D& f_cheb);

// Zero-pad or truncate a coefficient matrix to n x n.
Eigen::MatrixXd resize_coeffs(const Eigen::MatrixXd& C, int n);

struct SquareOptions {
  int n = 0;                                   // 0: use the size of the right-hand side
  int iterations = 0;                          // 0: derive from eps and the count formula
  CountFormula count = CountFormula::General;  // General uses the exact gamma of the intervals
};

struct SquareSolution {
  Eigen::MatrixXd X;  // weighted Ct-Ct coefficients on the reference square
  Rectangle domain;

  double evaluate(double x, double y) const;
  Eigen::VectorXd evaluate(const Eigen::MatrixX2d& points) const;
  // Chebyshev coefficients of u on the reference square, size (n+2) x (n+2).
  CoeffMatrix2D to_chebyshev() const;
};

// Core: alpha_x A X - beta_y X B = D^-1 F D^-1 for F in Ct-Ct coefficients.
SquareSolution solve_square_ultra(const SquareDiscretization& disc, const Eigen::MatrixXd& F_ultra,
                                  const Rectangle& domain, double eps, const SquareOptions& opts,
                                  SolveReport* report = nullptr);

SquareSolution solve_square(const CoeffMatrix2D& f_cheb, double eps, SolveReport* report = nullptr,
                            const SquareOptions& opts = {});
SquareSolution solve_rectangle(const CoeffMatrix2D& f_cheb, const Rectangle& domain, double eps,
                               SolveReport* report = nullptr, const SquareOptions& opts = {});

/// Dirichlet data as Chebyshev coefficients in the edge coordinate (reference [-1, 1]):
/// left/right are functions of y at x = x0/x1, bottom/top functions of x at y = y0/y1.
struct EdgeData {
  Eigen::VectorXd left, right, bottom, top;
};

struct DirichletSolution {
  SquareSolution interior;  // zero boundary part
  Eigen::MatrixXd lift;     // Chebyshev coefficients of the boundary lift on the reference square

  double evaluate(double x, double y) const;
  CoeffMatrix2D to_chebyshev() const;
};

// Largest defect between adjacent edge functions at the four corners.
double corner_defect(const EdgeData& g);

DirichletSolution solve_dirichlet(const CoeffMatrix2D& f_cheb, const EdgeData& g, double eps,
                                  const Rectangle& domain = {}, SolveReport* report = nullptr,
                                  const SquareOptions& opts = {});

}  // namespace spoisson
