#pragma once

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <string_view>

#include "spectral_poisson/linalg.hpp"

namespace spoisson {

enum class BasisTag { ChebyshevT, LegendreP, UltraC32, FourierComplex };

std::string to_string(BasisTag tag);
BasisTag parse_basis_tag(std::string_view s);

/// Coefficients X(i,j) multiply basis_i(y) * basis_j(x): rows are y, columns are x.
struct CoeffMatrix2D {
  Eigen::MatrixXd values;
  BasisTag basis_x = BasisTag::ChebyshevT;
  BasisTag basis_y = BasisTag::ChebyshevT;
};

// Normalization s_j with Ct_j = s_j C_j^(3/2), so that int Ct_j^2 (1-x^2) dx = 1.
double ultra_scale(int j);

// Normalized ultraspherical polynomial Ct_j^(3/2)(x).
double ultra_eval(int j, double x);
// Ct_0(x), ..., Ct_{n-1}(x).
Eigen::VectorXd ultra_eval_all(int n, double x);
// sum_j c_j Ct_j(x) by Clenshaw.
double ultra_series(const Eigen::VectorXd& c, double x);

// d^2/dx^2 [(1-x^2) Ct_j] = D_jj Ct_j.
Eigen::VectorXd build_D(int n);
// Multiplication by (1-x^2) in the Ct basis (symmetric, offsets 0 and +-2).
BandedMatrix build_M(int n);
// Multiplication by x in the Ct basis (symmetric tridiagonal, zero diagonal).
BandedMatrix build_Mr(int n);
// Multiplication by (1-x^2) composed with d/dx, in the Ct basis (tridiagonal).
BandedMatrix build_M1mr2_D1(int n);

// Chebyshev points of the second kind in ascending order, x_j = -cos(pi j/(n-1)).
Eigen::VectorXd cheb_points(int n);
// Sum c_k T_k(x) by Clenshaw.
double cheb_series(const Eigen::VectorXd& c, double x);
// Coefficients of the derivative of a Chebyshev series (same length, last entry 0).
Eigen::VectorXd cheb_derivative(const Eigen::VectorXd& c);
// Point values at cheb_points -> Chebyshev coefficients (explicit DCT-I matrix).
Eigen::MatrixXd cheb_vals2coeffs_matrix(int n);
Eigen::MatrixXd cheb_coeffs2vals_matrix(int n);
// Rows sampled at y points, columns at x points.
Eigen::MatrixXd cheb_transform_2d(const Eigen::MatrixXd& values);
Eigen::MatrixXd cheb_inverse_transform_2d(const Eigen::MatrixXd& coeffs);
double cheb_eval_2d(const Eigen::MatrixXd& coeffs, double x, double y);

// P_m = sum_j L2C(j,m) T_j, and its inverse.
Eigen::MatrixXd leg2cheb_matrix(int n);
Eigen::MatrixXd cheb2leg_matrix(int n);

Eigen::VectorXd convert(const Eigen::VectorXd& coeffs, BasisTag from, BasisTag to);
// Convert along the row index (each column is a coefficient vector).
void convert_columns(Eigen::MatrixXd& X, BasisTag from, BasisTag to);
// Convert along the column index (each row is a coefficient vector).
void convert_rows(Eigen::MatrixXd& X, BasisTag from, BasisTag to);
CoeffMatrix2D convert(const CoeffMatrix2D& X, BasisTag to_x, BasisTag to_y);

// Uniform periodic grid theta_j = -pi + 2 pi j / n.
Eigen::VectorXd fourier_points(int n);
// F(k + n/2) = (1/n) sum_j f_j exp(-i k theta_j), k = -n/2 .. n/2-1 (n even).
Eigen::VectorXcd fourier_vals2coeffs(const Eigen::VectorXd& values);
// Real part of sum_k F_k exp(i k theta).
double fourier_eval(const Eigen::VectorXcd& coeffs, double theta);

}  // namespace spoisson
