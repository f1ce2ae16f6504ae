#include "spectral_poisson/basis.hpp"

#include <cmath>
#include <numbers>
#include <vector>

#include "spectral_poisson/errors.hpp"

namespace spoisson {

namespace {

constexpr double pi = std::numbers::pi;

void require_n(int n, const char* who) {
  if (n < 1) throw PreconditionError(std::string(who) + ": n must be >= 1");
}

void check_unit(double x, const char* who) {
  if (!(x >= -1.0 && x <= 1.0))
    throw DomainError(std::string(who) + ": x = " + std::to_string(x) + " outside [-1, 1]");
}

// Lambda(k/2) for k = 0..kmax, Lambda(z) = Gamma(z+1/2)/Gamma(z+1).
std::vector<double> lambda_table(int kmax) {
  std::vector<double> lam(std::max(kmax + 1, 2));
  lam[0] = std::sqrt(pi);
  lam[1] = 2.0 / std::sqrt(pi);
  for (size_t k = 2; k < lam.size(); ++k) {
    const double z = 0.5 * (k - 2);
    lam[k] = lam[k - 2] * (z + 0.5) / (z + 1.0);
  }
  return lam;
}

// In-place Legendre -> Ct along the row index of X.
void leg_to_ultra_rows(Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  for (int m = 0; m < n; ++m) {
    X.row(m) /= (2.0 * m + 1.0);
    if (m + 2 < n) X.row(m) -= X.row(m + 2) / (2.0 * m + 5.0);
    X.row(m) /= ultra_scale(m);
  }
}

void ultra_to_leg_rows(Eigen::MatrixXd& X) {
  const int n = static_cast<int>(X.rows());
  for (int m = n - 1; m >= 0; --m) {
    X.row(m) *= ultra_scale(m);
    if (m + 2 < n) X.row(m) += X.row(m + 2) / (2.0 * m + 5.0);
    X.row(m) *= (2.0 * m + 1.0);
  }
}

}  // namespace

std::string to_string(BasisTag tag) {
  switch (tag) {
    case BasisTag::ChebyshevT: return "chebyshev";
    case BasisTag::LegendreP: return "legendre";
    case BasisTag::UltraC32: return "ultraC32";
    case BasisTag::FourierComplex: return "fourier";
  }
  return "unknown";
}

BasisTag parse_basis_tag(std::string_view s) {
  if (s == "chebyshev") return BasisTag::ChebyshevT;
  if (s == "legendre") return BasisTag::LegendreP;
  if (s == "ultraC32") return BasisTag::UltraC32;
  if (s == "fourier") return BasisTag::FourierComplex;
  throw PreconditionError("unknown basis tag '" + std::string(s) + "'");
}

double ultra_scale(int j) { return std::sqrt((j + 1.5) / ((j + 1.0) * (j + 2.0))); }

double ultra_eval(int j, double x) {
  if (j < 0) throw PreconditionError("ultra_eval: negative degree");
  check_unit(x, "ultra_eval");
  double c0 = 1.0, c1 = 3.0 * x;
  if (j == 0) return ultra_scale(0);
  for (int k = 1; k < j; ++k) {
    const double c2 = ((2.0 * k + 3.0) * x * c1 - (k + 2.0) * c0) / (k + 1.0);
    c0 = c1;
    c1 = c2;
  }
  return ultra_scale(j) * c1;
}

Eigen::VectorXd ultra_eval_all(int n, double x) {
  check_unit(x, "ultra_eval_all");
  Eigen::VectorXd v(std::max(n, 0));
  double c0 = 1.0, c1 = 3.0 * x;  // C_k, C_{k+1}
  for (int k = 0; k < n; ++k) {
    v(k) = ultra_scale(k) * c0;
    const double c2 = ((2.0 * k + 5.0) * x * c1 - (k + 3.0) * c0) / (k + 2.0);
    c0 = c1;
    c1 = c2;
  }
  return v;
}

double ultra_series(const Eigen::VectorXd& c, double x) {
  check_unit(x, "ultra_series");
  // phi_{k+1} = alpha_k phi_k + beta_k phi_{k-1}, alpha_k = (2k+3)x/(k+1), beta_k = -(k+2)/(k+1)
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 0; --k) {
    const double alpha = (2.0 * k + 3.0) * x / (k + 1.0);
    const double beta = -(k + 3.0) / (k + 2.0);
    const double b0 = c(k) * ultra_scale(static_cast<int>(k)) + alpha * b1 + beta * b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

Eigen::VectorXd build_D(int n) {
  require_n(n, "build_D");
  Eigen::VectorXd d(n);
  for (int j = 0; j < n; ++j) d(j) = -(j + 1.0) * (j + 2.0);
  return d;
}

BandedMatrix build_M(int n) {
  require_n(n, "build_M");
  BandedMatrix M(n, 2, 2);
  for (int j = 0; j < n; ++j) {
    M.at(j, j) = 2.0 * (j + 1.0) * (j + 2.0) / ((2.0 * j + 1.0) * (2.0 * j + 5.0));
    if (j + 2 < n) {
      const double v = -std::sqrt((j + 1.0) * (j + 2.0) * (j + 3.0) * (j + 4.0) * (2.0 * j + 3.0) /
                                  (2.0 * j + 7.0)) /
                       ((2.0 * j + 3.0) * (2.0 * j + 5.0));
      M.at(j, j + 2) = v;
      M.at(j + 2, j) = v;
    }
  }
  return M;
}

BandedMatrix build_Mr(int n) {
  require_n(n, "build_Mr");
  BandedMatrix R(n, 1, 1);
  for (int j = 0; j + 1 < n; ++j) {
    const double a = std::sqrt((j + 1.0) * (j + 3.0) / ((2.0 * j + 3.0) * (2.0 * j + 5.0)));
    R.at(j, j + 1) = a;
    R.at(j + 1, j) = a;
  }
  return R;
}

BandedMatrix build_M1mr2_D1(int n) {
  require_n(n, "build_M1mr2_D1");
  BandedMatrix T(n, 1, 1);
  for (int j = 0; j < n; ++j) {
    const double sj = ultra_scale(j);
    if (j + 1 < n) T.at(j + 1, j) = -sj * j * (j + 1.0) / ((2.0 * j + 3.0) * ultra_scale(j + 1));
    if (j >= 1) T.at(j - 1, j) = sj * (j + 2.0) * (j + 3.0) / ((2.0 * j + 3.0) * ultra_scale(j - 1));
  }
  return T;
}

Eigen::VectorXd cheb_points(int n) {
  require_n(n, "cheb_points");
  Eigen::VectorXd x(n);
  if (n == 1) {
    x(0) = 0.0;
    return x;
  }
  for (int j = 0; j < n; ++j) x(j) = -std::cos(pi * j / (n - 1));
  // exact symmetry and endpoints
  for (int j = 0; j < n / 2; ++j) x(n - 1 - j) = -x(j);
  if (n % 2 == 1) x(n / 2) = 0.0;
  return x;
}

double cheb_series(const Eigen::VectorXd& c, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (Eigen::Index k = c.size() - 1; k >= 1; --k) {
    const double b0 = c(k) + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return (c.size() ? c(0) : 0.0) + x * b1 - b2;
}

Eigen::VectorXd cheb_derivative(const Eigen::VectorXd& c) {
  const Eigen::Index n = c.size();
  Eigen::VectorXd d = Eigen::VectorXd::Zero(n);
  if (n < 2) return d;
  double next = 0.0, next2 = 0.0;  // d_{k}, d_{k+1}
  for (Eigen::Index k = n - 1; k >= 1; --k) {
    const double v = next2 + 2.0 * k * c(k);  // d_{k-1}
    d(k - 1) = v;
    next2 = next;
    next = v;
  }
  d(0) *= 0.5;
  return d;
}

Eigen::MatrixXd cheb_vals2coeffs_matrix(int n) {
  require_n(n, "cheb_vals2coeffs_matrix");
  if (n == 1) return Eigen::MatrixXd::Ones(1, 1);
  const int N = n - 1;
  Eigen::MatrixXd T(n, n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j) {
      const double w = (j == 0 || j == N) ? 0.5 : 1.0;
      const double sign = (k % 2) ? -1.0 : 1.0;
      T(k, j) = 2.0 / N * w * sign * std::cos(pi * ((static_cast<long>(k) * j) % (2 * N)) / N);
    }
  T.row(0) *= 0.5;
  T.row(N) *= 0.5;
  return T;
}

Eigen::MatrixXd cheb_coeffs2vals_matrix(int n) {
  require_n(n, "cheb_coeffs2vals_matrix");
  if (n == 1) return Eigen::MatrixXd::Ones(1, 1);
  const int N = n - 1;
  Eigen::MatrixXd V(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      const double sign = (k % 2) ? -1.0 : 1.0;
      V(j, k) = sign * std::cos(pi * ((static_cast<long>(k) * j) % (2 * N)) / N);
    }
  return V;
}

Eigen::MatrixXd cheb_transform_2d(const Eigen::MatrixXd& values) {
  if (values.rows() != values.cols() || values.rows() == 0)
    throw PreconditionError("cheb_transform_2d: samples must be a nonempty square grid");
  const Eigen::MatrixXd T = cheb_vals2coeffs_matrix(static_cast<int>(values.rows()));
  return T * values * T.transpose();
}

Eigen::MatrixXd cheb_inverse_transform_2d(const Eigen::MatrixXd& coeffs) {
  if (coeffs.rows() != coeffs.cols() || coeffs.rows() == 0)
    throw PreconditionError("cheb_inverse_transform_2d: coefficients must be a nonempty square matrix");
  const Eigen::MatrixXd V = cheb_coeffs2vals_matrix(static_cast<int>(coeffs.rows()));
  return V * coeffs * V.transpose();
}

double cheb_eval_2d(const Eigen::MatrixXd& coeffs, double x, double y) {
  Eigen::VectorXd col(coeffs.rows());
  for (Eigen::Index i = 0; i < coeffs.rows(); ++i) col(i) = cheb_series(coeffs.row(i).transpose(), x);
  return cheb_series(col, y);
}

Eigen::MatrixXd leg2cheb_matrix(int n) {
  require_n(n, "leg2cheb_matrix");
  const std::vector<double> lam = lambda_table(2 * n);
  Eigen::MatrixXd L = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < n; ++m)
    for (int j = m % 2; j <= m; j += 2)
      L(j, m) = (j == 0 ? 1.0 : 2.0) / pi * lam[m - j] * lam[m + j];
  return L;
}

Eigen::MatrixXd cheb2leg_matrix(int n) {
  require_n(n, "cheb2leg_matrix");
  const std::vector<double> lam = lambda_table(2 * n);
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(n, n);
  C(0, 0) = 1.0;
  for (int j = 1; j < n; ++j) {
    C(j, j) = std::sqrt(pi) / (2.0 * lam[2 * j]);
    for (int m = j % 2; m < j; m += 2)
      C(m, j) = -j * (m + 0.5) / ((j + m + 1.0) * (j - m)) * lam[j - m - 2] * lam[j + m - 1];
  }
  return C;
}

void convert_columns(Eigen::MatrixXd& X, BasisTag from, BasisTag to) {
  if (from == to) return;
  if (from == BasisTag::FourierComplex || to == BasisTag::FourierComplex)
    throw PreconditionError("convert: unsupported basis pair " + to_string(from) + " -> " + to_string(to));
  const int n = static_cast<int>(X.rows());
  if (n == 0) return;
  // route through Legendre
  if (from == BasisTag::ChebyshevT)
    X = cheb2leg_matrix(n).triangularView<Eigen::Upper>() * X;
  else if (from == BasisTag::UltraC32)
    ultra_to_leg_rows(X);
  if (to == BasisTag::ChebyshevT)
    X = leg2cheb_matrix(n).triangularView<Eigen::Upper>() * X;
  else if (to == BasisTag::UltraC32)
    leg_to_ultra_rows(X);
}

void convert_rows(Eigen::MatrixXd& X, BasisTag from, BasisTag to) {
  Eigen::MatrixXd T = X.transpose();
  convert_columns(T, from, to);
  X = T.transpose();
}

Eigen::VectorXd convert(const Eigen::VectorXd& coeffs, BasisTag from, BasisTag to) {
  Eigen::MatrixXd X = coeffs;
  convert_columns(X, from, to);
  return X.col(0);
}

CoeffMatrix2D convert(const CoeffMatrix2D& X, BasisTag to_x, BasisTag to_y) {
  CoeffMatrix2D out = X;
  convert_columns(out.values, X.basis_y, to_y);
  convert_rows(out.values, X.basis_x, to_x);
  out.basis_x = to_x;
  out.basis_y = to_y;
  return out;
}

Eigen::VectorXd fourier_points(int n) {
  require_n(n, "fourier_points");
  Eigen::VectorXd t(n);
  for (int j = 0; j < n; ++j) t(j) = -pi + 2.0 * pi * j / n;
  return t;
}

Eigen::VectorXcd fourier_vals2coeffs(const Eigen::VectorXd& values) {
  const int n = static_cast<int>(values.size());
  if (n < 2 || n % 2) throw PreconditionError("fourier_vals2coeffs: need an even number of samples");
  const Eigen::VectorXd theta = fourier_points(n);
  Eigen::VectorXcd F(n);
  for (int k = -n / 2; k < n / 2; ++k) {
    std::complex<double> s = 0.0;
    for (int j = 0; j < n; ++j) s += values(j) * std::polar(1.0, -k * theta(j));
    F(k + n / 2) = s / static_cast<double>(n);
  }
  return F;
}

double fourier_eval(const Eigen::VectorXcd& coeffs, double theta) {
  const int n = static_cast<int>(coeffs.size());
  double s = 0.0;
  for (int k = -n / 2; k < n - n / 2; ++k) s += (coeffs(k + n / 2) * std::polar(1.0, k * theta)).real();
  return s;
}

}  // namespace spoisson
