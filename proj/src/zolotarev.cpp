#include "spectral_poisson/zolotarev.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/special_functions.hpp"

namespace spoisson {

namespace {

constexpr double pi = std::numbers::pi;

using Mat2 = std::array<double, 4>;  // [[m0, m1], [m2, m3]]

Mat2 mul(const Mat2& x, const Mat2& y) {
  return {x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3],
          x[2] * y[0] + x[3] * y[2], x[2] * y[1] + x[3] * y[3]};
}

// Moebius map sending z1 -> 0, z2 -> 1, z3 -> infinity.
Mat2 to_standard(double z1, double z2, double z3) {
  return {z2 - z3, -z1 * (z2 - z3), z2 - z1, -z3 * (z2 - z1)};
}

Mat2 adjugate(const Mat2& m) { return {m[3], -m[1], -m[2], m[0]}; }

}  // namespace

void check_intervals(const SpectralIntervals& iv) {
  const bool finite = std::isfinite(iv.a) && std::isfinite(iv.b) && std::isfinite(iv.c) &&
                      std::isfinite(iv.d);
  if (!finite || !(iv.a <= iv.b && iv.b < iv.c && iv.c <= iv.d)) {
    std::ostringstream os;
    os << "spectral intervals must satisfy a <= b < c <= d, got [" << iv.a << ", " << iv.b
       << "] and [" << iv.c << ", " << iv.d << "]";
    throw PreconditionError(os.str());
  }
}

double cross_ratio_gamma(const SpectralIntervals& iv) {
  check_intervals(iv);
  const double g = std::abs(iv.c - iv.a) * std::abs(iv.d - iv.b) /
                   (std::abs(iv.c - iv.b) * std::abs(iv.d - iv.a));
  return std::max(g, 1.0);
}

double alpha_from_gamma(double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma))
    throw DomainError("alpha_from_gamma requires gamma >= 1, got " + std::to_string(gamma));
  return -1.0 + 2.0 * gamma + 2.0 * std::sqrt(gamma * (gamma - 1.0));
}

MobiusMap mobius_map(const SpectralIntervals& iv) {
  check_intervals(iv);
  if (!(iv.a < iv.b && iv.c < iv.d))
    throw PreconditionError("mobius_map: degenerate interval (a == b or c == d)");
  const double alpha = alpha_from_gamma(cross_ratio_gamma(iv));
  const Mat2 t = mul(adjugate(to_standard(iv.a, iv.b, iv.c)), to_standard(-alpha, -1.0, 1.0));
  double scale = 0.0;
  for (double v : t) scale = std::max(scale, std::abs(v));
  MobiusMap m{};
  for (int i = 0; i < 4; ++i) m.w[i] = t[i] / scale;
  m.alpha = alpha;
  return m;
}

CountFormula parse_count_formula(std::string_view name) {
  if (name == "general") return CountFormula::General;
  if (name == "fd") return CountFormula::FiniteDifference;
  if (name == "square") return CountFormula::SquareSpectral;
  throw PreconditionError("unknown iteration-count formula '" + std::string(name) +
                          "' (expected general, fd or square)");
}

int iteration_count(CountFormula formula, double parameter, double eps) {
  if (!(eps > 0.0 && eps <= 1.0)) throw DomainError("iteration_count requires 0 < eps <= 1");
  double x = 0.0;
  switch (formula) {
    case CountFormula::General:
      if (!(parameter >= 1.0)) throw DomainError("general count requires gamma >= 1");
      x = std::log(16.0 * parameter) * std::log(4.0 / eps) / (pi * pi);
      break;
    case CountFormula::FiniteDifference:
      if (!(parameter >= 1.0)) throw DomainError("fd count requires n >= 1");
      x = std::log(2.0 * parameter) * std::log(4.0 / eps) / (pi * pi);
      break;
    case CountFormula::SquareSpectral:
      if (!(parameter >= 1.0)) throw DomainError("square count requires n >= 1");
      x = std::log(120.0 * std::pow(parameter, 4)) * std::log(1.0 / eps) / (2.0 * pi * pi);
      break;
    default:
      throw PreconditionError("unknown iteration-count formula");
  }
  return std::max(1, static_cast<int>(std::ceil(x)));
}

ShiftSchedule adi_shifts_for(const SpectralIntervals& iv, int J) {
  check_intervals(iv);
  if (J < 1) throw DomainError("adi_shifts_for requires J >= 1");
  const double gamma = cross_ratio_gamma(iv);
  ShiftSchedule s;
  s.p.resize(J);
  s.q.resize(J);
  const double alpha = alpha_from_gamma(gamma);
  if (alpha <= 1.0) {
    std::fill(s.p.begin(), s.p.end(), iv.b);
    std::fill(s.q.begin(), s.q.end(), iv.c);
    return s;
  }
  // kappa' = 1/alpha exactly, so kappa = sqrt(1 - 1/alpha^2) never cancels.
  const Modulus kappa = Modulus::from_complement(1.0 / alpha);
  const double kc = kappa.complement();
  const double K = ellipk(kappa);
  for (int j = 0; j < J; ++j) {
    const double z = (2.0 * j + 1.0) / (2.0 * J) * K;
    const JacobiTriple e = jacobi_elliptic(z, kappa);
    // Cross ratio of t = alpha dn against {-alpha, -1, 1}, with
    // 1 - dn = k^2 sn^2/(1+dn) and dn - k' = k^2 cn^2/(dn+k') so that k^2 cancels.
    const double rho = e.cn * e.cn * (1.0 + e.dn) * (1.0 + kc) /
                       (2.0 * kc * e.sn * e.sn * (e.dn + kc));
    const double R = rho * (iv.c - iv.b) / (iv.c - iv.a);
    s.p[j] = R < 1.0 ? iv.b - (iv.b - iv.a) * (R / (1.0 + R)) : iv.a + (iv.b - iv.a) / (1.0 + R);
    const double Rq = rho * (iv.c - iv.b) / (iv.d - iv.b);
    s.q[j] = Rq < 1.0 ? iv.c + (iv.d - iv.c) * (Rq / (1.0 + Rq))
                      : iv.d - (iv.d - iv.c) / (1.0 + Rq);
  }
  return s;
}

ShiftSchedule adi_shifts(const SpectralIntervals& iv, double eps) {
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("adi_shifts requires 0 < eps < 1");
  const int J = iteration_count(CountFormula::General, cross_ratio_gamma(iv), eps);
  return adi_shifts_for(iv, J);
}

}  // namespace spoisson
