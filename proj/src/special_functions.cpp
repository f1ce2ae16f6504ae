#include "spectral_poisson/special_functions.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "spectral_poisson/errors.hpp"

namespace spoisson {

namespace {

constexpr double pi = std::numbers::pi;

// Below this complement the AGM loses accuracy to 1 - k^2 cancellation in callers;
// switch to the logarithmic asymptote (k^2 > 1 - 1e-12).
constexpr double kAsymptoteComplement = 1e-6;

}  // namespace

Modulus Modulus::from_k(double k) {
  if (!(k >= 0.0 && k < 1.0))
    throw DomainError("elliptic modulus must satisfy 0 <= k < 1, got " + std::to_string(k));
  return Modulus(k, std::sqrt((1.0 - k) * (1.0 + k)));
}

Modulus Modulus::from_complement(double kc) {
  if (!(kc > 0.0 && kc <= 1.0))
    throw DomainError("complementary modulus must satisfy 0 < k' <= 1, got " + std::to_string(kc));
  return Modulus(std::sqrt((1.0 - kc) * (1.0 + kc)), kc);
}

double ellipk(const Modulus& m) {
  const double kc = m.complement();
  if (kc < kAsymptoteComplement) {
    // K = L + (kc^2/4)(L - 1) + O(kc^4 L), L = log(4/kc)
    const double L = std::log(4.0 / kc);
    return L + 0.25 * kc * kc * (L - 1.0);
  }
  double a = 1.0, b = kc;
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return pi / (a + b);
}

double ellipk(double k) { return ellipk(Modulus::from_k(k)); }

namespace {

// Descending AGM (Abramowitz & Stegun 16.4) for 0 <= u <= K/2.
JacobiTriple jacobi_core(double u, const Modulus& m) {
  const double k = m.k();
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  constexpr int kMax = 40;
  double a[kMax + 1], c[kMax + 1];
  a[0] = 1.0;
  double b = m.complement();
  c[0] = k;
  int N = 0;
  while (std::abs(c[N]) > 1e-17 * a[N] && N < kMax) {
    a[N + 1] = 0.5 * (a[N] + b);
    c[N + 1] = 0.25 * c[N] * c[N] / a[N + 1];
    b = std::sqrt(a[N] * b);
    ++N;
  }
  double phi = std::ldexp(a[N] * u, N);
  double phi_prev = phi;
  for (int i = N; i >= 1; --i) {
    phi_prev = phi;
    phi = 0.5 * (phi + std::asin(c[i] / a[i] * std::sin(phi)));
  }
  // phi is phi_0, phi_prev is phi_1
  const double sn = std::sin(phi), cn = std::cos(phi);
  const double dn = N >= 1 ? cn / std::cos(phi_prev - phi) : 1.0;
  return {sn, cn, dn};
}

}  // namespace

JacobiTriple jacobi_elliptic(double z, const Modulus& m) {
  if (!std::isfinite(z)) throw DomainError("jacobi_elliptic: non-finite argument");
  const double K = ellipk(m);
  double s_sign = 1.0, c_sign = 1.0;
  double u = z;
  if (u < 0.0) {
    u = -u;
    s_sign = -1.0;
  }
  // period 4K for sn, cn; reduce into [0, 2K) with sign flips
  u = std::fmod(u, 4.0 * K);
  if (u >= 2.0 * K) {
    u -= 2.0 * K;
    s_sign = -s_sign;
    c_sign = -c_sign;
  }
  // sn(2K - u) = sn(u), cn(2K - u) = -cn(u)
  if (u > K) {
    u = 2.0 * K - u;
    c_sign = -c_sign;
  }
  JacobiTriple t;
  if (u <= 0.5 * K) {
    t = jacobi_core(u, m);
  } else {
    const JacobiTriple r = jacobi_core(K - u, m);
    const double kc = m.complement();
    t = {r.cn / r.dn, kc * r.sn / r.dn, kc / r.dn};
  }
  return {s_sign * t.sn, c_sign * t.cn, t.dn};
}

double jacobi_dn(double z, const Modulus& m) { return jacobi_elliptic(z, m).dn; }

double jacobi_dn(double z, double k) { return jacobi_dn(z, Modulus::from_k(k)); }

double grotzsch_mu(double lambda) {
  if (!(lambda > 0.0 && lambda < 1.0))
    throw DomainError("grotzsch_mu requires 0 < lambda < 1, got " + std::to_string(lambda));
  return 0.5 * pi * ellipk(Modulus::from_complement(lambda)) / ellipk(Modulus::from_k(lambda));
}

ZolotarevBound zolotarev_bound(int J, double gamma) {
  if (!(gamma >= 1.0) || !std::isfinite(gamma))
    throw DomainError("zolotarev_bound requires gamma >= 1, got " + std::to_string(gamma));
  if (J < 0) throw DomainError("zolotarev_bound requires J >= 0");
  if (J == 0) return {4.0, 4.0};
  const double relaxed = 4.0 * std::exp(-2.0 * J * pi * pi / (2.0 * std::log(16.0 * gamma)));
  double sharp = 0.0;  // gamma = 1: point spectra, Z_J = 0
  if (gamma > 1.0) {
    const double mu = grotzsch_mu(1.0 / std::sqrt(gamma));
    sharp = 4.0 * std::exp(-2.0 * J * pi * pi / (4.0 * mu));
  }
  return {sharp, relaxed};
}

}  // namespace spoisson
