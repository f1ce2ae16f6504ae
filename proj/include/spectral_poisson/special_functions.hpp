#pragma once

namespace spoisson {

/// Elliptic modulus k together with its complement k' = sqrt(1 - k^2).
/// Both are stored so that k -> 1 does not lose k' to cancellation.
class Modulus {
 public:
  Modulus() = default;
  static Modulus from_k(double k);
  static Modulus from_complement(double kc);

  double k() const { return k_; }
  double complement() const { return kc_; }
  double parameter() const { return k_ * k_; }  // m = k^2

 private:
  Modulus(double k, double kc) : k_(k), kc_(kc) {}
  double k_ = 0.0;
  double kc_ = 1.0;
};

// Complete elliptic integral of the first kind K(k), by the AGM.
double ellipk(const Modulus& k);
double ellipk(double k);

struct JacobiTriple {
  double sn, cn, dn;
};

// sn, cn, dn at real argument z. Accurate for z in [0, K] via reflection about K/2.
JacobiTriple jacobi_elliptic(double z, const Modulus& k);
double jacobi_dn(double z, const Modulus& k);
double jacobi_dn(double z, double k);

// Groetzsch ring function mu(lambda) = (pi/2) K(sqrt(1 - lambda^2)) / K(lambda).
double grotzsch_mu(double lambda);

struct ZolotarevBound {
  double sharp;
  double relaxed;
};

// Upper bounds on the Zolotarev number Z_J for intervals with cross ratio gamma.
ZolotarevBound zolotarev_bound(int J, double gamma);

}  // namespace spoisson
