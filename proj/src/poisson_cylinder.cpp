#include "spectral_poisson/poisson_cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "spectral_poisson/basis.hpp"
#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/parallel.hpp"
#include "spectral_poisson/poisson_square.hpp"
#include "spectral_poisson/zolotarev.hpp"

namespace spoisson {

namespace {

constexpr double pi = std::numbers::pi;

void check_even(int n, const char* who) {
  if (n < 2 || n % 2) {
    std::ostringstream os;
    os << who << ": n must be even and >= 2 (got " << n << ")";
    throw PreconditionError(os.str());
  }
}

std::vector<int> parity_rows(int n, int parity) {
  std::vector<int> idx;
  for (int i = parity; i < n; i += 2) idx.push_back(i);
  return idx;
}

void zero_parity(Eigen::MatrixXd& X, int keep) {
  for (Eigen::Index i = 1 - keep; i < X.rows(); i += 2) X.row(i).setZero();
}

Eigen::MatrixXd take_rows(const Eigen::MatrixXd& X, const std::vector<int>& rows) {
  Eigen::MatrixXd S(static_cast<Eigen::Index>(rows.size()), X.cols());
  for (size_t i = 0; i < rows.size(); ++i) S.row(static_cast<Eigen::Index>(i)) = X.row(rows[i]);
  return S;
}

Eigen::MatrixXd submatrix(const Eigen::MatrixXd& X, const std::vector<int>& rows, const std::vector<int>& cols) {
  Eigen::MatrixXd S(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  for (size_t i = 0; i < rows.size(); ++i)
    for (size_t j = 0; j < cols.size(); ++j)
      S(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = X(rows[i], cols[j]);
  return S;
}

// r-parity of omega_k and of the equation rows (0 even, 1 odd).
int omega_parity(int k) { return std::abs(k) >= 2 ? std::abs(k) % 2 : 0; }
int rhs_parity(int k) { return std::abs(k) % 2; }

// Solve the mode equation by dense Kronecker LU on the parity-consistent subspace.
Eigen::MatrixXcd dense_mode_solve(int k, const ModeOperators& ops, const Eigen::MatrixXcd& rhs) {
  const int n = ops.L.size();
  const std::vector<int> unk = parity_rows(n, omega_parity(k)), eq = parity_rows(n, rhs_parity(k));
  const Eigen::MatrixXd Ld = ops.L.dense(), Nd = ops.N.dense();
  const std::vector<std::pair<Eigen::MatrixXd, Eigen::MatrixXd>> terms = {
      {submatrix(Ld, eq, unk), ops.M.dense()},
      {submatrix(Nd, eq, unk), Eigen::MatrixXd(ops.D.asDiagonal())}};
  const auto sol = kron_sum_dense_solve(
      terms, std::vector<Eigen::MatrixXd>{take_rows(rhs.real(), eq), take_rows(rhs.imag(), eq)});
  Eigen::MatrixXcd omega = Eigen::MatrixXcd::Zero(n, n);
  for (size_t i = 0; i < unk.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    omega.row(unk[i]).real() = sol[0].row(r);
    omega.row(unk[i]).imag() = sol[1].row(r);
  }
  return omega;
}

Eigen::MatrixXcd weighted_rhs(int k, const ModeOperators& ops, const Eigen::MatrixXcd& F) {
  Eigen::MatrixXd re = F.real(), im = F.imag();
  zero_parity(re, rhs_parity(k));
  zero_parity(im, rhs_parity(k));
  Eigen::MatrixXd wre, wim;
  ops.rhs_weight.apply_left(re, wre);
  ops.rhs_weight.apply_left(im, wim);
  Eigen::MatrixXcd out(F.rows(), F.cols());
  out.real() = wre;
  out.imag() = wim;
  return out;
}

void check_mode_rhs(const Eigen::MatrixXcd& F) {
  if (F.rows() != F.cols() || F.rows() < 2 || F.rows() % 2)
    throw PreconditionError("cylinder mode: coefficient matrix must be n x n with n even");
}

// Eigenvalue hull of A = L^-1 N by power and inverse iteration, inflated by 2.
Interval estimate_case1_interval(const BandedMatrix& L, const BandedMatrix& N) {
  const int n = L.size();
  const BandedLU luL(L), luN(N);
  auto start = [n]() {
    Eigen::MatrixXd x(n, 1);
    for (int i = 0; i < n; ++i) x(i, 0) = 1.0 + 0.3 * std::sin(1.7 * i + 0.4);
    return x;
  };
  Eigen::MatrixXd x = start(), y;
  double big = 0.0;
  for (int it = 0; it < 60; ++it) {
    N.apply_left(x, y);
    luL.solve_left(y);
    big = y.norm() / x.norm();
    x = y / y.norm();
  }
  N.apply_left(x, y);
  luL.solve_left(y);
  const double rq_big = (x.transpose() * y)(0, 0);
  x = start();
  double small_inv = 0.0;
  for (int it = 0; it < 60; ++it) {
    L.apply_left(x, y);
    luN.solve_left(y);
    small_inv = y.norm() / x.norm();
    x = y / y.norm();
  }
  L.apply_left(x, y);
  luN.solve_left(y);
  const double rq_small = (x.transpose() * y)(0, 0);
  if (!(rq_big < 0.0 && rq_small < 0.0 && std::isfinite(big) && small_inv > 0.0 && std::isfinite(small_inv)))
    throw NumericalError("spectral interval estimate failed (eigenvalues not negative)");
  return {-2.0 * big, -0.5 / small_inv};
}

}  // namespace

Eigen::VectorXd cylinder_r_half(int n) {
  check_even(n, "cylinder_r_half");
  return cheb_points(n).tail(n / 2);
}

CylinderSamples sample_cylinder(const std::function<double(double, double, double)>& f, int n) {
  check_even(n, "sample_cylinder");
  const Eigen::VectorXd r = cylinder_r_half(n), th = fourier_points(n), z = cheb_points(n);
  CylinderSamples s{n, {}};
  for (int t = 0; t < n; ++t) {
    Eigen::MatrixXd S(n / 2, n);
    for (int i = 0; i < n / 2; ++i)
      for (int j = 0; j < n; ++j) S(i, j) = f(r(i), th(t), z(j));
    s.slices.push_back(std::move(S));
  }
  return s;
}

std::vector<Eigen::MatrixXd> dfs_double(const CylinderSamples& s) {
  check_even(s.n, "dfs_double");
  const int nt = static_cast<int>(s.slices.size());
  if (nt < 2 || nt % 2) throw PreconditionError("dfs_double: theta sample count must be even");
  const int n = s.n, h = n / 2;
  for (const auto& S : s.slices)
    if (S.rows() != h || S.cols() != n) throw PreconditionError("dfs_double: slice shape must be (n/2) x n");
  std::vector<Eigen::MatrixXd> out(nt, Eigen::MatrixXd(n, n));
  for (int t = 0; t < nt; ++t) {
    out[t].bottomRows(h) = s.slices[t];
    const Eigen::MatrixXd& opp = s.slices[(t + nt / 2) % nt];
    // r_i = -r_{n-1-i} for i < n/2
    for (int i = 0; i < h; ++i) out[t].row(i) = opp.row(n - 1 - i - h);
  }
  return out;
}

std::vector<Eigen::MatrixXcd> cylinder_mode_coeffs(const std::vector<Eigen::MatrixXd>& doubled) {
  const int nt = static_cast<int>(doubled.size());
  if (nt < 2 || nt % 2) throw PreconditionError("cylinder_mode_coeffs: theta sample count must be even");
  const Eigen::Index nr = doubled.front().rows(), nz = doubled.front().cols();
  const Eigen::VectorXd th = fourier_points(nt);
  Eigen::MatrixXd V(nt, nr * nz);
  for (int t = 0; t < nt; ++t) {
    if (doubled[t].rows() != nr || doubled[t].cols() != nz)
      throw PreconditionError("cylinder_mode_coeffs: inconsistent slice shapes");
    V.row(t) = Eigen::Map<const Eigen::RowVectorXd>(doubled[t].data(), nr * nz);
  }
  Eigen::MatrixXcd W(nt, nt);
  for (int k = -nt / 2; k < nt / 2; ++k)
    for (int t = 0; t < nt; ++t) W(k + nt / 2, t) = std::polar(1.0 / nt, -k * th(t));
  const Eigen::MatrixXcd C = W * V;
  std::vector<Eigen::MatrixXcd> out;
  for (int m = 0; m < nt; ++m) {
    const Eigen::VectorXcd row = C.row(m).transpose();
    const Eigen::MatrixXcd vals = Eigen::Map<const Eigen::MatrixXcd>(row.data(), nr, nz);
    Eigen::MatrixXcd coeffs(nr, nz);
    coeffs.real() = cheb_transform_2d(vals.real());
    coeffs.imag() = cheb_transform_2d(vals.imag());
    out.push_back(std::move(coeffs));
  }
  return out;
}

ModeOperators mode_operators(int n, int k) {
  check_even(n, "mode_operators");
  const int P = n + 4;
  const BandedMatrix Mp = build_M(P), Mr = build_Mr(P), T = build_M1mr2_D1(P);
  const BandedMatrix I = BandedMatrix::identity(P);
  const BandedMatrix Mr2 = I - Mp;
  const BandedMatrix Dp = BandedMatrix::diagonal(build_D(P));
  ModeOperators ops;
  const int ak = std::abs(k);
  if (ak >= 2) {
    const BandedMatrix L1 = Mr2 * Dp + (Mr * T) * 5.0 + Mp * 14.0 - I * 10.0;
    ops.L = (L1 - Mp * (static_cast<double>(k) * k)).leading(n);
    ops.N = (Mr2 * Mp).leading(n);
    ops.rhs_weight = BandedMatrix::identity(n);
  } else if (ak == 1) {
    ops.L = (Mr * Dp + T * 3.0 - Mr * 6.0).leading(n);
    ops.N = (Mr * Mp).leading(n);
    ops.rhs_weight = BandedMatrix::identity(n);
  } else {
    ops.L = (Mr2 * Dp + Mr * T - Mr2 * 2.0).leading(n);
    ops.N = (Mr2 * Mp).leading(n);
    ops.rhs_weight = Mr2.leading(n);
  }
  ops.M = build_M(n);
  ops.D = build_D(n);
  return ops;
}

double mode_residual(int k, const Eigen::MatrixXcd& F, const Eigen::MatrixXcd& omega) {
  check_mode_rhs(F);
  const int n = static_cast<int>(F.rows());
  const ModeOperators ops = mode_operators(n, k);
  const Eigen::MatrixXcd rhs = weighted_rhs(k, ops, F);
  double res2 = 0.0, scale = rhs.norm();
  for (int part = 0; part < 2; ++part) {
    const Eigen::MatrixXd Y = part ? Eigen::MatrixXd(omega.imag()) : Eigen::MatrixXd(omega.real());
    const Eigen::MatrixXd R = part ? Eigen::MatrixXd(rhs.imag()) : Eigen::MatrixXd(rhs.real());
    Eigen::MatrixXd LY, LYM, NY;
    ops.L.apply_left(Y, LY);
    ops.M.apply_right(LY, LYM);
    ops.N.apply_left(Y, NY);
    const Eigen::MatrixXd NYD = NY * ops.D.asDiagonal();
    res2 += (LYM + NYD - R).squaredNorm();
    scale += LYM.norm() + NYD.norm();
  }
  const double res = std::sqrt(res2);
  return scale > 0.0 ? res / scale : res;
}

ModeSolution solve_mode_case1(int k, const Eigen::MatrixXcd& F, double eps, std::vector<std::string>* warnings) {
  check_mode_rhs(F);
  if (std::abs(k) < 2) throw PreconditionError("solve_mode_case1: requires |k| >= 2");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_mode_case1: eps must lie in (0, 1)");
  const int n = static_cast<int>(F.rows());
  const ModeOperators ops = mode_operators(n, k);
  const Eigen::MatrixXcd rhs = weighted_rhs(k, ops, F);
  ModeSolution sol;
  sol.k = k;
  sol.omega = Eigen::MatrixXcd::Zero(n, n);
  if (rhs.norm() == 0.0) return sol;

  auto fallback = [&](const std::string& why) {
    if (warnings) {
      std::ostringstream os;
      os << "mode " << k << ": " << why << "; dense solve used";
      warnings->push_back(os.str());
    }
    sol.omega = dense_mode_solve(k, ops, rhs);
    sol.dense_fallback = true;
    sol.residual = mode_residual(k, F, sol.omega);
    return sol;
  };

  Interval ia{};
  try {
    ia = estimate_case1_interval(ops.L, ops.N);
  } catch (const NumericalError& e) {
    return fallback(e.what());
  }
  const SquareDiscretization sq = assemble_square(n);
  const BandedMatrix& At = sq.A_sym;
  const BandedLU luL(ops.L);
  const BandedMatrix& L = ops.L;
  const BandedMatrix& N = ops.N;

  SylvesterProblem prob;
  prob.iv = {ia.lo, ia.hi, sq.delta, 1.0};
  prob.ops.apply_A = [&](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
    N.apply_left(X, out);
    luL.solve_left(out);
  };
  prob.ops.apply_B = [&At](const Eigen::MatrixXd& X, Eigen::MatrixXd& out) {
    At.apply_right(X, out);
    out = -out;
  };
  prob.ops.solve_A_shifted = [&](double q, Eigen::MatrixXd& X) {
    Eigen::MatrixXd LX;
    L.apply_left(X, LX);
    BandedLU(N - L * q).solve_left(LX);
    X = std::move(LX);
  };
  prob.ops.solve_B_shifted = [&At](double p, Eigen::MatrixXd& X) {
    EvenOddSolver(At, -p).solve_right(X);
    X = -X;
  };

  // A Y - Y B = L^-1 rhs D^-1 with B = -M D^-1 = -Ds^-1 A_sym Ds; Y = Z Ds
  const Eigen::VectorXd Dinv = ops.D.cwiseInverse();
  const Eigen::VectorXd scale = Dinv.cwiseQuotient(sq.Ds);
  auto run = [&](int J) {
    const ShiftSchedule sched = adi_shifts_for(prob.iv, J);
    Eigen::MatrixXcd omega(n, n);
    for (int part = 0; part < 2; ++part) {
      Eigen::MatrixXd R = part ? Eigen::MatrixXd(rhs.imag()) : Eigen::MatrixXd(rhs.real());
      if (R.norm() == 0.0) {
        if (part) omega.imag().setZero(); else omega.real().setZero();
        continue;
      }
      luL.solve_left(R);
      prob.F = R * scale.asDiagonal();
      Eigen::MatrixXd Y = adi_solve(prob, sched) * sq.Ds.asDiagonal();
      zero_parity(Y, omega_parity(k));
      if (part) omega.imag() = Y; else omega.real() = Y;
    }
    return omega;
  };

  int J = iteration_count(CountFormula::General, cross_ratio_gamma(prob.iv), eps);
  try {
    for (int attempt = 0; attempt < 2; ++attempt, J *= 2) {
      const Eigen::MatrixXcd omega = run(J);
      const double res = mode_residual(k, F, omega);
      if (res <= 10.0 * eps) {
        sol.omega = omega;
        sol.iterations = J;
        sol.residual = res;
        return sol;
      }
    }
  } catch (const NumericalError& e) {
    return fallback(e.what());
  }
  return fallback("posterior residual check failed after doubling J");
}

ModeSolution solve_mode_case2(int k, const Eigen::MatrixXcd& F) {
  check_mode_rhs(F);
  if (std::abs(k) != 1) throw PreconditionError("solve_mode_case2: requires |k| = 1");
  const ModeOperators ops = mode_operators(static_cast<int>(F.rows()), k);
  ModeSolution sol;
  sol.k = k;
  sol.omega = dense_mode_solve(k, ops, weighted_rhs(k, ops, F));
  sol.residual = mode_residual(k, F, sol.omega);
  return sol;
}

ModeSolution solve_mode_case3(const Eigen::MatrixXcd& F) {
  check_mode_rhs(F);
  const ModeOperators ops = mode_operators(static_cast<int>(F.rows()), 0);
  ModeSolution sol;
  sol.k = 0;
  sol.omega = dense_mode_solve(0, ops, weighted_rhs(0, ops, F));
  sol.residual = mode_residual(0, F, sol.omega);
  return sol;
}

ModeSolution solve_mode(int k, const Eigen::MatrixXcd& F, double eps, std::vector<std::string>* warnings) {
  if (std::abs(k) >= 2) return solve_mode_case1(k, F, eps, warnings);
  if (std::abs(k) == 1) return solve_mode_case2(k, F);
  return solve_mode_case3(F);
}

std::complex<double> ModeSolution::value(double r, double z) const {
  const int n = static_cast<int>(omega.rows());
  const double w = (1.0 - r * r) * (1.0 - z * z) * std::pow(r, power());
  if (w == 0.0) return 0.0;
  const Eigen::VectorXd vr = ultra_eval_all(n, r), vz = ultra_eval_all(n, z);
  return w * (vr.transpose().cast<std::complex<double>>() * omega * vz.cast<std::complex<double>>())(0, 0);
}

Eigen::MatrixXcd ModeSolution::to_chebyshev() const {
  const int n = static_cast<int>(omega.rows());
  const BandedMatrix Mr4 = build_M(n + 4), Rr = build_Mr(n + 4), Mz = build_M(n + 2);
  Eigen::MatrixXcd out(n + 4, n + 2);
  for (int part = 0; part < 2; ++part) {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(n + 4, n + 2), T;
    P.topLeftCorner(n, n) = part ? Eigen::MatrixXd(omega.imag()) : Eigen::MatrixXd(omega.real());
    Mr4.apply_left(P, T);
    for (int p = 0; p < power(); ++p) {
      Rr.apply_left(T, P);
      T = P;
    }
    Mz.apply_right(T, P);
    convert_columns(P, BasisTag::UltraC32, BasisTag::ChebyshevT);
    convert_rows(P, BasisTag::UltraC32, BasisTag::ChebyshevT);
    if (part) out.imag() = P; else out.real() = P;
  }
  return out;
}

double CylinderSolution::evaluate(double r, double theta, double z) const {
  if (!(std::abs(r) <= 1.0 + 1e-14) || !(std::abs(z) <= 1.0 + 1e-14) || !std::isfinite(theta)) {
    std::ostringstream os;
    os << "evaluation point (r, z) = (" << r << ", " << z << ") outside [-1, 1]^2";
    throw DomainError(os.str());
  }
  r = std::clamp(r, -1.0, 1.0);
  z = std::clamp(z, -1.0, 1.0);
  const double base = (1.0 - r * r) * (1.0 - z * z);
  if (base == 0.0) return 0.0;
  const Eigen::VectorXcd vr = ultra_eval_all(n, r).cast<std::complex<double>>();
  const Eigen::VectorXcd vz = ultra_eval_all(n, z).cast<std::complex<double>>();
  double s = 0.0;
  for (const ModeSolution& m : modes) {
    const std::complex<double> v = (vr.transpose() * m.omega * vz)(0, 0);
    s += base * std::pow(r, m.power()) * (std::polar(1.0, m.k * theta) * v).real();
  }
  return s;
}

double CylinderSolution::evaluate_cartesian(double x, double y, double z) const {
  const double r = std::hypot(x, y);
  if (r > 1.0 + 1e-14) throw DomainError("evaluation point outside the unit cylinder");
  return evaluate(std::min(r, 1.0), std::atan2(y, x), z);
}

CylinderSolution solve_cylinder(const std::vector<Eigen::MatrixXcd>& mode_coeffs, double eps, SolveReport* report,
                                const CylinderOptions& opts) {
  const int n = static_cast<int>(mode_coeffs.size());
  check_even(n, "solve_cylinder");
  if (!(eps > 0.0 && eps < 1.0)) throw DomainError("solve_cylinder: eps must lie in (0, 1)");
  for (const auto& C : mode_coeffs)
    if (C.rows() != n || C.cols() != n)
      throw PreconditionError("solve_cylinder: each mode needs n x n Chebyshev coefficients");
  Stopwatch clock;

  // real data: F_{-k} = conj(F_k); solve k >= 0 and the Nyquist mode only
  double asym = 0.0, total = 0.0;
  for (int k = 1; k < n / 2; ++k) {
    asym = std::max(asym, (mode_coeffs[n / 2 - k] - mode_coeffs[n / 2 + k].conjugate()).norm());
    total = std::max(total, mode_coeffs[n / 2 + k].norm());
  }
  const bool real_data = asym <= 1e-13 * std::max(total, 1.0);
  std::vector<int> ks;
  for (int k = -n / 2; k < n / 2; ++k)
    if (!real_data || k >= 0 || k == -n / 2) ks.push_back(k);

  std::vector<Eigen::MatrixXcd> F(n);
  for (int k : ks) {
    const Eigen::MatrixXcd& C = mode_coeffs[k + n / 2];
    Eigen::MatrixXd re = C.real(), im = C.imag();
    convert_columns(re, BasisTag::ChebyshevT, BasisTag::UltraC32);
    convert_rows(re, BasisTag::ChebyshevT, BasisTag::UltraC32);
    convert_columns(im, BasisTag::ChebyshevT, BasisTag::UltraC32);
    convert_rows(im, BasisTag::ChebyshevT, BasisTag::UltraC32);
    F[k + n / 2].resize(n, n);
    F[k + n / 2].real() = re;
    F[k + n / 2].imag() = im;
  }
  const double t_rhs = clock.lap();

  CylinderSolution sol;
  sol.n = n;
  sol.modes.resize(n);
  std::vector<std::vector<std::string>> warn(ks.size());
  std::vector<std::string> errors(ks.size());
  parallel_for(static_cast<int>(ks.size()), resolve_thread_count(opts.threads), [&](int i) {
    const int k = ks[i];
    try {
      sol.modes[k + n / 2] = solve_mode(k, F[k + n / 2], eps, &warn[i]);
    } catch (const std::exception& e) {
      errors[i] = "mode " + std::to_string(k) + ": " + e.what();
    }
  });
  std::string failed;
  for (const auto& e : errors)
    if (!e.empty()) failed += (failed.empty() ? "" : "; ") + e;
  if (!failed.empty()) throw NumericalError("solve_cylinder: " + failed);
  if (real_data)
    for (int k = 1; k < n / 2; ++k) {
      ModeSolution m = sol.modes[k + n / 2];
      m.k = -k;
      m.omega = m.omega.conjugate();
      sol.modes[n / 2 - k] = std::move(m);
    }
  const double t_modes = clock.lap();

  if (report) {
    report->solver = "cylinder";
    report->n = n;
    report->eps = eps;
    int J = 0;
    double res = 0.0;
    for (const auto& m : sol.modes) {
      J = std::max(J, m.iterations);
      res = std::max(res, m.residual);
    }
    report->iterations = J;
    report->residual = res;
    report->add_stage("rhs_to_ultra", t_rhs);
    report->add_stage("modes", t_modes);
    for (const auto& w : warn) report->warnings.insert(report->warnings.end(), w.begin(), w.end());
  }
  return sol;
}

CylinderSolution solve_cylinder(const CylinderSamples& samples, double eps, SolveReport* report,
                                const CylinderOptions& opts) {
  check_even(samples.n, "solve_cylinder");
  if (static_cast<int>(samples.slices.size()) != samples.n)
    throw PreconditionError("solve_cylinder: theta sample count must equal n");
  Stopwatch clock;
  const std::vector<Eigen::MatrixXcd> coeffs = cylinder_mode_coeffs(dfs_double(samples));
  const double t = clock.lap();
  if (report) report->add_stage("transform", t);
  return solve_cylinder(coeffs, eps, report, opts);
}

}  // namespace spoisson
