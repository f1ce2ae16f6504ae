#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/poisson_fd.hpp"
#include "spectral_poisson/special_functions.hpp"

using namespace spoisson;

namespace {

constexpr double pi = std::numbers::pi;

FDProblem sampled(int n, const std::function<double(double, double)>& f) {
  FDProblem p{n, Eigen::MatrixXd(n - 1, n - 1)};
  const double h = 2.0 / n;
  for (int j = 1; j < n; ++j)
    for (int k = 1; k < n; ++k) p.F(j - 1, k - 1) = f(-1 + k * h, -1 + j * h);
  return p;
}

}  // namespace

TEST_CASE("five-point matrix") {
  const BandedMatrix K2 = build_K(2);
  CHECK(K2.size() == 1);
  CHECK(K2(0, 0) == -2.0);
  CHECK(fd_eigenvalues(2)(0) == doctest::Approx(-2.0).epsilon(1e-15));
  for (int n : {4, 9, 16, 64}) {
    const BandedMatrix K = build_K(n);
    Eigen::VectorXd diag(n - 1), off(n - 2);
    for (int i = 0; i < n - 1; ++i) diag(i) = K(i, i);
    for (int i = 0; i < n - 2; ++i) off(i) = K(i, i + 1);
    const auto ev = oracle::sturm_eigenvalues(diag, off);
    Eigen::VectorXd closed = fd_eigenvalues(n);
    std::sort(closed.data(), closed.data() + closed.size());
    for (int i = 0; i < n - 1; ++i) CHECK(std::abs(ev[i] - closed(i)) <= 1e-12 * n * n);
    CHECK(closed.minCoeff() >= -static_cast<double>(n) * n);
    CHECK(closed.maxCoeff() <= -1.0);
  }
  CHECK_THROWS_AS(build_K(1), PreconditionError);
}

TEST_CASE("sine transform is an orthogonal involution") {
  const Eigen::MatrixXd S = dst1_matrix(32);
  CHECK((S - S.transpose()).norm() < 1e-14);
  CHECK((S * S - Eigen::MatrixXd::Identity(31, 31)).norm() < 1e-12);
}

TEST_CASE("sine-transform solver") {
  FDProblem p{2, Eigen::MatrixXd::Constant(1, 1, 3.0)};
  CHECK(solve_fd_dst(p)(0, 0) == doctest::Approx(-0.75).epsilon(1e-15));
  std::mt19937_64 rng(11);
  FDProblem q{64, oracle::random_matrix(rng, 63, 63)};
  const Eigen::MatrixXd X = solve_fd_dst(q);
  CHECK(fd_residual(q, X) <= 1e-11);
  // dense Kronecker oracle at a small size
  FDProblem r{9, oracle::random_matrix(rng, 8, 8)};
  const Eigen::MatrixXd K = build_K(9).dense();
  const Eigen::MatrixXd Xo = sylvester_dense_oracle(K, -K, r.F);
  CHECK((solve_fd_dst(r) - Xo).norm() <= 1e-12 * Xo.norm());
}

TEST_CASE("ADI agrees with the sine-transform solution") {
  std::mt19937_64 rng(5);
  for (int n : {64, 128}) {
    FDProblem p{n, oracle::random_matrix(rng, n - 1, n - 1)};
    const Eigen::MatrixXd Xd = solve_fd_dst(p);
    for (double eps : {1e-3, 1e-6, 1e-10}) {
      SolveReport rep;
      const Eigen::MatrixXd Xa = solve_fd_adi(p, eps, &rep);
      const double rel = oracle::spectral_norm(Xa - Xd) / oracle::spectral_norm(Xd);
      CHECK(rel <= eps);
      const double gamma = cross_ratio_gamma(fd_intervals(n));
      const double sharp = zolotarev_bound(rep.iterations, gamma).sharp;
      CHECK(rel <= sharp * (1 + 1e-8));
      CHECK(rel <= 4.0 * std::exp(-rep.iterations * pi * pi / std::log(16.0 * gamma)));
    }
  }
}

TEST_CASE("zero right-hand side gives zero") {
  FDProblem p{16, Eigen::MatrixXd::Zero(15, 15)};
  CHECK(solve_fd_adi(p, 1e-8).norm() == 0.0);
}

TEST_CASE("second-order convergence to a smooth solution") {
  auto u = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y); };
  auto f = [&u](double x, double y) { return -2 * pi * pi * u(x, y); };
  std::vector<double> err;
  for (int n : {16, 32, 64, 128}) {
    const FDProblem p = sampled(n, f);
    const Eigen::MatrixXd X = solve_fd_adi(p, 1e-13);
    double e = 0.0;
    const double h = 2.0 / n;
    for (int j = 1; j < n; ++j)
      for (int k = 1; k < n; ++k) e = std::max(e, std::abs(X(j - 1, k - 1) - u(-1 + k * h, -1 + j * h)));
    err.push_back(e);
  }
  for (size_t i = 1; i < err.size(); ++i) {
    const double order = std::log2(err[i - 1] / err[i]);
    CHECK(order >= 1.9);
    CHECK(order <= 2.1);
  }
}

TEST_CASE("iteration count selection") {
  std::mt19937_64 rng(2);
  FDProblem p{64, oracle::random_matrix(rng, 63, 63)};
  SolveReport a, b, c;
  solve_fd_adi(p, 1e-6, &a);
  solve_fd_adi(p, 1e-6, &b, FDOptions{0, CountFormula::FiniteDifference});
  solve_fd_adi(p, 1e-6, &c, FDOptions{7, CountFormula::General});
  CHECK(a.iterations == iteration_count(CountFormula::General, cross_ratio_gamma(fd_intervals(64)), 1e-6));
  CHECK(b.iterations == iteration_count(CountFormula::FiniteDifference, 64, 1e-6));
  CHECK(c.iterations == 7);
  CHECK_THROWS_AS(solve_fd_adi(p, 0.0), DomainError);
  FDProblem bad{64, Eigen::MatrixXd::Zero(10, 10)};
  CHECK_THROWS_AS(solve_fd_adi(bad, 1e-6), PreconditionError);
}
