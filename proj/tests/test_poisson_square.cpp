#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "sampling.hpp"
#include "spectral_poisson/errors.hpp"
#include "spectral_poisson/poisson_square.hpp"

using namespace spoisson;
using testing_util::cheb_coeffs;
using testing_util::cheb_coeffs_1d;

namespace {

constexpr double pi = std::numbers::pi;

// Max error of the solution against u over a fixed set of random points in the domain.
template <class Sol>
double max_error(const Sol& sol, const std::function<double(double, double)>& u, const Rectangle& d, int count = 200) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  double err = 0.0;
  for (int k = 0; k < count; ++k) {
    const double x = d.x0 + (d.x1 - d.x0) * U(rng), y = d.y0 + (d.y1 - d.y0) * U(rng);
    err = std::max(err, std::abs(sol.evaluate(x, y) - u(x, y)));
  }
  return err;
}

}  // namespace

TEST_CASE("square discretization at n = 1") {
  const SquareDiscretization d = assemble_square(1);
  CHECK(d.A_sym(0, 0) == doctest::Approx(-0.4).epsilon(1e-15));
  CHECK(d.delta == doctest::Approx(1.0 / 30));
}

TEST_CASE("symmetrized matrix is symmetric and similar to D^-1 M") {
  for (int n : {2, 5, 20, 64}) {
    const SquareDiscretization d = assemble_square(n);
    const Eigen::MatrixXd S = d.A_sym.dense();
    CHECK((S - S.transpose()).norm() <= 1e-13 * S.norm());
    const Eigen::MatrixXd sim = d.Ds.cwiseInverse().asDiagonal() * d.A.dense() * d.Ds.asDiagonal();
    CHECK((sim - S).norm() <= 1e-13 * S.norm());
    CHECK(d.A_sym.zero_odd_offsets());
  }
}

TEST_CASE("eigenvalues of the square discretization lie in [-1, -delta]") {
  for (int n : {4, 7, 16, 33, 64, 128, 256}) {
    const SquareDiscretization d = assemble_square(n);
    const Interval g = square_gershgorin(d);
    CHECK(g.lo >= -1.0);
    CHECK(g.hi <= -d.delta);
    const Interval er = square_eigen_range(d);
    double lo = 0.0, hi = -1.0;
    // independent check by Sturm bisection on each parity chain
    for (int parity = 0; parity < 2; ++parity) {
      const int m = (n - parity + 1) / 2;
      Eigen::VectorXd diag(m), off(std::max(m - 1, 0));
      for (int k = 0; k < m; ++k) diag(k) = d.A_sym(2 * k + parity, 2 * k + parity);
      for (int k = 0; k + 1 < m; ++k) off(k) = d.A_sym(2 * k + parity, 2 * k + 2 + parity);
      const auto ev = oracle::sturm_eigenvalues(diag, off);
      CHECK(ev.front() >= -1.0);
      CHECK(ev.back() <= -d.delta);
      lo = std::min(lo, ev.front());
      hi = std::max(hi, ev.back());
      if (parity == 0) {
        const double nd = n;
        CHECK(ev.back() <= -3.0 / (64 * std::pow(nd, 4)) + 1.0 / (64 * std::pow(nd, 5)));
      }
    }
    CHECK(er.lo == doctest::Approx(lo).epsilon(1e-12));
    CHECK(er.hi == doctest::Approx(hi).epsilon(1e-9));
  }
}

TEST_CASE("bubble solution: f = -2(1-x^2) - 2(1-y^2)") {
  const auto f = cheb_coeffs([](double x, double y) { return -2 * (1 - x * x) - 2 * (1 - y * y); }, 8);
  SolveReport rep;
  const SquareSolution s = solve_square(f, 1e-13, &rep);
  CHECK(s.X(0, 0) == doctest::Approx(4.0 / 3).epsilon(1e-12));
  CHECK(std::abs(s.X.norm() - s.X(0, 0)) < 1e-12);
  CHECK(s.evaluate(0.3, -0.7) == doctest::Approx(0.4641).epsilon(1e-12));
  CHECK(rep.residual < 1e-12);
  CHECK(rep.iterations == iteration_count(CountFormula::General,
                                          cross_ratio_gamma({-1, -1.0 / (30 * 4096.0), 1.0 / (30 * 4096.0), 1}),
                                          1e-13));
  CHECK(rep.stage("adi") >= 0.0);
}

TEST_CASE("manufactured solution on the reference square") {
  auto u = [](double x, double y) { return (1 - x * x) * (1 - y * y) * std::exp(x + 0.5 * y); };
  auto f = [](double x, double y) {
    const double a = (1 - x * x) * std::exp(x), b = (1 - y * y) * std::exp(0.5 * y);
    const double a2 = std::exp(x) * ((1 - x * x) - 4 * x - 2);
    const double b2 = std::exp(0.5 * y) * ((1 - y * y) / 4 - 2 * y - 2);
    return a2 * b + a * b2;
  };
  SolveReport rep;
  const SquareSolution s = solve_square(cheb_coeffs(f, 40), 1e-13, &rep);
  CHECK(max_error(s, u, Rectangle{}) < 1e-12);
  CHECK(rep.residual < 1e-11);
}

TEST_CASE("ADI solution matches the dense Kronecker oracle") {
  const int n = 8;
  std::mt19937_64 rng(3);
  const Eigen::MatrixXd F = oracle::random_matrix(rng, n, n);
  const SquareDiscretization d = assemble_square(n);
  const Rectangle dom{0.0, 1.0, -2.0, 2.0};
  const SquareSolution s = solve_square_ultra(d, F, dom, 1e-14, {});
  const double ax = 4.0, by = 0.25;
  const Eigen::VectorXd Dinv = d.D.cwiseInverse();
  const Eigen::MatrixXd Md = d.M.dense();
  const Eigen::MatrixXd X = sylvester_dense_oracle(ax * Dinv.asDiagonal() * Md, -by * Md * Dinv.asDiagonal(),
                                                   Dinv.asDiagonal() * F * Dinv.asDiagonal());
  CHECK((s.X - X).norm() <= 1e-12 * X.norm());
}

TEST_CASE("rectangle [0,2]^2 with a polynomial solution") {
  const Rectangle dom{0, 2, 0, 2};
  auto u = [](double x, double y) { return x * (2 - x) * y * (2 - y) / 4; };
  auto f = [](double x, double y) { return -(y * (2 - y) + x * (2 - x)) / 2; };
  const SquareSolution s = solve_rectangle(cheb_coeffs(f, 6, 0, 2, 0, 2), dom, 1e-13);
  CHECK(max_error(s, u, dom) < 1e-13);
}

TEST_CASE("anisotropic rectangle [0,1] x [0,4]") {
  const Rectangle dom{0, 1, 0, 4};
  auto u = [](double x, double y) { return std::sin(pi * x) * std::sin(pi * y / 4); };
  auto f = [&u](double x, double y) { return -(pi * pi + pi * pi / 16) * u(x, y); };
  SolveReport rep;
  const SquareSolution s = solve_rectangle(cheb_coeffs(f, 40, 0, 1, 0, 4), dom, 1e-13, &rep);
  CHECK(max_error(s, u, dom) < 1e-11);
  CHECK(rep.solver == "rectangle");
}

TEST_CASE("evaluation, boundary values and Chebyshev export") {
  auto f = [](double x, double y) { return std::cos(2 * x + y) + x * y * y; };
  const SquareSolution s = solve_square(cheb_coeffs(f, 24), 1e-13);
  for (double t : {-1.0, -0.4, 0.0, 0.9, 1.0}) {
    CHECK(s.evaluate(1.0, t) == 0.0);
    CHECK(s.evaluate(-1.0, t) == 0.0);
    CHECK(s.evaluate(t, 1.0) == 0.0);
    CHECK(s.evaluate(t, -1.0) == 0.0);
  }
  const CoeffMatrix2D C = s.to_chebyshev();
  CHECK(C.values.rows() == 26);
  for (auto [x, y] : {std::pair{0.1, 0.2}, {-0.77, 0.5}, {0.93, -0.31}})
    CHECK(std::abs(cheb_eval_2d(C.values, x, y) - s.evaluate(x, y)) < 1e-14);
  CHECK_THROWS_AS(s.evaluate(1.1, 0.0), DomainError);
  CHECK_THROWS_AS(s.evaluate(0.0, -1.5), DomainError);
}

TEST_CASE("nonhomogeneous Dirichlet data") {
  SUBCASE("u = xy") {
    EdgeData g;
    g.left = Eigen::Vector2d(0, -1);
    g.right = Eigen::Vector2d(0, 1);
    g.bottom = Eigen::Vector2d(0, -1);
    g.top = Eigen::Vector2d(0, 1);
    const CoeffMatrix2D f{Eigen::MatrixXd::Zero(4, 4), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
    const DirichletSolution s = solve_dirichlet(f, g, 1e-13);
    CHECK(max_error(s, [](double x, double y) { return x * y; }, Rectangle{}) < 1e-14);
  }
  SUBCASE("u = cos(x) cosh(y)") {
    auto u = [](double x, double y) { return std::cos(x) * std::cosh(y); };
    EdgeData g;
    g.left = cheb_coeffs_1d([&](double y) { return u(-1, y); }, 30);
    g.right = cheb_coeffs_1d([&](double y) { return u(1, y); }, 30);
    g.bottom = cheb_coeffs_1d([&](double x) { return u(x, -1); }, 30);
    g.top = cheb_coeffs_1d([&](double x) { return u(x, 1); }, 30);
    const CoeffMatrix2D f{Eigen::MatrixXd::Zero(30, 30), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
    const DirichletSolution s = solve_dirichlet(f, g, 1e-13);
    CHECK(max_error(s, u, Rectangle{}) < 1e-12);
    const CoeffMatrix2D C = s.to_chebyshev();
    CHECK(std::abs(cheb_eval_2d(C.values, 0.3, -0.6) - u(0.3, -0.6)) < 1e-12);
  }
  SUBCASE("incompatible corners are rejected") {
    EdgeData g;
    g.left = Eigen::Vector2d(0, -1);
    g.right = Eigen::Vector2d(0, 1);
    g.bottom = Eigen::Vector2d(0, -1);
    g.top = Eigen::Vector2d(0.5, 1);
    const CoeffMatrix2D f{Eigen::MatrixXd::Zero(4, 4), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
    CHECK(corner_defect(g) == doctest::Approx(0.5));
    CHECK_THROWS_AS(solve_dirichlet(f, g, 1e-13), PreconditionError);
  }
}

TEST_CASE("input validation") {
  const CoeffMatrix2D f{Eigen::MatrixXd::Ones(4, 4), BasisTag::ChebyshevT, BasisTag::ChebyshevT};
  CHECK_THROWS_AS(solve_rectangle(f, Rectangle{1, 1, 0, 1}, 1e-10), PreconditionError);
  CHECK_THROWS_AS(solve_square(f, 0.0), DomainError);
  CHECK_THROWS_AS(solve_square(f, 1.5), DomainError);
  const CoeffMatrix2D g{Eigen::MatrixXd::Ones(4, 4), BasisTag::LegendreP, BasisTag::ChebyshevT};
  CHECK_THROWS_AS(solve_square(g, 1e-10), PreconditionError);
  CHECK_THROWS_AS(assemble_square(0), PreconditionError);
}
