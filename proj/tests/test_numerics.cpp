#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "causalab/numerics.hpp"
#include "oracles.hpp"

using namespace causalab::numerics;
using causalab::MissedRoot;
using causalab::NonConvergence;
using causalab::ValidationError;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_CASE("integrate_1d: constant on [0,1]") {
  auto r = integrate_1d([](double) { return Complex(1.0, 0.0); }, {0.0, 1.0});
  CHECK(std::abs(r.value - 1.0) < 1e-14);
}

TEST_CASE("integrate_1d: full-line Gaussian equals sqrt(pi)") {
  auto r = integrate_1d([](double x) { return Complex(std::exp(-x * x), 0.0); },
                        {-kInf, kInf});
  CHECK(std::abs(r.value.real() - std::sqrt(M_PI)) < 1e-12);
  CHECK(std::abs(r.value.imag()) < 1e-14);
}

TEST_CASE("integrate_1d: x^2 exp(-x^2) on [0,inf) vs midpoint oracle") {
  auto f = [](double x) { return x * x * std::exp(-x * x); };
  // the midpoint oracle integrates the mapped integrand at 10^6 points
  const double oracle = oracles::midpoint_rule(
      [&](double t) {
        const double u = 1.0 - t;
        const double x = t / u;
        return f(x) / (u * u);
      },
      0.0, 1.0, 1'000'000);
  const double closed = std::sqrt(M_PI) / 4.0;
  CHECK(std::abs(oracle - closed) < 1e-10);  // oracle self-check
  auto r = integrate_1d([&](double x) { return Complex(f(x), 0.0); }, {0.0, kInf});
  CHECK(std::abs(r.value.real() - closed) < 1e-12);
}

TEST_CASE("integrate_1d: error reporting and NonConvergence") {
  QuadratureSpec tight;
  tight.relative_tolerance = 1e-15;
  tight.absolute_tolerance = 1e-300;
  tight.max_subdivisions = 2;
  CHECK_THROWS_AS(integrate_1d([](double x) { return Complex(std::cos(50.0 * x) /
                                                             (1e-3 + x * x)); },
                               {-1.0, 1.0}, tight),
                  NonConvergence);
  CHECK_THROWS_AS(integrate_1d([](double) { return Complex(1.0); }, {1.0, 1.0}),
                  ValidationError);
}

TEST_CASE("integrate_radial_3d: Gaussian profile") {
  auto r = integrate_radial_3d(
      [](double k) { return Complex(std::exp(-k * k), 0.0); });
  CHECK(std::abs(r.value.real() - std::pow(M_PI, 1.5)) < 1e-12);
}

TEST_CASE("integrate_radial_3d: indicator ball volume") {
  auto r = integrate_radial_3d(
      [](double k) { return Complex(k <= 1.0 ? 1.0 : 0.0, 0.0); });
  CHECK(std::abs(r.value.real() - 4.0 * M_PI / 3.0) < 1e-8);
}

TEST_CASE("integrate_radial_3d: Lorentzian-cubed vs tensor-product 3D oracle") {
  auto g = [](double k) { return 1.0 / std::pow(1.0 + k * k, 3.0); };
  const double oracle = oracles::tensor_quadrature_3d_isotropic(g, 1024.0);
  auto r = integrate_radial_3d([&](double k) { return Complex(g(k), 0.0); });
  CHECK(std::abs(r.value.real() - oracle) < 1e-8);
}

TEST_CASE("quadrature linearity on random Gaussians") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> wdist(0.5, 2.0), cdist(-2.0, 2.0);
  for (int trial = 0; trial < 10; ++trial) {
    const double w1 = wdist(rng), w2 = wdist(rng);
    const double c1 = cdist(rng), c2 = cdist(rng);
    const double a = cdist(rng), b = cdist(rng);
    auto f = [&](double x) { return Complex(std::exp(-w1 * (x - c1) * (x - c1))); };
    auto g = [&](double x) { return Complex(std::exp(-w2 * (x - c2) * (x - c2))); };
    auto combo = [&](double x) { return a * f(x) + b * g(x); };
    auto lhs = integrate_1d(combo, {-kInf, kInf}).value;
    auto rhs = a * integrate_1d(f, {-kInf, kInf}).value +
               b * integrate_1d(g, {-kInf, kInf}).value;
    CHECK(std::abs(lhs - rhs) < 1e-11);
  }
}

TEST_CASE("find_roots: sine zeros on [1, 7]") {
  auto roots = find_roots([](double x) { return std::sin(x); }, {1.0, 7.0});
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - M_PI) < 1e-12);
  CHECK(std::abs(roots[1] - 2.0 * M_PI) < 1e-12);
}

TEST_CASE("find_roots: sqrt(2)") {
  auto roots = find_roots([](double x) { return x * x - 2.0; }, {0.0, 2.0}, 1);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - std::sqrt(2.0)) < 1e-13);
}

TEST_CASE("find_roots: tan(x) = x with a declared singularity") {
  auto f = [](double x) { return std::tan(x) - x; };
  const double oracle = oracles::bisection(f, 4.4, 4.6, 1e-12);
  auto roots = find_roots(f, {M_PI / 2.0 + 1e-6, 3.0 * M_PI / 2.0 - 1e-6}, 1,
                          {M_PI / 2.0, 3.0 * M_PI / 2.0});
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - oracle) < 1e-10);
  CHECK(std::abs(roots[0] - 4.493409457909064) < 1e-9);
}

TEST_CASE("find_roots: MissedRoot on wrong expected count") {
  CHECK_THROWS_AS(find_roots([](double x) { return std::sin(x); }, {1.0, 7.0}, 5),
                  MissedRoot);
}

TEST_CASE("find_roots: resolves an exponentially close pair") {
  // (x-1)^2 - 1e-8: roots 1 +- 1e-4, far below the base scan resolution
  auto f = [](double x) { return (x - 1.0) * (x - 1.0) - 1e-8; };
  auto roots = find_roots(f, {0.0, 5.0}, 2);
  REQUIRE(roots.size() == 2);
  CHECK(std::abs(roots[0] - (1.0 - 1e-4)) < 1e-12);
  CHECK(std::abs(roots[1] - (1.0 + 1e-4)) < 1e-12);
}

TEST_CASE("find_roots: residuals vanish at returned roots") {
  auto f = [](double x) { return std::cos(3.0 * x) * (1.0 + 0.2 * x); };
  auto roots = find_roots(f, {0.0, 10.0});
  REQUIRE(!roots.empty());
  for (double r : roots) {
    const double slope = (f(r + 1e-6) - f(r - 1e-6)) / 2e-6;
    CHECK(std::abs(f(r)) < 1e-10 * std::max(1.0, std::abs(slope)));
  }
}

TEST_CASE("matrix_exponential: zero matrix") {
  Eigen::MatrixXcd z = Eigen::MatrixXcd::Zero(3, 3);
  CHECK((matrix_exponential(z) - Eigen::MatrixXcd::Identity(3, 3)).norm() == 0.0);
}

TEST_CASE("matrix_exponential: diagonal phases") {
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
  m(0, 0) = Complex(0, 0.3);
  m(1, 1) = Complex(0, -1.2);
  auto e = matrix_exponential(m);
  CHECK(std::abs(e(0, 0) - std::exp(Complex(0, 0.3))) < 1e-15);
  CHECK(std::abs(e(1, 1) - std::exp(Complex(0, -1.2))) < 1e-15);
  CHECK(std::abs(e(0, 1)) == 0.0);
}

TEST_CASE("matrix_exponential: i t PauliX vs series oracle and closed form") {
  const double t = 0.7;
  Eigen::MatrixXcd m(2, 2);
  m << Complex(0, 0), Complex(0, t), Complex(0, t), Complex(0, 0);
  auto e = matrix_exponential(m);
  auto o = oracles::expm_series(m);
  CHECK((e - o).cwiseAbs().maxCoeff() < 1e-13);
  CHECK(std::abs(e(0, 0) - Complex(std::cos(t), 0)) < 1e-12);
  CHECK(std::abs(e(0, 1) - Complex(0, std::sin(t))) < 1e-12);
}

TEST_CASE("matrix_exponential: unitarity for random skew-Hermitian") {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> dist(0.0, 1.0);
  for (int dim : {2, 16, 64}) {
    Eigen::MatrixXcd h(dim, dim);
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) h(i, j) = Complex(dist(rng), dist(rng));
    Eigen::MatrixXcd skew = 0.5 * (h - h.adjoint());
    auto e = matrix_exponential(skew);
    auto einv = matrix_exponential((-skew).eval());
    CHECK((e * e.adjoint() - Eigen::MatrixXcd::Identity(dim, dim)).norm() < 1e-10);
    CHECK((e * einv - Eigen::MatrixXcd::Identity(dim, dim)).norm() < 1e-9);
  }
}

TEST_CASE("matrix_exponential: dimension validation") {
  Eigen::MatrixXcd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(matrix_exponential(bad), causalab::DimensionMismatch);
}

TEST_CASE("gauss_legendre: integrates polynomials exactly") {
  auto gl = gauss_legendre(8);
  double acc = 0.0;
  for (int i = 0; i < 8; ++i) acc += gl.weights[i] * std::pow(gl.nodes[i], 10);
  CHECK(std::abs(acc - 2.0 / 11.0) < 1e-14);
  double wsum = 0.0;
  for (double w : gl.weights) wsum += w;
  CHECK(std::abs(wsum - 2.0) < 1e-14);
}

TEST_CASE("cubic spline reproduces smooth data") {
  std::vector<double> x, y;
  for (int i = 0; i <= 40; ++i) {
    x.push_back(i * 0.1);
    y.push_back(std::sin(x.back()));
  }
  CubicSpline s(x, y);
  for (double p : {0.05, 1.234, 2.5, 3.9}) {
    CHECK(std::abs(s(p) - std::sin(p)) < 2e-5);
  }
}
