#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "causalab/relcompare.hpp"
#include "oracles.hpp"

using namespace causalab::relcompare;
using Complex = std::complex<double>;

TEST_CASE("omega_c: rest energy and simple values") {
  CHECK(omega_c(0.0, {1.0, 1.0}) == 1.0);
  CHECK(omega_c(0.0, {2.0, 3.0}) == doctest::Approx(18.0).epsilon(1e-15));
  CHECK(omega_c(1.0, {1.0, 1.0}) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  // |k| = m0 c delta  ->  m0 c^2 sqrt(1 + delta^2)
  const DispersionParams p{1.5, 7.0};
  const double delta = 0.3;
  CHECK(omega_c(p.m0 * p.c * delta, p) ==
        doctest::Approx(p.m0 * p.c * p.c * std::sqrt(1.0 + delta * delta))
            .epsilon(1e-14));
  CHECK(omega_c(-2.0, p) == omega_c(2.0, p));
  CHECK(omega_c(123.0, p) >= p.m0 * p.c * p.c);
}

TEST_CASE("kernel_pair: k=0 equality and the printed value at c=10") {
  const auto kp0 = kernel_pair(0.0, {1.0, 10.0});
  CHECK(kp0.nonrelativistic == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(kp0.relativistic == doctest::Approx(0.5).epsilon(1e-15));
  // omega = sqrt(100 + 10^4) = 10 sqrt(101), so K_r = 5/sqrt(101) ~ 0.49752
  const auto kp = kernel_pair(1.0, {1.0, 10.0});
  CHECK(kp.relativistic == doctest::Approx(5.0 / std::sqrt(101.0)).epsilon(1e-14));
  CHECK(kp.relativistic <= kp.nonrelativistic);
}

TEST_CASE("kernel gap: first proof inequality inside |k| <= m0 c delta") {
  const DispersionParams p{1.0, 5.0};
  for (double delta : {0.1, 0.5, 1.0}) {
    for (int i = 1; i <= 100; ++i) {
      const double k = p.m0 * p.c * delta * i / 100.0;
      const auto kp = kernel_pair(k, p);
      const double gap = kp.nonrelativistic - kp.relativistic;
      CHECK(kernel_gap(k, p) == doctest::Approx(gap).epsilon(1e-10));
      CHECK(kernel_gap(k, p) <= delta * delta / (4.0 * p.m0) + 1e-18);
    }
  }
}

TEST_CASE("kernel gap stays accurate where naive subtraction cancels") {
  const DispersionParams p{1.0, 1e6};
  const double k = 1.0;
  // analytic leading order k^2 / (4 m0^3 c^2)
  const double leading = k * k / (4.0 * p.c * p.c);
  CHECK(kernel_gap(k, p) == doctest::Approx(leading).epsilon(1e-6));
}

TEST_CASE("beta: trivial values and the series oracle") {
  const DispersionParams p{1.0, 4.0};
  CHECK(std::abs(beta(0.0, 0.0, p)) == 0.0);
  // tau = 0: real nonnegative kernel gap
  const Complex b0 = beta(1.3, 0.0, p);
  CHECK(b0.imag() == 0.0);
  CHECK(b0.real() == doctest::Approx(kernel_gap(1.3, p)).epsilon(1e-14));
  const Complex b = beta(1.0, 0.1, p);
  const Complex oracle = oracles::beta_series(1.0, 0.1, 1.0, 4.0);
  CHECK(std::abs(b - oracle) < 1e-10);
  CHECK(std::abs(b) <= 1.0 / p.m0);
}

TEST_CASE("beta decays pointwise as c grows") {
  double prev = 1e300;
  for (double c : {5.0, 50.0, 500.0, 5000.0}) {
    const double v = std::abs(beta(1.0, 0.05, {1.0, c}));
    CHECK(v < prev);
    prev = v;
  }
}

TEST_CASE("test functions: Parseval self-checks") {
  CHECK(TestFunction::gaussian(1.0, 3).parseval_defect() < 1e-8);
  CHECK(TestFunction::gaussian(0.7, 1).parseval_defect() < 1e-8);
  CHECK(TestFunction::bump(1.0, 3).parseval_defect() < 1e-8);
  CHECK(TestFunction::bump(1.5, 1).parseval_defect() < 1e-8);
}

TEST_CASE("delta_C: disjoint momentum supports give zero") {
  // f1 vanishes beyond its last node; f2's profile starts only at k = 2.5
  // (the spline clamps to its boundary values), so the supports are disjoint
  std::vector<double> k1 = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::vector<double> v1 = {1.0, 0.8, 0.4, 0.1, 0.0};
  std::vector<double> k2 = {2.5, 3.0, 3.5, 4.0};
  std::vector<double> v2 = {0.0, 0.9, 0.7, 0.0};
  const auto f1 = TestFunction::tabulated(k1, v1, 3);
  const auto f2 = TestFunction::tabulated(k2, v2, 3);
  CHECK(delta_C(f1, f2, 0.0, {1.0, 10.0}) == 0.0);
}

TEST_CASE("delta_C at tau=0 equals the kernel-gap integral; dual-quadrature") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const DispersionParams p{1.0, 10.0};
  const double dc = delta_C(f, f, 0.0, p);
  // independent tensor-product Cartesian oracle
  const double oracle = oracles::tensor_quadrature_3d_isotropic(
      [&](double k) {
        const double v = f.fourier(k);
        return v * v * kernel_gap(k, p);
      },
      64.0);
  CHECK(std::abs(dc - oracle) < 1e-9);
  CHECK(dc > 0.0);
}

TEST_CASE("delta_C: quarter ratio between c and 2c") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const double a = delta_C(f, f, 0.0, {1.0, 10.0});
  const double b = delta_C(f, f, 0.0, {1.0, 20.0});
  CHECK(a / b == doctest::Approx(4.0).epsilon(0.02));
}

TEST_CASE("delta_C symmetry for real radial profiles") {
  const auto f1 = TestFunction::gaussian(1.0, 3);
  const auto f2 = TestFunction::gaussian(1.4, 3);
  const DispersionParams p{1.0, 7.0};
  CHECK(std::abs(delta_C(f1, f2, 0.013, p) - delta_C(f2, f1, 0.013, p)) < 1e-10);
}

TEST_CASE("epsilon_for_delta: erfc closed form in one dimension") {
  const double m0 = 1.0, c = 3.0, delta = 0.8, w = 1.0;
  const auto f = TestFunction::gaussian(w, 1);
  const double K = m0 * c * delta;
  // integral over |k| > K of pi^{-1/2} w exp(-w^2 k^2) = erfc(w K)
  CHECK(epsilon_for_delta(f, delta, {m0, c}) ==
        doctest::Approx(std::erfc(w * K)).epsilon(1e-10));
}

TEST_CASE("epsilon_for_delta: 3d closed form and monotone decay") {
  const double m0 = 1.0, c = 5.0, w = 1.0;
  const auto f = TestFunction::gaussian(w, 3);
  double prev = 1.1;
  for (double delta : {0.1, 0.3, 0.6, 1.0, 2.0}) {
    const double eps = epsilon_for_delta(f, delta, {m0, c});
    const double K = m0 * c * delta * w;
    const double closed = std::erfc(K) + 2.0 / std::sqrt(M_PI) * K * std::exp(-K * K);
    CHECK(eps == doctest::Approx(closed).epsilon(1e-9));
    CHECK(eps < prev);
    CHECK(eps >= 0.0);
    CHECK(eps <= 1.0 + 1e-12);
    prev = eps;
  }
}

TEST_CASE("epsilon_for_delta: bump tails are positive (Paley-Wiener)") {
  const auto f = TestFunction::bump(1.0, 1);
  for (double delta : {0.5, 1.0, 3.0})
    CHECK(epsilon_for_delta(f, delta, {1.0, 10.0}) > 0.0);
}

TEST_CASE("verify_lemma2: single Gaussian cell passes with positive margin") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const auto rep = verify_lemma2(f, f, 0.0, 0.5, {1.0, 10.0});
  CHECK(rep.pass);
  CHECK(rep.margin > 0.0);
  CHECK(rep.rhs == doctest::Approx(2.0 * rep.epsilon + 0.125).epsilon(1e-12));
  CHECK(rep.epsilon >= 0.0);
  CHECK(rep.delta_c >= 0.0);
}

TEST_CASE("verify_lemma2: tau=0 drops the time term") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const auto rep = verify_lemma2(f, f, 0.0, 0.3, {1.0, 5.0});
  CHECK(rep.rhs ==
        doctest::Approx(2.0 * rep.epsilon + 0.5 * 0.3 * 0.3).epsilon(1e-13));
}

TEST_CASE("proof inequalities hold on the momentum ball") {
  for (double c : {5.0, 10.0, 50.0})
    for (double delta : {0.1, 0.5, 1.0})
      for (double tau : {0.0, 0.01}) {
        const auto chk = proof_inequalities({1.0, c}, delta, tau, 1000);
        CHECK(chk.all_hold());
      }
}

TEST_CASE("convergence scan: slope -2 and strict decrease") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const auto scan = convergence_scan(f, f, 0.0, {10.0, 100.0, 1000.0, 10000.0}, 1.0);
  CHECK(scan.slope == doctest::Approx(-2.0).epsilon(0.025));
  for (size_t i = 1; i < scan.points.size(); ++i)
    CHECK(scan.points[i].delta_c < scan.points[i - 1].delta_c);
  const auto scan_tau =
      convergence_scan(f, f, 0.01, {10.0, 100.0, 1000.0, 10000.0}, 1.0);
  CHECK(std::abs(scan_tau.slope + 2.0) < 0.1);
}

TEST_CASE("kernel mismatch certificate: positive at any finite c") {
  const auto f = TestFunction::gaussian(1.0, 3);
  const auto strong = kernel_mismatch_certificate({1.0, 10.0}, f);
  CHECK(strong.value > 1e-15);
  const auto faint = kernel_mismatch_certificate({1.0, 1e6}, f);
  CHECK(faint.value > 0.0);
  CHECK(faint.value < 1e-11);
  CHECK(faint.error_bar < faint.value);
  // asymptotic estimate <k^2>/(4 c^2) with <k^2> = 3/2 for the unit Gaussian
  CHECK(faint.value == doctest::Approx(1.5 / (4.0 * 1e12)).epsilon(1e-4));
}

TEST_CASE("un-halved kernel variant differs from the consistent reading") {
  const DispersionParams p{1.0, 4.0};
  // the un-halved kernel c^2/omega doubles the relativistic weight at k=0
  CHECK(std::abs(beta_unhalved(0.0, 0.0, p) + 1.0 / (2.0 * p.m0)) < 1e-14);
  CHECK(std::abs(beta(0.0, 0.0, p)) == 0.0);
}
