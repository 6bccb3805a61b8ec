#include "causalab/relcompare.hpp"

#include <algorithm>
#include <cmath>

namespace causalab::relcompare {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

void DispersionParams::validate() const {
  if (!(m0 > 0) || !std::isfinite(m0))
    throw ValidationError("DispersionParams: m0 must be positive and finite");
  if (!(c > 0) || !std::isfinite(c))
    throw ValidationError("DispersionParams: c must be positive and finite");
}

double omega_c(double k, const DispersionParams& p) {
  return std::hypot(p.c * k, p.m0 * p.c * p.c);
}

double zitter_subtracted_energy(double k, const DispersionParams& p) {
  const double u = k / (p.m0 * p.c);
  return k * k / (p.m0 * (1.0 + std::sqrt(1.0 + u * u)));
}

KernelPair kernel_pair(double k, const DispersionParams& p) {
  return {1.0 / (2.0 * p.m0), p.c * p.c / (2.0 * omega_c(k, p))};
}

double kernel_gap(double k, const DispersionParams& p) {
  // (1/2m0)(1 - 1/s) with s = sqrt(1+u^2), rearranged to u^2/(s(s+1)) so the
  // O(c^-2) decay survives in floating point
  const double u = k / (p.m0 * p.c);
  const double s = std::sqrt(1.0 + u * u);
  return u * u / (2.0 * p.m0 * s * (s + 1.0));
}

namespace {

// (omega - m0 c^2) - k^2/2m0 = -k^2 u^2 / (2 m0 (1+s)^2), the phase mismatch
double phase_gap(double k, const DispersionParams& p) {
  const double u = k / (p.m0 * p.c);
  const double s = std::sqrt(1.0 + u * u);
  return -k * k * u * u / (2.0 * p.m0 * (1.0 + s) * (1.0 + s));
}

}  // namespace

Complex beta(double k, double tau, const DispersionParams& p) {
  const KernelPair kp = kernel_pair(k, p);
  const Complex i(0, 1);
  const Complex phase_nr = std::exp(-i * tau * k * k / (2.0 * p.m0));
  // beta = e^{-i tau k^2/2m0} (K_nr - K_r e^{-i tau dw}), dw = phase_gap
  const Complex rel = kp.relativistic * std::exp(-i * tau * phase_gap(k, p));
  return phase_nr * (Complex(kernel_gap(k, p), 0.0) + (kp.relativistic - rel));
}

Complex beta_unhalved(double k, double tau, const DispersionParams& p) {
  const Complex i(0, 1);
  const double omega = omega_c(k, p);
  return std::exp(-i * tau * k * k / (2.0 * p.m0)) / (2.0 * p.m0) -
         (p.c * p.c / omega) *
             std::exp(-i * tau * zitter_subtracted_energy(k, p));
}

// ---------------------------------------------------------------------------
// TestFunction
// ---------------------------------------------------------------------------

namespace {

double bump_position_profile(double r, double radius) {
  const double u = r / radius;
  if (std::abs(u) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - u * u));
}

}  // namespace

TestFunction TestFunction::gaussian(double width, int dimension) {
  if (!(width > 0)) throw ValidationError("TestFunction: width must be > 0");
  if (dimension != 1 && dimension != 3)
    throw ValidationError("TestFunction: dimension must be 1 or 3");
  TestFunction f;
  f.kind_ = Kind::Gaussian;
  f.d_ = dimension;
  f.param_ = width;
  return f;
}

TestFunction TestFunction::bump(double radius, int dimension) {
  if (!(radius > 0)) throw ValidationError("TestFunction: radius must be > 0");
  if (dimension != 1 && dimension != 3)
    throw ValidationError("TestFunction: dimension must be 1 or 3");
  TestFunction f;
  f.kind_ = Kind::Bump;
  f.d_ = dimension;
  f.param_ = radius;

  // x-space normalization
  QuadratureSpec spec;
  spec.relative_tolerance = 1e-13;
  double norm_sq;
  if (dimension == 1) {
    norm_sq = numerics::integrate_real(
        [&](double x) {
          const double v = bump_position_profile(x, radius);
          return v * v;
        },
        {-radius, radius}, spec);
  } else {
    norm_sq = numerics::integrate_real(
                  [&](double r) {
                    const double v = bump_position_profile(r, radius);
                    return r * r * v * v;
                  },
                  {0.0, radius}, spec) *
              4.0 * M_PI;
  }
  const double amp = 1.0 / std::sqrt(norm_sq);

  // tabulate the radial Fourier profile; spacing resolves the oscillation
  // period 2 pi / radius comfortably
  const double k_cut = std::max(60.0 / radius, 240.0);
  const double dk = 0.01 / radius;
  std::vector<double> ks, vals;
  for (double k = 0.0; k <= k_cut + dk; k += dk) {
    double v;
    if (dimension == 1) {
      // (2 pi)^{-1/2} * 2 integral_0^R f(x) cos(kx) dx
      v = std::sqrt(2.0 / M_PI) *
          numerics::integrate_real(
              [&](double x) { return bump_position_profile(x, radius) * std::cos(k * x); },
              {0.0, radius}, spec);
    } else if (k < 1e-12) {
      v = std::pow(2.0 * M_PI, -1.5) * 4.0 * M_PI *
          numerics::integrate_real(
              [&](double r) { return r * r * bump_position_profile(r, radius); },
              {0.0, radius}, spec);
    } else {
      // (2 pi)^{-3/2} (4 pi / k) integral_0^R r f(r) sin(kr) dr
      v = std::pow(2.0 * M_PI, -1.5) * (4.0 * M_PI / k) *
          numerics::integrate_real(
              [&](double r) { return r * bump_position_profile(r, radius) * std::sin(k * r); },
              {0.0, radius}, spec);
    }
    ks.push_back(k);
    vals.push_back(amp * v);
  }
  f.table_ = std::make_shared<numerics::CubicSpline>(ks, vals);
  f.table_cut_ = k_cut;
  return f;
}

TestFunction TestFunction::tabulated(std::vector<double> k_nodes,
                                     std::vector<double> values, int dimension) {
  if (dimension != 1 && dimension != 3)
    throw ValidationError("TestFunction: dimension must be 1 or 3");
  TestFunction f;
  f.kind_ = Kind::TabulatedRadial;
  f.d_ = dimension;
  f.table_cut_ = k_nodes.empty() ? 0.0 : k_nodes.back();
  f.table_ = std::make_shared<numerics::CubicSpline>(std::move(k_nodes),
                                                     std::move(values));
  return f;
}

double TestFunction::fourier(double k) const {
  const double kk = std::abs(k);
  switch (kind_) {
    case Kind::Gaussian:
      return std::pow(M_PI, -0.25 * d_) * std::pow(param_, 0.5 * d_) *
             std::exp(-0.5 * param_ * param_ * kk * kk);
    case Kind::Bump:
    case Kind::TabulatedRadial:
      if (kk >= table_cut_) return 0.0;
      return (*table_)(kk);
  }
  return 0.0;
}

double TestFunction::momentum_norm_sq(const QuadratureSpec& spec) const {
  auto profile = [&](double k) {
    const double v = fourier(k);
    return Complex(v * v, 0.0);
  };
  if (d_ == 1)
    return 2.0 * numerics::integrate_1d(profile, {0.0, kInf}, spec).value.real();
  return numerics::integrate_radial_3d(profile, spec).value.real();
}

double TestFunction::parseval_defect(const QuadratureSpec& spec) const {
  if (kind_ == Kind::TabulatedRadial)
    throw ValidationError("parseval_defect: no position-space profile available");
  double x_norm_sq = 1.0;  // both built-in kinds are constructed unit-norm
  return std::abs(momentum_norm_sq(spec) - x_norm_sq);
}

// ---------------------------------------------------------------------------
// Delta C and the bound
// ---------------------------------------------------------------------------

double delta_C(const TestFunction& f1, const TestFunction& f2, double tau,
               const DispersionParams& p, const QuadratureSpec& spec,
               Weighting weighting) {
  p.validate();
  if (f1.dimension() != f2.dimension())
    throw DimensionMismatch("delta_C: test functions live in different dimensions");
  auto integrand = [&](double k) -> Complex {
    const double w = (weighting == Weighting::Sesquilinear)
                         ? f1.fourier(k) * f2.fourier(k)
                         : f1.fourier(k) - f2.fourier(k);  // Difference variant
    if (w == 0.0) return Complex(0.0, 0.0);
    return w * beta(k, tau, p);
  };
  Complex value;
  if (f1.dimension() == 1) {
    // radial profiles are even in k
    value = 2.0 * numerics::integrate_1d(integrand, {0.0, kInf}, spec).value;
  } else {
    value = numerics::integrate_radial_3d(integrand, spec).value;
  }
  return std::abs(value);
}

double epsilon_for_delta(const TestFunction& f, double delta,
                         const DispersionParams& p, const QuadratureSpec& spec) {
  if (!(delta > 0)) throw ValidationError("epsilon_for_delta: delta must be > 0");
  p.validate();
  const double threshold = p.m0 * p.c * delta;
  auto profile = [&](double k) {
    const double v = f.fourier(k);
    return Complex(v * v, 0.0);
  };
  if (f.dimension() == 1)
    return 2.0 *
           numerics::integrate_1d(profile, {threshold, kInf}, spec).value.real();
  auto shell = [&](double k) -> Complex {
    if (k <= threshold) return Complex(0.0, 0.0);
    return profile(k);
  };
  // integrate 4 pi k^2 |f~|^2 on (threshold, inf) directly
  auto radial = [&](double k) -> Complex {
    const Complex v = shell(k);
    if (v == Complex(0.0, 0.0)) return v;
    return 4.0 * M_PI * k * k * v;
  };
  return numerics::integrate_1d(radial, {threshold, kInf}, spec).value.real();
}

Lemma2Report verify_lemma2(const TestFunction& f1, const TestFunction& f2, double tau,
                           double delta, const DispersionParams& p,
                           const QuadratureSpec& spec) {
  Lemma2Report rep;
  rep.delta = delta;
  rep.tau = tau;
  rep.epsilon = std::max(epsilon_for_delta(f1, delta, p, spec),
                         epsilon_for_delta(f2, delta, p, spec));
  rep.delta_c = delta_C(f1, f2, tau, p, spec);
  rep.lhs = 2.0 * p.m0 * rep.delta_c;
  // hbar = 1 in the time term
  rep.rhs = 2.0 * rep.epsilon + 0.5 * delta * delta +
            std::abs(tau) * p.m0 * p.c * p.c * std::pow(delta, 4.0) / 8.0;
  rep.margin = rep.rhs - rep.lhs;
  rep.pass = rep.lhs <= rep.rhs;
  return rep;
}

ConvergenceScan convergence_scan(const TestFunction& f1, const TestFunction& f2,
                                 double tau, const std::vector<double>& c_list,
                                 double m0, const QuadratureSpec& spec) {
  if (c_list.size() < 4)
    throw ValidationError("convergence_scan: need at least 4 speeds");
  if (!std::is_sorted(c_list.begin(), c_list.end()))
    throw ValidationError("convergence_scan: c_list must be ascending");
  if (c_list.back() < 100.0 * c_list.front())
    throw ValidationError("convergence_scan: c_list must span at least 2 decades");
  ConvergenceScan scan;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double c : c_list) {
    const double dc = delta_C(f1, f2, tau, {m0, c}, spec);
    scan.points.push_back({c, dc});
    const double x = std::log(c), y = std::log(dc);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = double(c_list.size());
  scan.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return scan;
}

MismatchCertificate kernel_mismatch_certificate(const DispersionParams& p,
                                                const TestFunction& f,
                                                const QuadratureSpec& spec) {
  p.validate();
  auto integrand = [&](double k) -> Complex {
    const double v = f.fourier(k);
    if (v == 0.0) return Complex(0.0, 0.0);
    return Complex(v * v * kernel_gap(k, p), 0.0);
  };
  numerics::QuadratureResult res;
  if (f.dimension() == 1) {
    res = numerics::integrate_1d(integrand, {0.0, kInf}, spec);
    res.value *= 2.0;
    res.error_estimate *= 2.0;
  } else {
    res = numerics::integrate_radial_3d(integrand, spec);
  }
  return {res.value.real(), res.error_estimate};
}

InequalityCheck proof_inequalities(const DispersionParams& p, double delta, double tau,
                                   int n_points) {
  p.validate();
  if (!(delta > 0)) throw ValidationError("proof_inequalities: delta must be > 0");
  InequalityCheck check;
  check.n_points = n_points;
  const double k_max = p.m0 * p.c * delta;
  const double bound_gap = delta * delta / (4.0 * p.m0);
  const double bound_phase =
      p.m0 * p.c * p.c * std::abs(tau) * std::pow(delta, 4.0) / 8.0;
  for (int i = 0; i < n_points; ++i) {
    const double k = k_max * (i + 1) / double(n_points);
    const KernelPair kp = kernel_pair(k, p);
    if (kernel_gap(k, p) > bound_gap) ++check.violations_kernel_gap;
    const double phase_diff =
        2.0 * std::abs(std::sin(0.5 * tau * phase_gap(k, p)));
    if (phase_diff > bound_phase) ++check.violations_phase;
    if (kp.relativistic > kp.nonrelativistic) ++check.violations_kernel_order;
  }
  return check;
}

}  // namespace causalab::relcompare
