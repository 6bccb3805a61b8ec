#include "causalab/numerics.hpp"

#include <unsupported/Eigen/MatrixFunctions>

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace causalab::numerics {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Gauss(7)/Kronrod(15) constants from QUADPACK qk15.
constexpr double kXgk[8] = {
    0.9914553711208126, 0.9491079123427585, 0.8648644233597691,
    0.7415311855993944, 0.5860872354676911, 0.4058451513773972,
    0.2077849550078985, 0.0};
constexpr double kWgk[8] = {
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259,  0.1690047266392679,  0.1903505780647854,
    0.2044329400752989,  0.2094821410847278};
constexpr double kWg[4] = {0.1294849661688697, 0.2797053914892767,
                           0.3818300505051189, 0.4179591836734694};

struct PanelResult {
  Complex value;
  double error;
};

PanelResult gk15(const std::function<Complex(double)>& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  Complex fc = f(center);
  Complex result_gauss = kWg[3] * fc;
  Complex result_kronrod = kWgk[7] * fc;
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const Complex f1 = f(center - dx);
    const Complex f2 = f(center + dx);
    result_kronrod += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) result_gauss += kWg[j / 2] * (f1 + f2);
  }
  result_kronrod *= half;
  result_gauss *= half;
  // |K15 - G7| tracks the Gauss error, which dominates the Kronrod error;
  // conservative as a local estimate for the returned Kronrod value.
  const double err = std::abs(result_kronrod - result_gauss);
  return {result_kronrod, err};
}

struct Segment {
  double a, b;
  Complex value;
  double error;
  bool operator<(const Segment& o) const { return error < o.error; }
};

QuadratureResult adapt(const std::function<Complex(double)>& f, double a, double b,
                       const QuadratureSpec& spec) {
  std::priority_queue<Segment> queue;
  auto first = gk15(f, a, b);
  queue.push({a, b, first.value, first.error});
  Complex total = first.value;
  double total_err = first.error;
  int splits = 0;
  while (total_err > std::max(spec.absolute_tolerance,
                              spec.relative_tolerance * std::abs(total))) {
    if (splits >= spec.max_subdivisions)
      throw NonConvergence("integrate_1d: subdivision budget exhausted with error " +
                           std::to_string(total_err));
    Segment worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      // interval is at machine resolution; accept what we have
      queue.push(worst);
      break;
    }
    auto left = gk15(f, worst.a, mid);
    auto right = gk15(f, mid, worst.b);
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    queue.push({worst.a, mid, left.value, left.error});
    queue.push({mid, worst.b, right.value, right.error});
    ++splits;
  }
  return {total, total_err, splits};
}

}  // namespace

void QuadratureSpec::validate() const {
  if (!(relative_tolerance > 0) || !(absolute_tolerance > 0))
    throw ValidationError("QuadratureSpec: tolerances must be positive");
  if (max_subdivisions < 1)
    throw ValidationError("QuadratureSpec: max_subdivisions must be >= 1");
}

void Bracket::validate() const {
  if (!(lo < hi)) throw ValidationError("Bracket: lo must be < hi");
  if (!(residual_lo * residual_hi < 0) && residual_lo != 0 && residual_hi != 0)
    throw ValidationError("Bracket: residuals must change sign");
}

QuadratureResult integrate_1d(const std::function<Complex(double)>& f, Interval iv,
                              const QuadratureSpec& spec) {
  spec.validate();
  const bool lo_inf = std::isinf(iv.lo);
  const bool hi_inf = std::isinf(iv.hi);
  if (!lo_inf && !hi_inf) {
    if (!(iv.lo < iv.hi)) throw ValidationError("integrate_1d: empty interval");
    return adapt(f, iv.lo, iv.hi, spec);
  }
  if (lo_inf && hi_inf) {
    QuadratureSpec half_spec = spec;
    half_spec.absolute_tolerance = 0.5 * spec.absolute_tolerance;
    auto left = integrate_1d(f, {-kInf, 0.0}, half_spec);
    auto right = integrate_1d(f, {0.0, kInf}, half_spec);
    return {left.value + right.value, left.error_estimate + right.error_estimate,
            left.subdivisions + right.subdivisions};
  }
  // Semi-infinite: substitute x = a + t/(1-t) (or mirrored), t in [0,1).
  const double a = lo_inf ? iv.hi : iv.lo;
  const double sign = lo_inf ? -1.0 : 1.0;
  auto mapped = [&](double t) -> Complex {
    const double u = 1.0 - t;
    const double x = a + sign * t / u;
    const double jac = 1.0 / (u * u);
    Complex val = f(x);
    if (val == Complex(0.0, 0.0)) return val;
    return val * jac;
  };
  // Orientation folds into the map: t in [0,1) sweeps away from the finite end
  // on both half-lines, so the jacobian stays positive.
  return adapt(mapped, 0.0, 1.0, spec);
}

QuadratureResult integrate_radial_3d(const std::function<Complex(double)>& g,
                                     const QuadratureSpec& spec) {
  auto radial = [&](double k) -> Complex {
    Complex v = g(k);
    if (v == Complex(0.0, 0.0)) return v;
    return 4.0 * M_PI * k * k * v;
  };
  return integrate_1d(radial, {0.0, kInf}, spec);
}

double integrate_real(const std::function<double(double)>& f, Interval iv,
                      const QuadratureSpec& spec) {
  auto res = integrate_1d([&](double x) { return Complex(f(x), 0.0); }, iv, spec);
  return res.value.real();
}

double brent(const std::function<double(double)>& f, Bracket br, double xtol) {
  br.validate();
  double a = br.lo, b = br.hi;
  double fa = br.residual_lo, fb = br.residual_hi;
  if (fa == 0) return a;
  if (fb == 0) return b;
  double c = a, fc = fa;
  double d = b - a, e = d;
  const double eps = std::numeric_limits<double>::epsilon();
  while (true) {
    if (std::abs(fc) < std::abs(fb)) {
      a = b;
      b = c;
      c = a;
      fa = fb;
      fb = fc;
      fc = fa;
    }
    const double tol1 = 2.0 * eps * std::abs(b) + 0.5 * xtol;
    const double xm = 0.5 * (c - b);
    if (std::abs(xm) <= tol1 || fb == 0.0) return b;
    if (std::abs(e) >= tol1 && std::abs(fa) > std::abs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc;
        const double r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0) q = -q;
      p = std::abs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::abs(tol1 * q), std::abs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::abs(d) > tol1) ? d : std::copysign(tol1, xm);
    fb = f(b);
    if ((fb > 0) == (fc > 0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
}

namespace {

// Scans for sign changes; same-sign triples whose parabolic fit dips through
// zero are re-scanned recursively, which resolves exponentially close root
// pairs (attractive double wells) that a plain scan steps over.
void scan_for_roots_impl(const std::function<double(double)>& f, double lo, double hi,
                         int samples, int depth, int& refine_budget,
                         std::vector<double>& roots) {
  std::vector<double> xs(samples + 1), fs(samples + 1);
  const double step = (hi - lo) / samples;
  for (int i = 0; i <= samples; ++i) {
    xs[i] = (i == samples) ? hi : lo + i * step;
    fs[i] = f(xs[i]);
  }
  for (int i = 0; i < samples; ++i) {
    if (fs[i] == 0.0) {
      roots.push_back(xs[i]);
    } else if (std::isfinite(fs[i]) && std::isfinite(fs[i + 1]) &&
               fs[i] * fs[i + 1] < 0) {
      roots.push_back(brent(f, {xs[i], xs[i + 1], fs[i], fs[i + 1]}));
    }
  }
  if (fs[samples] == 0.0) roots.push_back(xs[samples]);
  if (depth >= 8) return;
  for (int i = 1; i < samples; ++i) {
    const double a = fs[i - 1], b = fs[i], c = fs[i + 1];
    if (!std::isfinite(a) || !std::isfinite(b) || !std::isfinite(c)) continue;
    if (a * b <= 0 || b * c <= 0) continue;  // sign change already handled
    const bool toward_zero = std::abs(b) <= std::abs(a) && std::abs(b) <= std::abs(c);
    if (!toward_zero) continue;
    const double curvature = a - 2.0 * b + c;
    if (curvature == 0.0) continue;
    const double slope = 0.5 * (c - a);
    const double vertex_value = b - slope * slope / (2.0 * curvature);
    // refine when the fitted extremum crosses (or grazes) zero
    if (vertex_value * b < 0 || std::abs(vertex_value) < 1e-3 * std::abs(b)) {
      if (refine_budget-- <= 0) return;
      scan_for_roots_impl(f, xs[i - 1], xs[i + 1], 64, depth + 1, refine_budget, roots);
    }
  }
}

std::vector<double> scan_for_roots(const std::function<double(double)>& f, double lo,
                                   double hi, int samples) {
  std::vector<double> roots;
  int refine_budget = 64;
  scan_for_roots_impl(f, lo, hi, samples, 0, refine_budget, roots);
  return roots;
}

}  // namespace

std::vector<double> find_roots(const std::function<double(double)>& residual, Interval iv,
                               std::optional<int> expected_count,
                               const std::vector<double>& singularities,
                               int initial_samples) {
  if (!(iv.lo < iv.hi)) throw ValidationError("find_roots: empty interval");
  std::vector<double> cuts = {iv.lo};
  for (double s : singularities)
    if (s > iv.lo && s < iv.hi) cuts.push_back(s);
  cuts.push_back(iv.hi);
  std::sort(cuts.begin(), cuts.end());

  int samples = initial_samples;
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::vector<double> roots;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
      // stay clear of declared singularities (interval endpoints are kept)
      const double margin = (cuts[i + 1] - cuts[i]) * 1e-9;
      const bool lo_is_singular = (i > 0);
      const bool hi_is_singular = (i + 2 < cuts.size());
      const double lo = cuts[i] + (lo_is_singular ? margin : 0.0);
      const double hi = cuts[i + 1] - (hi_is_singular ? margin : 0.0);
      if (!(lo < hi)) continue;
      auto r = scan_for_roots(residual, lo, hi, samples);
      roots.insert(roots.end(), r.begin(), r.end());
    }
    std::sort(roots.begin(), roots.end());
    // merge near-duplicates
    std::vector<double> unique;
    for (double r : roots) {
      if (unique.empty() || std::abs(r - unique.back()) >
                                1e-11 * std::max(1.0, std::abs(r)))
        unique.push_back(r);
    }
    if (!expected_count || static_cast<int>(unique.size()) == *expected_count)
      return unique;
    if (static_cast<int>(unique.size()) > *expected_count)
      throw MissedRoot("find_roots: found " + std::to_string(unique.size()) +
                       " roots, expected " + std::to_string(*expected_count));
    samples *= 2;
  }
  throw MissedRoot("find_roots: expected " + std::to_string(*expected_count) +
                   " roots not located after sampling refinement");
}

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m) {
  if (m.rows() != m.cols())
    throw DimensionMismatch("matrix_exponential: matrix must be square");
  if (m.rows() > 4096)
    throw ValidationError("matrix_exponential: dimension exceeds 4096");
  if (!m.allFinite())
    throw ValidationError("matrix_exponential: matrix has non-finite entries");
  return m.exp();
}

GaussLegendre gauss_legendre(int n) {
  if (n < 1) throw ValidationError("gauss_legendre: n must be >= 1");
  GaussLegendre out;
  out.nodes.resize(n);
  out.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    out.nodes[i] = -x;
    out.nodes[n - 1 - i] = x;
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    out.weights[i] = w;
    out.weights[n - 1 - i] = w;
  }
  return out;
}

CubicSpline::CubicSpline(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const size_t n = x_.size();
  if (n < 3 || y_.size() != n)
    throw ValidationError("CubicSpline: need >= 3 matching nodes");
  for (size_t i = 0; i + 1 < n; ++i)
    if (!(x_[i] < x_[i + 1]))
      throw ValidationError("CubicSpline: nodes must be strictly increasing");
  m_.assign(n, 0.0);
  // natural spline: tridiagonal system for interior second derivatives
  std::vector<double> diag(n, 1.0), upper(n, 0.0), lower(n, 0.0), rhs(n, 0.0);
  for (size_t i = 1; i + 1 < n; ++i) {
    const double h0 = x_[i] - x_[i - 1];
    const double h1 = x_[i + 1] - x_[i];
    lower[i] = h0;
    diag[i] = 2.0 * (h0 + h1);
    upper[i] = h1;
    rhs[i] = 6.0 * ((y_[i + 1] - y_[i]) / h1 - (y_[i] - y_[i - 1]) / h0);
  }
  for (size_t i = 1; i < n; ++i) {
    const double w = lower[i] / diag[i - 1];
    diag[i] -= w * upper[i - 1];
    rhs[i] -= w * rhs[i - 1];
  }
  m_[n - 1] = rhs[n - 1] / diag[n - 1];
  for (size_t ii = n - 1; ii-- > 0;) {
    m_[ii] = (rhs[ii] - upper[ii] * m_[ii + 1]) / diag[ii];
  }
}

double CubicSpline::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const size_t i = static_cast<size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double a = (x_[i + 1] - x) / h;
  const double b = (x - x_[i]) / h;
  return a * y_[i] + b * y_[i + 1] +
         ((a * a * a - a) * m_[i] + (b * b * b - b) * m_[i + 1]) * h * h / 6.0;
}

}  // namespace causalab::numerics
