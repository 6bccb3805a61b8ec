#include "causalab/spreading.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <sstream>

#include "causalab/numerics.hpp"

namespace causalab::spreading {

namespace {

std::mutex g_fftw_mutex;  // FFTW planning is not thread-safe

void fft_inplace(Eigen::VectorXcd& data, int sign) {
  const int n = static_cast<int>(data.size());
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    plan = fftw_plan_dft_1d(n, reinterpret_cast<fftw_complex*>(data.data()),
                            reinterpret_cast<fftw_complex*>(data.data()), sign,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  {
    std::lock_guard<std::mutex> lock(g_fftw_mutex);
    fftw_destroy_plan(plan);
  }
  if (sign == FFTW_BACKWARD) data /= double(n);
}

double wavenumber(int j, int n, double box) {
  const int m = (j <= n / 2) ? j : j - n;
  return 2.0 * M_PI * m / box;
}

// end-corrected 4th-order weights over a sample range [ja, jb] of a uniform grid
double segment_integral_abs2(const WaveFunction& psi, int ja, int jb) {
  const double h = psi.grid.spacing();
  if (jb - ja + 1 < 8)
    throw ValidationError("localization: region covers fewer than 8 samples");
  static const double kEdge[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  double acc = 0.0;
  for (int j = ja; j <= jb; ++j) {
    double w = h;
    const int from_left = j - ja;
    const int from_right = jb - j;
    if (from_left < 3) w = kEdge[from_left] * h;
    if (from_right < 3) w = kEdge[from_right] * h;
    acc += w * std::norm(psi.values[j]);
  }
  return acc;
}

Complex segment_inner_indicator(const WaveFunction& psi, int ja, int jb) {
  const double h = psi.grid.spacing();
  static const double kEdge[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
  Complex acc = 0.0;
  for (int j = ja; j <= jb; ++j) {
    double w = h;
    const int from_left = j - ja;
    const int from_right = jb - j;
    if (from_left < 3) w = kEdge[from_left] * h;
    if (from_right < 3) w = kEdge[from_right] * h;
    acc += w * psi.values[j];
  }
  return acc;
}

int snap_to_grid(const GridSpec& g, double x) {
  const double idx = (x - g.origin) / g.spacing();
  int j = static_cast<int>(std::llround(idx));
  return std::clamp(j, 0, g.n - 1);
}

}  // namespace

WaveFunction bump_state(const GridSpec& grid, double center, double halfwidth) {
  grid.validate();
  if (!(halfwidth > 0)) throw ValidationError("bump_state: halfwidth must be > 0");
  WaveFunction psi{grid, Eigen::VectorXcd::Zero(grid.n)};
  for (int j = 0; j < grid.n; ++j) {
    const double u = (grid.point(j) - center) / halfwidth;
    if (std::abs(u) < 1.0)
      psi.values[j] = std::exp(-1.0 / (1.0 - u * u));
  }
  return psi.normalized();
}

WaveFunction gaussian_state(const GridSpec& grid, double center, double width,
                            double k0) {
  grid.validate();
  if (!(width > 0)) throw ValidationError("gaussian_state: width must be > 0");
  WaveFunction psi{grid, Eigen::VectorXcd(grid.n)};
  for (int j = 0; j < grid.n; ++j) {
    const double x = grid.point(j);
    const double u = (x - center) / width;
    psi.values[j] = std::exp(Complex(-0.5 * u * u, k0 * x));
  }
  return psi.normalized();
}

Support essential_support(const WaveFunction& psi) {
  const double peak = psi.values.cwiseAbs().maxCoeff();
  const double floor = 1e-13 * peak;
  int lo = 0, hi = psi.grid.n - 1;
  while (lo < hi && std::abs(psi.values[lo]) <= floor) ++lo;
  while (hi > lo && std::abs(psi.values[hi]) <= floor) --hi;
  return {psi.grid.point(lo), psi.grid.point(hi)};
}

FreeEvolution evolve_free_line(const WaveFunction& psi0, double t, double mass) {
  if (psi0.grid.kind != GridKind::Periodic)
    throw ValidationError("evolve_free_line: state must live on a periodic box");
  if (!(mass > 0)) throw ValidationError("evolve_free_line: mass must be > 0");
  const double box = psi0.grid.length;
  const Support s = essential_support(psi0);
  const double margin =
      std::min(s.lo - psi0.grid.origin, psi0.grid.origin + box - s.hi);
  if (margin < 0.25 * box)
    throw SupportTooWide("evolve_free_line: support-boundary distance " +
                         std::to_string(margin) + " below 25% of the box");

  FreeEvolution out{psi0, 0.0};
  Eigen::VectorXcd spectrum = psi0.values;
  fft_inplace(spectrum, FFTW_FORWARD);
  const int n = psi0.grid.n;
  double total = 0.0, top = 0.0;
  const double k_nyquist = M_PI / psi0.grid.spacing();
  for (int j = 0; j < n; ++j) {
    const double k = wavenumber(j, n, box);
    const double m2 = std::norm(spectrum[j]);
    total += m2;
    if (std::abs(k) > 0.5 * k_nyquist) top += m2;
    spectrum[j] *= std::exp(Complex(0, -t * k * k / (2.0 * mass)));
  }
  out.aliasing_bound = (total > 0) ? top / total : 0.0;
  if (t == 0.0) return out;  // identity evolution, bit-exact
  fft_inplace(spectrum, FFTW_BACKWARD);
  out.state.values = std::move(spectrum);
  return out;
}

WaveFunction evolve_bounded(const SpectralDecomposition& decomp, double t) {
  if (decomp.capture < 1.0 - 1e-10)
    throw TruncatedBasis("evolve_bounded: decomposition captures only " +
                         std::to_string(decomp.capture) + " of the norm");
  const auto& spec = decomp.spectrum;
  WaveFunction out{spec.grid, Eigen::VectorXcd::Zero(spec.grid.n)};
  for (size_t i = 0; i < spec.modes.size(); ++i) {
    const Complex phase = std::exp(Complex(0, -spec.modes[i].energy * t));
    out.values += decomp.coefficients[i] * phase * spec.modes[i].samples;
  }
  return out;
}

void LocalizationOperator::validate() const {
  if (!(region.lo < region.hi))
    throw ValidationError("LocalizationOperator: empty region");
  if (kind == Kind::RankOne && !normalized && (region.hi - region.lo) > 1.0)
    throw ValidationError(
        "LocalizationOperator: unnormalized rank-one projector with |V| > 1 "
        "violates 0 <= N <= 1");
}

double localization_probability(const WaveFunction& psi,
                                const LocalizationOperator& op) {
  op.validate();
  const GridSpec& g = psi.grid;
  const double left = g.origin;
  const double right = g.origin + (g.kind == GridKind::Closed
                                       ? g.length
                                       : g.length - g.spacing());
  if (op.region.hi < left || op.region.lo > right)
    throw EmptyRegion("localization_probability: region misses the grid");
  const int ja = snap_to_grid(g, std::max(op.region.lo, left));
  const int jb = snap_to_grid(g, std::min(op.region.hi, right));
  double value = 0.0;
  if (op.kind == LocalizationOperator::Kind::ProjectorMultiplication) {
    value = segment_integral_abs2(psi, ja, jb);
  } else {
    const double vol = op.region.hi - op.region.lo;
    const Complex amp = segment_inner_indicator(psi, ja, jb);
    value = std::norm(amp);
    if (op.normalized) value /= vol;
  }
  const double nrm2 = psi.norm() * psi.norm();
  const double excess = value - nrm2;
  if (excess > 1e-10 * std::max(1.0, nrm2))
    throw PropertyError("localization_probability: expectation exceeds 1");
  return std::clamp(value, 0.0, nrm2);
}

ProbabilityRecord p_A_series(const WaveFunction& psi0, const EvolutionSpec& evolution,
                             const LocalizationOperator& op,
                             const std::vector<double>& times) {
  if (times.empty()) throw ValidationError("p_A_series: no sample times");
  if (!std::is_sorted(times.begin(), times.end()))
    throw ValidationError("p_A_series: times must be sorted");
  if (!op.complement)
    throw ValidationError("p_A_series: operator must be the complement A = 1 - N(V)");
  ProbabilityRecord rec;
  rec.times = times;
  rec.values.reserve(times.size());
  for (double t : times) {
    WaveFunction psi_t{psi0.grid, psi0.values};
    if (const auto* free = std::get_if<FreeLine>(&evolution)) {
      psi_t = evolve_free_line(psi0, t, free->mass).state;
    } else {
      psi_t = evolve_bounded(std::get<BoundedEvolution>(evolution).decomposition, t);
    }
    double value;
    if (op.kind == LocalizationOperator::Kind::ProjectorMultiplication) {
      // 1 - integral over V computed as the direct outside integral, which
      // keeps tiny leaked probabilities strictly positive
      const GridSpec& g = psi_t.grid;
      const int ja = snap_to_grid(g, op.region.lo);
      const int jb = snap_to_grid(g, op.region.hi);
      double outside = 0.0;
      if (ja > 0) outside += segment_integral_abs2(psi_t, 0, ja);
      if (jb < g.n - 1) outside += segment_integral_abs2(psi_t, jb, g.n - 1);
      value = outside;
    } else {
      value = 1.0 - localization_probability(psi_t, op);
    }
    if (value < -1e-10 || value > 1.0 + 1e-10)
      throw PropertyError("p_A_series: value escapes [0,1] beyond tolerance");
    rec.values.push_back(std::clamp(value, 0.0, 1.0));
  }
  return rec;
}

DichotomyVerdict classify_dichotomy(const ProbabilityRecord& record, double tol) {
  if (record.times.size() < 64)
    throw ValidationError("classify_dichotomy: need at least 64 samples");
  size_t zeros = 0;
  double max_value = 0.0;
  double first_nonzero_t = std::numeric_limits<double>::quiet_NaN();
  for (size_t i = 0; i < record.values.size(); ++i) {
    if (record.values[i] <= tol) {
      ++zeros;
    } else {
      max_value = std::max(max_value, record.values[i]);
      if (std::isnan(first_nonzero_t)) first_nonzero_t = record.times[i];
    }
  }
  DichotomyVerdict v;
  v.zero_fraction = double(zeros) / double(record.values.size());
  v.branch = (zeros == record.values.size()) ? Branch::Confined : Branch::Spreading;
  std::ostringstream ev;
  if (v.branch == Branch::Confined) {
    ev << "all " << record.values.size() << " samples <= " << tol;
  } else {
    ev << (record.values.size() - zeros) << "/" << record.values.size()
       << " samples above " << tol << ", first at t=" << first_nonzero_t
       << ", max p_A=" << max_value;
  }
  v.support_evidence = ev.str();
  return v;
}

TailProbe tail_probe(const WaveFunction& psi0, double t, double radius, double mass,
                     double noise_floor) {
  if (t < 0) throw ValidationError("tail_probe: t must be >= 0");
  const Support s = essential_support(psi0);
  if (s.lo < -radius || s.hi > radius)
    throw ValidationError("tail_probe: support of psi0 escapes [-R, R]");
  TailProbe probe;
  probe.noise_floor = noise_floor;
  if (t == 0.0) {
    probe.value = 0.0;
    probe.resolved = true;
    return probe;
  }
  const WaveFunction psi_t = evolve_free_line(psi0, t, mass).state;
  const GridSpec& g = psi_t.grid;
  const int jl = snap_to_grid(g, -radius);
  const int jr = snap_to_grid(g, radius);
  // direct sum over the outside segments: no cancellation against the bulk
  probe.value =
      segment_integral_abs2(psi_t, 0, jl) + segment_integral_abs2(psi_t, jr, g.n - 1);
  probe.resolved = probe.value > noise_floor;
  return probe;
}

double tail_probability(const WaveFunction& psi0, double t, double radius,
                        double mass, double noise_floor) {
  const TailProbe probe = tail_probe(psi0, t, radius, mass, noise_floor);
  if (!probe.resolved)
    throw ResolutionInsufficient(
        "tail_probability: value " + std::to_string(probe.value) +
        " cannot be distinguished from the grid noise floor");
  return probe.value;
}

}  // namespace causalab::spreading
