#include "causalab/boundary.hpp"

#include <algorithm>
#include <cmath>

#include "causalab/numerics.hpp"

namespace causalab::boundary {

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

double reduce_angle(double theta) {
  double t = std::fmod(theta, kTwoPi);
  if (t < 0) t += kTwoPi;
  return t;
}

// Entire-in-E solutions of -u'' = E u:
//   phi_c(E, x): u(0) = 1, u'(0) = 0
//   phi_s(E, x): u(0) = 0, u'(0) = 1
// Evaluated through the single entire functions Kc(z) and Ks(z) of z = E x^2,
// so attractive boundaries (negative E) need no branch handling.
double entire_kc(double z) {
  if (std::abs(z) < 1e-3)
    return 1.0 - z / 2.0 + z * z / 24.0 - z * z * z / 720.0 +
           z * z * z * z / 40320.0;
  if (z > 0) return std::cos(std::sqrt(z));
  return std::cosh(std::sqrt(-z));
}

double entire_ks(double z) {
  if (std::abs(z) < 1e-3)
    return 1.0 - z / 6.0 + z * z / 120.0 - z * z * z / 5040.0 +
           z * z * z * z / 362880.0;
  if (z > 0) {
    const double r = std::sqrt(z);
    return std::sin(r) / r;
  }
  const double r = std::sqrt(-z);
  return std::sinh(r) / r;
}

double phi_c(double energy, double x) { return entire_kc(energy * x * x); }
double phi_s(double energy, double x) { return x * entire_ks(energy * x * x); }
double phi_c_prime(double energy, double x) { return -energy * phi_s(energy, x); }
double phi_s_prime(double energy, double x) { return phi_c(energy, x); }

struct RobinResidual {
  double sigma0, sigmaL, length;

  // entire residual F(E); roots are the eigenvalues
  double at_energy(double e) const {
    const double t1 = (sigma0 + sigmaL) * phi_c(e, length);
    const double t2 = (sigma0 * sigmaL - e) * phi_s(e, length);
    return t1 + t2;
  }
  // natural magnitude of F near e, immune to the root cancellation itself
  double scale_at(double e) const {
    const double c_mag = std::max(1.0, std::abs(phi_c(e, length)));
    const double s_mag = std::max(length, std::abs(phi_s(e, length)));
    return (std::abs(sigma0) + std::abs(sigmaL)) * c_mag +
           (std::abs(sigma0 * sigmaL) + std::abs(e)) * s_mag + 1e-30;
  }
  // cosh-normalized form for attractive scans, same roots for E = -kappa^2;
  // written as (kappa+s0)(kappa+sL) - (s0 sL + kappa^2) q to stay accurate when
  // the two bound states are exponentially close
  double at_kappa(double kappa) const {
    const double q = 2.0 / (std::exp(2.0 * kappa * length) + 1.0);
    return ((kappa + sigma0) * (kappa + sigmaL) -
            (sigma0 * sigmaL + kappa * kappa) * q) /
           kappa;
  }
};

int count_nodes(const Eigen::VectorXcd& v, bool skip_endpoints) {
  const int n = static_cast<int>(v.size());
  double maxabs = 0.0;
  for (int i = 0; i < n; ++i) maxabs = std::max(maxabs, std::abs(v[i]));
  const double floor = 1e-8 * maxabs;
  int last_sign = 0;
  int nodes = 0;
  const int lo = skip_endpoints ? 1 : 0;
  const int hi = skip_endpoints ? n - 1 : n;
  for (int i = lo; i < hi; ++i) {
    const double re = v[i].real();
    if (std::abs(re) < floor) continue;
    const int s = re > 0 ? 1 : -1;
    if (last_sign != 0 && s != last_sign) ++nodes;
    last_sign = s;
  }
  return nodes;
}

void fix_phase_and_normalize(Eigen::VectorXcd& v, const GridSpec& g) {
  const Eigen::VectorXd w = quadrature_weights(g);
  double nrm2 = 0.0;
  for (int i = 0; i < v.size(); ++i) nrm2 += w[i] * std::norm(v[i]);
  v /= std::sqrt(nrm2);
  double maxabs = 0.0;
  for (int i = 0; i < v.size(); ++i) maxabs = std::max(maxabs, std::abs(v[i]));
  for (int i = 0; i < v.size(); ++i) {
    if (std::abs(v[i]) > 1e-10 * maxabs) {
      const Complex phase = v[i] / std::abs(v[i]);
      v *= std::conj(phase);
      break;
    }
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// grids
// ---------------------------------------------------------------------------

void GridSpec::validate() const {
  if (n < 16) throw GridTooCoarse("GridSpec: need n >= 16");
  if (!(length > 0)) throw ValidationError("GridSpec: length must be > 0");
  if (!(spacing() > 0)) throw ValidationError("GridSpec: spacing must be > 0");
}

bool GridSpec::compatible(const GridSpec& o) const {
  return n == o.n && kind == o.kind && std::abs(length - o.length) < 1e-12 * length &&
         std::abs(origin - o.origin) <= 1e-12 * (std::abs(origin) + length) &&
         std::abs(twist - o.twist) < 1e-12;
}

Eigen::VectorXd quadrature_weights(const GridSpec& g) {
  const double h = g.spacing();
  Eigen::VectorXd w = Eigen::VectorXd::Constant(g.n, h);
  if (g.kind == GridKind::Closed) {
    // 4th-order end-corrected trapezoid (requires n >= 8, enforced by validate)
    static const double kEdge[3] = {3.0 / 8.0, 7.0 / 6.0, 23.0 / 24.0};
    for (int i = 0; i < 3; ++i) {
      w[i] = kEdge[i] * h;
      w[g.n - 1 - i] = kEdge[i] * h;
    }
  }
  return w;
}

double WaveFunction::norm() const {
  const Eigen::VectorXd w = quadrature_weights(grid);
  double nrm2 = 0.0;
  for (int i = 0; i < values.size(); ++i) nrm2 += w[i] * std::norm(values[i]);
  return std::sqrt(nrm2);
}

WaveFunction WaveFunction::normalized() const {
  WaveFunction out = *this;
  out.values /= norm();
  return out;
}

Complex inner(const WaveFunction& a, const WaveFunction& b) {
  if (!a.grid.compatible(b.grid))
    throw GridMismatch("inner: wavefunctions live on different grids");
  const Eigen::VectorXd w = quadrature_weights(a.grid);
  Complex acc = 0.0;
  for (int i = 0; i < a.values.size(); ++i)
    acc += w[i] * std::conj(a.values[i]) * b.values[i];
  return acc;
}

Eigen::VectorXcd derivative(const WaveFunction& psi) {
  const int n = static_cast<int>(psi.values.size());
  const double h = psi.grid.spacing();
  Eigen::VectorXcd d(n);
  const auto& f = psi.values;
  if (psi.grid.kind == GridKind::Periodic) {
    // wraparound with the twist phase: psi(x + L) = exp(-i theta) psi(x)
    const Complex right = std::exp(Complex(0, -psi.grid.twist));
    const Complex left = std::exp(Complex(0, psi.grid.twist));
    auto at = [&](int j) -> Complex {
      if (j >= n) return right * f[j - n];
      if (j < 0) return left * f[j + n];
      return f[j];
    };
    for (int j = 0; j < n; ++j)
      d[j] = (at(j - 2) - 8.0 * at(j - 1) + 8.0 * at(j + 1) - at(j + 2)) / (12.0 * h);
    return d;
  }
  if (n < 6) throw GridTooCoarse("derivative: need at least 6 samples");
  d[0] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
         (12.0 * h);
  d[1] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
  for (int j = 2; j < n - 2; ++j)
    d[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * h);
  d[n - 2] = (3.0 * f[n - 1] + 10.0 * f[n - 2] - 18.0 * f[n - 3] + 6.0 * f[n - 4] -
              f[n - 5]) /
             (12.0 * h);
  d[n - 1] = (25.0 * f[n - 1] - 48.0 * f[n - 2] + 36.0 * f[n - 3] - 16.0 * f[n - 4] +
              3.0 * f[n - 5]) /
             (12.0 * h);
  return d;
}

// ---------------------------------------------------------------------------
// boundary specs
// ---------------------------------------------------------------------------

void BoundarySpec::validate() const {
  if (!(length > 0)) throw ValidationError("BoundarySpec: length must be > 0");
  if (const auto* r = std::get_if<Robin>(&kind)) {
    if (!std::isfinite(r->sigma0) || !std::isfinite(r->sigmaL))
      throw ValidationError("BoundarySpec: Robin parameters must be finite");
  }
}

std::string BoundarySpec::describe() const {
  if (std::holds_alternative<Dirichlet>(kind)) return "dirichlet";
  if (const auto* r = std::get_if<Robin>(&kind))
    return "robin(" + std::to_string(r->sigma0) + "," + std::to_string(r->sigmaL) + ")";
  const auto& t = std::get<Twisted>(kind);
  return "twisted(" + std::to_string(t.theta) + ")";
}

// ---------------------------------------------------------------------------
// spectra
// ---------------------------------------------------------------------------

namespace {

Spectrum solve_twisted(const BoundarySpec& bc, const GridSpec& grid, int n_modes) {
  const double theta = reduce_angle(std::get<Twisted>(bc.kind).theta);
  const double L = bc.length;
  auto ks = momentum_spectrum_twisted(theta, L, n_modes);
  // sort by (energy, k) for deterministic degenerate ordering
  std::sort(ks.begin(), ks.end(), [](double a, double b) {
    const double ea = a * a, eb = b * b;
    if (ea != eb) return ea < eb;
    return a < b;
  });
  Spectrum out{bc, grid, {}};
  out.grid.twist = theta;
  const double amp = 1.0 / std::sqrt(L);
  for (int i = 0; i < n_modes; ++i) {
    EigenMode m;
    m.index = i;
    m.momentum = ks[i];
    m.energy = ks[i] * ks[i];
    m.samples.resize(grid.n);
    for (int j = 0; j < grid.n; ++j)
      m.samples[j] = amp * std::exp(Complex(0, ks[i] * grid.point(j)));
    fix_phase_and_normalize(m.samples, out.grid);
    m.node_count = 0;  // not defined for complex plane waves
    out.modes.push_back(std::move(m));
  }
  return out;
}

Spectrum solve_robin_like(const BoundarySpec& bc, const GridSpec& grid, int n_modes) {
  const double L = bc.length;
  const bool dirichlet = std::holds_alternative<Dirichlet>(bc.kind);
  double s0 = 0.0, sL = 0.0;
  if (!dirichlet) {
    const auto& r = std::get<Robin>(bc.kind);
    s0 = r.sigma0;
    sL = r.sigmaL;
  }
  const RobinResidual res{s0, sL, L};

  std::vector<double> energies;

  // attractive walls: up to two negative-energy roots, scanned in kappa with a
  // cosh-normalized residual
  if (!dirichlet && std::min(s0, sL) < 0) {
    const double kappa_max =
        2.0 * (std::max(-s0, 0.0) + std::max(-sL, 0.0)) + 3.0 / L;
    auto kappa_roots = causalab::numerics::find_roots(
        [&](double k) { return res.at_kappa(k); }, {1e-9 / L, kappa_max});
    for (double k : kappa_roots) energies.push_back(-k * k);
  }

  // non-negative roots, scanned uniformly in k = sqrt(E)
  const int needed = n_modes - static_cast<int>(energies.size());
  double k_max = (std::max(needed, 1) + 3) * M_PI / L;
  for (int attempt = 0; attempt < 10; ++attempt) {
    std::vector<double> pos;
    if (dirichlet) {
      auto roots = causalab::numerics::find_roots(
          [&](double k) { return phi_s(k * k, L); }, {1e-9 / L, k_max});
      pos = roots;
    } else {
      auto roots = causalab::numerics::find_roots(
          [&](double k) { return res.at_energy(k * k); }, {0.0, k_max});
      pos = roots;
    }
    if (static_cast<int>(pos.size()) >= needed) {
      for (double k : pos) energies.push_back(k * k);
      break;
    }
    k_max *= 1.6;
    if (attempt == 9)
      throw MissedRoot("solve_spectrum: could not locate enough eigenvalues");
  }

  std::sort(energies.begin(), energies.end());
  // drop duplicates from overlapping scans
  std::vector<double> unique;
  for (double e : energies)
    if (unique.empty() || std::abs(e - unique.back()) > 1e-9 * std::max(1.0, std::abs(e)))
      unique.push_back(e);
  if (static_cast<int>(unique.size()) < n_modes)
    throw MissedRoot("solve_spectrum: fewer roots than requested modes");
  unique.resize(n_modes);

  Spectrum out{bc, grid, {}};
  for (int i = 0; i < n_modes; ++i) {
    const double e = unique[i];
    EigenMode m;
    m.index = i;
    m.energy = e;
    m.samples.resize(grid.n);
    for (int j = 0; j < grid.n; ++j) {
      const double x = grid.point(j);
      const double v = dirichlet ? phi_s(e, x) : phi_c(e, x) + s0 * phi_s(e, x);
      m.samples[j] = Complex(v, 0.0);
    }
    fix_phase_and_normalize(m.samples, grid);
    m.node_count = count_nodes(m.samples, true);
    if (m.node_count != i)
      throw MissedRoot("solve_spectrum: oscillation count " +
                       std::to_string(m.node_count) + " for mode " + std::to_string(i));
    // analytic boundary-condition residual at the root
    if (!dirichlet) {
      const double r = std::abs(res.at_energy(e)) / res.scale_at(e);
      if (r > 1e-8)
        throw NumericalError("solve_spectrum: boundary residual " + std::to_string(r));
    }
    out.modes.push_back(std::move(m));
  }
  return out;
}

}  // namespace

Spectrum solve_spectrum(const BoundarySpec& bc, const GridSpec& grid, int n_modes) {
  bc.validate();
  grid.validate();
  if (n_modes < 1) throw ValidationError("solve_spectrum: n_modes must be >= 1");
  if (grid.n < 16 * n_modes)
    throw GridTooCoarse("solve_spectrum: need n >= 16 * n_modes");
  const bool twisted = std::holds_alternative<Twisted>(bc.kind);
  if (twisted && grid.kind != GridKind::Periodic)
    throw ValidationError("solve_spectrum: twisted bc needs a periodic grid");
  if (!twisted && grid.kind != GridKind::Closed)
    throw ValidationError("solve_spectrum: Robin/Dirichlet bc needs a closed grid");
  if (std::abs(grid.length - bc.length) > 1e-12 * bc.length)
    throw ValidationError("solve_spectrum: grid/bc length mismatch");
  return twisted ? solve_twisted(bc, grid, n_modes)
                 : solve_robin_like(bc, grid, n_modes);
}

std::vector<double> momentum_spectrum_twisted(double theta, double length, int n_modes) {
  if (n_modes < 1) throw ValidationError("momentum_spectrum_twisted: n_modes >= 1");
  if (!(length > 0)) throw ValidationError("momentum_spectrum_twisted: length > 0");
  const double th = reduce_angle(theta);
  std::vector<double> ks;
  const int span = n_modes + 2;
  for (int n = -span; n <= span; ++n) ks.push_back((kTwoPi * n - th) / length);
  std::sort(ks.begin(), ks.end(), [](double a, double b) {
    if (std::abs(a) != std::abs(b)) return std::abs(a) < std::abs(b);
    return a < b;
  });
  ks.resize(n_modes);
  return ks;
}

Complex momentum_symmetry_defect(const WaveFunction& phi, const WaveFunction& psi) {
  if (!phi.grid.compatible(psi.grid))
    throw GridMismatch("momentum_symmetry_defect: grid mismatch");
  WaveFunction dpsi{psi.grid, derivative(psi)};
  WaveFunction dphi{phi.grid, derivative(phi)};
  const Complex i(0, 1);
  // <phi, -i psi'> - <-i phi', psi> = -i (<phi, psi'> + <phi', psi>)
  return -i * (inner(phi, dpsi) + inner(dphi, psi));
}

Complex boundary_term(const WaveFunction& phi, const WaveFunction& psi) {
  if (!phi.grid.compatible(psi.grid)) throw GridMismatch("boundary_term: grid mismatch");
  const Complex i(0, 1);
  if (phi.grid.kind == GridKind::Periodic) {
    // psi(L) = exp(-i theta) psi(0): the twist phases cancel in conj(phi) psi
    return Complex(0, 0);
  }
  const auto& f = phi.values;
  const auto& g = psi.values;
  const int n = static_cast<int>(f.size());
  return -i * (std::conj(f[n - 1]) * g[n - 1] - std::conj(f[0]) * g[0]);
}

Eigen::VectorXd current_profile(const WaveFunction& psi) {
  const Eigen::VectorXcd d = derivative(psi);
  const int n = static_cast<int>(psi.values.size());
  Eigen::VectorXd j(n);
  for (int k = 0; k < n; ++k) {
    const Complex val =
        Complex(0, 1) * (std::conj(d[k]) * psi.values[k] - std::conj(psi.values[k]) * d[k]);
    if (std::abs(val.imag()) > 1e-12 * std::max(1.0, std::abs(val.real())))
      throw NumericalError("current: non-real value");
    j[k] = val.real();
  }
  return j;
}

namespace {

// One-sided evaluation of psi and psi' at the right edge x = L of a periodic
// grid; the value itself comes from the twist relation psi(L) = e^{-i theta} psi(0).
std::pair<Complex, Complex> right_edge_periodic(const WaveFunction& psi, double theta) {
  const int n = static_cast<int>(psi.values.size());
  const double h = psi.grid.spacing();
  const auto& f = psi.values;
  const Complex pl = std::exp(Complex(0, -theta)) * f[0];
  const Complex dl = (25.0 * pl - 48.0 * f[n - 1] + 36.0 * f[n - 2] -
                      16.0 * f[n - 3] + 3.0 * f[n - 4]) /
                     (12.0 * h);
  return {pl, dl};
}

// Lagrange extrapolation of the last five samples to x = L (exact for quartics).
Complex right_edge_extrapolated(const WaveFunction& psi) {
  const int n = static_cast<int>(psi.values.size());
  const auto& f = psi.values;
  return 5.0 * f[n - 1] - 10.0 * f[n - 2] + 10.0 * f[n - 3] - 5.0 * f[n - 4] +
         f[n - 5];
}

double current_from(Complex value, Complex deriv) {
  const Complex v = Complex(0, 1) * (std::conj(deriv) * value - std::conj(value) * deriv);
  return v.real();
}

// One-sided psi'(0) on a periodic grid (no wraparound samples used).
Complex left_edge_derivative_one_sided(const WaveFunction& psi) {
  const double h = psi.grid.spacing();
  const auto& f = psi.values;
  return (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) /
         (12.0 * h);
}

}  // namespace

double probability_current(const WaveFunction& psi, double x) {
  const GridSpec& g = psi.grid;
  const double h = g.spacing();
  if (g.kind == GridKind::Periodic &&
      std::abs(x - (g.origin + g.length)) < 1e-9 * g.length) {
    auto [pl, dl] = right_edge_periodic(psi, g.twist);
    return current_from(pl, dl);
  }
  const double idx = (x - g.origin) / h;
  const int j = static_cast<int>(std::llround(idx));
  if (j < 0 || j >= g.n || std::abs(idx - j) > 1e-6)
    throw OutOfDomain("probability_current: x is not a grid point");
  return current_profile(psi)[j];
}

double boundary_residual(const BoundarySpec& bc, const WaveFunction& psi) {
  const auto& f = psi.values;
  const int n = static_cast<int>(f.size());
  const double maxabs = f.cwiseAbs().maxCoeff();
  if (maxabs == 0) throw ValidationError("boundary_residual: zero state");
  if (std::holds_alternative<Dirichlet>(bc.kind))
    return std::max(std::abs(f[0]), std::abs(f[n - 1])) / maxabs;
  if (const auto* r = std::get_if<Robin>(&bc.kind)) {
    const Eigen::VectorXcd d = derivative(psi);
    const double scale0 =
        std::max({std::abs(d[0]), std::abs(r->sigma0 * f[0]), maxabs / bc.length});
    const double scaleL = std::max(
        {std::abs(d[n - 1]), std::abs(r->sigmaL * f[n - 1]), maxabs / bc.length});
    const double r0 = std::abs(d[0] - r->sigma0 * f[0]) / scale0;
    const double rL = std::abs(d[n - 1] + r->sigmaL * f[n - 1]) / scaleL;
    return std::max(r0, rL);
  }
  // Twisted: check psi(0) = e^{i theta} psi(L) against a bc-independent
  // extrapolation of psi(L) from the interior.
  const auto& tw = std::get<Twisted>(bc.kind);
  const Complex phase = std::exp(Complex(0, reduce_angle(tw.theta)));
  const Complex pl = right_edge_extrapolated(psi);
  return std::abs(f[0] - phase * pl) / maxabs;
}

FluxReport flux_report(const BoundarySpec& bc, const WaveFunction& psi, double tol) {
  bc.validate();
  const bool twisted = std::holds_alternative<Twisted>(bc.kind);
  if (twisted != (psi.grid.kind == GridKind::Periodic))
    throw ValidationError("flux_report: grid kind does not match the boundary condition");
  const double br = boundary_residual(bc, psi);
  if (br > tol)
    throw BoundaryViolation("flux_report: state violates the boundary condition (" +
                            std::to_string(br) + ")");
  FluxReport rep;
  if (psi.grid.kind == GridKind::Periodic) {
    const double theta = reduce_angle(std::get<Twisted>(bc.kind).theta);
    rep.j0 = current_from(psi.values[0], left_edge_derivative_one_sided(psi));
    auto [pl, dl] = right_edge_periodic(psi, theta);
    rep.jL = current_from(pl, dl);
  } else {
    const Eigen::VectorXd j = current_profile(psi);
    rep.j0 = j[0];
    rep.jL = j[psi.grid.n - 1];
  }
  if (std::abs(rep.j0) < tol && std::abs(rep.jL) < tol) {
    rep.classification = FluxClass::Isolated;
  } else if (std::abs(rep.j0 - rep.jL) < tol * std::max(1.0, std::abs(rep.j0))) {
    rep.classification = FluxClass::Throughflow;
  } else {
    throw PropertyError("flux_report: endpoint currents inconsistent with any "
                        "self-adjoint boundary condition");
  }
  return rep;
}

SpectralDecomposition decompose(const WaveFunction& psi, const Spectrum& spectrum) {
  if (!psi.grid.compatible(spectrum.grid))
    throw GridMismatch("decompose: state and spectrum grids differ");
  const int m = static_cast<int>(spectrum.modes.size());
  SpectralDecomposition d{spectrum, Eigen::VectorXcd(m), 0.0};
  double cap = 0.0;
  for (int i = 0; i < m; ++i) {
    WaveFunction mode{spectrum.grid, spectrum.modes[i].samples};
    d.coefficients[i] = inner(mode, psi);
    cap += std::norm(d.coefficients[i]);
  }
  const double nrm = psi.norm();
  d.capture = cap / (nrm * nrm);
  return d;
}

std::vector<double> twisted_domain_form_sums(const WaveFunction& psi, double theta,
                                             int initial_modes, int doublings) {
  // Expansion coefficients over e^{i k_n x}/sqrt(L) via the discrete inner
  // product; adequate only while k_n h << 1, so partial sums use modest N.
  const GridSpec& g = psi.grid;
  const double L = g.length;
  const double th = reduce_angle(theta);
  std::vector<double> sums;
  int nmax = initial_modes;
  for (int d = 0; d <= doublings; ++d) {
    double s = 0.0;
    for (int n = -nmax; n <= nmax; ++n) {
      const double k = (kTwoPi * n - th) / L;
      Eigen::VectorXcd e(g.n);
      for (int j = 0; j < g.n; ++j)
        e[j] = std::exp(Complex(0, k * g.point(j))) / std::sqrt(L);
      WaveFunction mode{g, e};
      const Complex c = inner(mode, psi);
      s += k * k * k * k * std::norm(c);
    }
    sums.push_back(s);
    nmax *= 2;
  }
  return sums;
}

}  // namespace causalab::boundary
