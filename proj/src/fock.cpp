#include "causalab/fock.hpp"

#include <Eigen/SVD>

#include <cmath>

namespace causalab::fock {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

double pair_integral(const TestFunction& a, const TestFunction& b,
                     const std::function<double(double)>& weight) {
  if (a.dimension() != b.dimension())
    throw DimensionMismatch("pair_integral: dimension mismatch");
  numerics::QuadratureSpec spec;
  spec.relative_tolerance = 1e-12;
  spec.absolute_tolerance = 1e-14;
  auto profile = [&](double k) -> Complex {
    const double v = a.fourier(k) * b.fourier(k);
    if (v == 0.0) return Complex(0.0, 0.0);
    return Complex(v * weight(k), 0.0);
  };
  if (a.dimension() == 1)
    return 2.0 * numerics::integrate_1d(profile, {0.0, kInf}, spec).value.real();
  return numerics::integrate_radial_3d(profile, spec).value.real();
}

}  // namespace

LadderPair build_ladder(int cutoff) {
  if (cutoff < 1) throw ValidationError("build_ladder: cutoff must be >= 1");
  const int n = cutoff + 1;
  LadderPair out{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n), cutoff};
  for (int level = 1; level <= cutoff; ++level) {
    out.a(level - 1, level) = std::sqrt(double(level));
    out.adag(level, level - 1) = out.a(level - 1, level);
  }
  return out;
}

Eigen::MatrixXd ladder_commutator(int cutoff) {
  const int n = cutoff + 1;
  // (a a+)_{mm} = m+1 for m < D, 0 at the top; (a+ a)_{mm} = m. Occupations are
  // small integers, so the difference is exact in floating point.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(n, n);
  for (int m = 0; m < cutoff; ++m) c(m, m) = double(m + 1) - double(m);
  c(cutoff, cutoff) = 0.0 - double(cutoff);
  return c;
}

Eigen::MatrixXd number_operator_single(int cutoff) {
  Eigen::MatrixXd n = Eigen::MatrixXd::Zero(cutoff + 1, cutoff + 1);
  for (int m = 0; m <= cutoff; ++m) n(m, m) = double(m);
  return n;
}

// ---------------------------------------------------------------------------
// TruncatedFock
// ---------------------------------------------------------------------------

int TruncatedFock::dim() const {
  long d = 1;
  for (int i = 0; i < n_modes; ++i) d *= (cutoff + 1);
  return int(d);
}

void TruncatedFock::validate() const {
  if (cutoff < 1) throw ValidationError("TruncatedFock: cutoff must be >= 1");
  if (n_modes < 1) throw ValidationError("TruncatedFock: need at least one mode");
  long d = 1;
  for (int i = 0; i < n_modes; ++i) {
    d *= (cutoff + 1);
    if (d > 4096)
      throw ValidationError("TruncatedFock: dimension (D+1)^n exceeds 4096");
  }
}

int TruncatedFock::occupation(int basis_index, int mode) const {
  int idx = basis_index;
  for (int i = 0; i < mode; ++i) idx /= (cutoff + 1);
  return idx % (cutoff + 1);
}

Eigen::MatrixXcd TruncatedFock::mode_operator(int mode,
                                              const Eigen::MatrixXcd& single) const {
  validate();
  if (mode < 0 || mode >= n_modes)
    throw ValidationError("TruncatedFock: mode index out of range");
  const int d = dim();
  const int base = cutoff + 1;
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(d, d);
  // basis_index = sum_m occ_m * base^m; the operator acts on digit `mode`
  int stride = 1;
  for (int i = 0; i < mode; ++i) stride *= base;
  for (int col = 0; col < d; ++col) {
    const int occ = (col / stride) % base;
    const int col_rest = col - occ * stride;
    for (int row_occ = 0; row_occ < base; ++row_occ) {
      const Complex v = single(row_occ, occ);
      if (v == Complex(0, 0)) continue;
      out(col_rest + row_occ * stride, col) += v;
    }
  }
  return out;
}

Eigen::VectorXcd TruncatedFock::vacuum() const {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
  v[0] = 1.0;
  return v;
}

std::vector<int> TruncatedFock::safe_indices(int max_occupation) const {
  std::vector<int> out;
  for (int i = 0; i < dim(); ++i) {
    bool ok = true;
    for (int m = 0; m < n_modes; ++m)
      if (occupation(i, m) > max_occupation) {
        ok = false;
        break;
      }
    if (ok) out.push_back(i);
  }
  return out;
}

Eigen::MatrixXcd number_operator(const TruncatedFock& fock) {
  fock.validate();
  const int d = fock.dim();
  Eigen::MatrixXcd n = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 0; i < d; ++i) {
    int total = 0;
    for (int m = 0; m < fock.n_modes; ++m) total += fock.occupation(i, m);
    n(i, i) = double(total);
  }
  return n;
}

Eigen::MatrixXcd mode_hamiltonian(const TruncatedFock& fock,
                                  const std::vector<double>& energies) {
  fock.validate();
  if (int(energies.size()) != fock.n_modes)
    throw ValidationError("mode_hamiltonian: one energy per mode required");
  const auto ladder = build_ladder(fock.cutoff);
  const Eigen::MatrixXcd single_n =
      (ladder.adag * ladder.a).cast<Complex>();  // diag(0..D) exactly
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(fock.dim(), fock.dim());
  for (int m = 0; m < fock.n_modes; ++m)
    h += energies[m] * fock.mode_operator(m, single_n);
  return h;
}

// ---------------------------------------------------------------------------
// ModeBasis
// ---------------------------------------------------------------------------

ModeBasis ModeBasis::build(std::vector<TestFunction> generators,
                           const DispersionParams& params) {
  if (generators.empty()) throw ValidationError("ModeBasis: no generators");
  params.validate();
  ModeBasis basis;
  basis.generators_ = std::move(generators);
  basis.params_ = params;
  const int n = int(basis.generators_.size());
  const int nraw = 3 * n;
  const double m0 = params.m0;
  const double c = params.c;

  // channel weights applied to f~; phi_rel * pi_rel = 1/2 pointwise, which is
  // what makes the relativistic CCR come out as i(f,g)
  auto channel_weight = [&](int channel, double k) -> double {
    switch (channel) {
      case 0:
        return 1.0;
      case 1:
        return c / std::sqrt(2.0 * relcompare::omega_c(k, params));
      default:
        return std::sqrt(relcompare::omega_c(k, params) / 2.0) / c;
    }
  };
  auto w_e_nr = [&](double k) { return k * k / (2.0 * m0); };
  auto w_e_r = [&](double k) {
    return relcompare::zitter_subtracted_energy(k, params);
  };

  basis.raw_gram_.resize(nraw, nraw);
  basis.raw_e_nr_.resize(nraw, nraw);
  basis.raw_e_r_.resize(nraw, nraw);
  for (int i = 0; i < nraw; ++i)
    for (int j = i; j < nraw; ++j) {
      const auto& fi = basis.generators_[i / 3];
      const auto& fj = basis.generators_[j / 3];
      const int ci = i % 3, cj = j % 3;
      auto weighted = [&](const std::function<double(double)>& extra) {
        return pair_integral(fi, fj, [&](double k) {
          return channel_weight(ci, k) * channel_weight(cj, k) * extra(k);
        });
      };
      basis.raw_gram_(i, j) = basis.raw_gram_(j, i) =
          weighted([](double) { return 1.0; });
      basis.raw_e_nr_(i, j) = basis.raw_e_nr_(j, i) = weighted(w_e_nr);
      basis.raw_e_r_(i, j) = basis.raw_e_r_(j, i) = weighted(w_e_r);
    }

  // Gram-Schmidt (two passes) with rank pruning: modes = ortho * raw
  Eigen::MatrixXd ortho = Eigen::MatrixXd::Zero(nraw, nraw);
  int rank = 0;
  for (int i = 0; i < nraw; ++i) {
    Eigen::VectorXd v = Eigen::VectorXd::Zero(nraw);
    v[i] = 1.0;
    for (int pass = 0; pass < 2; ++pass)
      for (int r = 0; r < rank; ++r) {
        const double proj = ortho.row(r) * basis.raw_gram_ * v;
        v -= proj * ortho.row(r).transpose();
      }
    // Pruning at 1e-6 keeps the conditioning low enough for the computed Gram
    // to be orthonormal at 1e-10; a discarded direction leaks at most its
    // squared norm (< 1e-6, and in practice < 1e-8 for c >= 100) into pairings.
    const double nrm2 = v.transpose() * basis.raw_gram_ * v;
    if (nrm2 > 1e-6) {
      ortho.row(rank) = v.transpose() / std::sqrt(nrm2);
      ++rank;
    }
  }
  basis.ortho_ = ortho.topRows(rank);
  return basis;
}

Eigen::MatrixXd ModeBasis::gram() const {
  return ortho_ * raw_gram_ * ortho_.transpose();
}

Eigen::VectorXd ModeBasis::raw_coordinates(int raw_index) const {
  return ortho_ * raw_gram_.col(raw_index);
}

Eigen::VectorXd ModeBasis::coordinates(int generator) const {
  return raw_coordinates(3 * generator);
}

Eigen::VectorXd ModeBasis::phi_coefficients(int generator, FieldWeighting w) const {
  if (w == FieldWeighting::Nonrelativistic)
    return coordinates(generator) / std::sqrt(2.0 * params_.m0);
  return raw_coordinates(3 * generator + 1);
}

Eigen::VectorXd ModeBasis::pi_coefficients(int generator, FieldWeighting w) const {
  if (w == FieldWeighting::Nonrelativistic)
    return std::sqrt(params_.m0 / 2.0) * coordinates(generator);
  return raw_coordinates(3 * generator + 2);
}

double ModeBasis::pairing(int i, int j) const {
  return raw_gram_(3 * i, 3 * j);
}

std::vector<double> ModeBasis::mode_energies(FieldWeighting w) const {
  const Eigen::MatrixXd& raw = (w == FieldWeighting::Nonrelativistic) ? raw_e_nr_
                                                                      : raw_e_r_;
  std::vector<double> out;
  for (int i = 0; i < n_modes(); ++i)
    out.push_back(ortho_.row(i) * raw * ortho_.row(i).transpose());
  return out;
}

// ---------------------------------------------------------------------------
// field operators
// ---------------------------------------------------------------------------

namespace {

Eigen::MatrixXcd build_from_amplitudes(const TruncatedFock& fock,
                                       const Eigen::VectorXd& amps, bool phi_type) {
  fock.validate();
  if (amps.size() != fock.n_modes)
    throw SpanViolation("field operator: amplitude count differs from mode count");
  const auto ladder = build_ladder(fock.cutoff);
  const Eigen::MatrixXcd a = ladder.a.cast<Complex>();
  const Eigen::MatrixXcd adag = ladder.adag.cast<Complex>();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fock.dim(), fock.dim());
  for (int m = 0; m < fock.n_modes; ++m) {
    if (amps[m] == 0.0) continue;
    if (phi_type) {
      out += amps[m] * fock.mode_operator(m, a + adag);
    } else {
      out += Complex(0, -1.0) * amps[m] * fock.mode_operator(m, a - adag);
    }
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd phi_operator(const TruncatedFock& fock, const ModeBasis& basis,
                              int generator, FieldWeighting w, double scale) {
  return build_from_amplitudes(fock, scale * basis.phi_coefficients(generator, w),
                               true);
}

Eigen::MatrixXcd pi_operator(const TruncatedFock& fock, const ModeBasis& basis,
                             int generator, FieldWeighting w, double scale) {
  return build_from_amplitudes(fock, scale * basis.pi_coefficients(generator, w),
                               false);
}

Eigen::MatrixXcd annihilator(const TruncatedFock& fock, const ModeBasis& basis,
                             int generator, double scale) {
  fock.validate();
  const Eigen::VectorXd coords = scale * basis.coordinates(generator);
  const auto ladder = build_ladder(fock.cutoff);
  const Eigen::MatrixXcd a = ladder.a.cast<Complex>();
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(fock.dim(), fock.dim());
  for (int m = 0; m < fock.n_modes; ++m)
    if (coords[m] != 0.0) out += coords[m] * fock.mode_operator(m, a);
  return out;
}

Complex smeared_commutator(const TruncatedFock& fock, const ModeBasis& basis,
                           int f_generator, int g_generator, FieldWeighting w,
                           const Eigen::VectorXcd& chi) {
  fock.validate();
  if (chi.size() != fock.dim())
    throw ValidationError("smeared_commutator: state dimension mismatch");
  const double nrm = chi.norm();
  for (int i = 0; i < chi.size(); ++i) {
    if (std::abs(chi[i]) < 1e-12 * nrm) continue;
    for (int m = 0; m < fock.n_modes; ++m)
      if (fock.occupation(i, m) > fock.cutoff - 2)
        throw UnsafeState("smeared_commutator: state occupies levels above D-2");
  }
  const Eigen::MatrixXcd phi = phi_operator(fock, basis, f_generator, w);
  const Eigen::MatrixXcd pi = pi_operator(fock, basis, g_generator, w);
  const Eigen::MatrixXcd comm = phi * pi - pi * phi;
  return chi.dot(comm * chi);  // Eigen's dot conjugates the first argument
}

double weyl_relation_residual(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              int cutoff) {
  if (cutoff < 2) throw ValidationError("weyl_relation_residual: cutoff too small");
  if (p.size() != q.size())
    throw ValidationError("weyl_relation_residual: amplitude vectors differ");
  const double amplitude = std::max(p.cwiseAbs().maxCoeff(), q.cwiseAbs().maxCoeff());
  if (amplitude > std::sqrt(double(cutoff)) / 4.0)
    throw AmplitudeTooLarge("weyl_relation_residual: amplitude above sqrt(D)/4");
  TruncatedFock fock{int(p.size()), cutoff};
  fock.validate();
  const auto ladder = build_ladder(cutoff);
  const Eigen::MatrixXcd a = ladder.a.cast<Complex>();
  const Eigen::MatrixXcd adag = ladder.adag.cast<Complex>();
  const int d = fock.dim();
  Eigen::MatrixXcd phi = Eigen::MatrixXcd::Zero(d, d);
  Eigen::MatrixXcd pi = Eigen::MatrixXcd::Zero(d, d);
  for (int m = 0; m < fock.n_modes; ++m) {
    if (p[m] != 0.0) phi += p[m] * fock.mode_operator(m, a + adag);
    if (q[m] != 0.0) pi += Complex(0, -1.0) * q[m] * fock.mode_operator(m, a - adag);
  }
  const Complex i(0, 1);
  const Eigen::MatrixXcd u = numerics::matrix_exponential(i * pi);
  const Eigen::MatrixXcd v = numerics::matrix_exponential(i * phi);
  // [Phi, Pi] = 2i p.q forces exp(iPi) exp(iPhi) = exp(iPhi) exp(iPi)
  // e^{+2i p.q}; the residual then measures only the truncation defect
  const Complex weyl_phase = std::exp(i * (2.0 * p.dot(q)));
  const Eigen::MatrixXcd defect = u * v - v * u * weyl_phase;
  // restrict to the safe subspace: columns with occupations <= D/2
  const auto safe = fock.safe_indices(cutoff / 2);
  Eigen::MatrixXcd restricted(defect.rows(), int(safe.size()));
  for (size_t c = 0; c < safe.size(); ++c) restricted.col(int(c)) = defect.col(safe[c]);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(restricted);
  return svd.singularValues()[0];
}

double weyl_relation_residual(double p, double q, int cutoff) {
  Eigen::VectorXd pv(1), qv(1);
  pv[0] = p;
  qv[0] = q;
  return weyl_relation_residual(pv, qv, cutoff);
}

double vacuum_annihilation_check(const TruncatedFock& fock, const ModeBasis& basis) {
  fock.validate();
  const Eigen::VectorXcd vac = fock.vacuum();
  double worst = 0.0;
  for (int g = 0; g < int(basis.n_modes()); ++g) {
    const Eigen::MatrixXcd af = annihilator(fock, basis, g);
    worst = std::max(worst, (af * vac).norm());
  }
  return worst;
}

Complex two_point_vacuum(const TruncatedFock& fock, const ModeBasis& basis, int f1,
                         int f2, FieldWeighting w) {
  fock.validate();
  const Eigen::MatrixXcd phi1 = phi_operator(fock, basis, f1, w);
  const Eigen::MatrixXcd phi2 = phi_operator(fock, basis, f2, w);
  const Eigen::VectorXcd vac = fock.vacuum();
  return vac.dot(phi1 * (phi2 * vac));
}

double two_point_vacuum_quadrature(const TestFunction& f1, const TestFunction& f2,
                                   const DispersionParams& p, FieldWeighting w,
                                   const numerics::QuadratureSpec& spec) {
  auto integrand = [&](double k) -> Complex {
    const double v = f1.fourier(k) * f2.fourier(k);
    if (v == 0.0) return Complex(0.0, 0.0);
    const double kern = (w == FieldWeighting::Nonrelativistic)
                            ? 1.0 / (2.0 * p.m0)
                            : relcompare::kernel_pair(k, p).relativistic;
    return Complex(v * kern, 0.0);
  };
  if (f1.dimension() != f2.dimension())
    throw DimensionMismatch("two_point_vacuum_quadrature: dimension mismatch");
  if (f1.dimension() == 1)
    return 2.0 * numerics::integrate_1d(integrand, {0.0, kInf}, spec).value.real();
  return numerics::integrate_radial_3d(integrand, spec).value.real();
}

}  // namespace causalab::fock
