#ifndef CAUSALAB_SPREADING_HPP
#define CAUSALAB_SPREADING_HPP

#include <string>
#include <variant>
#include <vector>

#include "causalab/boundary.hpp"

namespace causalab::spreading {

using boundary::GridKind;
using boundary::GridSpec;
using boundary::SpectralDecomposition;
using boundary::WaveFunction;
using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// states
// ---------------------------------------------------------------------------

/// Normalized C0-infinity bump exp(-1/(1-u^2)), u = (x-center)/halfwidth.
WaveFunction bump_state(const GridSpec& grid, double center, double halfwidth);

/// Normalized Gaussian packet (pi w^2)^{-1/4} exp(-(x-c)^2/(2w^2) + i k0 x).
WaveFunction gaussian_state(const GridSpec& grid, double center, double width,
                            double k0 = 0.0);

/// Smallest interval holding the samples above 1e-13 of the peak.
struct Support {
  double lo;
  double hi;
};
Support essential_support(const WaveFunction& psi);

// ---------------------------------------------------------------------------
// evolutions
// ---------------------------------------------------------------------------

struct FreeEvolution {
  WaveFunction state;
  double aliasing_bound;  // spectral mass fraction in the top half-band
};

/// Free-line evolution by the plane-wave transform on the periodic embedding
/// box carried by psi0's grid: psi_t(k) = exp(-i t k^2 / 2m) psi_0(k).
FreeEvolution evolve_free_line(const WaveFunction& psi0, double t, double mass);

/// Bounded evolution Psi_t = sum c_n exp(-i E_n t) psi_n.
WaveFunction evolve_bounded(const SpectralDecomposition& decomp, double t);

// ---------------------------------------------------------------------------
// localization and the dichotomy
// ---------------------------------------------------------------------------

struct Region {
  double lo;
  double hi;
};

struct LocalizationOperator {
  enum class Kind { ProjectorMultiplication, RankOne };
  Kind kind = Kind::ProjectorMultiplication;
  Region region{0.0, 1.0};
  bool normalized = true;   // RankOne only: chi_V / sqrt(|V|)
  bool complement = false;  // when set the operator is A = 1 - N(V)
  void validate() const;
};

/// Expectation of the bare N(V) in psi (the complement flag is not applied
/// here). Projector: integral of |psi|^2 over V; RankOne: |<chi_V, psi>|^2.
double localization_probability(const WaveFunction& psi,
                                const LocalizationOperator& op);

struct FreeLine {
  double mass = 1.0;
};
struct BoundedEvolution {
  SpectralDecomposition decomposition;
};
using EvolutionSpec = std::variant<FreeLine, BoundedEvolution>;

struct ProbabilityRecord {
  std::vector<double> times;
  std::vector<double> values;  // clamped to [0,1]
  double tolerance = 1e-10;
};

/// p_A(t) = (Psi_t, A Psi_t) with A = 1 - N(V); requires op.complement.
ProbabilityRecord p_A_series(const WaveFunction& psi0, const EvolutionSpec& evolution,
                             const LocalizationOperator& op,
                             const std::vector<double>& times);

enum class Branch { Confined, Spreading };

struct DichotomyVerdict {
  Branch branch = Branch::Confined;
  double zero_fraction = 1.0;
  std::string support_evidence;
};

DichotomyVerdict classify_dichotomy(const ProbabilityRecord& record, double tol);

// ---------------------------------------------------------------------------
// instantaneous spreading
// ---------------------------------------------------------------------------

struct TailProbe {
  double value = 0.0;
  double noise_floor = 1e-13;
  bool resolved = false;  // value exceeds the floor (or t == 0)
};

/// Integral of |Psi_t|^2 over the box outside [-R, R]; support(psi0) must lie
/// inside [-R, R]. t = 0 returns exactly zero.
TailProbe tail_probe(const WaveFunction& psi0, double t, double radius, double mass,
                     double noise_floor = 1e-13);

/// Same, throwing ResolutionInsufficient when positivity cannot be
/// distinguished from the grid noise floor.
double tail_probability(const WaveFunction& psi0, double t, double radius,
                        double mass, double noise_floor = 1e-13);

}  // namespace causalab::spreading

#endif
