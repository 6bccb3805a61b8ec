#ifndef CAUSALAB_RELCOMPARE_HPP
#define CAUSALAB_RELCOMPARE_HPP

#include <complex>
#include <memory>
#include <vector>

#include "causalab/numerics.hpp"

namespace causalab::relcompare {

using Complex = std::complex<double>;
using numerics::QuadratureSpec;

struct DispersionParams {
  double m0 = 1.0;
  double c = 1.0;
  void validate() const;
};

/// omega_k^c = sqrt(c^2 k^2 + m0^2 c^4)
double omega_c(double k, const DispersionParams& p);

/// omega_k^c - m0 c^2 without cancellation: k^2 / (m0 (1 + sqrt(1 + u^2))),
/// u = k / (m0 c). This is the rest-energy-subtracted one-particle energy.
double zitter_subtracted_energy(double k, const DispersionParams& p);

struct KernelPair {
  double nonrelativistic;  // 1 / (2 m0)
  double relativistic;     // c^2 / (2 omega_k^c)
};
KernelPair kernel_pair(double k, const DispersionParams& p);

/// K_nr - K_r evaluated stably (exact O(c^-2) decay without cancellation).
double kernel_gap(double k, const DispersionParams& p);

/// beta(k, tau, c) = K_nr e^{-i tau k^2/2m0} - K_r e^{-i tau (omega - m0 c^2)}.
Complex beta(double k, double tau, const DispersionParams& p);

/// Variant with the un-halved relativistic kernel (c^2/omega in place of
/// c^2/2omega in the second term); kept behind this separate entry point for
/// comparison only and excluded from the verified bound.
Complex beta_unhalved(double k, double tau, const DispersionParams& p);

// ---------------------------------------------------------------------------
// test functions f in S(R^d), d in {1, 3}, via their radial Fourier profiles
// (convention f~(k) = (2 pi)^{-d/2} integral f(x) e^{-ik.x} dx)
// ---------------------------------------------------------------------------

class TestFunction {
 public:
  enum class Kind { Gaussian, Bump, TabulatedRadial };

  /// Unit-norm Gaussian: f~(k) = pi^{-d/4} w^{d/2} exp(-w^2 k^2 / 2).
  static TestFunction gaussian(double width, int dimension);
  /// Normalized bump exp(-1/(1-(r/radius)^2)); Fourier profile tabulated by
  /// quadrature at construction (entire by Paley-Wiener).
  static TestFunction bump(double radius, int dimension);
  static TestFunction tabulated(std::vector<double> k_nodes,
                                std::vector<double> values, int dimension);

  double fourier(double k) const;  // radial profile f~(|k|)
  int dimension() const { return d_; }
  Kind kind() const { return kind_; }
  double parameter() const { return param_; }
  /// integral |f~|^2 d^dk (1 for the built-in normalized kinds)
  double momentum_norm_sq(const QuadratureSpec& spec = {}) const;
  /// Parseval self-check |∫|f|^2 dx - ∫|f~|^2 dk|; available when the
  /// position-space profile is known (Gaussian, Bump).
  double parseval_defect(const QuadratureSpec& spec = {}) const;

 private:
  Kind kind_ = Kind::Gaussian;
  int d_ = 3;
  double param_ = 1.0;
  std::shared_ptr<numerics::CubicSpline> table_;
  double table_cut_ = 0.0;  // profile treated as 0 beyond this k
};

// ---------------------------------------------------------------------------
// correlator difference and its bound
// ---------------------------------------------------------------------------

enum class Weighting {
  Sesquilinear,  // conj(f1~) f2~, the weighting the verified bound uses
  Difference,    // (f1~ - f2~), comparison only
};

/// Delta C = | integral conj(f1~)(k) f2~(k) beta(k, tau, c) d^dk |.
double delta_C(const TestFunction& f1, const TestFunction& f2, double tau,
               const DispersionParams& p, const QuadratureSpec& spec = {},
               Weighting weighting = Weighting::Sesquilinear);

/// Exact tail integral over |k| > m0 c delta of |f~|^2 (the smallest
/// admissible epsilon for that threshold).
double epsilon_for_delta(const TestFunction& f, double delta,
                         const DispersionParams& p,
                         const QuadratureSpec& spec = {});

struct Lemma2Report {
  double delta = 0.0;
  double epsilon = 0.0;
  double tau = 0.0;
  double delta_c = 0.0;
  double lhs = 0.0;     // 2 m0 Delta C
  double rhs = 0.0;     // 2 eps + delta^2/2 + |tau| m0 c^2 delta^4 / 8  (hbar = 1)
  double margin = 0.0;  // rhs - lhs
  bool pass = false;
};

Lemma2Report verify_lemma2(const TestFunction& f1, const TestFunction& f2, double tau,
                           double delta, const DispersionParams& p,
                           const QuadratureSpec& spec = {});

struct ScanPoint {
  double c;
  double delta_c;
};
struct ConvergenceScan {
  std::vector<ScanPoint> points;
  double slope = 0.0;  // log-log least-squares slope of Delta C vs c
};

ConvergenceScan convergence_scan(const TestFunction& f1, const TestFunction& f2,
                                 double tau, const std::vector<double>& c_list,
                                 double m0, const QuadratureSpec& spec = {});

struct MismatchCertificate {
  double value;      // integral |f~|^2 (K_nr - K_r) d^dk, > 0 at finite c
  double error_bar;  // quadrature error estimate
};
MismatchCertificate kernel_mismatch_certificate(const DispersionParams& p,
                                                const TestFunction& f,
                                                const QuadratureSpec& spec = {});

/// The three pointwise proof inequalities on |k| <= m0 c delta.
struct InequalityCheck {
  int n_points = 0;
  int violations_kernel_gap = 0;    // (i)  K_nr - K_r <= delta^2 / 4 m0
  int violations_phase = 0;         // (ii) |e^{-i tau k^2/2m0} - e^{-i tau (omega-m0c^2)}|
                                    //      <= m0 c^2 |tau| delta^4 / 8
  int violations_kernel_order = 0;  // (iii) K_r <= K_nr
  bool all_hold() const {
    return violations_kernel_gap == 0 && violations_phase == 0 &&
           violations_kernel_order == 0;
  }
};
InequalityCheck proof_inequalities(const DispersionParams& p, double delta, double tau,
                                   int n_points = 1000);

}  // namespace causalab::relcompare

#endif
