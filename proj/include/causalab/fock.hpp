#ifndef CAUSALAB_FOCK_HPP
#define CAUSALAB_FOCK_HPP

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "causalab/relcompare.hpp"

namespace causalab::fock {

using Complex = std::complex<double>;
using relcompare::DispersionParams;
using relcompare::TestFunction;

// ---------------------------------------------------------------------------
// single-mode ladder algebra with occupation cutoff D
// ---------------------------------------------------------------------------

struct LadderPair {
  Eigen::MatrixXd a;     // a[n-1, n] = sqrt(n)
  Eigen::MatrixXd adag;  // transpose
  int cutoff;
};

LadderPair build_ladder(int cutoff);

/// [a, a+] on the truncation: identity with -(D+1) in the top corner. Computed
/// from the ladder structure (integer occupation differences), which is the
/// exact value of the matrix commutator; a floating GEMM of build_ladder's
/// matrices reproduces it to a few ulps.
Eigen::MatrixXd ladder_commutator(int cutoff);

Eigen::MatrixXd number_operator_single(int cutoff);  // diag(0..D)

// ---------------------------------------------------------------------------
// multi-mode truncated Fock space
// ---------------------------------------------------------------------------

struct TruncatedFock {
  int n_modes = 1;
  int cutoff = 1;  // per-mode occupation cutoff D

  int dim() const;
  void validate() const;  // dim <= 4096, cutoff >= 1
  int occupation(int basis_index, int mode) const;
  /// Embeds a single-mode operator on the given mode (Kronecker product).
  Eigen::MatrixXcd mode_operator(int mode, const Eigen::MatrixXcd& single) const;
  Eigen::VectorXcd vacuum() const;
  /// Basis indices whose occupations are all <= max_occupation.
  std::vector<int> safe_indices(int max_occupation) const;
};

/// Total number operator (diagonal).
Eigen::MatrixXcd number_operator(const TruncatedFock& fock);

/// sum_i energies[i] a_i+ a_i (diagonal when built from ladder pairs).
Eigen::MatrixXcd mode_hamiltonian(const TruncatedFock& fock,
                                  const std::vector<double>& energies);

// ---------------------------------------------------------------------------
// smeared fields over an orthonormal mode basis
// ---------------------------------------------------------------------------

enum class FieldWeighting { Nonrelativistic, Relativistic };

/// Orthonormal momentum-space mode functions spanning the test-function
/// profiles f~ together with their dispersion-weighted versions
/// c f~ / sqrt(2 omega) and sqrt(omega/2) f~ / c, so smeared relativistic
/// fields are exact at the mode level (no projection loss).
class ModeBasis {
 public:
  static ModeBasis build(std::vector<TestFunction> generators,
                         const DispersionParams& params);

  int n_modes() const { return int(ortho_.rows()); }
  int dimension() const { return generators_.front().dimension(); }
  int n_generators() const { return int(generators_.size()); }
  const DispersionParams& params() const { return params_; }

  /// Gram matrix of the orthonormal modes (identity up to quadrature error).
  Eigen::MatrixXd gram() const;

  /// Mode coefficients of generator g under a field channel:
  ///   Phi nonrel: f~ / sqrt(2 m0)          Pi nonrel: sqrt(m0/2) f~
  ///   Phi rel:    c f~ / sqrt(2 omega)     Pi rel:    sqrt(omega/2) f~ / c
  Eigen::VectorXd phi_coefficients(int generator, FieldWeighting w) const;
  Eigen::VectorXd pi_coefficients(int generator, FieldWeighting w) const;
  /// Plain mode coordinates of f~ (used for a(f) and inner products).
  Eigen::VectorXd coordinates(int generator) const;
  /// (f_i, f_j) = integral conj(f_i~) f_j~ d^dk.
  double pairing(int i, int j) const;
  /// Quadratic-form energies <m_i| E(k) |m_i> of the orthonormal modes, with
  /// E = k^2/2m0 or the zitter-subtracted relativistic dispersion.
  std::vector<double> mode_energies(FieldWeighting w) const;

 private:
  // raw index = 3 * generator + channel, channels {plain, phi_rel, pi_rel}
  Eigen::VectorXd raw_coordinates(int raw_index) const;

  std::vector<TestFunction> generators_;
  DispersionParams params_;
  Eigen::MatrixXd ortho_;     // modes = ortho_ * raw vectors
  Eigen::MatrixXd raw_gram_;  // extended pair integrals
  Eigen::MatrixXd raw_e_nr_, raw_e_r_;
};

/// Phi(f) = sum_i p_i (a_i + a_i+) with p = phi_coefficients.
Eigen::MatrixXcd phi_operator(const TruncatedFock& fock, const ModeBasis& basis,
                              int generator, FieldWeighting w, double scale = 1.0);
/// Pi(g) = -i sum_i q_i (a_i - a_i+) with q = pi_coefficients.
Eigen::MatrixXcd pi_operator(const TruncatedFock& fock, const ModeBasis& basis,
                             int generator, FieldWeighting w, double scale = 1.0);
/// a(f) = sum_i coords_i a_i; equals sqrt(m0/2) [Phi(f) + i Pi(f)/m0] in the
/// nonrelativistic channel (the convention fixed so a(f) kills the vacuum and
/// [a(f), a+(f)] = ||f||^2).
Eigen::MatrixXcd annihilator(const TruncatedFock& fock, const ModeBasis& basis,
                             int generator, double scale = 1.0);

/// <chi, [Phi(f), Pi(g)] chi>; UnsafeState when chi touches occupations above
/// cutoff - 2.
Complex smeared_commutator(const TruncatedFock& fock, const ModeBasis& basis,
                           int f_generator, int g_generator, FieldWeighting w,
                           const Eigen::VectorXcd& chi);

/// Operator-norm defect of the exponentiated commutation relation
/// e^{i Pi} e^{i Phi} = e^{i Phi} e^{i Pi} e^{i (f,g)} restricted to the safe
/// subspace (occupations <= D/2), with Phi = sum_i p_i (a_i + a_i+),
/// Pi = -i sum_i q_i (a_i - a_i+) and phase (f,g) = 2 p.q. On the full space
/// the relation is exact; the residual measures the truncation defect.
double weyl_relation_residual(const Eigen::VectorXd& p, const Eigen::VectorXd& q,
                              int cutoff);
double weyl_relation_residual(double p, double q, int cutoff);

/// max over basis modes of || a(f_i) vacuum ||.
double vacuum_annihilation_check(const TruncatedFock& fock, const ModeBasis& basis);

/// <0| Phi_w(f1) Phi_w(f2) |0> evaluated on the truncated space; matches the
/// direct momentum integral of the corresponding kernel.
Complex two_point_vacuum(const TruncatedFock& fock, const ModeBasis& basis, int f1,
                         int f2, FieldWeighting w);

/// Direct-quadrature counterpart of two_point_vacuum.
double two_point_vacuum_quadrature(const TestFunction& f1, const TestFunction& f2,
                                   const DispersionParams& p, FieldWeighting w,
                                   const numerics::QuadratureSpec& spec = {});

}  // namespace causalab::fock

#endif
