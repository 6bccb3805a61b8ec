#ifndef CAUSALAB_BOUNDARY_HPP
#define CAUSALAB_BOUNDARY_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>
#include <variant>
#include <vector>

#include "causalab/errors.hpp"

namespace causalab::boundary {

using Complex = std::complex<double>;

// ---------------------------------------------------------------------------
// grids and sampled states
// ---------------------------------------------------------------------------

enum class GridKind {
  Closed,    // endpoints included, spacing L/(n-1)  (Robin / Dirichlet)
  Periodic,  // half-open [x0, x0+L), spacing L/n    (twisted)
};

struct GridSpec {
  double length = 1.0;
  int n = 0;
  GridKind kind = GridKind::Closed;
  double twist = 0.0;   // boundary phase for Periodic grids, reduced to [0, 2pi)
  double origin = 0.0;  // left endpoint (free-line boxes are centered via origin)

  double spacing() const {
    return kind == GridKind::Closed ? length / (n - 1) : length / n;
  }
  double point(int j) const { return origin + j * spacing(); }
  void validate() const;
  bool compatible(const GridSpec& o) const;
};

struct WaveFunction {
  GridSpec grid;
  Eigen::VectorXcd values;

  double norm() const;  // discrete L2 norm
  WaveFunction normalized() const;
};

/// Quadrature weights of the discrete inner product. Closed grids use the
/// fourth-order end-corrected trapezoid weights; periodic grids are uniform.
Eigen::VectorXd quadrature_weights(const GridSpec& g);

/// <a|b>, conjugate-linear in the first argument.
Complex inner(const WaveFunction& a, const WaveFunction& b);

/// d/dx by 4th-order central differences; one-sided stencils of the same order
/// at closed-grid endpoints, twist-phase wraparound on periodic grids.
Eigen::VectorXcd derivative(const WaveFunction& psi);

// ---------------------------------------------------------------------------
// self-adjoint realizations of -d^2/dx^2 on [0, L]  (2m = 1)
// ---------------------------------------------------------------------------

struct Robin {
  double sigma0 = 0.0;  // psi'(0) =  sigma0 psi(0)
  double sigmaL = 0.0;  // psi'(L) = -sigmaL psi(L)
};
struct Dirichlet {};
struct Twisted {
  double theta = 0.0;  // psi(0) = exp(i theta) psi(L)
};

struct BoundarySpec {
  std::variant<Robin, Dirichlet, Twisted> kind;
  double length = 1.0;
  void validate() const;
  std::string describe() const;
};

struct EigenMode {
  int index = 0;
  double energy = 0.0;
  Eigen::VectorXcd samples;  // discrete-norm 1, first nonzero sample real > 0
  int node_count = 0;        // interior sign changes; meaningful for real modes
  double momentum = 0.0;     // twisted modes only: the wavenumber k_n
};

struct Spectrum {
  BoundarySpec bc;
  GridSpec grid;
  std::vector<EigenMode> modes;
};

/// Eigenpairs sorted by energy. Robin scans the entire-in-E residual
/// (sigma0+sigmaL) c(E,L) + (sigma0 sigmaL - E) s(E,L); negative-energy roots
/// are searched whenever a wall is attractive. Twisted spectra come from the
/// momentum eigenvalues k_n = (2 pi n - theta)/L.
Spectrum solve_spectrum(const BoundarySpec& bc, const GridSpec& grid, int n_modes);

/// Momentum eigenvalues of p_theta, the n_modes values of smallest |k|.
std::vector<double> momentum_spectrum_twisted(double theta, double length, int n_modes);

/// <phi, p psi> - <p phi, psi> with p = -i d/dx; equals -i [conj(phi) psi]_0^L.
Complex momentum_symmetry_defect(const WaveFunction& phi, const WaveFunction& psi);

/// The boundary-term value -i (conj(phi(L)) psi(L) - conj(phi(0)) psi(0)).
Complex boundary_term(const WaveFunction& phi, const WaveFunction& psi);

/// j(x) = i (psi_bar' psi - psi_bar psi') evaluated at a grid point.
double probability_current(const WaveFunction& psi, double x);

/// Full current profile (same stencils as probability_current).
Eigen::VectorXd current_profile(const WaveFunction& psi);

enum class FluxClass { Isolated, Throughflow };

struct FluxReport {
  double j0 = 0.0;
  double jL = 0.0;
  FluxClass classification = FluxClass::Isolated;
};

/// Checks psi against the boundary condition (tolerance 1e-6, else
/// BoundaryViolation), then classifies the endpoint currents.
FluxReport flux_report(const BoundarySpec& bc, const WaveFunction& psi,
                       double tol = 1e-6);

// ---------------------------------------------------------------------------
// eigenbasis expansions
// ---------------------------------------------------------------------------

struct SpectralDecomposition {
  Spectrum spectrum;
  Eigen::VectorXcd coefficients;
  double capture = 0.0;  // sum |c_n|^2 / ||psi||^2
};

SpectralDecomposition decompose(const WaveFunction& psi, const Spectrum& spectrum);

/// Partial sums S_N = sum_{|n|<=N} k_n^4 |c_n|^2 of the twisted-momentum
/// expansion of `psi` for N = N0, 2 N0, 4 N0, ... This is the quadratic-form
/// sum of p_theta^2 = H_theta; it diverges for states satisfying the Dirichlet
/// condition (derivative jump under the twisted periodization), which is the
/// numerical witness that no p_theta accommodates the Dirichlet domain.
std::vector<double> twisted_domain_form_sums(const WaveFunction& psi, double theta,
                                             int initial_modes, int doublings);

/// Residual of the boundary condition evaluated on sampled data.
double boundary_residual(const BoundarySpec& bc, const WaveFunction& psi);

}  // namespace causalab::boundary

#endif
