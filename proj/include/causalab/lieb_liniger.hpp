#ifndef CAUSALAB_LIEB_LINIGER_HPP
#define CAUSALAB_LIEB_LINIGER_HPP

#include <vector>

#include "causalab/errors.hpp"

namespace causalab::lieb_liniger {

// Ground state of the delta-Bose gas in the convention 2 m0 = 1, where the
// energy density is e(rho) = rho^3 f(gamma), gamma = lambda / rho, and f is
// determined by the Fredholm equation
//   g(x) = 1/2pi + (1/pi) int_{-1}^{1} alpha g(y) / (alpha^2 + (x-y)^2) dy
// with gamma = alpha / int g and f(gamma) = (gamma/alpha)^3 int g(x) x^2 dx.
// The Tonks limit is f -> pi^2/3.

struct LLSolution {
  double gamma = 0.0;
  double alpha = 0.0;
  std::vector<double> nodes;    // Gauss-Legendre nodes on [-1, 1]
  std::vector<double> weights;
  std::vector<double> g;        // density profile at the nodes
  double f_gamma = 0.0;
  double residual_max = 0.0;    // Nystrom residual of the integral equation
};

/// Nystrom solve at fixed gamma; alpha found by a bracketed root search on the
/// consistency condition gamma * int g = alpha. gamma below 1e-3 is rejected
/// (the outer solve degrades there).
LLSolution solve_ll(double gamma, int n_nodes);

/// e(lambda, rho) = rho^3 f(lambda / rho).
double energy_density(double lambda, double rho, int n_nodes);

/// |f(l/r1) - e(l,r1)/r1^3| + |f(l/r2) - e(l,r2)/r2^3|; a scaling-collapse
/// guard that catches unit or convention regressions.
double scaling_residual(double lambda, double rho1, double rho2, int n_nodes);

}  // namespace causalab::lieb_liniger

#endif
