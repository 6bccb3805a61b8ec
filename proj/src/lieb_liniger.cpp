#include "causalab/lieb_liniger.hpp"

#include <Eigen/Dense>

#include <cmath>

#include "causalab/numerics.hpp"

namespace causalab::lieb_liniger {

namespace {

struct NystromResult {
  Eigen::VectorXd g;
  double integral = 0.0;
  double second_moment = 0.0;
  bool positive = false;
};

NystromResult solve_at_alpha(double alpha, const numerics::GaussLegendre& gl) {
  const int n = int(gl.nodes.size());
  Eigen::MatrixXd system = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const double dx = gl.nodes[i] - gl.nodes[j];
      system(i, j) -= (alpha / M_PI) / (alpha * alpha + dx * dx) * gl.weights[j];
    }
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, 1.0 / (2.0 * M_PI));
  NystromResult out;
  out.g = system.partialPivLu().solve(rhs);
  out.positive = (out.g.minCoeff() > 0.0);
  for (int i = 0; i < n; ++i) {
    out.integral += gl.weights[i] * out.g[i];
    out.second_moment += gl.weights[i] * out.g[i] * gl.nodes[i] * gl.nodes[i];
  }
  return out;
}

}  // namespace

LLSolution solve_ll(double gamma, int n_nodes) {
  if (!(gamma >= 1e-3))
    throw ValidationError("solve_ll: gamma below 1e-3 is outside the supported range");
  if (n_nodes < 64) throw ValidationError("solve_ll: need n_nodes >= 64");
  const auto gl = numerics::gauss_legendre(n_nodes);

  // G(alpha) = alpha - gamma * int g; scan a geometric alpha ladder for a
  // bracket, skipping alphas too small for the quadrature to resolve the
  // near-delta kernel (where g turns unphysical)
  auto consistency = [&](double alpha) {
    return alpha - gamma * solve_at_alpha(alpha, gl).integral;
  };
  double lo = 0.0, hi = 0.0, f_lo = 0.0, f_hi = 0.0;
  double prev_alpha = 0.0, prev_val = 0.0;
  bool have_prev = false;
  for (double alpha = 0.01; alpha < 1e6; alpha *= 1.3) {
    const auto sol = solve_at_alpha(alpha, gl);
    if (!sol.positive) {
      have_prev = false;
      continue;
    }
    const double val = alpha - gamma * sol.integral;
    if (have_prev && prev_val < 0.0 && val >= 0.0) {
      lo = prev_alpha;
      hi = alpha;
      f_lo = prev_val;
      f_hi = val;
      break;
    }
    prev_alpha = alpha;
    prev_val = val;
    have_prev = true;
  }
  if (hi == 0.0)
    throw NonConvergence("solve_ll: no valid bracket for the alpha consistency");
  const double alpha =
      numerics::brent(consistency, {lo, hi, f_lo, f_hi}, 1e-15);

  LLSolution out;
  out.gamma = gamma;
  out.alpha = alpha;
  out.nodes = gl.nodes;
  out.weights = gl.weights;
  const auto sol = solve_at_alpha(alpha, gl);
  out.g.assign(sol.g.data(), sol.g.data() + sol.g.size());
  out.f_gamma = std::pow(gamma / alpha, 3.0) * sol.second_moment;

  // Nystrom residual of the integral equation at the nodes
  double worst = 0.0;
  for (int i = 0; i < n_nodes; ++i) {
    double acc = 1.0 / (2.0 * M_PI);
    for (int j = 0; j < n_nodes; ++j) {
      const double dx = gl.nodes[i] - gl.nodes[j];
      acc += (alpha / M_PI) / (alpha * alpha + dx * dx) * gl.weights[j] * sol.g[j];
    }
    worst = std::max(worst, std::abs(acc - sol.g[i]));
  }
  out.residual_max = worst;
  if (worst > 1e-10)
    throw NonConvergence("solve_ll: Nystrom residual above 1e-10");
  const double consistency_residual = std::abs(alpha - gamma * sol.integral);
  if (consistency_residual > 1e-10 * std::max(1.0, alpha))
    throw NonConvergence("solve_ll: gamma consistency residual above 1e-10");
  return out;
}

double energy_density(double lambda, double rho, int n_nodes) {
  if (!(lambda > 0) || !(rho > 0))
    throw ValidationError("energy_density: lambda and rho must be positive");
  return rho * rho * rho * solve_ll(lambda / rho, n_nodes).f_gamma;
}

double scaling_residual(double lambda, double rho1, double rho2, int n_nodes) {
  if (rho1 == rho2)
    throw ValidationError("scaling_residual: densities must differ");
  const double f1 = solve_ll(lambda / rho1, n_nodes).f_gamma;
  const double f2 = solve_ll(lambda / rho2, n_nodes).f_gamma;
  const double e1 = energy_density(lambda, rho1, n_nodes);
  const double e2 = energy_density(lambda, rho2, n_nodes);
  return std::abs(f1 - e1 / (rho1 * rho1 * rho1)) +
         std::abs(f2 - e2 / (rho2 * rho2 * rho2));
}

}  // namespace causalab::lieb_liniger
