#include "oracles.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace oracles {

double midpoint_rule(const std::function<double(double)>& f, double a, double b,
                     long n) {
  const double h = (b - a) / n;
  double acc = 0.0;
  for (long i = 0; i < n; ++i) acc += f(a + (i + 0.5) * h);
  return acc * h;
}

void gauss_legendre_nodes(int n, std::vector<double>& x, std::vector<double>& w) {
  x.assign(n, 0.0);
  w.assign(n, 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double pp = 0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2 * j + 1) * z * p1 - j * p2) / (j + 1);
      }
      pp = n * (z * p0 - p1) / (z * z - 1);
      const double dz = p0 / pp;
      z -= dz;
      if (std::abs(dz) < 1e-15) break;
    }
    x[i] = -z;
    x[n - 1 - i] = z;
    w[i] = w[n - 1 - i] = 2.0 / ((1 - z * z) * pp * pp);
  }
}

double tensor_quadrature_3d_isotropic(const std::function<double(double)>& f,
                                      double extent, int panel_order) {
  // graded panel edges 0,1,2,4,... mirrored to negative values
  std::vector<double> edges = {0.0, 0.5, 1.0};
  while (edges.back() < extent) edges.push_back(std::min(edges.back() * 2.0, extent));
  std::vector<double> cuts;
  for (auto it = edges.rbegin(); it != edges.rend(); ++it) cuts.push_back(-*it);
  for (size_t i = 1; i < edges.size(); ++i) cuts.push_back(edges[i]);

  std::vector<double> gx, gw;
  gauss_legendre_nodes(panel_order, gx, gw);
  std::vector<double> nodes, weights;
  for (size_t p = 0; p + 1 < cuts.size(); ++p) {
    const double mid = 0.5 * (cuts[p] + cuts[p + 1]);
    const double half = 0.5 * (cuts[p + 1] - cuts[p]);
    for (int i = 0; i < panel_order; ++i) {
      nodes.push_back(mid + half * gx[i]);
      weights.push_back(half * gw[i]);
    }
  }
  const size_t m = nodes.size();
  double total = 0.0;
  for (size_t ix = 0; ix < m; ++ix) {
    const double x2 = nodes[ix] * nodes[ix];
    double plane = 0.0;
    for (size_t iy = 0; iy < m; ++iy) {
      const double y2 = nodes[iy] * nodes[iy];
      double line = 0.0;
      for (size_t iz = 0; iz < m; ++iz) {
        line += weights[iz] * f(std::sqrt(x2 + y2 + nodes[iz] * nodes[iz]));
      }
      plane += weights[iy] * line;
    }
    total += weights[ix] * plane;
  }
  return total;
}

double bisection(const std::function<double(double)>& f, double a, double b,
                 double tol) {
  double fa = f(a), fb = f(b);
  if (fa * fb > 0) throw std::invalid_argument("bisection: no sign change");
  while (b - a > tol) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0) return m;
    if (fa * fm < 0) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

Eigen::MatrixXcd expm_series(const Eigen::MatrixXcd& m) {
  int squarings = 0;
  Eigen::MatrixXcd scaled = m;
  while (scaled.cwiseAbs().sum() > 0.5) {
    scaled *= 0.5;
    ++squarings;
  }
  Eigen::MatrixXcd term = Eigen::MatrixXcd::Identity(m.rows(), m.cols());
  Eigen::MatrixXcd sum = term;
  for (int k = 1; k < 40; ++k) {
    term = term * scaled / double(k);
    sum += term;
    if (term.cwiseAbs().maxCoeff() < 1e-18) break;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

namespace {

// cell-centered FD eigenvalues at a single resolution
std::vector<double> fd_robin_single(double sigma0, double sigmaL, double L, int n,
                                    int count) {
  const double h = L / n;
  Eigen::VectorXd diag(n), sub(n - 1);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 / (h * h);
  for (int i = 0; i < n - 1; ++i) sub[i] = -1.0 / (h * h);
  const double c0 = (1.0 - 0.5 * h * sigma0) / (1.0 + 0.5 * h * sigma0);
  const double cN = (1.0 - 0.5 * h * sigmaL) / (1.0 + 0.5 * h * sigmaL);
  diag[0] = (2.0 - c0) / (h * h);
  diag[n - 1] = (2.0 - cN) / (h * h);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(),
                         solver.eigenvalues().data() + count);
  return ev;
}

}  // namespace

std::vector<double> fd_robin_eigenvalues(double sigma0, double sigmaL, double L,
                                         int n, int count) {
  auto e1 = fd_robin_single(sigma0, sigmaL, L, n / 4, count);
  auto e2 = fd_robin_single(sigma0, sigmaL, L, n / 2, count);
  auto e3 = fd_robin_single(sigma0, sigmaL, L, n, count);
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) {
    const double r1 = (4.0 * e2[i] - e1[i]) / 3.0;
    const double r2 = (4.0 * e3[i] - e2[i]) / 3.0;
    out[i] = (16.0 * r2 - r1) / 15.0;
  }
  return out;
}

Eigen::VectorXcd crank_nicolson_dirichlet(const Eigen::VectorXcd& interior, double L,
                                          double t, double dt) {
  // H = -d^2/dx^2, 4th-order stencil, odd reflection across the walls.
  const int n = int(interior.size());
  const double h = L / (n + 1);
  auto apply_h = [&](const Eigen::VectorXcd& u) {
    Eigen::VectorXcd out(n);
    auto at = [&](int j) -> Complex {
      if (j >= 0 && j < n) return u[j];
      if (j == -1 || j == n) return Complex(0, 0);      // wall value
      if (j == -2) return -u[0];                        // odd reflection
      if (j == n + 1) return -u[n - 1];
      return Complex(0, 0);
    };
    for (int j = 0; j < n; ++j) {
      out[j] = -(-at(j - 2) + 16.0 * at(j - 1) - 30.0 * at(j) + 16.0 * at(j + 1) -
                 at(j + 2)) /
               (12.0 * h * h);
    }
    return out;
  };

  auto run = [&](double step) {
    const long nsteps = std::lround(t / step);
    const double actual = t / nsteps;
    const Complex ihalf(0, actual / 2.0);
    // bands of I + i dt/2 H; H rows are [1,-16,30,-16,1]/(12 h^2) with the
    // odd-reflection correction 30 -> 29 at the walls
    const double s = 1.0 / (12.0 * h * h);
    Eigen::MatrixXcd implicit_rows = Eigen::MatrixXcd::Zero(n, 5);
    for (int i = 0; i < n; ++i) {
      const double d0 = (i == 0 || i == n - 1) ? 29.0 * s : 30.0 * s;
      implicit_rows(i, 2) = 1.0 + ihalf * d0;
      if (i >= 1) implicit_rows(i, 1) = ihalf * (-16.0 * s);
      if (i + 1 < n) implicit_rows(i, 3) = ihalf * (-16.0 * s);
      if (i >= 2) implicit_rows(i, 0) = ihalf * s;
      if (i + 2 < n) implicit_rows(i, 4) = ihalf * s;
    }
    // banded LU, no pivoting
    Eigen::MatrixXcd lu = implicit_rows;
    for (int i = 1; i < n; ++i) {
      // eliminate subdiagonal 1 (and 2 where present)
      if (i >= 2 && lu(i, 0) != Complex(0, 0)) {
        const Complex f = lu(i, 0) / lu(i - 2, 2);
        lu(i, 0) = f;
        lu(i, 1) -= f * lu(i - 2, 3);
        lu(i, 2) -= f * lu(i - 2, 4);
      }
      if (lu(i, 1) != Complex(0, 0)) {
        const Complex f = lu(i, 1) / lu(i - 1, 2);
        lu(i, 1) = f;
        lu(i, 2) -= f * lu(i - 1, 3);
        if (i + 1 < n) lu(i, 3) -= f * lu(i - 1, 4);
      }
    }
    auto solve = [&](Eigen::VectorXcd b) {
      for (int i = 1; i < n; ++i) {
        if (i >= 2) b[i] -= lu(i, 0) * b[i - 2];
        b[i] -= lu(i, 1) * b[i - 1];
      }
      for (int i = n - 1; i >= 0; --i) {
        Complex acc = b[i];
        if (i + 1 < n) acc -= lu(i, 3) * b[i + 1];
        if (i + 2 < n) acc -= lu(i, 4) * b[i + 2];
        b[i] = acc / lu(i, 2);
      }
      return b;
    };
    Eigen::VectorXcd psi = interior;
    for (long s = 0; s < nsteps; ++s) {
      const Eigen::VectorXcd rhs = psi - ihalf * apply_h(psi);
      psi = solve(rhs);
    }
    return psi;
  };

  const Eigen::VectorXcd coarse = run(dt);
  const Eigen::VectorXcd fine = run(dt / 2.0);
  return (4.0 * fine - coarse) / 3.0;  // removes the O(dt^2) term
}

Complex gaussian_free_packet(double x, double t, double mass, double w, double x0,
                             double k0) {
  // psi0(x) = (pi w^2)^{-1/4} exp(-(x-x0)^2 / (2 w^2) + i k0 x)
  const Complex i(0, 1);
  const Complex a = 1.0 + i * t / (mass * w * w);
  const double xi = x - x0 - k0 * t / mass;
  Complex arg = -xi * xi / (2.0 * w * w * a);
  arg += i * (k0 * x - 0.5 * k0 * k0 * t / mass);
  return std::pow(M_PI * w * w, -0.25) * std::exp(arg) / std::sqrt(a);
}

Complex beta_series(double k, double tau, double m0, double c) {
  const double u2 = (k / (m0 * c)) * (k / (m0 * c));
  if (u2 >= 1.0) throw std::invalid_argument("beta_series: needs |k| < m0 c");
  // sqrt(1+x) and 1/sqrt(1+x) binomial series, summed to machine accuracy
  double sqrt_sum = 0.0, inv_sum = 0.0;
  double sqrt_coef = 1.0, inv_coef = 1.0;
  double power = 1.0;
  for (int j = 0; j < 60; ++j) {
    if (j > 0) {
      sqrt_coef *= (1.5 / j - 1.0);
      inv_coef *= (0.5 / j - 1.0);
      power *= u2;
    }
    sqrt_sum += sqrt_coef * power;
    inv_sum += inv_coef * power;
    if (std::abs(power * sqrt_coef) < 1e-18 && j > 2) break;
  }
  const double omega_minus_rest = m0 * c * c * (sqrt_sum - 1.0);
  const double k_r = inv_sum / (2.0 * m0);
  const double k_nr = 1.0 / (2.0 * m0);
  const Complex i(0, 1);
  return k_nr * std::exp(-i * tau * k * k / (2.0 * m0)) -
         k_r * std::exp(-i * tau * omega_minus_rest);
}

}  // namespace oracles
