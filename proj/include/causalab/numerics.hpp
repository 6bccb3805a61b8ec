#ifndef CAUSALAB_NUMERICS_HPP
#define CAUSALAB_NUMERICS_HPP

#include <Eigen/Dense>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

#include "causalab/errors.hpp"

namespace causalab::numerics {

using Complex = std::complex<double>;

struct QuadratureSpec {
  double relative_tolerance = 1e-12;
  double absolute_tolerance = 1e-14;
  int max_subdivisions = 4000;
  void validate() const;
};

/// Integration interval; lo/hi may be +-infinity. Semi-infinite and doubly
/// infinite ranges are mapped onto [0,1) by k = t/(1-t) before subdivision.
struct Interval {
  double lo;
  double hi;
};

struct Bracket {
  double lo;
  double hi;
  double residual_lo;
  double residual_hi;
  void validate() const;  // lo < hi and sign change
};

struct QuadratureResult {
  Complex value;
  double error_estimate;
  int subdivisions;
};

QuadratureResult integrate_1d(const std::function<Complex(double)>& f, Interval iv,
                              const QuadratureSpec& spec = {});

/// Radial reduction of an isotropic 3D integral: integrates 4 pi k^2 g(k) on [0, inf).
QuadratureResult integrate_radial_3d(const std::function<Complex(double)>& g,
                                     const QuadratureSpec& spec = {});

double integrate_real(const std::function<double(double)>& f, Interval iv,
                      const QuadratureSpec& spec = {});

/// Brent's method on a valid bracket. xtol is an absolute tolerance on the root.
double brent(const std::function<double(double)>& f, Bracket b, double xtol = 1e-14);

/// Scans the interval for sign changes (skipping declared singularities), then
/// polishes each bracket with Brent. Roots come back sorted ascending. When
/// expected_count is set and the scan disagrees, the sampling is doubled before
/// MissedRoot is raised.
std::vector<double> find_roots(const std::function<double(double)>& residual, Interval iv,
                               std::optional<int> expected_count = std::nullopt,
                               const std::vector<double>& singularities = {},
                               int initial_samples = 512);

Eigen::MatrixXcd matrix_exponential(const Eigen::MatrixXcd& m);

struct GaussLegendre {
  std::vector<double> nodes;    // on (-1, 1), ascending
  std::vector<double> weights;
};
GaussLegendre gauss_legendre(int n);

/// Natural cubic spline through (x_i, y_i); x strictly increasing.
class CubicSpline {
 public:
  CubicSpline() = default;
  CubicSpline(std::vector<double> x, std::vector<double> y);
  double operator()(double x) const;

 private:
  std::vector<double> x_, y_, m_;  // m_ = second derivatives
};

}  // namespace causalab::numerics

#endif
