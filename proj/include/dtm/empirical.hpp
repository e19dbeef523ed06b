#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <vector>

#include "dtm/geometry.hpp"

namespace dtm {

// Sorted r-powered distances ||x - X_i||^r: the empirical push-forward
// sample seen from the observation point x.
struct PushForwardSample {
  std::vector<double> values;  // nondecreasing, nonnegative
  double r = 1.0;
  Point x;

  std::size_t size() const { return values.size(); }
};

double powered_distance(const Point& a, const Point& b, double r);

// Sorted list of ||x - X_i||^r over the cloud. Throws on dimension mismatch.
PushForwardSample push_forward(const PointCloud& cloud, const Point& x, double r);

// Right-continuous empirical distribution function: #{values <= t} / n.
double ecdf_eval(const PushForwardSample& sample, double t);

// Generalized inverse: for u in ((j-1)/n, j/n] returns the j-th order
// statistic; u = 0 returns the minimum. Throws if u is outside [0,1].
double quantile_eval(const PushForwardSample& sample, double u);

// Monotone grid representation of a quantile function on [0,1].
// Step semantics: F^-1 equals values[i] on (grid[i-1], grid[i]], matching an
// empirical quantile. Linear semantics: piecewise-linear interpolation,
// for tabulating smooth analytic quantiles.
struct TabulatedQuantile {
  enum class Interp { Step, Linear };

  std::vector<double> grid;    // strictly increasing, grid[0]=0, grid back()=1
  std::vector<double> values;  // nondecreasing
  Interp interp = Interp::Linear;

  static TabulatedQuantile from_sample(const PushForwardSample& sample);
  // Tabulates a callable quantile u -> F^-1(u) on a given grid.
  static TabulatedQuantile tabulate(const std::function<double(double)>& quantile,
                                    const std::vector<double>& grid);

  void validate() const;

  double value_at_zero() const { return values.front(); }  // F^-1(0)
  double value_at_one() const { return values.back(); }    // F^-1(1)

  double eval(double u) const;

  // Exact integral of the tabulated F^-1 over [0, m].
  double integral_to(double m) const;
};

// Uniform [0,1] grid with `points` entries plus endpoints.
std::vector<double> uniform_grid(std::size_t points);
// Grid geometrically refined below `knee` (default 0.1), linear above.
std::vector<double> geometric_grid(std::size_t geo_points, std::size_t lin_points,
                                   double u_min, double knee = 0.1);

// Exact 1-d W1 distance between the two empirical push-forward measures:
// the integral of |F_a^-1 - F_b^-1| over [0,1] on the piecewise-constant
// quantiles. For equal sizes this is the mean absolute difference of the
// matched sorted values.
double wasserstein1_1d(const PushForwardSample& a, const PushForwardSample& b);

struct J1Result {
  double value = 0.0;        // integral of sqrt(F(1-F)) over [0, upper]
  double error_estimate = 0.0;  // from step halving
  double tail_defect = 0.0;  // 1 - F(upper)
};

// Composite-midpoint evaluation of the mean-W1 rate functional
// integral_0^upper sqrt(F(t)(1-F(t))) dt, with a Richardson error estimate.
// Throws if the cdf is non-monotone on the evaluation grid.
J1Result j1_functional(const std::function<double(double)>& cdf, double upper,
                       std::size_t steps);

}  // namespace dtm
