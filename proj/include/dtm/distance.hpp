#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "dtm/empirical.hpp"
#include "dtm/geometry.hpp"

namespace dtm {

// Distance-to-measure value at one observation point.
struct DtmValue {
  double powered = 0.0;  // d^r_{P,m,r}(x)
  double root = 0.0;     // powered^(1/r)
  double m = 0.0;        // mass parameter in (0,1]
  double r = 1.0;
};

struct DeltaValue {
  double delta = 0.0;        // powered-scale difference
  double delta_tilde = 0.0;  // root-scale difference
  std::size_t k = 0;
  std::size_t n = 0;
};

// Distance to the empirical measure at m = k/n: the mean of the k smallest
// r-powered distances from x to the cloud. Throws if k is out of range.
DtmValue dtem(const PointCloud& cloud, const Point& x, std::size_t k, double r);

// DTM from a tabulated quantile: powered = (1/m) * integral_0^m F^-1,
// exact on the tabulation. Throws if m is outside (0,1].
DtmValue dtm_from_quantile(const TabulatedQuantile& q, double m, double r);

// DTEM minus the reference DTM at m = k/n, on both the powered and the
// root scale.
DeltaValue delta(const PointCloud& cloud, const TabulatedQuantile& reference,
                 const Point& x, std::size_t k, double r);

// Independent horizontal-integral route to the same difference:
// (n/k) * integral_{F^-1(0)}^{F^-1(k/n) v F_n^-1(k/n)}
//        { F(t)^(k/n) - F_n(t)^(k/n) } dt   (a^b here meaning min(a,b)),
// integrated exactly between the breakpoints of F_n with high-order
// quadrature for the smooth reference cdf. Serves as an oracle for `delta`.
// `cdf_upper` must bracket the reference quantile at k/n.
double delta_by_decomposition(const PointCloud& cloud,
                              const std::function<double(double)>& reference_cdf,
                              double cdf_upper, const Point& x, std::size_t k,
                              double r);

// Batch DTEM over a grid of observation points; k = max(1, round(m*n)).
// Order matches the grid; independent per point and safe to parallelize.
std::vector<DtmValue> dtm_field(const PointCloud& cloud,
                                const std::vector<Point>& grid, double m, double r,
                                unsigned threads = 1);

}  // namespace dtm
