#include "dtm/empirical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtm {

double powered_distance(const Point& a, const Point& b, double r) {
  double sq = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    sq += d * d;
  }
  if (r == 2.0) return sq;
  double norm = std::sqrt(sq);
  if (r == 1.0) return norm;
  return std::pow(norm, r);
}

PushForwardSample push_forward(const PointCloud& cloud, const Point& x, double r) {
  if (x.size() != cloud.dim)
    throw std::invalid_argument("observation point dimension mismatch");
  if (r < 1.0) throw std::invalid_argument("power r must be >= 1");
  PushForwardSample s;
  s.r = r;
  s.x = x;
  s.values.reserve(cloud.size());
  for (const auto& p : cloud.points) s.values.push_back(powered_distance(x, p, r));
  std::sort(s.values.begin(), s.values.end());
  return s;
}

double ecdf_eval(const PushForwardSample& sample, double t) {
  const auto& v = sample.values;
  auto it = std::upper_bound(v.begin(), v.end(), t);
  return static_cast<double>(it - v.begin()) / static_cast<double>(v.size());
}

double quantile_eval(const PushForwardSample& sample, double u) {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("quantile argument outside [0,1]");
  const auto n = sample.values.size();
  if (u == 0.0) return sample.values.front();
  // j such that (j-1)/n < u <= j/n, with the comparisons done on the same
  // double grid points used everywhere else.
  auto j = static_cast<std::size_t>(std::ceil(u * static_cast<double>(n)));
  if (j < 1) j = 1;
  if (j > n) j = n;
  double dn = static_cast<double>(n);
  while (j > 1 && static_cast<double>(j - 1) / dn >= u) --j;
  while (j < n && static_cast<double>(j) / dn < u) ++j;
  return sample.values[j - 1];
}

TabulatedQuantile TabulatedQuantile::from_sample(const PushForwardSample& sample) {
  TabulatedQuantile q;
  q.interp = Interp::Step;
  const auto n = sample.values.size();
  q.grid.resize(n + 1);
  q.values.resize(n + 1);
  q.grid[0] = 0.0;
  q.values[0] = sample.values[0];
  for (std::size_t j = 1; j <= n; ++j) {
    q.grid[j] = static_cast<double>(j) / static_cast<double>(n);
    q.values[j] = sample.values[j - 1];
  }
  return q;
}

TabulatedQuantile TabulatedQuantile::tabulate(
    const std::function<double(double)>& quantile, const std::vector<double>& grid) {
  TabulatedQuantile q;
  q.interp = Interp::Linear;
  q.grid = grid;
  q.values.reserve(grid.size());
  for (double u : grid) q.values.push_back(quantile(u));
  q.validate();
  return q;
}

void TabulatedQuantile::validate() const {
  if (grid.size() < 2 || grid.size() != values.size())
    throw std::invalid_argument("tabulated quantile: bad sizes");
  if (grid.front() != 0.0 || grid.back() != 1.0)
    throw std::invalid_argument("tabulated quantile: grid must span [0,1]");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1]))
      throw std::invalid_argument("tabulated quantile: grid not strictly increasing");
    if (values[i] < values[i - 1])
      throw std::invalid_argument("tabulated quantile: values not nondecreasing");
  }
}

double TabulatedQuantile::eval(double u) const {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("quantile argument outside [0,1]");
  if (u <= grid.front()) return values.front();
  auto it = std::lower_bound(grid.begin(), grid.end(), u);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (interp == Interp::Step) return values[i];
  if (grid[i] == u) return values[i];
  double t = (u - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

double TabulatedQuantile::integral_to(double m) const {
  if (m < 0.0 || m > 1.0) throw std::invalid_argument("mass outside [0,1]");
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    double lo = grid[i - 1];
    if (lo >= m) break;
    double hi = std::min(grid[i], m);
    double len = hi - lo;
    if (interp == Interp::Step) {
      acc += len * values[i];
    } else {
      double vlo = values[i - 1];
      double t = (hi - grid[i - 1]) / (grid[i] - grid[i - 1]);
      double vhi = values[i - 1] + t * (values[i] - values[i - 1]);
      acc += len * 0.5 * (vlo + vhi);
    }
  }
  return acc;
}

std::vector<double> uniform_grid(std::size_t points) {
  if (points < 2) throw std::invalid_argument("grid needs at least 2 points");
  std::vector<double> g(points);
  for (std::size_t i = 0; i < points; ++i)
    g[i] = static_cast<double>(i) / static_cast<double>(points - 1);
  g.back() = 1.0;
  return g;
}

std::vector<double> geometric_grid(std::size_t geo_points, std::size_t lin_points,
                                   double u_min, double knee) {
  if (!(u_min > 0.0 && u_min < knee && knee < 1.0))
    throw std::invalid_argument("geometric_grid: need 0 < u_min < knee < 1");
  std::vector<double> g;
  g.push_back(0.0);
  double ratio = std::pow(knee / u_min, 1.0 / static_cast<double>(geo_points - 1));
  double u = u_min;
  for (std::size_t i = 0; i < geo_points; ++i) {
    g.push_back(u);
    u *= ratio;
  }
  g.back() = knee;
  for (std::size_t i = 1; i <= lin_points; ++i)
    g.push_back(knee + (1.0 - knee) * static_cast<double>(i) /
                           static_cast<double>(lin_points));
  g.back() = 1.0;
  return g;
}

double wasserstein1_1d(const PushForwardSample& a, const PushForwardSample& b) {
  const auto na = a.values.size();
  const auto nb = b.values.size();
  if (na == 0 || nb == 0) throw std::invalid_argument("empty sample");
  if (na == nb) {
    double acc = 0.0;
    for (std::size_t i = 0; i < na; ++i) acc += std::abs(a.values[i] - b.values[i]);
    return acc / static_cast<double>(na);
  }
  // Merge the two step grids {i/na} and {j/nb}; exact tie handling via
  // integer cross products.
  double acc = 0.0;
  double u_prev = 0.0;
  std::size_t i = 1, j = 1;
  while (i <= na && j <= nb) {
    std::uint64_t lhs = static_cast<std::uint64_t>(i) * nb;
    std::uint64_t rhs = static_cast<std::uint64_t>(j) * na;
    double u_next = (lhs <= rhs) ? static_cast<double>(i) / static_cast<double>(na)
                                 : static_cast<double>(j) / static_cast<double>(nb);
    acc += (u_next - u_prev) * std::abs(a.values[i - 1] - b.values[j - 1]);
    u_prev = u_next;
    if (lhs <= rhs) ++i;
    if (rhs <= lhs) ++j;
  }
  return acc;
}

namespace {
double midpoint_pass(const std::function<double(double)>& cdf, double upper,
                     std::size_t steps) {
  double h = upper / static_cast<double>(steps);
  double acc = 0.0;
  double prev_f = -1.0;
  for (std::size_t i = 0; i < steps; ++i) {
    double t = (static_cast<double>(i) + 0.5) * h;
    double f = cdf(t);
    if (f < prev_f - 1e-12)
      throw std::invalid_argument("j1_functional: cdf non-monotone on the grid");
    prev_f = f;
    double p = std::clamp(f, 0.0, 1.0);
    acc += std::sqrt(p * (1.0 - p));
  }
  return acc * h;
}
}  // namespace

J1Result j1_functional(const std::function<double(double)>& cdf, double upper,
                       std::size_t steps) {
  if (!(upper > 0.0) || steps == 0)
    throw std::invalid_argument("j1_functional: bad parameters");
  double coarse = midpoint_pass(cdf, upper, steps);
  double fine = midpoint_pass(cdf, upper, steps * 2);
  J1Result out;
  out.value = fine;
  out.error_estimate = std::abs(fine - coarse) / 3.0;
  out.tail_defect = 1.0 - cdf(upper);
  return out;
}

}  // namespace dtm
