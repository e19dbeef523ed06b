#include "dtm/distance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "dtm/parallel.hpp"

namespace dtm {

namespace {

double root_of(double powered, double r) {
  if (r == 1.0) return powered;
  if (r == 2.0) return std::sqrt(powered);
  return std::pow(powered, 1.0 / r);
}

// Smallest t in [0, hi] with cdf(t) >= u (bisection on a monotone cdf).
double quantile_of_cdf(const std::function<double(double)>& cdf, double u,
                       double hi) {
  if (cdf(hi) < u) throw std::invalid_argument("cdf upper bracket too small");
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cdf(mid) >= u)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// inf{t : cdf(t) > 0}
double cdf_left_endpoint(const std::function<double(double)>& cdf, double hi) {
  double lo = 0.0;
  for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
    double mid = 0.5 * (lo + hi);
    if (cdf(mid) > 0.0)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

// 10-point Gauss-Legendre nodes/weights on [-1,1].
constexpr double kGlNode[5] = {0.1488743389816312, 0.4333953941292472,
                               0.6794095682990244, 0.8650633666889845,
                               0.9739065285171717};
constexpr double kGlWeight[5] = {0.2955242247147529, 0.2692667193099963,
                                 0.2190863625159820, 0.1494513491505806,
                                 0.0666713443086881};

double gl10(const std::function<double(double)>& f, double a, double b) {
  double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i)
    acc += kGlWeight[i] * (f(c - h * kGlNode[i]) + f(c + h * kGlNode[i]));
  return acc * h;
}

}  // namespace

DtmValue dtem(const PointCloud& cloud, const Point& x, std::size_t k, double r) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) throw std::invalid_argument("dtem: k out of range");
  if (x.size() != cloud.dim)
    throw std::invalid_argument("dtem: observation point dimension mismatch");
  std::vector<double> d;
  d.reserve(n);
  for (const auto& p : cloud.points) d.push_back(powered_distance(x, p, r));
  std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k - 1), d.end());
  std::sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k));
  double acc = 0.0;
  for (std::size_t j = 0; j < k; ++j) acc += d[j];
  DtmValue v;
  v.m = static_cast<double>(k) / static_cast<double>(n);
  v.r = r;
  v.powered = acc / static_cast<double>(k);
  v.root = root_of(v.powered, r);
  return v;
}

DtmValue dtm_from_quantile(const TabulatedQuantile& q, double m, double r) {
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("dtm: m must be in (0,1]");
  DtmValue v;
  v.m = m;
  v.r = r;
  v.powered = q.integral_to(m) / m;
  v.root = root_of(v.powered, r);
  return v;
}

DeltaValue delta(const PointCloud& cloud, const TabulatedQuantile& reference,
                 const Point& x, std::size_t k, double r) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) throw std::invalid_argument("delta: k out of range");
  double m = static_cast<double>(k) / static_cast<double>(n);
  DtmValue emp = dtem(cloud, x, k, r);
  DtmValue ref = dtm_from_quantile(reference, m, r);
  DeltaValue d;
  d.k = k;
  d.n = n;
  d.delta = emp.powered - ref.powered;
  d.delta_tilde = emp.root - ref.root;
  return d;
}

double delta_by_decomposition(const PointCloud& cloud,
                              const std::function<double(double)>& reference_cdf,
                              double cdf_upper, const Point& x, std::size_t k,
                              double r) {
  const std::size_t n = cloud.size();
  if (k < 1 || k > n) throw std::invalid_argument("k out of range");
  const double c = static_cast<double>(k) / static_cast<double>(n);

  PushForwardSample emp = push_forward(cloud, x, r);
  double f_inv_0 = cdf_left_endpoint(reference_cdf, cdf_upper);
  double f_inv_c = quantile_of_cdf(reference_cdf, c, cdf_upper);
  double fn_inv_c = quantile_eval(emp, c);
  double upper = std::max(f_inv_c, fn_inv_c);
  if (upper <= f_inv_0) return 0.0;

  // Breakpoints: empirical jumps, the reference kink at F^-1(c), endpoints.
  std::vector<double> cuts;
  cuts.push_back(f_inv_0);
  cuts.push_back(upper);
  cuts.push_back(std::clamp(f_inv_c, f_inv_0, upper));
  for (double t : emp.values)
    if (t > f_inv_0 && t < upper) cuts.push_back(t);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

  double prev_f = -1.0;
  auto f_capped = [&](double t) {
    double f = reference_cdf(t);
    return std::min(f, c);
  };
  double acc = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    double a = cuts[i - 1], b = cuts[i];
    double fa = reference_cdf(a), fb = reference_cdf(b);
    if (fb < fa - 1e-12)
      throw std::invalid_argument("reference cdf non-monotone on the grid");
    prev_f = fb;
    (void)prev_f;
    // F_n is constant on (a, b).
    double fn = std::min(ecdf_eval(emp, 0.5 * (a + b)), c);
    double int_f;
    if (fa >= c) {
      int_f = c * (b - a);
    } else {
      // smooth piece: composite 10-point Gauss-Legendre
      int_f = 0.0;
      int panels = 4;
      double h = (b - a) / panels;
      for (int p = 0; p < panels; ++p)
        int_f += gl10(f_capped, a + p * h, a + (p + 1) * h);
    }
    acc += int_f - fn * (b - a);
  }
  return acc / c;
}

std::vector<DtmValue> dtm_field(const PointCloud& cloud,
                                const std::vector<Point>& grid, double m, double r,
                                unsigned threads) {
  if (grid.empty()) throw std::invalid_argument("dtm_field: empty grid");
  const std::size_t n = cloud.size();
  auto k = static_cast<std::size_t>(std::llround(m * static_cast<double>(n)));
  if (k < 1) k = 1;
  if (k > n) k = n;
  std::vector<DtmValue> out(grid.size());
  parallel_for(grid.size(), threads,
               [&](std::size_t i) { out[i] = dtem(cloud, grid[i], k, r); });
  return out;
}

}  // namespace dtm
