#include "dtm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dtm {

namespace {

double tangle_poly(const Point& p) {
  double s = 0.0;
  for (double c : p) s += c * c * c * c - 5.0 * c * c;
  return s;
}

// Even-odd rule; points on an edge count as inside for our purposes
// (the rejection sampler's measure does not see the boundary).
bool polygon_contains(const Polygon2D& poly, double px, double py) {
  bool inside = false;
  std::size_t m = poly.vertices.size();
  for (std::size_t i = 0, j = m - 1; i < m; j = i++) {
    double xi = poly.vertices[i][0], yi = poly.vertices[i][1];
    double xj = poly.vertices[j][0], yj = poly.vertices[j][1];
    if ((yi > py) != (yj > py)) {
      double xcross = xj + (py - yj) / (yi - yj) * (xi - xj);
      if (px < xcross) inside = !inside;
    }
  }
  return inside;
}

constexpr double kMinAcceptance = 1e-6;

}  // namespace

void PointCloud::validate() const {
  if (points.empty()) throw std::invalid_argument("point cloud is empty");
  if (dim == 0) throw std::invalid_argument("point cloud dimension is zero");
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (points[i].size() != dim)
      throw std::invalid_argument("point " + std::to_string(i) +
                                  " has wrong dimension");
    for (double c : points[i])
      if (!std::isfinite(c))
        throw std::invalid_argument("point " + std::to_string(i) +
                                    " has a non-finite coordinate");
  }
}

bool Box::contains(const Point& p) const {
  if (p.size() != lo.size()) throw std::invalid_argument("box/point dimension mismatch");
  for (std::size_t i = 0; i < p.size(); ++i)
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  return true;
}

Box Box::inflated(double factor_per_axis) const {
  Box out = *this;
  for (std::size_t i = 0; i < lo.size(); ++i) {
    double pad = (hi[i] - lo[i]) * factor_per_axis * 0.5;
    out.lo[i] -= pad;
    out.hi[i] += pad;
  }
  return out;
}

std::size_t shape_dim(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> std::size_t {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Segment>) return 1;
        if constexpr (std::is_same_v<T, Polygon2D>) return 2;
        if constexpr (std::is_same_v<T, PointCloudSupport>) return s.cloud.dim;
        if constexpr (std::is_same_v<T, TangleCube>) return 3;
      },
      shape);
}

bool contains(const Shape& shape, const Point& p) {
  if (p.size() != shape_dim(shape))
    throw std::invalid_argument("shape/point dimension mismatch");
  return std::visit(
      [&p](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Segment>) {
          return p[0] >= s.a && p[0] <= s.b;
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          return polygon_contains(s, p[0], p[1]);
        } else if constexpr (std::is_same_v<T, PointCloudSupport>) {
          for (const auto& q : s.cloud.points)
            if (q == p) return true;
          return false;
        } else {
          return tangle_poly(p) + s.level <= 0.0;
        }
      },
      shape);
}

Box bounding_box(const Shape& shape) {
  return std::visit(
      [](const auto& s) -> Box {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Segment>) {
          return Box{{s.a}, {s.b}};
        } else if constexpr (std::is_same_v<T, Polygon2D>) {
          Box b{{s.vertices[0][0], s.vertices[0][1]},
                {s.vertices[0][0], s.vertices[0][1]}};
          for (const auto& v : s.vertices)
            for (int i = 0; i < 2; ++i) {
              b.lo[i] = std::min(b.lo[i], v[i]);
              b.hi[i] = std::max(b.hi[i], v[i]);
            }
          return b;
        } else if constexpr (std::is_same_v<T, PointCloudSupport>) {
          Box b{s.cloud.points[0], s.cloud.points[0]};
          for (const auto& v : s.cloud.points)
            for (std::size_t i = 0; i < s.cloud.dim; ++i) {
              b.lo[i] = std::min(b.lo[i], v[i]);
              b.hi[i] = std::max(b.hi[i], v[i]);
            }
          return b;
        } else {
          // Per axis x^4 - 5x^2 >= -6.25, so a point of the solid satisfies
          // x_i^2 <= (5 + sqrt(75 - 4*level)) / 2. Half-width rounded up to
          // one decimal (2.4 for the reference level 10).
          double disc = 75.0 - 4.0 * s.level;
          if (disc < 0.0) disc = 0.0;
          double hw = std::sqrt((5.0 + std::sqrt(disc)) / 2.0);
          hw = std::ceil(hw * 10.0) / 10.0;
          return Box{{-hw, -hw, -hw}, {hw, hw, hw}};
        }
      },
      shape);
}

PointCloud sample_uniform(const Shape& shape, std::size_t n, std::uint64_t seed) {
  if (n == 0) throw std::invalid_argument("sample size must be >= 1");
  std::size_t d = shape_dim(shape);
  PointCloud out;
  out.dim = d;
  out.points.reserve(n);
  Rng rng(seed);

  if (const auto* seg = std::get_if<Segment>(&shape)) {
    if (!(seg->a < seg->b)) throw std::invalid_argument("segment requires a < b");
    for (std::size_t i = 0; i < n; ++i)
      out.points.push_back({rng.uniform(seg->a, seg->b)});
    return out;
  }
  if (const auto* sup = std::get_if<PointCloudSupport>(&shape)) {
    sup->cloud.validate();
    std::size_t m = sup->cloud.size();
    for (std::size_t i = 0; i < n; ++i)
      out.points.push_back(sup->cloud.points[rng.uniform_index(m)]);
    return out;
  }

  // Rejection sampling from the bounding box for polygon and tangle cube.
  Box box = bounding_box(shape);
  std::uint64_t attempts = 0;
  std::uint64_t accepted = 0;
  Point candidate(d);
  const std::uint64_t min_attempts_before_check = 1u << 20;
  while (accepted < n) {
    ++attempts;
    for (std::size_t i = 0; i < d; ++i)
      candidate[i] = rng.uniform(box.lo[i], box.hi[i]);
    if (contains(shape, candidate)) {
      out.points.push_back(candidate);
      ++accepted;
    } else if (attempts >= min_attempts_before_check &&
               static_cast<double>(accepted) <
                   kMinAcceptance * static_cast<double>(attempts)) {
      throw std::runtime_error("rejection sampler degenerate: acceptance rate below 1e-6");
    }
  }
  return out;
}

PointCloud apply_clutter(const PointCloud& base_sample, double pi, const Box& box,
                         std::uint64_t seed) {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("clutter pi must be in (0,1)");
  if (box.dim() != base_sample.dim)
    throw std::invalid_argument("clutter box dimension mismatch");
  PointCloud out = base_sample;
  Rng rng(seed);
  for (auto& p : out.points) {
    if (rng.uniform01() < pi) {
      for (std::size_t i = 0; i < out.dim; ++i)
        p[i] = rng.uniform(box.lo[i], box.hi[i]);
    }
  }
  return out;
}

PointCloud apply_gaussian(const PointCloud& base_sample, double sigma,
                          std::uint64_t seed) {
  if (!(sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  PointCloud out = base_sample;
  Rng rng(seed);
  for (auto& p : out.points)
    for (auto& c : p) c += sigma * rng.normal();
  return out;
}

PointCloud load_point_cloud(const std::string& path, CloudFormat format) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  PointCloud cloud;
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line[0] == '#') continue;
    Point p;
    std::string token;
    std::istringstream ls(line);
    bool ok = true;
    if (format == CloudFormat::Csv) {
      while (std::getline(ls, token, ',')) {
        try {
          std::size_t pos = 0;
          double v = std::stod(token, &pos);
          while (pos < token.size() && std::isspace(static_cast<unsigned char>(token[pos]))) ++pos;
          if (pos != token.size()) { ok = false; break; }
          p.push_back(v);
        } catch (const std::exception&) {
          ok = false;
          break;
        }
      }
    } else {
      double v;
      while (ls >> v) p.push_back(v);
      if (!ls.eof()) ok = false;
    }
    if (!ok || p.empty())
      throw std::runtime_error(path + ": malformed row " + std::to_string(row));
    if (cloud.points.empty()) cloud.dim = p.size();
    if (p.size() != cloud.dim)
      throw std::runtime_error(path + ": inconsistent dimension at row " +
                               std::to_string(row));
    cloud.points.push_back(std::move(p));
  }
  if (cloud.points.empty()) throw std::runtime_error(path + ": empty point cloud");
  return cloud;
}

void save_point_cloud(const PointCloud& cloud, const std::string& path,
                      CloudFormat format) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  char sep = format == CloudFormat::Csv ? ',' : ' ';
  char buf[64];
  for (const auto& p : cloud.points) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", p[i]);
      if (i) out << sep;
      out << buf;
    }
    out << '\n';
  }
}

Box default_clutter_box(const Shape& shape) {
  return bounding_box(shape).inflated(0.5);
}

PointCloud sample_noisy(const Shape& shape, const NoiseModel& noise, std::size_t n,
                        std::uint64_t seed) {
  PointCloud base = sample_uniform(shape, n, seed);
  if (std::holds_alternative<noise::Noiseless>(noise)) return base;
  if (const auto* cl = std::get_if<noise::Clutter>(&noise))
    return apply_clutter(base, cl->pi, cl->box, Rng::derive(seed, 1));
  const auto& g = std::get<noise::Gaussian>(noise);
  return apply_gaussian(base, g.sigma, Rng::derive(seed, 2));
}

}  // namespace dtm
