#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "dtm/rng.hpp"

namespace dtm {

using Point = std::vector<double>;

// A finite sample of n points in R^d. Immutable after construction.
struct PointCloud {
  std::size_t dim = 0;
  std::vector<Point> points;

  std::size_t size() const { return points.size(); }

  // Throws std::invalid_argument if any invariant is violated
  // (ragged rows, empty cloud, non-finite coordinates).
  void validate() const;
};

// Axis-aligned box.
struct Box {
  Point lo;
  Point hi;

  std::size_t dim() const { return lo.size(); }
  bool contains(const Point& p) const;
  Box inflated(double factor_per_axis) const;
};

struct Segment {
  double a = 0.0;
  double b = 1.0;
};

// Simple closed polygon in R^2; interior defined by the even-odd rule.
struct Polygon2D {
  std::vector<Point> vertices;
};

// Uniform choice among the stored points.
struct PointCloudSupport {
  PointCloud cloud;
};

// Solid {x in R^3 : sum_i (x_i^4 - 5 x_i^2) + level <= 0}.
struct TangleCube {
  double level = 10.0;
};

using Shape = std::variant<Segment, Polygon2D, PointCloudSupport, TangleCube>;

std::size_t shape_dim(const Shape& shape);

// True iff p lies in the closed shape. Throws on dimension mismatch.
bool contains(const Shape& shape, const Point& p);

// Axis-aligned box guaranteed to contain the shape.
Box bounding_box(const Shape& shape);

// n i.i.d. draws from the uniform distribution on the shape (length measure
// on a segment, area measure inside a polygon, empirical measure on a stored
// cloud, volume measure on the tangle-cube solid). Deterministic given seed.
// Throws std::runtime_error if the rejection sampler degenerates
// (acceptance rate below 1e-6).
PointCloud sample_uniform(const Shape& shape, std::size_t n, std::uint64_t seed);

// Each point independently replaced by a uniform draw on `box` with
// probability pi. Output size equals input size; deterministic given seed.
PointCloud apply_clutter(const PointCloud& base_sample, double pi, const Box& box,
                         std::uint64_t seed);

// Adds i.i.d. centered isotropic Gaussian noise, per-coordinate sd sigma.
PointCloud apply_gaussian(const PointCloud& base_sample, double sigma,
                          std::uint64_t seed);

enum class CloudFormat { Csv, Xyz };

// Reads a point cloud, one point per row. CSV: comma-separated; XYZ:
// whitespace-separated. Lines starting with '#' are skipped. Malformed rows
// are reported with their row number.
PointCloud load_point_cloud(const std::string& path, CloudFormat format);

void save_point_cloud(const PointCloud& cloud, const std::string& path,
                      CloudFormat format);

namespace noise {
struct Noiseless {};
struct Clutter {
  double pi = 0.1;
  Box box;  // must contain the shape
};
struct Gaussian {
  double sigma = 0.5;
};
}  // namespace noise

using NoiseModel = std::variant<noise::Noiseless, noise::Clutter, noise::Gaussian>;

// Default clutter box: shape bounding box inflated by 50% per axis.
Box default_clutter_box(const Shape& shape);

// Draws n points from the shape's uniform law and applies the noise model.
PointCloud sample_noisy(const Shape& shape, const NoiseModel& noise, std::size_t n,
                        std::uint64_t seed);

}  // namespace dtm
