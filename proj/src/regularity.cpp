#include "dtm/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace dtm {

namespace {
constexpr double kPlateauTilt = 1e-12;
}

void ModulusFunction::validate() const {
  if (grid.empty() || grid.size() != values.size())
    throw std::invalid_argument("modulus: bad sizes");
  if (zero_plus < 0.0) throw std::invalid_argument("modulus: negative omega(0+)");
  double prev_v = 0.0, prev_w = zero_plus;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > prev_v)) throw std::invalid_argument("modulus: grid not increasing");
    if (values[i] < prev_w) throw std::invalid_argument("modulus: values not nondecreasing");
    prev_v = grid[i];
    prev_w = values[i];
  }
}

double ModulusFunction::eval(double v) const {
  if (v <= 0.0) return zero_plus;
  if (v >= grid.back()) return values.back();
  if (v <= grid.front()) {
    double t = v / grid.front();
    return zero_plus + t * (values.front() - zero_plus);
  }
  auto it = std::lower_bound(grid.begin(), grid.end(), v);
  std::size_t i = static_cast<std::size_t>(it - grid.begin());
  if (grid[i] == v) return values[i];
  double t = (v - grid[i - 1]) / (grid[i] - grid[i - 1]);
  return values[i - 1] + t * (values[i] - values[i - 1]);
}

double ModulusFunction::inverse(double t) const {
  auto tilted = [this](double v) { return eval(v) + kPlateauTilt * v; };
  if (t <= zero_plus) return 0.0;
  if (t >= tilted(1.0)) return 1.0;
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (tilted(mid) >= t)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

ModulusFunction modulus_of_continuity(const TabulatedQuantile& q,
                                      const std::vector<double>& v_grid) {
  q.validate();
  ModulusFunction m;
  m.grid = v_grid;
  m.values.reserve(v_grid.size());
  // The sup over a monotone piecewise function is attained with one window
  // endpoint at a tabulation breakpoint.
  for (double v : v_grid) {
    if (!(v > 0.0 && v <= 1.0))
      throw std::invalid_argument("modulus grid values must lie in (0,1]");
    double best = 0.0;
    for (double b : q.grid) {
      double up = q.eval(std::min(b + v, 1.0)) - q.eval(b);
      double dn = q.eval(b) - q.eval(std::max(b - v, 0.0));
      best = std::max({best, up, dn});
    }
    m.values.push_back(best);
  }
  for (std::size_t i = 1; i < m.values.size(); ++i)
    m.values[i] = std::max(m.values[i], m.values[i - 1]);
  if (q.interp == TabulatedQuantile::Interp::Step) {
    double jump = 0.0;
    for (std::size_t i = 1; i < q.values.size(); ++i)
      jump = std::max(jump, q.values[i] - q.values[i - 1]);
    m.zero_plus = jump;
  } else {
    m.zero_plus = 0.0;
  }
  m.validate();
  return m;
}

ModulusFunction least_concave_majorant(const ModulusFunction& m) {
  m.validate();
  // Upper hull of {(0, zero_plus)} U graph(m), left to right.
  std::vector<std::pair<double, double>> hull;
  hull.emplace_back(0.0, m.zero_plus);
  auto cross_ok = [&](const std::pair<double, double>& p) {
    // keep hull slopes strictly decreasing (concave)
    while (hull.size() >= 2) {
      auto& b = hull[hull.size() - 1];
      auto& a = hull[hull.size() - 2];
      double lhs = (b.second - a.second) * (p.first - a.first);
      double rhs = (p.second - a.second) * (b.first - a.first);
      if (lhs <= rhs)
        hull.pop_back();
      else
        break;
    }
    hull.push_back(p);
  };
  for (std::size_t i = 0; i < m.grid.size(); ++i)
    cross_ok({m.grid[i], m.values[i]});

  auto hull_eval = [&](double v) {
    if (v <= hull.front().first) return hull.front().second;
    if (v >= hull.back().first) return hull.back().second;
    std::size_t j = 1;
    while (hull[j].first < v) ++j;
    double t = (v - hull[j - 1].first) / (hull[j].first - hull[j - 1].first);
    return hull[j - 1].second + t * (hull[j].second - hull[j - 1].second);
  };

  ModulusFunction out;
  out.grid = m.grid;
  out.zero_plus = m.zero_plus;
  out.values.reserve(m.grid.size());
  for (double v : m.grid) out.values.push_back(std::max(hull_eval(v), 0.0));
  // guard against rounding dips
  for (std::size_t i = 0; i < out.values.size(); ++i)
    out.values[i] = std::max(out.values[i], m.values[i]);
  for (std::size_t i = 1; i < out.values.size(); ++i)
    out.values[i] = std::max(out.values[i], out.values[i - 1]);
  return out;
}

double psi(const ModulusFunction& m, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw std::invalid_argument("psi: mass in (0,1]");
  return m.eval(mass) / std::sqrt(mass);
}

double psi_tilde(const TabulatedQuantile& q, double mass) {
  if (!(mass > 0.0 && mass <= 1.0)) throw std::invalid_argument("psi_tilde: mass in (0,1]");
  return (q.eval(mass) - q.value_at_zero()) / std::sqrt(mass);
}

double ab_quantile_bound(const AbStandardParams& p, double r, double u) {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("u outside [0,1]");
  double base = std::pow(u / p.a, 1.0 / p.b);
  return r * base * std::pow(base + p.dist_xK, r - 1.0);
}

double ab_modulus_bound(const AbStandardParams& p, double r, double h) {
  if (!(h > 0.0 && h < 1.0)) throw std::invalid_argument("h outside (0,1)");
  return r * std::pow(h / p.a, 1.0 / p.b) * std::pow(p.haus_xK, r - 1.0);
}

}  // namespace dtm
