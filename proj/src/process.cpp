#include "dtm/process.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "dtm/parallel.hpp"
#include "dtm/rng.hpp"

namespace dtm {

namespace {

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

double two_exp(double exponent) { return clamp01(2.0 * std::exp(-exponent)); }

// k-th smallest of n fresh uniforms (1-based k).
double kth_uniform(Rng& rng, std::size_t n, std::size_t k,
                   std::vector<double>& buf) {
  buf.resize(n);
  for (auto& v : buf) v = rng.uniform01();
  std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
  return buf[k - 1];
}

// sup over [0, t0] of |G_n(t) - t| / (1 - t), xs sorted. The weighted gap is
// monotone between jumps, so endpoints of the constancy intervals suffice.
double ecdf_weighted_sup(const std::vector<double>& xs, double t0) {
  const double n = static_cast<double>(xs.size());
  double best = 0.0;
  std::size_t below = 0;  // #{x <= t0}
  for (std::size_t i = 0; i < xs.size() && xs[i] <= t0; ++i, ++below) {
    const double s = xs[i];
    const double after = std::abs((static_cast<double>(i + 1) / n - s) / (1.0 - s));
    const double before = std::abs((static_cast<double>(i) / n - s) / (1.0 - s));
    best = std::max({best, after, before});
  }
  const double at_t0 =
      std::abs((static_cast<double>(below) / n - t0) / (1.0 - t0));
  return std::max(best, at_t0);
}

// sup over (0, u0] of |G_n^{-1}(u) - u| / (1 - u) with G_n^{-1}(u) = x_(ceil(nu)),
// xs sorted. On each constancy interval the weighted gap is monotone.
double quantile_weighted_sup(const std::vector<double>& xs, double u0) {
  const std::size_t n = xs.size();
  const double dn = static_cast<double>(n);
  double best = 0.0;
  for (std::size_t k = 1; k <= n; ++k) {
    const double lo = static_cast<double>(k - 1) / dn;
    if (lo >= u0) break;
    const double hi = std::min(static_cast<double>(k) / dn, u0);
    const double c = xs[k - 1];
    best = std::max({best, std::abs((c - lo) / (1.0 - lo)),
                     std::abs((c - hi) / (1.0 - hi))});
  }
  return best;
}

double global_sup(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  double best = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    best = std::max({best, static_cast<double>(i + 1) / n - xs[i],
                     xs[i] - static_cast<double>(i) / n});
  }
  return best;
}

}  // namespace

double phi(double lambda) {
  if (lambda <= -1.0) return std::numeric_limits<double>::infinity();
  if (std::abs(lambda) < 0.05) {
    // 2 sum_{j>=2} (-l)^j / (j(j-1)) / l^2, truncation error < 1e-17 here
    double sum = 0.0;
    double power = 1.0;
    for (int j = 2; j <= 14; ++j) {
      sum += 2.0 * power / (static_cast<double>(j) * (j - 1));
      power *= -lambda;
    }
    return sum;
  }
  return 2.0 * ((1.0 + lambda) * (std::log1p(lambda) - 1.0) + 1.0) /
         (lambda * lambda);
}

double phi_tilde(double lambda) {
  if (lambda < 0.0) throw std::invalid_argument("phi_tilde requires lambda >= 0");
  return phi(-lambda / (1.0 + lambda)) / (1.0 + lambda);
}

double dkw_bound(double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  return clamp01(2.0 * std::exp(-2.0 * lambda * lambda));
}

ProcessBound empirical_pointwise_bound(std::size_t n, double t0, double lambda) {
  if (!(t0 > 0.0 && t0 <= 0.5)) throw std::invalid_argument("t0 in (0, 1/2] required");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double sn = std::sqrt(static_cast<double>(n));
  const double base = lambda * lambda / (2.0 * t0);
  ProcessBound out;
  out.bennett = two_exp(base * phi(lambda / (t0 * sn)));
  out.bernstein = two_exp(base / (1.0 + lambda / (3.0 * t0 * sn)));
  return out;
}

ProcessBound empirical_local_sup_bound(std::size_t n, double t0, double lambda) {
  if (!(t0 > 0.0 && t0 < 0.5)) throw std::invalid_argument("t0 in (0, 1/2) required");
  return empirical_pointwise_bound(n, t0, lambda);
}

ProcessBound quantile_pointwise_bound(std::size_t n, double u0, double lambda) {
  if (!(u0 > 0.0 && u0 < 1.0)) throw std::invalid_argument("u0 in (0, 1) required");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double sn = std::sqrt(static_cast<double>(n));
  const double base = lambda * lambda / (2.0 * u0);
  ProcessBound out;
  out.bennett = two_exp(base * phi_tilde(lambda / (u0 * sn)));
  out.bernstein = two_exp(base / (1.0 + 2.0 * lambda / (3.0 * u0 * sn)));
  return out;
}

std::optional<ProcessBound> quantile_local_sup_bound(std::size_t n, double u0,
                                                     double lambda) {
  if (!(u0 > 0.0 && u0 < 0.5)) throw std::invalid_argument("u0 in (0, 1/2) required");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  if (lambda > std::sqrt(static_cast<double>(n)) * (0.5 - u0)) return std::nullopt;
  return quantile_pointwise_bound(n, u0, lambda);
}

std::string to_string(ProcessKind kind) {
  switch (kind) {
    case ProcessKind::EcdfPointwise: return "ecdf_pointwise";
    case ProcessKind::EcdfLocalSup: return "ecdf_local_sup";
    case ProcessKind::QuantilePointwise: return "quantile_pointwise";
    case ProcessKind::QuantileLocalSup: return "quantile_local_sup";
    case ProcessKind::GlobalSup: return "global_sup";
  }
  return "unknown";
}

std::optional<ProcessKind> parse_process_kind(const std::string& name) {
  if (name == "ecdf_pointwise") return ProcessKind::EcdfPointwise;
  if (name == "ecdf_local_sup") return ProcessKind::EcdfLocalSup;
  if (name == "quantile_pointwise") return ProcessKind::QuantilePointwise;
  if (name == "quantile_local_sup") return ProcessKind::QuantileLocalSup;
  if (name == "global_sup") return ProcessKind::GlobalSup;
  return std::nullopt;
}

TailEstimate simulate_process_tail(ProcessKind kind, std::size_t n, double param,
                                   double lambda, std::size_t trials,
                                   std::uint64_t seed, unsigned threads) {
  if (trials < 100) throw std::invalid_argument("trials >= 100 required");
  if (n == 0) throw std::invalid_argument("n >= 1 required");
  const bool needs_param =
      kind != ProcessKind::GlobalSup;
  if (needs_param && !(param > 0.0 && param < 1.0))
    throw std::invalid_argument("t0/u0 in (0, 1) required");

  const double sn = std::sqrt(static_cast<double>(n));
  const double dn = static_cast<double>(n);
  std::vector<std::uint8_t> exceeded(trials, 0);

  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(Rng::derive(seed, t));
    std::vector<double> xs(n);
    for (auto& v : xs) v = rng.uniform01();
    double stat = 0.0;
    double threshold = lambda;
    switch (kind) {
      case ProcessKind::EcdfPointwise: {
        std::size_t below = 0;
        for (double v : xs) below += v <= param;
        stat = sn * std::abs(static_cast<double>(below) / dn - param);
        break;
      }
      case ProcessKind::EcdfLocalSup:
        std::sort(xs.begin(), xs.end());
        stat = sn * ecdf_weighted_sup(xs, param);
        threshold = lambda / (1.0 - param);
        break;
      case ProcessKind::QuantilePointwise: {
        const std::size_t k = std::min<std::size_t>(
            n, static_cast<std::size_t>(std::ceil(param * dn - 1e-12)));
        std::nth_element(xs.begin(), xs.begin() + (std::max<std::size_t>(k, 1) - 1),
                         xs.end());
        stat = sn * std::abs(xs[std::max<std::size_t>(k, 1) - 1] - param);
        break;
      }
      case ProcessKind::QuantileLocalSup:
        std::sort(xs.begin(), xs.end());
        stat = sn * quantile_weighted_sup(xs, param);
        threshold = lambda / (1.0 - param);
        break;
      case ProcessKind::GlobalSup:
        std::sort(xs.begin(), xs.end());
        stat = sn * global_sup(xs);
        break;
    }
    exceeded[t] = stat >= threshold ? 1 : 0;
  });

  std::size_t hits = 0;
  for (auto e : exceeded) hits += e;
  TailEstimate out;
  out.trials = trials;
  out.probability = static_cast<double>(hits) / static_cast<double>(trials);
  out.half_width = 1.96 * std::sqrt(out.probability * (1.0 - out.probability) /
                                    static_cast<double>(trials));
  return out;
}

namespace {

// Continued fraction for the incomplete beta (modified Lentz).
double betacf(double a, double b, double x) {
  constexpr double kTiny = 1e-300;
  constexpr double kEps = 1e-15;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= 500; ++m) {
    const double dm = m;
    double aa = dm * (b - dm) * x / ((qam + 2.0 * dm) * (a + 2.0 * dm));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + dm) * (qab + dm) * x / ((a + 2.0 * dm) * (qap + 2.0 * dm));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) return h;
  }
  throw std::runtime_error("incomplete beta continued fraction did not converge");
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("a, b must be positive");
  if (x < 0.0 || x > 1.0) throw std::invalid_argument("x in [0,1] required");
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double lbeta = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b);
  const double front = std::exp(lbeta + a * std::log(x) + b * std::log1p(-x));
  if (x < (a + 1.0) / (a + b + 2.0)) return front * betacf(a, b, x) / a;
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

BetaLawCheck beta_law_check(std::size_t n, std::size_t k, std::size_t trials,
                            std::uint64_t seed, unsigned threads) {
  if (k < 1 || k > n) throw std::invalid_argument("1 <= k <= n required");
  if (trials < 1) throw std::invalid_argument("trials >= 1 required");

  std::vector<double> samples(trials);
  parallel_for(trials, threads, [&](std::size_t t) {
    Rng rng(Rng::derive(seed, t));
    std::vector<double> buf;
    samples[t] = kth_uniform(rng, n, k, buf);
  });

  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= static_cast<double>(trials);

  std::sort(samples.begin(), samples.end());
  const double a = static_cast<double>(k);
  const double b = static_cast<double>(n - k + 1);
  double ks = 0.0;
  for (std::size_t i = 0; i < trials; ++i) {
    const double cdf = regularized_incomplete_beta(a, b, samples[i]);
    ks = std::max({ks,
                   std::abs(static_cast<double>(i + 1) / trials - cdf),
                   std::abs(cdf - static_cast<double>(i) / trials)});
  }

  BetaLawCheck out;
  out.ks_statistic = ks;
  out.mean_error = std::abs(mean - a / (static_cast<double>(n) + 1.0));
  return out;
}

}  // namespace dtm
