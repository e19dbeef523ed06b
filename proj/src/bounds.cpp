#include "dtm/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace dtm {

namespace {

// exp(-e) with e possibly infinite or NaN-from-0/0; a vanished scale means
// the term contributes nothing.
double exp_term(double e) {
  if (std::isnan(e)) return 0.0;
  return std::exp(-e);
}

double clamp01(double p) { return std::clamp(p, 0.0, 1.0); }

void check_omega_over_v(const ModulusFunction& omega) {
  double prev = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < omega.grid.size(); ++i) {
    double ratio = omega.values[i] / omega.grid[i];
    if (ratio > prev * (1.0 + 1e-9))
      throw std::invalid_argument(
          "omega(v)/v must be nonincreasing (apply least_concave_majorant)");
    prev = ratio;
  }
}

}  // namespace

double log_binomial(std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("log_binomial: k > n");
  return std::lgamma(static_cast<double>(n) + 1.0) -
         std::lgamma(static_cast<double>(k) + 1.0) -
         std::lgamma(static_cast<double>(n - k) + 1.0);
}

double deviation_bound_bounded(const BoundInputs& in, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");
  const double n = static_cast<double>(in.n);
  const double k = static_cast<double>(in.k);
  const double m = k / n;
  const auto& omega = in.omega;
  if (lambda > omega.at_one()) return 0.0;

  const double incr = in.quantile.eval(m) - in.quantile.value_at_zero();
  double sum;
  if (2 * in.k < in.n) {
    const double w = omega.eval(2.0 * std::sqrt(k) / n);
    const double t1 = exp_term(k * lambda * lambda / (64.0 * incr * incr));
    const double t2 = exp_term(3.0 / 16.0 * k * lambda / incr);
    const double inv3 = omega.inverse(std::pow(k, 0.25) * std::sqrt(lambda / 8.0 * w));
    const double t3 = exp_term(n * n / (4.0 * k) * inv3 * inv3);
    const double inv4 = omega.inverse(std::pow(k, 0.25) * std::sqrt(lambda / 2.0 * w));
    const double t4 = exp_term(3.0 * n / 8.0 * inv4);
    const double t5 = exp_term(std::sqrt(k) / 8.0 * lambda / w);
    const double t6 = exp_term(0.75 * std::pow(k, 0.75) * std::sqrt(lambda / (2.0 * w)));
    sum = t1 + t2 + t3 + t4 + t5 + t6;
  } else {
    const double w = omega.eval(1.0 / std::sqrt(n));
    const double e1 = exp_term(2.0 * n * lambda * lambda * (m / incr) * (m / incr));
    const double inv2 =
        omega.inverse(std::sqrt(k / std::sqrt(n) * w * lambda / 2.0));
    const double e2 = exp_term(2.0 * n * inv2 * inv2);
    const double e3 = exp_term(k / (std::sqrt(n) * w) * lambda);
    sum = e1 + e2 + e3;
  }
  return clamp01(2.0 * sum);
}

ExpectationBound expectation_bound_bounded(const BoundInputs& in) {
  check_omega_over_v(in.omega);
  const double n = static_cast<double>(in.n);
  const double k = static_cast<double>(in.k);
  const double m = k / n;
  const double incr = in.quantile.eval(m) - in.quantile.value_at_zero();
  ExpectationBound out;
  out.initial =
      in.C_abs / std::sqrt(k) * (incr + in.omega.eval(std::sqrt(k) / n));
  out.final = 2.0 * in.C_abs / std::sqrt(k) * in.omega.eval(m);
  out.initial_below_final = out.initial <= out.final * (1.0 + 1e-12);
  return out;
}

double deviation_bound_unbounded(const UnboundedInputs& in, double lambda) {
  const double n = static_cast<double>(in.base.n);
  const double k = static_cast<double>(in.base.k);
  if (!(k < n * std::min(0.5, in.m_bar)))
    throw std::invalid_argument("requires k < n * min(1/2, m_bar)");
  if (!(lambda > 0.0)) throw std::invalid_argument("lambda must be positive");

  const double m = k / n;
  const double gap = in.m_bar - m;
  const double box = deviation_bound_bounded(in.base, lambda) / 2.0;

  const double t_big = n * n / (4.0 * k) * gap * gap;
  const double scale1 = std::exp(std::min(t_big, 700.0));
  const double extra1 = exp_term(std::sqrt(k) / 8.0 * scale1 * lambda);
  const double scale2 = std::exp(std::min(t_big / 2.0, 700.0));
  const double extra2 =
      exp_term(0.375 * scale2 * std::pow(k, 0.375) * std::sqrt(lambda / 2.0));

  const double gauss = 2.0 * exp_term(n * n / (2.0 * k) * gap * gap);
  double binom;
  const double f = in.tail_cdf(std::sqrt(lambda / 6.0) * m);
  if (f >= 1.0) {
    binom = 0.0;
  } else {
    const double lg = log_binomial(in.base.n, in.base.k - 1) - std::log(2.0) +
                      (n - k + 1.0) * std::log1p(-f);
    binom = lg < -745.0 ? 0.0 : std::exp(lg);
  }
  return clamp01(2.0 * (box + extra1 + extra2 + std::min(gauss, binom)));
}

double expectation_bound_unbounded(const UnboundedInputs& in) {
  const double n = static_cast<double>(in.base.n);
  const double k = static_cast<double>(in.base.k);
  if (!(k < n * std::min(0.5, in.m_bar)))
    throw std::invalid_argument("requires k < n * min(1/2, m_bar)");
  ExpectationBound bounded = expectation_bound_bounded(in.base);
  const double gap = in.m_bar - k / n;
  const double correction =
      in.C_xrm * std::sqrt(k) * exp_term(n * n / (4.0 * k) * gap * gap);
  return bounded.initial + correction;
}

double supnorm_expectation_bound(const BoundInputs& in, const CoveringParams& cov) {
  if (2 * in.k > in.n) throw std::invalid_argument("requires k <= n/2");
  const double n = static_cast<double>(in.n);
  const double k = static_cast<double>(in.k);
  const double sqk_over_n = std::sqrt(k) / n;
  const double wd = cov.omega_D.eval(sqk_over_n);
  if (wd == 0.0) return 0.0;
  const double incr = in.quantile.eval(std::min(sqk_over_n, 1.0)) -
                      in.quantile.value_at_zero();
  const double num = std::pow(k, cov.nu + 5.0);
  const double den = std::min(std::pow(incr, 2.0 * cov.nu + 5.0),
                              std::pow(wd, cov.nu - 1.0));
  double arg = den > 0.0 ? num / den : std::numeric_limits<double>::infinity();
  double logp = arg <= 0.0 ? 1.0 : std::max(std::log(arg), 1.0);
  if (!std::isfinite(logp)) logp = std::numeric_limits<double>::max();
  return in.C_abs / std::sqrt(n) * std::sqrt(n / k) * wd * logp;
}

double DiscreteMeasure::quantile(double u) const {
  if (u < 0.0 || u > 1.0) throw std::invalid_argument("quantile argument outside [0,1]");
  double cum = 0.0;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    cum += weights[i];
    if (cum >= u - 1e-15) return atoms[i];
  }
  return atoms.back();
}

double LeCamPair::lecam_factor(std::size_t n) const {
  return 0.125 * std::pow(1.0 - tv, 2.0 * static_cast<double>(n));
}

LeCamPair lecam_pair(const TabulatedQuantile& base_quantile, std::size_t n,
                     std::size_t atoms_per_unit) {
  if (n < 2) throw std::invalid_argument("lecam_pair: n >= 2 required");
  const std::size_t N = atoms_per_unit * n;
  const std::size_t L = atoms_per_unit;  // atoms carrying the top 1/n of mass
  const double w = 1.0 / static_cast<double>(N);

  std::vector<double> atoms(N);
  for (std::size_t j = 0; j < N; ++j)
    atoms[j] = base_quantile.eval((static_cast<double>(j) + 0.5) /
                                  static_cast<double>(N));
  const double left = base_quantile.value_at_zero();

  // weight pairs on the merged support
  std::map<double, std::pair<double, double>> merged;
  for (std::size_t j = 0; j < N; ++j) {
    merged[atoms[j]].first += w;
    if (j < N - L) merged[atoms[j]].second += w;  // restriction drops the top 1/n
  }
  merged[left].second += 1.0 / static_cast<double>(n);  // atom at F^-1(0)

  LeCamPair out;
  double tv = 0.0;
  for (const auto& [t, ws] : merged) {
    out.p0.atoms.push_back(t);
    out.p0.weights.push_back(ws.first);
    out.p1.atoms.push_back(t);
    out.p1.weights.push_back(ws.second);
    tv += std::abs(ws.first - ws.second);
  }
  out.tv = tv;
  return out;
}

LeCamBound lecam_lower_bound(const ModulusFunction& omega, double c, std::size_t k,
                             std::size_t n) {
  if (k < 1) throw std::invalid_argument("k >= 1 required");
  LeCamBound out;
  out.c = c;
  const double dn = static_cast<double>(n);
  const double w = k == 1 ? omega.zero_plus
                          : omega.eval(static_cast<double>(k - 1) / dn);
  out.raw = w / static_cast<double>(k);
  out.factor = 0.125 * std::pow(1.0 - 2.0 / dn, 2.0 * dn);
  return out;
}

double wasserstein_stability_bound(double m, double r, double wr) {
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("m in (0,1] required");
  return std::pow(m, -1.0 / r) * wr;
}

double w1_pointwise_stability_bound(double m, double w1_pushforward) {
  if (!(m > 0.0 && m <= 1.0)) throw std::invalid_argument("m in (0,1] required");
  return w1_pushforward / m;
}

}  // namespace dtm
