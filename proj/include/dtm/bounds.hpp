#pragma once

#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

#include "dtm/empirical.hpp"
#include "dtm/regularity.hpp"

namespace dtm {

// Common inputs to the deviation/expectation bound evaluators. The absolute
// constant of the expectation bounds is never pinned by the theory, so it is
// caller-supplied (default 1).
struct BoundInputs {
  std::size_t n = 0;
  std::size_t k = 0;
  double r = 1.0;
  ModulusFunction omega;      // must satisfy omega(v)/v nonincreasing for
                              // the expectation bounds
  TabulatedQuantile quantile; // reference quantile F^-1
  double C_abs = 1.0;
};

struct UnboundedInputs {
  BoundInputs base;
  double m_bar = 0.5;  // modulus only controlled on (0, m_bar]
  std::function<double(double)> tail_cdf;  // cdf of ||X - x||^r
  double C_xrm = 1.0;  // moment-dependent constant
};

struct CoveringParams {
  double c = 1.0;
  double nu = 1.0;  // covering exponent, <= ambient dimension
  ModulusFunction omega_D;  // uniform modulus over the domain
};

// Two-sided deviation bound on |Delta_{n,k/n}|: the six-exponential sum for
// k < n/2, the three-exponential sum otherwise, doubled and clamped to
// [0,1]. Exactly 0 for lambda > omega(1).
double deviation_bound_bounded(const BoundInputs& in, double lambda);

// Expectation bounds: initial = (C/sqrt(k)) {[F^-1(k/n)-F^-1(0)] + omega(sqrt(k)/n)},
// final = (2C/sqrt(k)) omega(k/n).
struct ExpectationBound {
  double initial = 0.0;
  double final = 0.0;
  bool initial_below_final = true;
};
ExpectationBound expectation_bound_bounded(const BoundInputs& in);

// Unbounded-support deviation bound: the bounded sum with omega restricted to
// (0, m_bar], plus two exponential tail terms, plus the smaller of the
// Gaussian-type and binomial Beta-tail terms (log-domain binomial).
// Requires k < n * min(1/2, m_bar).
double deviation_bound_unbounded(const UnboundedInputs& in, double lambda);

// Bounded-case initial expectation bound plus
// C_xrm * sqrt(k) * exp(-(n^2/4k)(m_bar - k/n)^2).
double expectation_bound_unbounded(const UnboundedInputs& in);

// Sup-norm expectation bound over a compact domain with covering exponent
// nu, with log+(u) = max(log u, 1). Requires k <= n/2.
double supnorm_expectation_bound(const BoundInputs& in, const CoveringParams& cov);

// Discrete measure on R+ (atoms with weights).
struct DiscreteMeasure {
  std::vector<double> atoms;    // increasing
  std::vector<double> weights;  // positive, sum 1

  double quantile(double u) const;
};

struct LeCamPair {
  DiscreteMeasure p0;
  DiscreteMeasure p1;
  double tv = 0.0;  // integral |p0 - p1| over the shared support (= 2/n by construction)

  double lecam_factor(std::size_t n) const;  // (1/8)(1 - tv)^(2n)
};

// Two-point construction for the minimax lower bound: P0 is the base
// measure; P1 moves the top 1/n of mass to the left support endpoint.
// `atoms_per_unit` atoms are used per 1/n of mass (the atom count is a
// multiple of n so the construction is exact).
LeCamPair lecam_pair(const TabulatedQuantile& base_quantile, std::size_t n,
                     std::size_t atoms_per_unit = 64);

struct LeCamBound {
  double raw = 0.0;     // (n/k)(1/n) omega((k-1)/n), with omega(0+) at k = 1
  double factor = 0.0;  // (1/8)(1 - 2/n)^(2n)
  double c = 1.0;       // quantile-domination constant

  double value() const { return raw * factor / c; }
};
LeCamBound lecam_lower_bound(const ModulusFunction& omega, double c, std::size_t k,
                             std::size_t n);

// ||d_{P,m,r} - d_{P~,m,r}||_inf <= m^{-1/r} W_r(P, P~).
double wasserstein_stability_bound(double m, double r, double wr);

// |d^r_{P,m,r}(x) - d^r_{P~,m,r}(x)| <= (1/m) W_1(dF_x, dF~_x).
double w1_pointwise_stability_bound(double m, double w1_pushforward);

// log of the binomial coefficient, via lgamma.
double log_binomial(std::size_t n, std::size_t k);

}  // namespace dtm
