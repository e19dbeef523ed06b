#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>

namespace dtm {

// Bennett rate function, 2[(1+l)(log(1+l)-1)+1]/l^2 on (-1,inf), extended by
// +inf on (-inf,-1] and by its limit 1 at l = 0.
double phi(double lambda);

// (1/(1+l)) phi(-l/(1+l)) for l >= 0; the quantile-process rate.
double phi_tilde(double lambda);

// min(1, 2 exp(-2 l^2)); l is a deviation of the sqrt(n)-scaled process.
double dkw_bound(double lambda);

// A Bennett-type tail bound together with its (weaker) Bernstein relaxation.
// bennett <= bernstein always; both clamped to [0,1].
struct ProcessBound {
  double bennett = 1.0;
  double bernstein = 1.0;
};

// P(sqrt(n)|G_n(t0) - t0| >= l) for 0 < t0 <= 1/2.
ProcessBound empirical_pointwise_bound(std::size_t n, double t0, double lambda);

// P(sup_{[0,t0]} sqrt(n)|G_n(t)-t|/(1-t) >= l/(1-t0)) for 0 < t0 < 1/2.
// Same closed form as the pointwise bound.
ProcessBound empirical_local_sup_bound(std::size_t n, double t0, double lambda);

// P(sqrt(n)|G_n^{-1}(u0) - u0| >= l) for 0 < u0 < 1.
ProcessBound quantile_pointwise_bound(std::size_t n, double u0, double lambda);

// P(sup_{(0,u0]} sqrt(n)|G_n^{-1}(u)-u|/(1-u) >= l/(1-u0)) for 0 < u0 < 1/2,
// valid only for l <= sqrt(n)(1/2 - u0); out of domain -> nullopt.
std::optional<ProcessBound> quantile_local_sup_bound(std::size_t n, double u0,
                                                     double lambda);

enum class ProcessKind {
  EcdfPointwise,
  EcdfLocalSup,
  QuantilePointwise,
  QuantileLocalSup,
  GlobalSup,
};

std::string to_string(ProcessKind kind);
std::optional<ProcessKind> parse_process_kind(const std::string& name);

struct TailEstimate {
  double probability = 0.0;
  std::size_t trials = 0;
  double half_width = 0.0;  // 1.96 sqrt(p(1-p)/trials)
};

// Monte-Carlo tail probability of the uniform empirical/quantile process
// statistic selected by `kind`, at threshold lambda on the sqrt(n) scale.
// param is t0 (ecdf kinds), u0 (quantile kinds), ignored for GlobalSup.
// Suprema are evaluated exactly at the order-statistic breakpoints.
// Deterministic given seed, independent of the thread count.
TailEstimate simulate_process_tail(ProcessKind kind, std::size_t n, double param,
                                   double lambda, std::size_t trials,
                                   std::uint64_t seed, unsigned threads = 1);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

struct BetaLawCheck {
  double ks_statistic = 0.0;
  double mean_error = 0.0;  // |sample mean - k/(n+1)|
};

// Samples the k-th order statistic of n uniforms and compares it against the
// Beta(k, n-k+1) distribution.
BetaLawCheck beta_law_check(std::size_t n, std::size_t k, std::size_t trials,
                            std::uint64_t seed, unsigned threads = 1);

}  // namespace dtm
