#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "dtm/empirical.hpp"
#include "dtm/geometry.hpp"

namespace dtm {

// Full description of one Monte-Carlo error experiment.
struct ExperimentConfig {
  Shape shape;
  NoiseModel noise;
  Point x;
  double r = 1.0;
  std::size_t n = 500;
  std::size_t trials = 100;
  std::vector<double> m_grid;
  std::size_t n_ref = 50000;  // reference-sample size, default 100 * n
  std::uint64_t master_seed = 0;

  void validate() const;
};

// 40 geometric points from 0.005 to 0.5 plus 10 linear points up to 1.0.
std::vector<double> default_m_grid();

// FNV-1a digest of the canonical textual form of the config; hex string.
std::string config_digest(const ExperimentConfig& cfg);

struct ErrorRow {
  double m = 0.0;          // k/n after rounding
  std::size_t k = 0;
  double mean_abs_delta = 0.0;
  double mean_signed_delta = 0.0;
  double std_error = 0.0;  // sample std of |delta| / sqrt(trials)
  double psi_tilde = 0.0;
};

struct ErrorCurve {
  std::vector<ErrorRow> rows;
  std::string config_hash;
  std::size_t n = 0;
  double r = 1.0;
  std::size_t trials = 0;
  std::uint64_t seed = 0;
  std::vector<double> skipped_m;  // grid entries with round(m*n) == 0
};

// Empirical quantile of the push-forward at cfg.x from an n_ref noisy
// sample, tabulated on a grid geometrically refined near 0.
// Reproducible from master_seed.
TabulatedQuantile estimate_reference_quantile(const ExperimentConfig& cfg);

// Largest relative change of the reference DTM over cfg.m_grid when the
// reference sample size is doubled (convergence diagnostic).
double reference_convergence_gap(const ExperimentConfig& cfg,
                                 const TabulatedQuantile& reference);

// Monte-Carlo error curve: for each m, k = round(m*n) and the mean over
// trials of |d^r_{n,k/n}(x) - d^r_ref(k/n)|. Per-trial seeds derive from
// master_seed; results do not depend on the thread count.
ErrorCurve error_curve(const ExperimentConfig& cfg,
                       const TabulatedQuantile& reference, unsigned threads = 1);

// (m, (F^-1(m) - F^-1(0)) / sqrt(m)) along the grid.
std::vector<std::pair<double, double>> psi_curve(const TabulatedQuantile& reference,
                                                 const std::vector<double>& m_grid);

// Fraction of consecutive row pairs where the error curve and the psi_tilde
// curve move in the same direction; error moves smaller than twice the
// combined standard error count as agreement. Requires >= 3 rows.
double monotonicity_agreement(const ErrorCurve& curve);

// Least-squares slope of log(mean_abs_delta) vs log(n) at the row of each
// curve whose m is closest to m_fixed. Requires >= 4 distinct n.
double rate_regression(const std::vector<ErrorCurve>& curves, double m_fixed);

// CSV persistence; 17 significant digits, round-trip exact.
void save_quantile(const TabulatedQuantile& q, const std::string& path);
TabulatedQuantile load_quantile(const std::string& path);

void save_error_curve(const ErrorCurve& curve, const std::string& path);
// expected_digest, when given and different from the file header, appends a
// warning to *warning instead of failing.
ErrorCurve load_error_curve(const std::string& path,
                            const std::optional<std::string>& expected_digest = {},
                            std::string* warning = nullptr);

}  // namespace dtm
