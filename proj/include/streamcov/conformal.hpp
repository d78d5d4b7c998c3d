#pragma once

#include <span>
#include <string_view>
#include <vector>

#include "streamcov/estimators.hpp"

namespace streamcov {

enum class Algo { gram, welford, cgl };

std::string_view to_string(Algo algo);
/// Accepts "gram", "welford" or "cgl"; anything else is a bad-spec error.
Algo parse_algo(std::string_view name);

enum class TargetMode { true_sigma, batch_reference };

struct ConformalConfig {
  double alpha = 0.1;
  Index k = 0;
  Index l = 0;
  Algo algo = Algo::welford;
  std::vector<Index> t_grid;
  Index m = 0;
  TargetMode target_mode = TargetMode::true_sigma;
  Index block = kDefaultBlock;  // CGL leaf size

  /// Throws bad-spec on alpha outside (0,1), an empty or non-increasing grid,
  /// a grid step below 2, or m < ceil(1/alpha) - 1.
  void validate() const;
};

/// Per grid step: the m calibration scores and the conformal quantile.
struct CalibrationResult {
  std::vector<Index> t_grid;
  std::vector<std::vector<double>> scores;  // scores[grid index][trajectory]
  std::vector<double> q_hat;
};

struct ConformalInterval {
  double center = 0.0;
  double half_width = 0.0;
  Index t = 0;

  double lower() const { return center - half_width; }
  double upper() const { return center + half_width; }
  bool contains(double v) const { return lower() <= v && v <= upper(); }
};

struct CoverageRow {
  Index t = 0;
  double coverage = 0.0;
  double se = 0.0;
  double mean_width = 0.0;
  double q_hat = 0.0;
};

/// Estimate of entry (k,l) from the first t rows of `trajectory` for every t in
/// the grid. Gram and Welford stream once and read off each prefix; CGL runs a
/// fresh block tree per prefix.
std::vector<double> prefix_estimates(const Matrix<double>& trajectory, const ConformalConfig& config);

/// Index of the order statistic used as the conformal quantile,
/// ceil((m+1)(1-alpha)), 1-based. Values within 1e-9 of an integer are
/// treated as that integer so 20 * 0.95 yields 19, not 20.
Index conformal_rank(Index m, double alpha);

/// k*-th smallest score, or +inf when k* exceeds the number of scores.
double conformal_quantile(std::span<const double> scores, double alpha);

ConformalInterval conformal_interval(double estimate_kl, double q_hat, Index t);

/// Scores |estimate_kl - target| for every calibration trajectory and grid
/// step. In true-sigma mode `true_value` is the target; in batch-reference
/// mode each trajectory's own two-pass estimate over all its rows is used.
CalibrationResult nonconformity_scores(std::span<const Matrix<double>> trajectories,
                                       const ConformalConfig& config, double true_value);

/// Marginal coverage per grid step over the test trajectories.
std::vector<CoverageRow> coverage_eval(std::span<const Matrix<double>> test_trajectories,
                                       const CalibrationResult& calib, const ConformalConfig& config,
                                       double true_value);

}  // namespace streamcov
