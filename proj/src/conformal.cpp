#include "streamcov/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace streamcov {

namespace {

double target_for(const Matrix<double>& trajectory, const ConformalConfig& config, double true_value) {
  if (config.target_mode == TargetMode::true_sigma) return true_value;
  return batch_reference(trajectory, config.block).sigma(config.k, config.l);
}

void check_trajectory(const Matrix<double>& x, const ConformalConfig& config) {
  const Index need = config.t_grid.back();
  if (x.rows() < need)
    throw Error(ErrorCode::short_trajectory,
                "trajectory has " + std::to_string(x.rows()) + " rows, grid needs " + std::to_string(need));
  if (config.k >= x.cols() || config.l >= x.cols() || config.k < 0 || config.l < 0)
    throw Error(ErrorCode::dim, "target entry outside the data dimension");
}

}  // namespace

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::gram: return "gram";
    case Algo::welford: return "welford";
    case Algo::cgl: return "cgl";
  }
  return "unknown";
}

Algo parse_algo(std::string_view name) {
  if (name == "gram") return Algo::gram;
  if (name == "welford") return Algo::welford;
  if (name == "cgl") return Algo::cgl;
  throw Error(ErrorCode::bad_spec, "unknown algorithm '" + std::string(name) + "'");
}

void ConformalConfig::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::bad_spec, "alpha must lie in (0, 1)");
  if (t_grid.empty()) throw Error(ErrorCode::bad_spec, "empty t grid");
  for (std::size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 2) throw Error(ErrorCode::bad_spec, "grid steps must be >= 2");
    if (i > 0 && t_grid[i] <= t_grid[i - 1]) throw Error(ErrorCode::bad_spec, "grid must be increasing");
  }
  const auto min_m = static_cast<Index>(std::ceil(1.0 / alpha)) - 1;
  if (m < min_m)
    throw Error(ErrorCode::bad_spec,
                "m = " + std::to_string(m) + " is below ceil(1/alpha) - 1 = " + std::to_string(min_m));
  if (block < 1) throw Error(ErrorCode::bad_spec, "block must be >= 1");
}

std::vector<double> prefix_estimates(const Matrix<double>& trajectory, const ConformalConfig& config) {
  check_trajectory(trajectory, config);
  std::vector<double> out;
  out.reserve(config.t_grid.size());
  const Index p = trajectory.cols();
  switch (config.algo) {
    case Algo::gram: {
      GramSummary<double> state(p);
      Index row = 0;
      for (Index t : config.t_grid) {
        for (; row < t; ++row) gram_update(state, trajectory.row(row));
        out.push_back(gram_finalize(state).sigma(config.k, config.l));
      }
      break;
    }
    case Algo::welford: {
      MomentSummary<double> state(p);
      Index row = 0;
      for (Index t : config.t_grid) {
        for (; row < t; ++row) welford_update(state, trajectory.row(row));
        out.push_back(moment_finalize(state).sigma(config.k, config.l));
      }
      break;
    }
    case Algo::cgl:
      for (Index t : config.t_grid)
        out.push_back(moment_finalize(cgl_blocked(trajectory.topRows(t), config.block)).sigma(config.k, config.l));
      break;
  }
  return out;
}

Index conformal_rank(Index m, double alpha) {
  const double x = static_cast<double>(m + 1) * (1.0 - alpha);
  auto k = static_cast<Index>(std::ceil(x));
  if (k > 1 && x - static_cast<double>(k - 1) < 1e-9) --k;
  return std::max<Index>(k, 1);
}

double conformal_quantile(std::span<const double> scores, double alpha) {
  if (scores.empty()) throw Error(ErrorCode::empty_calibration, "no calibration scores");
  if (!(alpha > 0.0 && alpha < 1.0)) throw Error(ErrorCode::bad_spec, "alpha must lie in (0, 1)");
  const auto m = static_cast<Index>(scores.size());
  const Index k = conformal_rank(m, alpha);
  if (k > m) return std::numeric_limits<double>::infinity();
  std::vector<double> sorted(scores.begin(), scores.end());
  std::nth_element(sorted.begin(), sorted.begin() + (k - 1), sorted.end());
  return sorted[static_cast<std::size_t>(k - 1)];
}

ConformalInterval conformal_interval(double estimate_kl, double q_hat, Index t) {
  if (!(q_hat >= 0.0)) throw Error(ErrorCode::invalid_quantile, "conformal quantile must be >= 0");
  return {estimate_kl, q_hat, t};
}

CalibrationResult nonconformity_scores(std::span<const Matrix<double>> trajectories,
                                       const ConformalConfig& config, double true_value) {
  config.validate();
  if (trajectories.empty()) throw Error(ErrorCode::empty_calibration, "no calibration trajectories");
  if (static_cast<Index>(trajectories.size()) != config.m)
    throw Error(ErrorCode::bad_spec, "expected " + std::to_string(config.m) + " calibration trajectories, got " +
                                         std::to_string(trajectories.size()));
  const std::size_t grid = config.t_grid.size();
  CalibrationResult out;
  out.t_grid = config.t_grid;
  out.scores.assign(grid, std::vector<double>(trajectories.size()));
  for (std::size_t j = 0; j < trajectories.size(); ++j) {
    const auto est = prefix_estimates(trajectories[j], config);
    const double target = target_for(trajectories[j], config, true_value);
    for (std::size_t g = 0; g < grid; ++g) out.scores[g][j] = std::abs(est[g] - target);
  }
  out.q_hat.reserve(grid);
  for (const auto& s : out.scores) out.q_hat.push_back(conformal_quantile(s, config.alpha));
  return out;
}

std::vector<CoverageRow> coverage_eval(std::span<const Matrix<double>> test_trajectories,
                                       const CalibrationResult& calib, const ConformalConfig& config,
                                       double true_value) {
  if (test_trajectories.empty()) throw Error(ErrorCode::bad_spec, "no test trajectories");
  if (calib.t_grid != config.t_grid) throw Error(ErrorCode::bad_spec, "calibration grid differs from config grid");
  const std::size_t grid = config.t_grid.size();
  std::vector<std::size_t> hits(grid, 0);
  for (const auto& traj : test_trajectories) {
    const auto est = prefix_estimates(traj, config);
    const double target = target_for(traj, config, true_value);
    for (std::size_t g = 0; g < grid; ++g)
      if (conformal_interval(est[g], calib.q_hat[g], config.t_grid[g]).contains(target)) ++hits[g];
  }
  const auto n = static_cast<double>(test_trajectories.size());
  std::vector<CoverageRow> rows;
  rows.reserve(grid);
  for (std::size_t g = 0; g < grid; ++g) {
    const double cov = static_cast<double>(hits[g]) / n;
    rows.push_back({config.t_grid[g], cov, std::sqrt(cov * (1.0 - cov) / n), 2.0 * calib.q_hat[g], calib.q_hat[g]});
  }
  return rows;
}

}  // namespace streamcov
