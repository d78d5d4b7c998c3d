#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "streamcov/bench.hpp"
#include "streamcov/conformal.hpp"
#include "streamcov/estimators.hpp"

namespace streamcov {

using Json = nlohmann::ordered_json;

/// Acceptance thresholds used by the experiment gates, in one auditable table.
struct Threshold {
  std::string_view id;
  double value;
  std::string_view meaning;
};

std::span<const Threshold> thresholds();
double threshold(std::string_view id);

struct Gate {
  std::string name;
  double value = 0.0;
  std::string relation;  // "<", "<=", ">=", "==" or "in"
  double bound = 0.0;
  double upper = 0.0;  // only for "in"
  bool passed = false;
};

Gate gate_less(std::string name, double value, double bound);
Gate gate_at_most(std::string name, double value, double bound);
Gate gate_at_least(std::string name, double value, double bound);
Gate gate_within(std::string name, double value, double lo, double hi);

struct ExperimentReport {
  std::string id;
  Json config;
  std::vector<std::string> columns;
  std::vector<Json> rows;  // one object per row, keys in `columns` order
  std::vector<Gate> gates;

  bool passed() const;
  const Gate* find_gate(std::string_view name) const;
};

/// First line "# config: {...}", then a header row and one line per row.
/// Doubles are written with 17 significant digits.
void write_csv(std::ostream& out, const ExperimentReport& report);
/// {"experiment", "config", "rows": [...], "gates": [...], "passed"}.
void write_json(std::ostream& out, const ExperimentReport& report);

// ---------------------------------------------------------------------------

/// The five estimation paths compared throughout.
inline constexpr Method kAllMethods[] = {Method::gram_stream, Method::welford_stream, Method::cgl_tree,
                                         Method::batch_reference, Method::gram_batch};

CovEstimate<double> estimate(Method m, const Matrix<double>& x, Index block = kDefaultBlock);

struct EquivalenceConfig {
  Index n = 2000;
  Index p = 10;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};
ExperimentReport exp_equivalence(const EquivalenceConfig& config);

struct CancellationConfig {
  std::vector<double> c_grid{0.0, 1e3, 1e6, 1e9, 1e12};
  Index n = 10000;
  Index p = 4;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};

/// Least-squares slope of log10(y) against log10(x) over points with x >= x_min and y > 0.
double loglog_slope(std::span<const double> x, std::span<const double> y, double x_min);

ExperimentReport exp_cancellation(const CancellationConfig& config);

enum class Regime { gaussian, student_t, conditioned, near_singular };
std::string_view to_string(Regime r);
Regime parse_regime(std::string_view name);

struct AccuracyConfig {
  Regime regime = Regime::gaussian;
  std::vector<double> sweep;  // n values, or kappa / sigma_min; empty picks the regime default
  std::optional<Index> n;     // fixed n for conditioned / near-singular
  std::optional<Index> p;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};
ExperimentReport exp_accuracy(const AccuracyConfig& config);

struct OnlineRow {
  Index t;
  Method method;
  double max_abs_diff;
};

/// Max-norm gap between every streaming path and the two-pass oracle on each
/// prefix t = 2..rows of x.
std::vector<OnlineRow> online_fidelity(const Matrix<double>& x, Index block = kDefaultBlock);

struct OnlineConfig {
  Index t_max = 2000;
  Index p = 8;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};
ExperimentReport exp_online_fidelity(const OnlineConfig& config);

struct ConformalExperimentConfig {
  double alpha = 0.1;
  Index m = 200;
  Index n_test = 1000;
  std::vector<Index> t_grid{25, 50, 100};
  Index p = 5;
  double rho = 0.5;
  Index k = 0;
  Index l = 0;
  TargetMode target_mode = TargetMode::true_sigma;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};
ExperimentReport exp_conformal(const ConformalExperimentConfig& config);

struct ConformalShiftConfig {
  std::vector<double> c_grid{0.0, 1e3, 1e6, 1e9, 1e12};
  double alpha = 0.1;
  Index m = 200;
  Index n_test = 1000;
  Index t = 150;
  Index p = 4;
  Index k = 1;
  Index l = 1;
  std::uint64_t seed = 42;
  Index block = kDefaultBlock;
};
ExperimentReport exp_conformal_shift(const ConformalShiftConfig& config);

struct BenchConfig {
  std::vector<Method> methods{std::begin(kAllMethods), std::end(kAllMethods)};
  std::vector<GridCell> grid{{1000, 10}};
  TimingConfig timing;
  Index block = kDefaultBlock;
};
ExperimentReport exp_bench(const BenchConfig& config);

}  // namespace streamcov
