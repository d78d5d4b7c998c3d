#pragma once

// Timing methodology: warm-up calls, timed repetitions on a monotonic clock,
// one pass of the 1.5 x IQR fence, then the mean of the survivors with a
// percentile-bootstrap interval. Timed regions never run concurrently.

#include <chrono>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "streamcov/linalg.hpp"

namespace streamcov {

struct TimingConfig {
  int warmups = 3;
  int reps = 25;
  int bootstrap_resamples = 300;
  double ci_level = 0.95;
  std::uint64_t seed = 42;

  void validate() const;
};

struct TimingResult {
  std::vector<double> raw_samples;   // seconds
  std::vector<double> kept_samples;  // after the IQR fence
  double trimmed_mean = 0.0;
  double ci_low = 0.0;
  double ci_high = 0.0;
  double checksum = 0.0;      // fold of every timed call's output
  bool coarse_clock = false;  // clock tick above 1% of trimmed_mean
};

struct BootstrapInterval {
  double mean = 0.0;
  double low = 0.0;
  double high = 0.0;
};

/// q-quantile of sorted data, linear interpolation between order statistics
/// at position q * (n - 1).
double percentile_sorted(std::span<const double> sorted, double q);

/// Keeps Q1 - 1.5 IQR <= x <= Q3 + 1.5 IQR, preserving input order. Applied
/// once; a second application may remove more points.
std::vector<double> iqr_filter(std::span<const double> samples);

/// Mean of `samples` plus the (1-level)/2 and (1+level)/2 percentiles of the
/// bootstrap distribution of the mean. The interval is widened to contain the
/// point estimate if resampling happens to miss it.
BootstrapInterval bootstrap_ci(std::span<const double> samples, const TimingConfig& config);

/// Smallest non-zero step observed on the steady clock, in seconds.
double clock_resolution();

void do_not_optimize(double value);

/// Turns raw per-call timings into a TimingResult (filter, bootstrap, clock check).
TimingResult summarize_timings(std::vector<double> raw, double checksum, const TimingConfig& config);

/// Times `op` after `warmups` discarded calls. `op` returns a double that is
/// folded into the checksum so the work cannot be optimised away.
template <typename Op>
TimingResult time_op(Op&& op, const TimingConfig& config) {
  config.validate();
  double checksum = 0.0;
  for (int i = 0; i < config.warmups; ++i) do_not_optimize(op());
  std::vector<double> raw;
  raw.reserve(static_cast<std::size_t>(config.reps));
  for (int i = 0; i < config.reps; ++i) {
    const auto start = std::chrono::steady_clock::now();
    const double out = op();
    const auto stop = std::chrono::steady_clock::now();
    do_not_optimize(out);
    checksum += out;
    raw.push_back(std::chrono::duration<double>(stop - start).count());
  }
  return summarize_timings(std::move(raw), checksum, config);
}

enum class Method { gram_batch, batch_reference, welford_stream, cgl_tree, gram_stream };

std::string_view to_string(Method m);
Method parse_method(std::string_view name);

/// Runs one estimation path end to end and returns the sum of the estimate's
/// packed entries.
double run_method(Method m, const Matrix<double>& x, Index block = kDefaultBlock);

struct GridCell {
  Index n = 0;
  Index p = 0;
};

struct RuntimeRow {
  Method method;
  GridCell cell;
  TimingResult timing;
};

/// One row per (cell, method). Every method in a cell sees the same N(0, I)
/// data, drawn from substream(config.seed, cell index).
std::vector<RuntimeRow> runtime_grid(std::span<const Method> methods, std::span<const GridCell> grid,
                                     const TimingConfig& config, Index block = kDefaultBlock);

}  // namespace streamcov
