#include "streamcov/bench.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>

#include "streamcov/datagen.hpp"
#include "streamcov/estimators.hpp"

namespace streamcov {

void TimingConfig::validate() const {
  if (reps < 5) throw Error(ErrorCode::bad_spec, "reps must be >= 5");
  if (warmups < 0) throw Error(ErrorCode::bad_spec, "warmups must be >= 0");
  if (bootstrap_resamples < 100) throw Error(ErrorCode::bad_spec, "bootstrap_resamples must be >= 100");
  if (!(ci_level > 0.0 && ci_level < 1.0)) throw Error(ErrorCode::bad_spec, "ci_level must lie in (0, 1)");
}

double percentile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw Error(ErrorCode::empty, "percentile of no samples");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

std::vector<double> iqr_filter(std::span<const double> samples) {
  if (samples.size() < 4) throw Error(ErrorCode::too_few_samples, "IQR filter needs at least 4 samples");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const double q1 = percentile_sorted(sorted, 0.25);
  const double q3 = percentile_sorted(sorted, 0.75);
  const double iqr = q3 - q1;
  const double lo = q1 - 1.5 * iqr;
  const double hi = q3 + 1.5 * iqr;
  std::vector<double> kept;
  kept.reserve(samples.size());
  std::copy_if(samples.begin(), samples.end(), std::back_inserter(kept),
               [&](double v) { return lo <= v && v <= hi; });
  return kept;
}

BootstrapInterval bootstrap_ci(std::span<const double> samples, const TimingConfig& config) {
  if (samples.empty()) throw Error(ErrorCode::empty, "bootstrap of no samples");
  const auto n = samples.size();
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / static_cast<double>(n);

  Rng rng(config.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  std::vector<double> means(static_cast<std::size_t>(config.bootstrap_resamples));
  for (auto& m : means) {
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += samples[pick(rng)];
    m = sum / static_cast<double>(n);
  }
  std::sort(means.begin(), means.end());
  const double tail = (1.0 - config.ci_level) / 2.0;
  double low = percentile_sorted(means, tail);
  double high = percentile_sorted(means, 1.0 - tail);
  // Identical samples can give means that differ from `mean` in the last ulp.
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  low = std::clamp(std::min(low, mean), *mn, *mx);
  high = std::clamp(std::max(high, mean), *mn, *mx);
  return {mean, low, high};
}

double clock_resolution() {
  static const double resolution = [] {
    double best = 1.0;
    for (int i = 0; i < 200; ++i) {
      const auto a = std::chrono::steady_clock::now();
      auto b = std::chrono::steady_clock::now();
      while (b == a) b = std::chrono::steady_clock::now();
      best = std::min(best, std::chrono::duration<double>(b - a).count());
    }
    return best;
  }();
  return resolution;
}

void do_not_optimize(double value) {
#if defined(__GNUC__) || defined(__clang__)
  asm volatile("" : : "g"(value) : "memory");
#else
  static volatile double sink;
  sink = value;
#endif
}

TimingResult summarize_timings(std::vector<double> raw, double checksum, const TimingConfig& config) {
  TimingResult r;
  r.raw_samples = std::move(raw);
  r.kept_samples = iqr_filter(r.raw_samples);
  const auto ci = bootstrap_ci(r.kept_samples, config);
  r.trimmed_mean = ci.mean;
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.checksum = checksum;
  r.coarse_clock = clock_resolution() > 0.01 * r.trimmed_mean;
  return r;
}

std::string_view to_string(Method m) {
  switch (m) {
    case Method::gram_batch: return "gram_batch";
    case Method::batch_reference: return "batch_reference";
    case Method::welford_stream: return "welford_stream";
    case Method::cgl_tree: return "cgl_tree";
    case Method::gram_stream: return "gram_stream";
  }
  return "unknown";
}

Method parse_method(std::string_view name) {
  for (auto m : {Method::gram_batch, Method::batch_reference, Method::welford_stream, Method::cgl_tree,
                 Method::gram_stream})
    if (to_string(m) == name) return m;
  throw Error(ErrorCode::bad_spec, "unknown method '" + std::string(name) + "'");
}

double run_method(Method m, const Matrix<double>& x, Index block) {
  const auto sum = [](const CovEstimate<double>& e) {
    double s = 0.0;
    for (double v : e.sigma.packed()) s += v;
    return s;
  };
  switch (m) {
    case Method::gram_batch: return sum(gram_batch(x, block));
    case Method::batch_reference: return sum(batch_reference(x, block));
    case Method::welford_stream: return sum(moment_finalize(welford_stream(x)));
    case Method::cgl_tree: return sum(moment_finalize(cgl_blocked(x, block)));
    case Method::gram_stream: return sum(gram_finalize(gram_stream(x)));
  }
  return 0.0;
}

std::vector<RuntimeRow> runtime_grid(std::span<const Method> methods, std::span<const GridCell> grid,
                                     const TimingConfig& config, Index block) {
  config.validate();
  std::vector<RuntimeRow> rows;
  rows.reserve(methods.size() * grid.size());
  for (std::size_t c = 0; c < grid.size(); ++c) {
    const Matrix<double> x = generate(gaussian_spec(grid[c].n, grid[c].p, substream(config.seed, c)));
    for (Method m : methods) rows.push_back({m, grid[c], time_op([&] { return run_method(m, x, block); }, config)});
  }
  return rows;
}

}  // namespace streamcov
