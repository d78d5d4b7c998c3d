#include "streamcov/experiments.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <string>

#include "streamcov/datagen.hpp"

namespace streamcov {

namespace {

// Each entry states what the bound enforces; values are fixed acceptance data.
constexpr std::array<Threshold, 17> kThresholds{{
    {"equivalence.rel_max", 1e-12, "all five paths agree pairwise (relative max-norm); noise floor 1e-13 with 10x slack"},
    {"cancellation.welford_rel_frob", 1e-9, "Welford error vs the unshifted same-seed estimate at every shift"},
    {"cancellation.gram_ratio", 1e6, "Gram error growth from c = 0 to the largest shift"},
    {"cancellation.slope_lo", 1.5, "lower edge of the Gram log-log error slope (c^2 law)"},
    {"cancellation.slope_hi", 2.5, "upper edge of the Gram log-log error slope (c^2 law)"},
    {"cancellation.slope_min_c", 1e3, "smallest shift used in the slope fit"},
    {"accuracy.gaussian", 1e-12, "Gaussian data, relative Frobenius error vs the two-pass oracle"},
    {"accuracy.student_t", 1e-11, "Student-t3 data, relative Frobenius error vs the two-pass oracle"},
    {"accuracy.conditioned", 1e-11, "prescribed kappa below the gate limit, relative Frobenius vs oracle"},
    {"accuracy.conditioned_max_kappa", 1e7, "no accuracy gate at or above this condition number"},
    {"online.max_abs", 1e-10, "streaming estimates vs prefix oracle, max-norm"},
    {"online.t_min", 100, "first prefix length held to online.max_abs"},
    {"conformal.se_multiplier", 3, "binomial standard errors of slack around the nominal coverage"},
    {"conformal.shift_c", 1e9, "shift at which the width ratios are checked"},
    {"conformal.shift_gram_width_ratio", 10, "Gram interval width inflation at conformal.shift_c, at least"},
    {"conformal.shift_welford_width_ratio", 2, "Welford interval width inflation at conformal.shift_c, at most"},
    {"equivalence.p1_bitwise", 0, "p = 1 streaming Gram minus scalar bariance, exactly"},
}};

std::string format_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isnan(d)) return "nan";
    if (std::isinf(d)) return d > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", d);
    return buf;
  }
  if (v.is_null()) return "";
  return v.dump();
}

Json gate_json(const Gate& g) {
  Json j;
  j["name"] = g.name;
  j["value"] = g.value;
  j["relation"] = g.relation;
  j["bound"] = g.bound;
  if (g.relation == "in") j["upper"] = g.upper;
  j["passed"] = g.passed;
  return j;
}

std::vector<Matrix<double>> make_trajectories(Index count, std::uint64_t stream, auto&& spec_for) {
  std::vector<Matrix<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (Index j = 0; j < count; ++j) out.push_back(generate(spec_for(substream(stream, static_cast<std::uint64_t>(j)))));
  return out;
}

std::string cell_name(std::string_view what, std::string_view a, std::string_view b) {
  return std::string(what) + "[" + std::string(a) + "," + std::string(b) + "]";
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

Json method_list(std::span<const Method> ms) {
  Json j = Json::array();
  for (Method m : ms) j.push_back(std::string(to_string(m)));
  return j;
}

}  // namespace

std::span<const Threshold> thresholds() { return kThresholds; }

double threshold(std::string_view id) {
  for (const auto& t : kThresholds)
    if (t.id == id) return t.value;
  throw Error(ErrorCode::bad_spec, "unknown threshold " + std::string(id));
}

Gate gate_less(std::string name, double value, double bound) {
  return {std::move(name), value, "<", bound, 0.0, value < bound};
}
Gate gate_at_most(std::string name, double value, double bound) {
  return {std::move(name), value, "<=", bound, 0.0, value <= bound};
}
Gate gate_at_least(std::string name, double value, double bound) {
  return {std::move(name), value, ">=", bound, 0.0, value >= bound};
}
Gate gate_within(std::string name, double value, double lo, double hi) {
  return {std::move(name), value, "in", lo, hi, lo <= value && value <= hi};
}

bool ExperimentReport::passed() const {
  return std::all_of(gates.begin(), gates.end(), [](const Gate& g) { return g.passed; });
}

const Gate* ExperimentReport::find_gate(std::string_view name) const {
  for (const auto& g : gates)
    if (g.name == name) return &g;
  return nullptr;
}

void write_csv(std::ostream& out, const ExperimentReport& report) {
  Json cfg = report.config;
  cfg["experiment"] = report.id;
  out << "# config: " << cfg.dump() << '\n';
  for (std::size_t c = 0; c < report.columns.size(); ++c) out << (c ? "," : "") << report.columns[c];
  out << '\n';
  for (const auto& row : report.rows) {
    for (std::size_t c = 0; c < report.columns.size(); ++c)
      out << (c ? "," : "") << format_cell(row.at(report.columns[c]));
    out << '\n';
  }
}

void write_json(std::ostream& out, const ExperimentReport& report) {
  Json j;
  j["experiment"] = report.id;
  j["config"] = report.config;
  j["rows"] = Json::array();
  for (const auto& r : report.rows) j["rows"].push_back(r);
  j["gates"] = Json::array();
  for (const auto& g : report.gates) j["gates"].push_back(gate_json(g));
  j["passed"] = report.passed();
  out << j.dump(2) << '\n';
}

CovEstimate<double> estimate(Method m, const Matrix<double>& x, Index block) {
  switch (m) {
    case Method::gram_batch: return gram_batch(x, block);
    case Method::batch_reference: return batch_reference(x, block);
    case Method::welford_stream: return moment_finalize(welford_stream(x));
    case Method::cgl_tree: return moment_finalize(cgl_blocked(x, block));
    case Method::gram_stream: return gram_finalize(gram_stream(x));
  }
  throw Error(ErrorCode::bad_spec, "unknown method");
}

// ---------------------------------------------------------------------------

ExperimentReport exp_equivalence(const EquivalenceConfig& config) {
  ExperimentReport r;
  r.id = "equivalence";
  r.config = {{"n", config.n}, {"p", config.p}, {"seed", config.seed}, {"block", config.block}};
  r.columns = {"method_a", "method_b", "max_abs_diff", "rel_max_diff", "rel_frobenius"};

  const Matrix<double> x = generate(gaussian_spec(config.n, config.p, config.seed));
  std::vector<CovEstimate<double>> est;
  for (Method m : kAllMethods) est.push_back(estimate(m, x, config.block));

  const double tol = threshold("equivalence.rel_max");
  for (std::size_t a = 0; a < est.size(); ++a) {
    for (std::size_t b = a + 1; b < est.size(); ++b) {
      const double rel_max = rel_max_diff(est[a].sigma, est[b].sigma);
      Json row;
      row["method_a"] = std::string(to_string(kAllMethods[a]));
      row["method_b"] = std::string(to_string(kAllMethods[b]));
      row["max_abs_diff"] = max_abs_diff(est[a].sigma, est[b].sigma);
      row["rel_max_diff"] = rel_max;
      row["rel_frobenius"] = rel_frobenius_diff(est[a].sigma, est[b].sigma);
      r.rows.push_back(std::move(row));
      r.gates.push_back(gate_less(cell_name("rel_max", to_string(kAllMethods[a]), to_string(kAllMethods[b])),
                                  rel_max, tol));
    }
  }
  if (config.p == 1) {
    std::vector<double> xs(x.data(), x.data() + x.rows());
    const double bar = bariance<double>(xs);
    const double gram = est[0].sigma(0, 0);
    const double gap = std::abs(gram - bar);
    r.gates.push_back({"gram_stream_bitwise_bariance", gap, "==", threshold("equivalence.p1_bitwise"), 0.0,
                       gap == threshold("equivalence.p1_bitwise")});
  }
  return r;
}

// ---------------------------------------------------------------------------

double loglog_slope(std::span<const double> x, std::span<const double> y, double x_min) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int k = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] < x_min || !(y[i] > 0.0) || !std::isfinite(y[i])) continue;
    const double lx = std::log10(x[i]);
    const double ly = std::log10(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
    ++k;
  }
  if (k < 2) return std::numeric_limits<double>::quiet_NaN();
  const double kk = k;
  return (kk * sxy - sx * sy) / (kk * sxx - sx * sx);
}

ExperimentReport exp_cancellation(const CancellationConfig& config) {
  for (double c : config.c_grid)
    if (!(c == 0.0 || (c >= 1.0 && c <= 1e12))) throw Error(ErrorCode::bad_spec, "shift outside {0} U [1, 1e12]");
  ExperimentReport r;
  r.id = "cancellation";
  r.config = {{"c_grid", config.c_grid}, {"n", config.n}, {"p", config.p}, {"seed", config.seed},
              {"block", config.block}};
  r.columns = {"c", "method", "rel_frobenius_error"};

  const DataSpec base = gaussian_spec(config.n, config.p, config.seed);
  const SymMatrix<double> reference = batch_reference(generate(base), config.block).sigma;
  const Method methods[] = {Method::gram_stream, Method::welford_stream, Method::cgl_tree, Method::batch_reference};

  std::map<Method, std::vector<double>> errors;
  for (double c : config.c_grid) {
    const Matrix<double> x = generate(shifted_spec(base, c));
    for (Method m : methods) {
      const double err = rel_frobenius_diff(estimate(m, x, config.block).sigma, reference);
      errors[m].push_back(err);
      r.rows.push_back({{"c", c}, {"method", std::string(to_string(m))}, {"rel_frobenius_error", err}});
    }
  }

  const double welf_tol = threshold("cancellation.welford_rel_frob");
  for (std::size_t i = 0; i < config.c_grid.size(); ++i)
    r.gates.push_back(gate_less("welford_error[c=" + short_num(config.c_grid[i]) + "]",
                                errors[Method::welford_stream][i], welf_tol));

  const auto& gram = errors[Method::gram_stream];
  const auto zero = std::find(config.c_grid.begin(), config.c_grid.end(), 0.0);
  const auto top = std::max_element(config.c_grid.begin(), config.c_grid.end());
  if (zero != config.c_grid.end() && top != config.c_grid.end() && *top > 0.0) {
    const double e0 = gram[static_cast<std::size_t>(zero - config.c_grid.begin())];
    const double e1 = gram[static_cast<std::size_t>(top - config.c_grid.begin())];
    const double ratio = e0 > 0.0 ? e1 / e0 : std::numeric_limits<double>::infinity();
    r.gates.push_back(gate_at_least("gram_error_ratio[c=" + short_num(*top) + "/c=0]", ratio,
                                    threshold("cancellation.gram_ratio")));
  }
  const double slope = loglog_slope(config.c_grid, gram, threshold("cancellation.slope_min_c"));
  r.gates.push_back(gate_within("gram_loglog_slope", slope, threshold("cancellation.slope_lo"),
                                threshold("cancellation.slope_hi")));
  return r;
}

// ---------------------------------------------------------------------------

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::gaussian: return "gaussian";
    case Regime::student_t: return "student_t";
    case Regime::conditioned: return "conditioned";
    case Regime::near_singular: return "near_singular";
  }
  return "unknown";
}

Regime parse_regime(std::string_view name) {
  for (auto r : {Regime::gaussian, Regime::student_t, Regime::conditioned, Regime::near_singular})
    if (to_string(r) == name) return r;
  throw Error(ErrorCode::bad_spec, "unknown regime '" + std::string(name) + "'");
}

ExperimentReport exp_accuracy(const AccuracyConfig& config) {
  std::vector<double> sweep = config.sweep;
  Index n = 0, p = 0;
  switch (config.regime) {
    case Regime::gaussian:
      if (sweep.empty()) sweep = {500, 5000};
      p = config.p.value_or(10);
      break;
    case Regime::student_t:
      if (sweep.empty()) sweep = {500, 2000, 10000};
      p = config.p.value_or(8);
      break;
    case Regime::conditioned:
      if (sweep.empty()) sweep = {1e1, 1e2, 1e4, 1e6, 1e8, 1e10, 1e12, 1e14};
      n = config.n.value_or(500);
      p = config.p.value_or(6);
      break;
    case Regime::near_singular:
      if (sweep.empty()) sweep = {1.0, 1e-3, 1e-6, 1e-9, 1e-12};
      n = config.n.value_or(500);
      p = config.p.value_or(6);
      break;
  }

  ExperimentReport r;
  r.id = "accuracy";
  r.config = {{"regime", std::string(to_string(config.regime))}, {"sweep", sweep}, {"n", n}, {"p", p},
              {"seed", config.seed}, {"block", config.block}};
  r.columns = {"regime", "param", "method", "max_abs_err", "rel_frobenius"};

  const Method methods[] = {Method::gram_stream, Method::gram_batch, Method::welford_stream, Method::cgl_tree};
  for (std::size_t i = 0; i < sweep.size(); ++i) {
    const double v = sweep[i];
    const std::uint64_t seed = substream(config.seed, i);
    DataSpec spec;
    std::optional<double> tol;
    switch (config.regime) {
      case Regime::gaussian:
        spec = gaussian_spec(static_cast<Index>(v), p, seed);
        tol = threshold("accuracy.gaussian");
        break;
      case Regime::student_t:
        spec = DataSpec{StudentTSpec{static_cast<Index>(v), p, 3.0}, seed};
        tol = threshold("accuracy.student_t");
        break;
      case Regime::conditioned:
        spec = DataSpec{ConditionedSpec{n, p, v}, seed};
        if (v < threshold("accuracy.conditioned_max_kappa")) tol = threshold("accuracy.conditioned");
        break;
      case Regime::near_singular:
        spec = DataSpec{NearSingularSpec{n, p, v}, seed};
        break;
    }
    const Matrix<double> x = generate(spec);
    const SymMatrix<double> ref = batch_reference(x, config.block).sigma;
    for (Method m : methods) {
      const SymMatrix<double> est = estimate(m, x, config.block).sigma;
      const double rel = rel_frobenius_diff(est, ref);
      r.rows.push_back({{"regime", std::string(to_string(config.regime))},
                        {"param", v},
                        {"method", std::string(to_string(m))},
                        {"max_abs_err", max_abs_diff(est, ref)},
                        {"rel_frobenius", rel}});
      if (tol) r.gates.push_back(gate_less(cell_name("rel_frobenius", to_string(m), short_num(v)), rel, *tol));
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

std::vector<OnlineRow> online_fidelity(const Matrix<double>& x, Index block) {
  std::vector<OnlineRow> rows;
  GramSummary<double> gram(x.cols());
  MomentSummary<double> welf(x.cols());
  for (Index t = 1; t <= x.rows(); ++t) {
    gram_update(gram, x.row(t - 1));
    welford_update(welf, x.row(t - 1));
    if (t < 2) continue;
    const SymMatrix<double> ref = batch_reference(x.topRows(t), block).sigma;
    rows.push_back({t, Method::gram_stream, max_abs_diff(gram_finalize(gram).sigma, ref)});
    rows.push_back({t, Method::welford_stream, max_abs_diff(moment_finalize(welf).sigma, ref)});
    rows.push_back({t, Method::cgl_tree, max_abs_diff(moment_finalize(cgl_blocked(x.topRows(t), block)).sigma, ref)});
  }
  return rows;
}

ExperimentReport exp_online_fidelity(const OnlineConfig& config) {
  if (config.t_max < 100) throw Error(ErrorCode::bad_spec, "t_max must be >= 100");
  ExperimentReport r;
  r.id = "online";
  r.config = {{"t_max", config.t_max}, {"p", config.p}, {"seed", config.seed}, {"block", config.block}};
  r.columns = {"t", "method", "max_abs_diff"};

  // Reported steps: about eight per decade plus the end of the stream.
  std::vector<Index> grid;
  for (int i = 0;; ++i) {
    const auto t = static_cast<Index>(std::llround(2.0 * std::pow(10.0, i / 8.0)));
    if (t > config.t_max) break;
    if (grid.empty() || grid.back() != t) grid.push_back(t);
  }
  if (grid.back() != config.t_max) grid.push_back(config.t_max);

  const Matrix<double> x = generate(gaussian_spec(config.t_max, config.p, config.seed));
  const auto all = online_fidelity(x, config.block);
  const auto t_min = static_cast<Index>(threshold("online.t_min"));
  std::map<Method, double> worst;
  for (const auto& row : all) {
    if (row.t >= t_min) worst[row.method] = std::max(worst[row.method], row.max_abs_diff);
    if (std::binary_search(grid.begin(), grid.end(), row.t))
      r.rows.push_back({{"t", row.t}, {"method", std::string(to_string(row.method))}, {"max_abs_diff", row.max_abs_diff}});
  }
  for (const auto& [m, w] : worst)
    r.gates.push_back(gate_less("max_abs_diff[" + std::string(to_string(m)) + ",t>=" + std::to_string(t_min) + "]", w,
                                threshold("online.max_abs")));
  return r;
}

// ---------------------------------------------------------------------------

namespace {

struct CoverageBand {
  double lo;
  double hi;
};

CoverageBand coverage_band(double alpha, Index m, Index n_test) {
  const double k = threshold("conformal.se_multiplier");
  const double se = std::sqrt(alpha * (1.0 - alpha) / static_cast<double>(n_test));
  return {(1.0 - alpha) - k * se, (1.0 - alpha) + 1.0 / static_cast<double>(m + 1) + k * se};
}

constexpr Algo kAlgos[] = {Algo::gram, Algo::welford, Algo::cgl};

}  // namespace

ExperimentReport exp_conformal(const ConformalExperimentConfig& config) {
  ConformalConfig cc;
  cc.alpha = config.alpha;
  cc.k = config.k;
  cc.l = config.l;
  cc.t_grid = config.t_grid;
  cc.m = config.m;
  cc.target_mode = config.target_mode;
  cc.block = config.block;
  cc.validate();
  if (config.n_test < 1) throw Error(ErrorCode::bad_spec, "need at least one test trajectory");

  ExperimentReport r;
  r.id = "conformal";
  r.config = {{"alpha", config.alpha}, {"m", config.m}, {"n_test", config.n_test}, {"t_grid", config.t_grid},
              {"p", config.p}, {"rho", config.rho}, {"entry", {config.k, config.l}},
              {"target", config.target_mode == TargetMode::true_sigma ? "true-sigma" : "batch-reference"},
              {"seed", config.seed}, {"block", config.block}};
  r.columns = {"t", "algo", "alpha", "m", "coverage", "se", "mean_width", "q_hat"};

  const SymMatrix<double> sigma = toeplitz_cov({config.p, config.rho});
  const Index length = config.t_grid.back();
  auto spec_for = [&](std::uint64_t s) { return gaussian_spec(length, sigma, s); };
  const auto calib = make_trajectories(config.m, substream(config.seed, 1), spec_for);
  const auto tests = make_trajectories(config.n_test, substream(config.seed, 2), spec_for);
  const double truth = sigma(config.k, config.l);
  const auto band = coverage_band(config.alpha, config.m, config.n_test);

  for (Algo algo : kAlgos) {
    cc.algo = algo;
    const auto cal = nonconformity_scores(calib, cc, truth);
    const auto cov = coverage_eval(tests, cal, cc, truth);
    for (const auto& row : cov) {
      r.rows.push_back({{"t", row.t}, {"algo", std::string(to_string(algo))}, {"alpha", config.alpha},
                        {"m", config.m}, {"coverage", row.coverage}, {"se", row.se},
                        {"mean_width", row.mean_width}, {"q_hat", row.q_hat}});
      r.gates.push_back(gate_within(cell_name("coverage", to_string(algo), "t=" + std::to_string(row.t)),
                                    row.coverage, band.lo, band.hi));
    }
    if (cov.size() >= 2)
      r.gates.push_back(gate_less("width_narrows[" + std::string(to_string(algo)) + "]", cov.back().mean_width,
                                  cov.front().mean_width));
  }
  return r;
}

ExperimentReport exp_conformal_shift(const ConformalShiftConfig& config) {
  ConformalConfig cc;
  cc.alpha = config.alpha;
  cc.k = config.k;
  cc.l = config.l;
  cc.t_grid = {config.t};
  cc.m = config.m;
  cc.block = config.block;
  cc.validate();
  if (config.n_test < 1) throw Error(ErrorCode::bad_spec, "need at least one test trajectory");

  ExperimentReport r;
  r.id = "conformal-shift";
  r.config = {{"c_grid", config.c_grid}, {"alpha", config.alpha}, {"m", config.m}, {"n_test", config.n_test},
              {"t", config.t}, {"p", config.p}, {"entry", {config.k, config.l}}, {"seed", config.seed},
              {"block", config.block}};
  r.columns = {"c", "algo", "t", "alpha", "m", "coverage", "se", "mean_width", "q_hat"};

  const double truth = config.k == config.l ? 1.0 : 0.0;
  const auto band = coverage_band(config.alpha, config.m, config.n_test);
  std::map<std::pair<Algo, double>, double> width;
  for (double c : config.c_grid) {
    // Same base draws for every shift, so c is the only thing that changes.
    auto spec_for = [&](std::uint64_t s) { return shifted_spec(gaussian_spec(config.t, config.p, s), c); };
    const auto calib = make_trajectories(config.m, substream(config.seed, 1), spec_for);
    const auto tests = make_trajectories(config.n_test, substream(config.seed, 2), spec_for);
    for (Algo algo : kAlgos) {
      cc.algo = algo;
      const auto cal = nonconformity_scores(calib, cc, truth);
      const auto row = coverage_eval(tests, cal, cc, truth).front();
      width[{algo, c}] = row.mean_width;
      r.rows.push_back({{"c", c}, {"algo", std::string(to_string(algo))}, {"t", config.t}, {"alpha", config.alpha},
                        {"m", config.m}, {"coverage", row.coverage}, {"se", row.se},
                        {"mean_width", row.mean_width}, {"q_hat", row.q_hat}});
      r.gates.push_back(
          gate_at_least(cell_name("coverage", to_string(algo), "c=" + short_num(c)), row.coverage, band.lo));
    }
  }
  const double c_check = threshold("conformal.shift_c");
  const bool have = std::count(config.c_grid.begin(), config.c_grid.end(), 0.0) > 0 &&
                    std::count(config.c_grid.begin(), config.c_grid.end(), c_check) > 0;
  if (have) {
    r.gates.push_back(gate_at_least("width_ratio[gram,c=" + short_num(c_check) + "]",
                                    width[{Algo::gram, c_check}] / width[{Algo::gram, 0.0}],
                                    threshold("conformal.shift_gram_width_ratio")));
    r.gates.push_back(gate_at_most("width_ratio[welford,c=" + short_num(c_check) + "]",
                                   width[{Algo::welford, c_check}] / width[{Algo::welford, 0.0}],
                                   threshold("conformal.shift_welford_width_ratio")));
  }
  return r;
}

// ---------------------------------------------------------------------------

ExperimentReport exp_bench(const BenchConfig& config) {
  ExperimentReport r;
  r.id = "bench";
  Json grid = Json::array();
  for (const auto& cell : config.grid) grid.push_back({cell.n, cell.p});
  r.config = {{"methods", method_list(config.methods)},
              {"grid", grid},
              {"warmups", config.timing.warmups},
              {"reps", config.timing.reps},
              {"bootstrap_resamples", config.timing.bootstrap_resamples},
              {"ci_level", config.timing.ci_level},
              {"seed", config.timing.seed},
              {"block", config.block}};
  r.columns = {"method", "n", "p", "reps_kept", "trimmed_mean_s", "ci_low_s", "ci_high_s", "checksum"};
  for (const auto& row : runtime_grid(config.methods, config.grid, config.timing, config.block)) {
    r.rows.push_back({{"method", std::string(to_string(row.method))},
                      {"n", row.cell.n},
                      {"p", row.cell.p},
                      {"reps_kept", row.timing.kept_samples.size()},
                      {"trimmed_mean_s", row.timing.trimmed_mean},
                      {"ci_low_s", row.timing.ci_low},
                      {"ci_high_s", row.timing.ci_high},
                      {"checksum", row.timing.checksum}});
  }
  return r;
}

}  // namespace streamcov
