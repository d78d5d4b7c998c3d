#include "streamcov/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include <CLI11.hpp>

#include "streamcov/datagen.hpp"
#include "streamcov/experiments.hpp"
#include "streamcov/serialize.hpp"

namespace streamcov {

namespace {

struct Options {
  std::uint64_t seed = 42;
  std::string out;
  std::string format = "csv";
  std::vector<Index> n;
  std::vector<Index> p;
  double alpha = 0.1;
  Index m = 200;
  int reps = 25;
  Index block = kDefaultBlock;

  // subcommand-specific
  std::vector<double> c_grid;
  std::string regime = "gaussian";
  std::vector<double> sweep;
  Index t_max = 2000;
  Index n_test = 1000;
  std::vector<Index> t_grid;
  Index t = 150;
  std::vector<Index> entry;
  std::string target = "true-sigma";
  std::vector<std::string> methods;
  int warmups = 3;
  std::vector<std::string> files;
  std::string save;
  std::string algo = "welford";
  std::string input;
  Index begin = 0;
  Index count = -1;
  double shift = 0.0;
};

// Emits a report to --out (or `out`) and maps its gates to an exit code.
int emit(const ExperimentReport& report, const Options& opt, std::ostream& out, std::ostream& err) {
  std::ofstream file;
  std::ostream* sink = &out;
  if (!opt.out.empty()) {
    file.open(opt.out);
    if (!file) {
      err << "error: cannot open " << opt.out << " for writing\n";
      return 2;
    }
    sink = &file;
  }
  if (opt.format == "json")
    write_json(*sink, report);
  else
    write_csv(*sink, report);
  for (const auto& g : report.gates)
    if (!g.passed) err << "gate failed: " << g.name << " value=" << g.value << " " << g.relation << " " << g.bound
                       << (g.relation == "in" ? " .. " + std::to_string(g.upper) : std::string()) << '\n';
  return report.passed() ? 0 : 1;
}

Index first_or(const std::vector<Index>& v, Index fallback) { return v.empty() ? fallback : v.front(); }

ExperimentReport covariance_report(const std::string& id, const CovEstimate<double>& est, Json config) {
  ExperimentReport r;
  r.id = id;
  r.config = std::move(config);
  r.columns = {"k", "l", "value"};
  for (Index k = 0; k < est.dim(); ++k)
    for (Index l = k; l < est.dim(); ++l) r.rows.push_back({{"k", k}, {"l", l}, {"value", est.sigma(k, l)}});
  return r;
}

}  // namespace

int cli_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Streaming covariance estimators: experiments, benchmarks and summary tools", "streamcov"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every subcommand");

  Options opt;
  app.add_option("--seed", opt.seed, "Base RNG seed")->envname("STREAMCOV_SEED")->capture_default_str();
  app.add_option("--out", opt.out, "Write the report here instead of stdout");
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  app.add_option("--n", opt.n, "Sample size (comma list for bench)")->delimiter(',');
  app.add_option("--p", opt.p, "Dimension (comma list for bench)")->delimiter(',');
  auto* alpha_opt = app.add_option("--alpha", opt.alpha, "Miscoverage level")->capture_default_str();
  auto* m_opt = app.add_option("--m", opt.m, "Calibration trajectories")->capture_default_str();
  app.add_option("--reps", opt.reps, "Timed repetitions")->capture_default_str();
  app.add_option("--block", opt.block, "Block size for blocked kernels and CGL leaves")->capture_default_str();

  auto* equivalence = app.add_subcommand("equivalence", "Pairwise agreement of the five estimation paths");
  auto* cancellation = app.add_subcommand("cancellation", "Error growth under a large mean shift");
  cancellation->add_option("--c-grid", opt.c_grid, "Shift magnitudes")->delimiter(',');
  auto* accuracy = app.add_subcommand("accuracy", "Accuracy vs the two-pass oracle across data regimes");
  accuracy->add_option("--regime", opt.regime)
      ->check(CLI::IsMember({"gaussian", "student_t", "conditioned", "near_singular"}))
      ->capture_default_str();
  accuracy->add_option("--sweep", opt.sweep, "n values, or kappa / sigma_min values")->delimiter(',');
  auto* online = app.add_subcommand("online", "Streaming estimates vs the prefix oracle");
  online->add_option("--t-max", opt.t_max)->capture_default_str();
  auto* conformal = app.add_subcommand("conformal", "Conformal coverage and width over a stream");
  conformal->add_option("--n-test", opt.n_test)->capture_default_str();
  conformal->add_option("--t-grid", opt.t_grid)->delimiter(',');
  conformal->add_option("--entry", opt.entry, "Target entry k,l")->delimiter(',')->expected(2);
  conformal->add_option("--target", opt.target)
      ->check(CLI::IsMember({"true-sigma", "batch-reference"}))
      ->capture_default_str();
  auto* shift = app.add_subcommand("conformal-shift", "Conformal coverage and width under mean shifts");
  shift->add_option("--c-grid", opt.c_grid)->delimiter(',');
  shift->add_option("--n-test", opt.n_test)->capture_default_str();
  shift->add_option("--t", opt.t)->capture_default_str();
  shift->add_option("--entry", opt.entry, "Target entry k,l")->delimiter(',')->expected(2);
  auto* bench = app.add_subcommand("bench", "Runtime grid with warm-up, IQR filter and bootstrap CI");
  bench->add_option("--methods", opt.methods, "Subset of gram_batch,batch_reference,welford_stream,cgl_tree,gram_stream")
      ->delimiter(',');
  bench->add_option("--warmups", opt.warmups)->capture_default_str();
  auto* merge = app.add_subcommand("merge-files", "Merge two summary files and print the covariance");
  merge->add_option("files", opt.files, "Two .scov summary files")->required()->expected(2)->check(CLI::ExistingFile);
  merge->add_option("--save", opt.save, "Also write the merged summary here");
  auto* generate_cmd = app.add_subcommand("generate", "Write N(0, I) data (optionally shifted) as a matrix file");
  generate_cmd->add_option("--shift", opt.shift, "Shift norm c")->capture_default_str();
  auto* summarize = app.add_subcommand("summarize", "Summarise rows of a matrix file into a .scov file");
  summarize->add_option("input", opt.input, "Matrix file")->required()->check(CLI::ExistingFile);
  summarize->add_option("--algo", opt.algo)->check(CLI::IsMember({"gram", "welford", "cgl"}))->capture_default_str();
  summarize->add_option("--begin", opt.begin, "First row")->capture_default_str();
  summarize->add_option("--count", opt.count, "Number of rows (-1: to the end)")->capture_default_str();

  for (auto* sub : app.get_subcommands({})) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (equivalence->parsed()) {
      return emit(exp_equivalence({first_or(opt.n, 2000), first_or(opt.p, 10), opt.seed, opt.block}), opt, out, err);
    }
    if (cancellation->parsed()) {
      CancellationConfig c;
      if (!opt.c_grid.empty()) c.c_grid = opt.c_grid;
      c.n = first_or(opt.n, c.n);
      c.p = first_or(opt.p, c.p);
      c.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_cancellation(c), opt, out, err);
    }
    if (accuracy->parsed()) {
      AccuracyConfig c;
      c.regime = parse_regime(opt.regime);
      c.sweep = opt.sweep;
      if (!opt.n.empty()) c.n = opt.n.front();
      if (!opt.p.empty()) c.p = opt.p.front();
      c.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_accuracy(c), opt, out, err);
    }
    if (online->parsed()) {
      OnlineConfig c;
      c.t_max = opt.t_max;
      c.p = first_or(opt.p, c.p);
      c.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_online_fidelity(c), opt, out, err);
    }
    if (conformal->parsed()) {
      ConformalExperimentConfig c;
      c.alpha = opt.alpha;
      c.m = opt.m;
      c.n_test = opt.n_test;
      if (!opt.t_grid.empty()) c.t_grid = opt.t_grid;
      c.p = first_or(opt.p, c.p);
      if (!opt.entry.empty()) {
        c.k = opt.entry[0];
        c.l = opt.entry[1];
      }
      c.target_mode = opt.target == "true-sigma" ? TargetMode::true_sigma : TargetMode::batch_reference;
      c.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_conformal(c), opt, out, err);
    }
    if (shift->parsed()) {
      ConformalShiftConfig c;
      if (!opt.c_grid.empty()) c.c_grid = opt.c_grid;
      if (alpha_opt->count() > 0) c.alpha = opt.alpha;
      if (m_opt->count() > 0) c.m = opt.m;
      c.n_test = opt.n_test;
      c.t = opt.t;
      c.p = first_or(opt.p, c.p);
      if (!opt.entry.empty()) {
        c.k = opt.entry[0];
        c.l = opt.entry[1];
      }
      c.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_conformal_shift(c), opt, out, err);
    }
    if (bench->parsed()) {
      BenchConfig c;
      if (!opt.methods.empty()) {
        c.methods.clear();
        for (const auto& name : opt.methods) c.methods.push_back(parse_method(name));
      }
      const std::vector<Index> ns = opt.n.empty() ? std::vector<Index>{1000} : opt.n;
      const std::vector<Index> ps = opt.p.empty() ? std::vector<Index>{10} : opt.p;
      c.grid.clear();
      for (Index n : ns)
        for (Index p : ps) c.grid.push_back({n, p});
      c.timing.reps = opt.reps;
      c.timing.warmups = opt.warmups;
      c.timing.seed = opt.seed;
      c.block = opt.block;
      return emit(exp_bench(c), opt, out, err);
    }
    if (merge->parsed()) {
      const StoredSummary a = load_summary(opt.files[0]);
      const StoredSummary b = load_summary(opt.files[1]);
      const StoredSummary merged = merge_stored(a, b);
      if (!opt.save.empty()) save_summary(opt.save, merged);
      const auto est = finalize_stored(merged);
      Json cfg = {{"inputs", opt.files}, {"kind", std::string(to_string(merged.kind))}, {"n", est.dof + 1}};
      return emit(covariance_report("merge-files", est, std::move(cfg)), opt, out, err);
    }
    if (generate_cmd->parsed()) {
      if (opt.out.empty()) throw CLI::RequiredError("--out");
      const DataSpec base = gaussian_spec(first_or(opt.n, 1000), first_or(opt.p, 4), opt.seed);
      save_matrix(opt.out, generate(opt.shift == 0.0 ? base : shifted_spec(base, opt.shift)));
      return 0;
    }
    if (summarize->parsed()) {
      if (opt.out.empty()) throw CLI::RequiredError("--out");
      const Matrix<double> x = load_matrix(opt.input);
      const Index count = opt.count < 0 ? x.rows() - opt.begin : opt.count;
      if (opt.begin < 0 || count < 0 || opt.begin + count > x.rows())
        throw Error(ErrorCode::dim, "row range outside the matrix");
      const auto rows = x.middleRows(opt.begin, count);
      const Algo algo = parse_algo(opt.algo);
      StoredSummary s;
      if (algo == Algo::gram)
        s = {RecordKind::gram, gram_stream(rows)};
      else if (algo == Algo::welford)
        s = {RecordKind::welford, welford_stream(rows)};
      else
        s = {RecordKind::cgl, cgl_blocked(rows, opt.block)};
      save_summary(opt.out, s);
      return 0;
    }
  } catch (const CLI::Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> storage;
  storage.reserve(args.size() + 1);
  storage.emplace_back("streamcov");
  storage.insert(storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : storage) argv.push_back(s.data());
  argv.push_back(nullptr);
  return cli_main(static_cast<int>(storage.size()), argv.data(), out, err);
}

}  // namespace streamcov
