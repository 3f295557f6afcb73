// selinf: selection + selective inference from the command line.
//
// Exit codes: 0 success, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <thread>

#include "selinf/csv.hpp"
#include "selinf/harness.hpp"
#include "selinf/inference.hpp"
#include "selinf/report.hpp"
#include "selinf/selectors.hpp"

namespace {

constexpr int kValidationExit = 2;
constexpr int kNumericalExit = 3;

struct Options {
  std::string data;
  std::string response;
  std::string procedure = "ms";
  selinf::Index k = 2;
  double lambda = 1.0;
  double alpha = 0.1;
  std::optional<double> sigma2;
  std::size_t trials = 500;
  std::uint64_t seed = 0;
  std::string out;
  std::string event_csv;
  selinf::Index n = 20;
  selinf::Index p = 200;
  std::vector<double> snr{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::vector<double> nominal{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
  std::string hist;
  unsigned threads = 1;
  bool fixed_design = false;
};

// Writes to --out when given, stdout otherwise.
class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw selinf::ValidationError("cannot open output file '" + path + "'");
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }

 private:
  std::unique_ptr<std::ofstream> file_;
};

selinf::ExperimentConfig make_config(const Options& o) {
  selinf::ExperimentConfig c;
  c.n = o.n;
  c.p = o.p;
  c.k = o.k;
  c.snr_grid = o.snr;
  c.trials = o.trials;
  c.alpha_level = o.alpha;
  c.nominal_grid = o.nominal;
  c.seed = o.seed;
  c.procedure = selinf::parse_procedure(o.procedure);
  c.lambda = o.lambda;
  c.sigma2 = o.sigma2;
  c.threads = o.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : o.threads;
  c.fixed_design = o.fixed_design;
  return c;
}

void add_selection_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--procedure", o.procedure, "Selection procedure")
      ->check(CLI::IsMember({"ms", "omp", "nnls", "ms-lasso"}));
  cmd->add_option("--k", o.k, "Number of variables to select (ms, omp, ms-lasso)");
  cmd->add_option("--lambda", o.lambda, "Lasso penalty (ms-lasso)");
}

int run_screen(const Options& o) {
  selinf::Dataset data = selinf::load_csv(o.data, o.response);
  const selinf::Selection sel =
      selinf::run_selection(data, selinf::parse_procedure(o.procedure), o.k, o.lambda);
  Output out(o.out);
  out.stream() << selinf::model_record(sel.model, data, sel.event.row_count()).dump() << '\n';
  if (!o.event_csv.empty()) {
    Output dump(o.event_csv);
    selinf::write_event_csv(sel.event, dump.stream());
  }
  return 0;
}

int run_infer(const Options& o) {
  selinf::InferRequest req;
  req.dataset_path = o.data;
  req.response_column = o.response;
  req.procedure = selinf::parse_procedure(o.procedure);
  req.k = o.k;
  req.lambda = o.lambda;
  req.alpha_level = o.alpha;
  req.sigma2 = o.sigma2;
  const auto records = selinf::infer_command(req);
  Output out(o.out);
  for (const auto& r : records) out.stream() << r.dump() << '\n';
  return 0;
}

int run_simulate(const Options& o) {
  const auto table = selinf::run_coverage_experiment(make_config(o));
  Output out(o.out);
  selinf::write_coverage_csv(out.stream(), table);
  return 0;
}

int run_pivot_null(const Options& o) {
  const auto result = selinf::run_pivot_null_experiment(make_config(o));
  Output out(o.out);
  selinf::write_pivot_qq_csv(out.stream(), result.pivots);
  if (!o.hist.empty()) {
    Output hist(o.hist);
    selinf::write_pivot_histogram_csv(hist.stream(), result.pivots);
  }
  std::cerr << "pivots=" << result.pivots.size() << " ks_statistic=" << result.ks_statistic
            << " ks_pvalue=" << result.ks_pvalue << " failures=" << result.failures << '\n';
  return 0;
}

int run_bootstrap(const Options& o) {
  const auto table = selinf::run_residual_bootstrap(o.data, o.response, make_config(o));
  Output out(o.out);
  selinf::write_bootstrap_csv(out.stream(), table);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact post-selection inference for linear regression"};
  app.require_subcommand(1);
  Options o;
  double sigma2_flag = 0.0;

  auto* screen = app.add_subcommand("screen", "Run a selection procedure and print the model");
  auto* infer = app.add_subcommand("infer", "Selective p-values and intervals for selected coefficients");
  auto* simulate = app.add_subcommand("simulate-coverage", "Coverage of adjusted vs z intervals over SNR");
  auto* pivot = app.add_subcommand("pivot-null", "Null pivot sample (qq CSV) with a KS uniformity test");
  auto* boot = app.add_subcommand("bootstrap", "Residual-bootstrap coverage vs nominal level");

  for (auto* cmd : {screen, infer, boot}) {
    cmd->add_option("--data", o.data, "CSV file with a header row")->required()->check(CLI::ExistingFile);
    cmd->add_option("--response", o.response, "Name of the response column")->required();
  }
  for (auto* cmd : {screen, infer, simulate, pivot, boot}) {
    add_selection_flags(cmd, o);
    cmd->add_option("--out", o.out, "Output file (default stdout)");
  }
  for (auto* cmd : {infer, simulate, pivot, boot}) {
    cmd->add_option("--sigma2", sigma2_flag, "Noise variance (estimated when omitted and n > p)");
  }
  for (auto* cmd : {infer, simulate}) {
    cmd->add_option("--alpha", o.alpha, "Significance level");
  }
  for (auto* cmd : {simulate, pivot, boot}) {
    cmd->add_option("--trials", o.trials, "Trials (replications for bootstrap)");
    cmd->add_option("--seed", o.seed, "Random seed");
    cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  }
  for (auto* cmd : {simulate, pivot}) {
    cmd->add_option("--n", o.n, "Observations per simulated data set");
    cmd->add_option("--p", o.p, "Predictors per simulated data set");
    cmd->add_option("--snr", o.snr, "SNR values (pivot-null uses the first)")->delimiter(',');
    cmd->add_flag("--fixed-design", o.fixed_design, "Draw X once instead of per trial");
  }
  screen->add_option("--event-csv", o.event_csv, "Dump the selection event as CSV rows a_1..a_n,b");
  pivot->add_option("--hist", o.hist, "Also write a 20-bin histogram CSV here");
  boot->add_option("--nominal", o.nominal, "Nominal coverage levels")->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kValidationExit;
  }

  for (auto* cmd : {infer, simulate, pivot, boot}) {
    if (cmd->parsed() && cmd->count("--sigma2") > 0) o.sigma2 = sigma2_flag;
  }

  try {
    if (screen->parsed()) return run_screen(o);
    if (infer->parsed()) return run_infer(o);
    if (simulate->parsed()) return run_simulate(o);
    if (pivot->parsed()) return run_pivot_null(o);
    if (boot->parsed()) return run_bootstrap(o);
  } catch (const selinf::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidationExit;
  } catch (const selinf::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumericalExit;
  }
  return 0;
}
