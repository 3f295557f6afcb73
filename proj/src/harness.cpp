#include "selinf/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "selinf/csv.hpp"
#include "selinf/inference.hpp"
#include "selinf/oracle.hpp"
#include "selinf/random.hpp"
#include "selinf/truncnorm.hpp"

namespace selinf {

namespace {

constexpr std::uint64_t kDesignStream = 0x5eed'0000;
constexpr std::uint64_t kPivotStream = 0x5eed'1000;
constexpr std::uint64_t kBootstrapStream = 0x5eed'2000;

// Evaluates f(0..count-1) into a vector. Each index owns its slot, so the
// output is identical for any thread count.
template <typename Result, typename F>
std::vector<Result> run_indexed(std::size_t count, unsigned threads, F&& f) {
  std::vector<Result> results(count);
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) results[i] = f(i);
    return results;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  const unsigned workers = std::min<std::size_t>(threads, count);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          results[i] = f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
  return results;
}

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

struct TrialTally {
  std::size_t intervals = 0;
  std::size_t adjusted_covered = 0;
  std::size_t z_covered = 0;
  std::size_t failures = 0;
};

}  // namespace

void validate(const ExperimentConfig& c) {
  if (c.n < 1 || c.p < 1) throw ValidationError("config: n and p must be positive");
  if (c.k < 1 || c.k > std::min(c.n, c.p)) throw ValidationError("config: k outside [1, min(n, p)]");
  if (c.trials < 1) throw ValidationError("config: trials must be at least 1");
  if (c.snr_grid.empty()) throw ValidationError("config: SNR grid is empty");
  if (c.nominal_grid.empty()) throw ValidationError("config: nominal grid is empty");
  if (!(c.alpha_level > 0.0 && c.alpha_level < 1.0)) throw ValidationError("config: alpha outside (0, 1)");
  for (double level : c.nominal_grid) {
    if (!(level > 0.0 && level < 1.0)) throw ValidationError("config: nominal level outside (0, 1)");
  }
  if (c.sigma2 && !(*c.sigma2 > 0.0)) throw ValidationError("config: sigma2 must be positive");
  if (c.procedure == Procedure::MarginalScreeningLasso && !(c.lambda > 0.0)) {
    throw ValidationError("config: lambda must be positive");
  }
}

SimulatedData simulate_regression(const ExperimentConfig& config, double snr, std::size_t trial,
                                  std::uint64_t stream) {
  Rng design_rng(config.fixed_design ? derive_seed(config.seed, kDesignStream, 0)
                                     : derive_seed(config.seed, kDesignStream + stream, trial));
  Rng noise_rng(derive_seed(config.seed, stream, trial));
  const double sigma2 = config.sigma2.value_or(1.0);

  Matrix x = gaussian_matrix(config.n, config.p, design_rng);
  x.colwise().normalize();
  Vector beta0 = Vector::Zero(config.p);
  beta0.head(std::min<Index>(2, config.p)).setConstant(snr);
  Vector mu = x * beta0;
  Vector y = mu + std::sqrt(sigma2) * gaussian_vector(config.n, noise_rng);

  SimulatedData out{make_dataset(std::move(x), std::move(y), sigma2), std::move(beta0), std::move(mu)};
  return out;
}

double CoverageRow::adjusted_coverage() const { return ratio(adjusted_covered, intervals); }
double CoverageRow::z_coverage() const { return ratio(z_covered, intervals); }
double BootstrapRow::adjusted_coverage() const { return ratio(adjusted_covered, intervals); }
double BootstrapRow::z_coverage() const { return ratio(z_covered, intervals); }

std::vector<CoverageRow> run_coverage_experiment(const ExperimentConfig& config) {
  validate(config);
  std::vector<CoverageRow> table;
  for (std::size_t s = 0; s < config.snr_grid.size(); ++s) {
    const double snr = config.snr_grid[s];
    const auto tallies = run_indexed<TrialTally>(config.trials, config.threads, [&](std::size_t t) {
      const SimulatedData sim = simulate_regression(config, snr, t, s + 1);
      const Selection sel = run_selection(sim.data, config.procedure, config.k, config.lambda);
      TrialTally tally;
      for (Index j : sel.model.support) {
        try {
          const InferenceResult r = infer_coefficient(sim.data, sel.model, sel.event, j, config.alpha_level);
          const double target = r.truncation.eta.dot(sim.mu);
          ++tally.intervals;
          tally.adjusted_covered += r.interval.covers(target);
          tally.z_covered += r.z_interval.covers(target);
        } catch (const NumericalError&) {
          ++tally.failures;
        }
      }
      return tally;
    });

    CoverageRow row;
    row.snr = snr;
    row.trials = config.trials;
    for (const TrialTally& t : tallies) {
      row.intervals += t.intervals;
      row.adjusted_covered += t.adjusted_covered;
      row.z_covered += t.z_covered;
      row.failures += t.failures;
    }
    table.push_back(row);
  }
  return table;
}

PivotNullResult run_pivot_null_experiment(const ExperimentConfig& config) {
  validate(config);
  const double snr = config.snr_grid.front();
  struct Draw {
    double pivot = -1.0;
    bool failed = false;
  };
  const auto draws = run_indexed<Draw>(config.trials, config.threads, [&](std::size_t t) {
    const SimulatedData sim = simulate_regression(config, snr, t, kPivotStream);
    const Selection sel = run_selection(sim.data, config.procedure, config.k, config.lambda);
    Draw d;
    if (sel.model.support.empty()) return d;
    const Index j = sel.model.support[t % sel.model.support.size()];
    try {
      const Vector eta = eta_for_coefficient(sim.data, sel.model, j);
      const TruncationInterval tr = truncation_interval(sel.event, eta, noise_variance(sim.data), sim.data.y);
      d.pivot = tn_cdf({tr.observed, eta.dot(sim.mu), tr.scale, tr.v_minus, tr.v_plus});
    } catch (const NumericalError&) {
      d.failed = true;
    }
    return d;
  });

  PivotNullResult out;
  for (const Draw& d : draws) {
    if (d.failed) ++out.failures;
    if (d.pivot >= 0.0) out.pivots.push_back(d.pivot);
  }
  if (!out.pivots.empty()) {
    out.ks_statistic = oracle::ks_statistic(out.pivots, [](double u) { return u; });
    out.ks_pvalue = oracle::ks_pvalue(out.ks_statistic, static_cast<double>(out.pivots.size()));
  }
  return out;
}

std::vector<BootstrapRow> run_residual_bootstrap(const Dataset& data, const ExperimentConfig& config) {
  validate(config);
  if (data.n() <= data.p()) {
    throw NotEstimable("residual bootstrap needs n > p (n = " + std::to_string(data.n()) +
                       ", p = " + std::to_string(data.p()) + ")");
  }
  const ColumnSpace<double> full(data.x);
  const Vector fitted = full.project(data.y);
  Vector residuals = data.y - fitted;
  residuals.array() -= residuals.mean();
  const std::size_t levels = config.nominal_grid.size();

  struct Replicate {
    std::vector<TrialTally> per_level;
  };
  const auto reps = run_indexed<Replicate>(config.trials, config.threads, [&](std::size_t r) {
    Rng rng(derive_seed(config.seed, kBootstrapStream, r));
    std::uniform_int_distribution<Index> pick(0, data.n() - 1);
    Dataset boot;
    boot.x = data.x;
    boot.column_scales = data.column_scales;
    boot.names = data.names;
    boot.y = fitted;
    for (Index i = 0; i < data.n(); ++i) boot.y(i) += residuals(pick(rng));

    Replicate rep;
    rep.per_level.resize(levels);
    const double sigma2 = estimate_sigma2(boot);
    if (!(sigma2 > 1e-20 * boot.y.squaredNorm() / static_cast<double>(data.n()))) {
      // Noise-free replicate: every interval collapses onto its target.
      const Selection sel = run_selection(boot, config.procedure, config.k, config.lambda);
      for (auto& tally : rep.per_level) {
        tally.intervals += sel.model.support.size();
        tally.adjusted_covered += sel.model.support.size();
        tally.z_covered += sel.model.support.size();
      }
      return rep;
    }
    boot.sigma2 = sigma2;
    const Selection sel = run_selection(boot, config.procedure, config.k, config.lambda);
    for (Index j : sel.model.support) {
      try {
        const Vector eta = eta_for_coefficient(boot, sel.model, j);
        const TruncationInterval tr = truncation_interval(sel.event, eta, sigma2, boot.y);
        const double target = eta.dot(fitted);
        for (std::size_t l = 0; l < levels; ++l) {
          const double alpha = 1.0 - config.nominal_grid[l];
          TrialTally& tally = rep.per_level[l];
          try {
            const Interval adjusted{invert_pivot(tr.observed, tr.scale, tr.v_minus, tr.v_plus, 1.0 - alpha / 2.0),
                                    invert_pivot(tr.observed, tr.scale, tr.v_minus, tr.v_plus, alpha / 2.0)};
            const double half = normal_quantile(1.0 - alpha / 2.0) * std::sqrt(tr.scale);
            ++tally.intervals;
            tally.adjusted_covered += adjusted.covers(target);
            tally.z_covered += std::abs(tr.observed - target) <= half;
          } catch (const NumericalError&) {
            ++tally.failures;
          }
        }
      } catch (const NumericalError&) {
        for (auto& tally : rep.per_level) ++tally.failures;
      }
    }
    return rep;
  });

  std::vector<BootstrapRow> table(levels);
  for (std::size_t l = 0; l < levels; ++l) {
    table[l].nominal = config.nominal_grid[l];
    table[l].replications = config.trials;
    for (const Replicate& rep : reps) {
      table[l].intervals += rep.per_level[l].intervals;
      table[l].adjusted_covered += rep.per_level[l].adjusted_covered;
      table[l].z_covered += rep.per_level[l].z_covered;
      table[l].failures += rep.per_level[l].failures;
    }
  }
  return table;
}

std::vector<BootstrapRow> run_residual_bootstrap(const std::string& dataset_path,
                                                 const std::string& response_column,
                                                 const ExperimentConfig& config) {
  return run_residual_bootstrap(load_csv(dataset_path, response_column), config);
}

}  // namespace selinf
