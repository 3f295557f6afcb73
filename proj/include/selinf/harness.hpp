#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "selinf/dataset.hpp"
#include "selinf/selectors.hpp"

namespace selinf {

struct ExperimentConfig {
  Index n = 20;
  Index p = 200;
  Index k = 2;
  std::vector<double> snr_grid{0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0};
  std::size_t trials = 500;
  double alpha_level = 0.1;
  std::vector<double> nominal_grid{0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 0.99};
  std::uint64_t seed = 0;
  Procedure procedure = Procedure::MarginalScreening;
  double lambda = 1.0;
  /// Noise variance for simulations (defaults to 1).
  std::optional<double> sigma2;
  /// Draw X once per experiment instead of once per trial.
  bool fixed_design = false;
  /// Worker threads; results do not depend on this.
  unsigned threads = 1;
};

/// Throws ValidationError on an unusable configuration.
void validate(const ExperimentConfig& config);

/// One simulated regression: unit-norm Gaussian design, beta0 = (snr, snr,
/// 0, ..., 0), y = X beta0 + N(0, sigma2 I).
struct SimulatedData {
  Dataset data;
  Vector beta0;
  Vector mu;
};

SimulatedData simulate_regression(const ExperimentConfig& config, double snr, std::size_t trial,
                                  std::uint64_t stream);

struct CoverageRow {
  double snr = 0.0;
  std::size_t trials = 0;
  std::size_t intervals = 0;
  std::size_t adjusted_covered = 0;
  std::size_t z_covered = 0;
  std::size_t failures = 0;  // coefficients skipped after a numerical error

  double adjusted_coverage() const;
  double z_coverage() const;
};

/// Coverage of selective and z intervals for beta*_{j in S} across SNR values.
std::vector<CoverageRow> run_coverage_experiment(const ExperimentConfig& config);

struct PivotNullResult {
  std::vector<double> pivots;
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  std::size_t failures = 0;
};

/// One pivot per trial, evaluated at the true beta* of a selected coefficient
/// (chosen round-robin over the support), at SNR = snr_grid.front().
PivotNullResult run_pivot_null_experiment(const ExperimentConfig& config);

struct BootstrapRow {
  double nominal = 0.0;
  std::size_t replications = 0;
  std::size_t intervals = 0;
  std::size_t adjusted_covered = 0;
  std::size_t z_covered = 0;
  std::size_t failures = 0;

  double adjusted_coverage() const;
  double z_coverage() const;
};

/// Residual bootstrap: y~ = X beta_hat + resampled centered residuals, with
/// sigma2 re-estimated on every replicate and the target beta* computed from
/// mu = X beta_hat. `config.trials` is the number of replications.
std::vector<BootstrapRow> run_residual_bootstrap(const Dataset& data, const ExperimentConfig& config);
std::vector<BootstrapRow> run_residual_bootstrap(const std::string& dataset_path,
                                                 const std::string& response_column,
                                                 const ExperimentConfig& config);

}  // namespace selinf
