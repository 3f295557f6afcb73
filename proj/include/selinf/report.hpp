#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "selinf/harness.hpp"
#include "selinf/inference.hpp"

namespace selinf {

// Column layouts are frozen by golden-file tests; see README.

void write_coverage_csv(std::ostream& out, const std::vector<CoverageRow>& rows);
void write_bootstrap_csv(std::ostream& out, const std::vector<BootstrapRow>& rows);
/// rank,pivot,uniform_quantile with uniform_quantile = (rank - 0.5) / N.
void write_pivot_qq_csv(std::ostream& out, const std::vector<double>& pivots);
/// bin_lower,bin_upper,count,density over `bins` equal bins of [0, 1].
void write_pivot_histogram_csv(std::ostream& out, const std::vector<double>& pivots, int bins = 20);

/// JSON number, or the strings "inf" / "-inf" for infinite values.
nlohmann::ordered_json json_number(double v);

/// One JSON-lines record for a coefficient already on the reporting scale.
nlohmann::ordered_json inference_record(const InferenceResult& result, const std::string& name,
                                double sigma2);

/// Model summary printed by `selinf screen`.
nlohmann::ordered_json model_record(const SelectedModel& model, const Dataset& data, Index event_rows);

struct InferRequest {
  std::string dataset_path;
  std::string response_column;
  Procedure procedure = Procedure::MarginalScreening;
  Index k = 2;
  double lambda = 1.0;
  double alpha_level = 0.1;
  std::optional<double> sigma2;
};

/// Load, select, and infer every selected coefficient; one record each, with
/// coefficients reported on the original column scale. sigma2 defaults to
/// the full-model residual estimate (requires n > p).
std::vector<nlohmann::ordered_json> infer_command(const InferRequest& request);

}  // namespace selinf
