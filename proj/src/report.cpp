#include "selinf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "selinf/csv.hpp"

namespace selinf {

namespace {

std::string format(const char* fmt, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, v);
  return buf;
}

}  // namespace

void write_coverage_csv(std::ostream& out, const std::vector<CoverageRow>& rows) {
  out << "snr,trials,intervals,adjusted_covered,adjusted_coverage,z_covered,z_coverage,failures\n";
  for (const CoverageRow& r : rows) {
    out << format("%.6g", r.snr) << ',' << r.trials << ',' << r.intervals << ','
        << r.adjusted_covered << ',' << format("%.6f", r.adjusted_coverage()) << ','
        << r.z_covered << ',' << format("%.6f", r.z_coverage()) << ',' << r.failures << '\n';
  }
}

void write_bootstrap_csv(std::ostream& out, const std::vector<BootstrapRow>& rows) {
  out << "nominal,replications,intervals,adjusted_covered,adjusted_coverage,z_covered,z_coverage,"
         "failures\n";
  for (const BootstrapRow& r : rows) {
    out << format("%.6g", r.nominal) << ',' << r.replications << ',' << r.intervals << ','
        << r.adjusted_covered << ',' << format("%.6f", r.adjusted_coverage()) << ','
        << r.z_covered << ',' << format("%.6f", r.z_coverage()) << ',' << r.failures << '\n';
  }
}

void write_pivot_qq_csv(std::ostream& out, const std::vector<double>& pivots) {
  std::vector<double> sorted = pivots;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  out << "rank,pivot,uniform_quantile\n";
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    out << (i + 1) << ',' << format("%.10f", sorted[i]) << ','
        << format("%.10f", (static_cast<double>(i) + 0.5) / n) << '\n';
  }
}

void write_pivot_histogram_csv(std::ostream& out, const std::vector<double>& pivots, int bins) {
  std::vector<std::size_t> counts(static_cast<std::size_t>(bins), 0);
  for (double u : pivots) {
    const int b = std::clamp(static_cast<int>(u * bins), 0, bins - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  const double n = static_cast<double>(pivots.size());
  out << "bin_lower,bin_upper,count,density\n";
  for (int b = 0; b < bins; ++b) {
    const double lo = static_cast<double>(b) / bins;
    const double hi = static_cast<double>(b + 1) / bins;
    const double density = n == 0.0 ? 0.0 : static_cast<double>(counts[static_cast<std::size_t>(b)]) / (n * (hi - lo));
    out << format("%.4f", lo) << ',' << format("%.4f", hi) << ',' << counts[static_cast<std::size_t>(b)]
        << ',' << format("%.6f", density) << '\n';
  }
}

nlohmann::ordered_json json_number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return nullptr;
  return v;
}

nlohmann::ordered_json inference_record(const InferenceResult& r, const std::string& name, double sigma2) {
  nlohmann::ordered_json out;
  out["index"] = r.coefficient_index;
  out["name"] = name;
  out["beta_hat"] = json_number(r.beta_hat);
  out["pivot"] = json_number(r.pivot);
  out["p_value"] = json_number(r.p_value);
  out["L"] = json_number(r.interval.lower);
  out["U"] = json_number(r.interval.upper);
  out["z_lo"] = json_number(r.z_interval.lower);
  out["z_hi"] = json_number(r.z_interval.upper);
  out["v_minus"] = json_number(r.truncation.v_minus);
  out["v_plus"] = json_number(r.truncation.v_plus);
  out["eta_norm"] = json_number(r.truncation.eta.norm());
  out["sigma2"] = json_number(sigma2);
  out["alpha"] = json_number(r.alpha_level);
  return out;
}

nlohmann::ordered_json model_record(const SelectedModel& model, const Dataset& data, Index event_rows) {
  nlohmann::ordered_json out;
  out["procedure"] = std::string(to_string(model.procedure));
  out["support"] = model.support;
  std::vector<std::string> names;
  for (Index j : model.support) names.push_back(data.names[static_cast<std::size_t>(j)]);
  out["names"] = names;
  out["signs"] = model.signs;
  if (!model.screened.empty()) out["screened"] = model.screened;
  out["event_rows"] = event_rows;
  return out;
}

std::vector<nlohmann::ordered_json> infer_command(const InferRequest& request) {
  if (request.sigma2 && !(*request.sigma2 > 0.0 && std::isfinite(*request.sigma2))) {
    throw InvalidArgument("sigma2 must be positive and finite");
  }
  Dataset data = load_csv(request.dataset_path, request.response_column);
  data.sigma2 = request.sigma2 ? *request.sigma2 : estimate_sigma2(data);
  const Selection sel = run_selection(data, request.procedure, request.k, request.lambda);
  std::vector<nlohmann::ordered_json> records;
  for (const InferenceResult& r : infer_model(data, sel.model, sel.event, request.alpha_level)) {
    const auto j = static_cast<std::size_t>(r.coefficient_index);
    records.push_back(inference_record(to_original_scale(r, data.column_scales(r.coefficient_index)),
                                       data.names[j], *data.sigma2));
  }
  return records;
}

}  // namespace selinf
