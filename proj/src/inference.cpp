#include "selinf/inference.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selectors_internal.hpp"
#include "selinf/truncnorm.hpp"

namespace selinf {

namespace {

Index position_in_support(const SelectedModel& model, Index column) {
  const auto it = std::find(model.support.begin(), model.support.end(), column);
  if (it == model.support.end()) {
    throw InvalidArgument("column " + std::to_string(column) + " is not in the selected model");
  }
  return it - model.support.begin();
}

void check_alpha(double alpha_level) {
  if (!(alpha_level > 0.0 && alpha_level < 1.0)) {
    throw InvalidArgument("alpha level must lie in (0, 1)");
  }
}

}  // namespace

Vector eta_for_coefficient(const Dataset& data, const SelectedModel& model, Index column) {
  detail::check_model(data, model);
  const Index pos = position_in_support(model, column);
  const Matrix xs = detail::select_columns(data.x, model.support);
  return pseudoinverse_apply(xs.transpose(), Vector::Unit(model.size(), pos));
}

double selective_pivot(const Dataset& data, const SelectedModel& model,
                       const SelectionEvent& event, Index column, double hypothesized) {
  const Vector eta = eta_for_coefficient(data, model, column);
  const TruncationInterval t = truncation_interval(event, eta, noise_variance(data), data.y);
  return tn_cdf({t.observed, hypothesized, t.scale, t.v_minus, t.v_plus});
}

Decision hypothesis_test(const Dataset& data, const SelectedModel& model,
                         const SelectionEvent& event, Index column, double beta_j,
                         double alpha_level) {
  check_alpha(alpha_level);
  const double pivot = selective_pivot(data, model, event, column, beta_j);
  const bool accept = alpha_level / 2.0 < pivot && pivot < 1.0 - alpha_level / 2.0;
  return accept ? Decision::Accept : Decision::Reject;
}

Interval confidence_interval(const Dataset& data, const SelectedModel& model,
                             const SelectionEvent& event, Index column, double alpha_level) {
  check_alpha(alpha_level);
  const Vector eta = eta_for_coefficient(data, model, column);
  const TruncationInterval t = truncation_interval(event, eta, noise_variance(data), data.y);
  return {invert_pivot(t.observed, t.scale, t.v_minus, t.v_plus, 1.0 - alpha_level / 2.0),
          invert_pivot(t.observed, t.scale, t.v_minus, t.v_plus, alpha_level / 2.0)};
}

Interval z_interval(const Dataset& data, const SelectedModel& model, Index column,
                    double alpha_level) {
  check_alpha(alpha_level);
  // ||eta_j||^2 = (X_S^T X_S)^{-1}_jj and eta_j^T y = beta_hat_j.
  const Vector eta = eta_for_coefficient(data, model, column);
  const double beta_hat = eta.dot(data.y);
  const double half = std::sqrt(noise_variance(data)) * normal_quantile(1.0 - alpha_level / 2.0) *
                      eta.norm();
  return {beta_hat - half, beta_hat + half};
}

double estimate_sigma2(const Dataset& data) {
  if (data.n() <= data.p()) {
    throw NotEstimable("estimate_sigma2: need n > p (n = " + std::to_string(data.n()) +
                       ", p = " + std::to_string(data.p()) + "); supply sigma2");
  }
  const ColumnSpace<double> span(data.x);
  return span.residual(data.y).squaredNorm() / static_cast<double>(data.n() - data.p());
}

InferenceResult infer_coefficient(const Dataset& data, const SelectedModel& model,
                                  const SelectionEvent& event, Index column,
                                  double alpha_level) {
  check_alpha(alpha_level);
  const double sigma2 = noise_variance(data);
  InferenceResult r;
  r.coefficient_index = column;
  r.alpha_level = alpha_level;
  r.truncation = truncation_interval(event, eta_for_coefficient(data, model, column), sigma2, data.y);
  const TruncationInterval& t = r.truncation;
  r.beta_hat = t.observed;
  r.pivot = tn_cdf({t.observed, 0.0, t.scale, t.v_minus, t.v_plus});
  // upper tail by reflection, so small p-values survive when the pivot rounds to 1
  const double upper = tn_cdf({-t.observed, 0.0, t.scale, -t.v_plus, -t.v_minus});
  r.p_value = std::min(1.0, 2.0 * std::min(r.pivot, upper));
  r.interval = {invert_pivot(t.observed, t.scale, t.v_minus, t.v_plus, 1.0 - alpha_level / 2.0),
                invert_pivot(t.observed, t.scale, t.v_minus, t.v_plus, alpha_level / 2.0)};
  const double half = normal_quantile(1.0 - alpha_level / 2.0) * std::sqrt(t.scale);
  r.z_interval = {t.observed - half, t.observed + half};
  return r;
}

std::vector<InferenceResult> infer_model(const Dataset& data, const SelectedModel& model,
                                         const SelectionEvent& event, double alpha_level) {
  std::vector<InferenceResult> out;
  out.reserve(model.support.size());
  for (Index j : model.support) out.push_back(infer_coefficient(data, model, event, j, alpha_level));
  return out;
}

InferenceResult to_original_scale(InferenceResult r, double scale) {
  if (!(scale > 0.0)) throw InvalidArgument("to_original_scale: scale must be positive");
  r.beta_hat /= scale;
  r.interval = {r.interval.lower / scale, r.interval.upper / scale};
  r.z_interval = {r.z_interval.lower / scale, r.z_interval.upper / scale};
  r.truncation.v_minus /= scale;
  r.truncation.v_plus /= scale;
  r.truncation.observed /= scale;
  r.truncation.eta /= scale;
  r.truncation.scale /= scale * scale;
  return r;
}

}  // namespace selinf
