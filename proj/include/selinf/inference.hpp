#pragma once

#include <vector>

#include "selinf/dataset.hpp"
#include "selinf/polytope.hpp"
#include "selinf/selectors.hpp"

namespace selinf {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  bool covers(double v) const { return lower <= v && v <= upper; }
  double width() const { return upper - lower; }
};

enum class Decision { Accept, Reject };

/// Contrast eta_j with eta_j^T mu equal to coefficient j of the projection of
/// mu onto the selected columns: eta_j = (X_S^T)^+ e_j. `column` is an
/// original column index and must belong to the support.
Vector eta_for_coefficient(const Dataset& data, const SelectedModel& model, Index column);

/// F_{hypothesized, sigma^2 ||eta||^2}^{[V-, V+]}(eta^T y).
double selective_pivot(const Dataset& data, const SelectedModel& model,
                       const SelectionEvent& event, Index column, double hypothesized);

/// Accepts H0: beta*_j = beta_j iff alpha/2 < pivot < 1 - alpha/2.
Decision hypothesis_test(const Dataset& data, const SelectedModel& model,
                         const SelectionEvent& event, Index column, double beta_j,
                         double alpha_level);

/// Equal-tailed selective interval [L, U] with F_L = 1 - alpha/2, F_U = alpha/2.
Interval confidence_interval(const Dataset& data, const SelectedModel& model,
                             const SelectionEvent& event, Index column, double alpha_level);

/// Unadjusted interval beta_hat_j +/- sigma z_{1-alpha/2} sqrt((X_S^T X_S)^{-1}_jj).
Interval z_interval(const Dataset& data, const SelectedModel& model, Index column,
                    double alpha_level);

/// ||y - X beta_hat||^2 / (n - p) from the full least-squares fit.
/// Throws NotEstimable when n <= p.
double estimate_sigma2(const Dataset& data);

/// Everything reported for one selected coefficient. Values are on the
/// internal (unit-norm column) scale; see to_original_scale.
struct InferenceResult {
  Index coefficient_index = 0;
  double beta_hat = 0.0;
  double pivot = 0.0;    // at H0: beta*_j = 0
  double p_value = 1.0;  // 2 min(pivot, 1 - pivot), upper tail computed directly
  Interval interval;
  Interval z_interval;
  double alpha_level = 0.1;
  TruncationInterval truncation;
};

/// Full inference for one selected coefficient, sharing eta and the
/// truncation limits across the pivot, test, and both intervals.
InferenceResult infer_coefficient(const Dataset& data, const SelectedModel& model,
                                  const SelectionEvent& event, Index column,
                                  double alpha_level);

std::vector<InferenceResult> infer_model(const Dataset& data, const SelectedModel& model,
                                         const SelectionEvent& event, double alpha_level);

/// Divides coefficient-valued fields (beta_hat, intervals, V-/V+, eta) by
/// `scale`; the truncated-normal variance is divided by scale^2.
InferenceResult to_original_scale(InferenceResult result, double scale);

}  // namespace selinf
