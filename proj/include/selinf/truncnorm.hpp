#pragma once

namespace selinf {

/// Arguments of the truncated-normal CDF F_{mean,variance}^{[lower,upper]}(observed).
struct PivotSpec {
  double observed = 0.0;
  double mean = 0.0;
  double variance = 1.0;
  double lower = 0.0;
  double upper = 0.0;
};

/// Standardized offsets beyond which the CDF is evaluated from log tails.
inline constexpr double kLogSpaceThreshold = 6.0;

/// CDF of N(mean, variance) truncated to [lower, upper], evaluated at
/// `observed`. Both tails are handled in log space once the truncation
/// interval sits more than six standard deviations from the mean.
///
/// Throws DegenerateInterval when upper - lower < 1e-14 * sqrt(variance).
double tn_cdf(const PivotSpec& spec);

/// The mean x at which tn_cdf({observed, x, variance, lower, upper}) equals
/// `target`. The CDF is strictly decreasing in the mean, so the root is
/// bracketed by doubling outward from observed -/+ 10 sd (at most 60
/// doublings) and refined by bisection to 1e-8 sd.
///
/// Throws BracketFailure when no sign change is found.
double invert_pivot(double observed, double variance, double lower, double upper, double target);

}  // namespace selinf
