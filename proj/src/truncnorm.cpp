#include "selinf/truncnorm.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "selinf/errors.hpp"
#include "selinf/numerics.hpp"

namespace selinf {

namespace {

// Relative slack allowed for observed values sitting just outside the limits
// through rounding in eta^T y versus V-/V+.
constexpr double kObservedSlack = 1e-6;

}  // namespace

double tn_cdf(const PivotSpec& spec) {
  if (!(spec.variance > 0.0) || !std::isfinite(spec.variance)) {
    throw InvalidArgument("tn_cdf: variance must be positive and finite");
  }
  if (std::isnan(spec.mean) || std::isnan(spec.observed) || std::isnan(spec.lower) ||
      std::isnan(spec.upper)) {
    throw InvalidArgument("tn_cdf: NaN argument");
  }
  const double sd = std::sqrt(spec.variance);
  if (!(spec.upper - spec.lower >= 1e-14 * sd)) {
    std::ostringstream msg;
    msg << "tn_cdf: truncation interval [" << spec.lower << ", " << spec.upper
        << "] is numerically empty (sd " << sd << ")";
    throw DegenerateInterval(msg.str());
  }
  const double slack = kObservedSlack * sd;
  if (spec.observed < spec.lower - slack || spec.observed > spec.upper + slack) {
    std::ostringstream msg;
    msg << "tn_cdf: observed " << spec.observed << " outside [" << spec.lower << ", "
        << spec.upper << "]";
    throw InvalidArgument(msg.str());
  }
  if (spec.observed <= spec.lower) return 0.0;
  if (spec.observed >= spec.upper) return 1.0;

  const double za = (spec.lower - spec.mean) / sd;
  const double zb = (spec.upper - spec.mean) / sd;
  const double zx = (spec.observed - spec.mean) / sd;

  double value;
  if (za > kLogSpaceThreshold) {
    // Entire interval in the right tail: survival functions in log space.
    const double la = log_normal_sf(za);
    const double num = log_diff_exp(la, log_normal_sf(zx));
    const double den = log_diff_exp(la, log_normal_sf(zb));
    value = std::exp(num - den);
  } else if (zb < -kLogSpaceThreshold) {
    const double la = log_normal_cdf(za);
    const double num = log_diff_exp(log_normal_cdf(zx), la);
    const double den = log_diff_exp(log_normal_cdf(zb), la);
    value = std::exp(num - den);
  } else if (za > 0.0) {
    const double qa = normal_sf(za);
    value = (qa - normal_sf(zx)) / (qa - normal_sf(zb));
  } else {
    const double pa = normal_cdf(za);
    value = (normal_cdf(zx) - pa) / (normal_cdf(zb) - pa);
  }
  return std::clamp(value, 0.0, 1.0);
}

double invert_pivot(double observed, double variance, double lower, double upper,
                    double target) {
  if (!(target > 0.0 && target < 1.0)) {
    throw InvalidArgument("invert_pivot: target must lie in (0, 1)");
  }
  const double sd = std::sqrt(variance);
  auto excess = [&](double mean) {
    return tn_cdf({observed, mean, variance, lower, upper}) - target;
  };

  constexpr int kMaxDoublings = 60;
  auto fail = [&](const char* side, double at, double value) {
    std::ostringstream msg;
    msg << "invert_pivot: no sign change on the " << side << " side (observed " << observed
        << ", sd " << sd << ", limits [" << lower << ", " << upper << "], target " << target
        << ", last mean " << at << ", F - target " << value << ")";
    throw BracketFailure(msg.str());
  };

  // F decreases in the mean: need excess(lo) > 0 > excess(hi).
  double step = 10.0 * sd;
  double lo = observed - step;
  double f_lo = excess(lo);
  for (int i = 0; !(f_lo > 0.0); ++i) {
    if (i == kMaxDoublings || std::isnan(f_lo)) fail("lower", lo, f_lo);
    step *= 2.0;
    lo -= step;
    f_lo = excess(lo);
  }
  step = 10.0 * sd;
  double hi = observed + step;
  double f_hi = excess(hi);
  for (int i = 0; !(f_hi < 0.0); ++i) {
    if (i == kMaxDoublings || std::isnan(f_hi)) fail("upper", hi, f_hi);
    step *= 2.0;
    hi += step;
    f_hi = excess(hi);
  }

  const double tol = 1e-8 * sd;
  for (int i = 0; i < 400 && hi - lo > tol; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double f_mid = excess(mid);
    if (f_mid > 0.0) {
      lo = mid;
    } else if (f_mid < 0.0) {
      hi = mid;
    } else {
      return mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace selinf
