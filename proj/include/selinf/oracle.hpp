#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "selinf/dataset.hpp"
#include "selinf/polytope.hpp"

// Brute-force references used by the tests. Nothing here shares code with the
// closed-form routines it checks: the quadrature never calls erfc, and the
// sampler never computes truncation limits.
namespace selinf::oracle {

struct RejectionSampler {
  Vector mean;
  double sigma2 = 1.0;
  SelectionEvent event;
  std::uint64_t seed = 0;
  std::size_t max_draws = 10'000'000;
};

struct ConditionalSample {
  Matrix draws;  // n x count, one accepted draw per column
  std::size_t proposals = 0;

  double acceptance_rate() const {
    return proposals == 0 ? 0.0 : static_cast<double>(draws.cols()) / static_cast<double>(proposals);
  }
};

/// i.i.d. draws of y ~ N(mean, sigma2 I) conditioned on the event, by
/// proposing from the unconstrained law. Throws AcceptanceTooLow when fewer
/// than `count` draws are accepted within max_draws proposals, or when the
/// running acceptance rate drops below 1e-6 after 1e6 proposals.
ConditionalSample rejection_sample_conditional(const RejectionSampler& sampler,
                                               std::size_t count);

/// Draws of eta^T y with the component of `anchor` orthogonal to eta held
/// fixed: t ~ N(eta^T mean, sigma2 ||eta||^2) accepted when
/// anchor + (t - eta^T anchor) eta / ||eta||^2 lies in the event.
std::vector<double> rejection_sample_line(const SelectionEvent& event, const Vector& eta,
                                          const Vector& mean, double sigma2,
                                          const Vector& anchor, std::uint64_t seed,
                                          std::size_t count, std::size_t max_draws = 10'000'000);

/// Adaptive Gauss-Kronrod (7/15) integral of f over [a, b] (finite).
double integrate(const std::function<double(double)>& f, double a, double b,
                 double rel_tol = 1e-13);

/// Truncated-normal CDF by quadrature of the density. Relative error <= 1e-10.
double quadrature_tn_cdf(double mean, double variance, double lower, double upper, double x);

/// log Phi(x) by quadrature of the standard normal density over (-inf, x].
double quadrature_log_normal_cdf(double x);

struct PartitionReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;     // within tie tolerance of a region boundary
  std::size_t violations = 0;  // contained in zero or several regions, or the wrong one
  std::vector<std::size_t> violating_samples;
  std::vector<std::size_t> skipped_samples;
};

/// For each column of `samples`, counts how many of the C(p, k) 2^k
/// marginal-screening regions contain it and checks that the only one is the
/// region of the model actually selected. Samples whose k-th and (k+1)-th
/// |x_j^T y| (or any selected |x_j^T y| and zero) are within `tie_tol` are
/// skipped. Intended for p <= 10, k <= 2.
PartitionReport enumerate_partition(const Dataset& data, Index k, const Matrix& samples,
                                    double tie_tol = 1e-9);

/// One-sample Kolmogorov-Smirnov statistic sup |F_n - cdf|.
double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf);
/// Two-sample statistic sup |F_n - G_m|.
double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b);
/// Asymptotic p-value with Stephens' small-sample correction; `n_eff` is n
/// for one sample and n m / (n + m) for two.
double ks_pvalue(double statistic, double n_eff);

double ks_uniform_pvalue(const std::vector<double>& values);
double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace selinf::oracle
