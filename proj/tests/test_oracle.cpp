#include <doctest.h>

#include <cmath>

#include "selinf/numerics.hpp"
#include "selinf/oracle.hpp"
#include "selinf/selectors.hpp"
#include "selinf/truncnorm.hpp"
#include "support.hpp"

using namespace selinf;
using selinf::testing::random_dataset;
using selinf::testing::uniform;

namespace {

SelectionEvent half_space(const Vector& a, double b) {
  return SelectionEvent::from_rows(a.transpose(), Vector::Constant(1, b));
}

}  // namespace

TEST_CASE("adaptive quadrature on closed-form integrals") {
  CHECK(oracle::integrate([](double x) { return std::sin(x); }, 0.0, M_PI) ==
        doctest::Approx(2.0).epsilon(1e-13));
  CHECK(oracle::integrate([](double x) { return std::exp(-x); }, 0.0, 50.0) ==
        doctest::Approx(1.0 - std::exp(-50.0)).epsilon(1e-13));
  CHECK(oracle::integrate([](double x) { return std::sqrt(x); }, 0.0, 1.0) ==
        doctest::Approx(2.0 / 3.0).epsilon(1e-10));
  CHECK(oracle::integrate([](double) { return 1.0; }, 2.0, 2.0) == 0.0);
}

TEST_CASE("quadrature truncated-normal cdf in the body of the distribution") {
  // closed form via erfc is safe here (no cancellation), giving a check on the oracle
  Rng rng(71);
  for (int rep = 0; rep < 100; ++rep) {
    const double a = uniform(rng, -3.0, 1.0);
    const double b = a + uniform(rng, 0.2, 3.0);
    const double x = uniform(rng, a, b);
    const double ref = (normal_cdf(x) - normal_cdf(a)) / (normal_cdf(b) - normal_cdf(a));
    CHECK(oracle::quadrature_tn_cdf(0.0, 1.0, a, b, x) == doctest::Approx(ref).epsilon(1e-11));
  }
  CHECK(oracle::quadrature_log_normal_cdf(0.0) == doctest::Approx(std::log(0.5)).epsilon(1e-12));
  CHECK(oracle::quadrature_log_normal_cdf(-10.0) ==
        doctest::Approx(-53.231285150512470578).epsilon(1e-11));
}

TEST_CASE("KS statistic and p-values") {
  // one-sample statistic by hand: points 0.1, 0.5, 0.9 against U(0,1)
  // F_n jumps to 1/3, 2/3, 1; sup |F_n - x| = max(0.1, 1/3-0.1, 0.5-1/3, 2/3-0.5, 0.9-2/3, 0.1)
  CHECK(oracle::ks_statistic({0.9, 0.1, 0.5}, [](double x) { return x; }) ==
        doctest::Approx(1.0 / 3.0 - 0.1));
  CHECK(oracle::ks_two_sample_statistic({1.0, 2.0, 3.0}, {1.5, 2.5, 3.5}) ==
        doctest::Approx(1.0 / 3.0));
  CHECK(oracle::ks_two_sample_statistic({1.0, 2.0}, {5.0, 6.0}) == doctest::Approx(1.0));
  // Kolmogorov tail at the classical 5% point for large n
  CHECK(oracle::ks_pvalue(1.3581 / std::sqrt(1e6), 1e6) == doctest::Approx(0.05).epsilon(2e-3));
  CHECK(oracle::ks_pvalue(0.0, 100.0) == doctest::Approx(1.0));
  CHECK(oracle::ks_pvalue(0.5, 100.0) < 1e-15);

  Rng rng(72);
  std::vector<double> u, shifted;
  for (int i = 0; i < 2000; ++i) {
    const double v = uniform(rng, 0.0, 1.0);
    u.push_back(v);
    shifted.push_back(std::min(1.0, v * 1.15));
  }
  CHECK(oracle::ks_uniform_pvalue(u) > 0.01);
  CHECK(oracle::ks_uniform_pvalue(shifted) < 1e-6);
  std::vector<double> u2;
  for (int i = 0; i < 1500; ++i) u2.push_back(uniform(rng, 0.0, 1.0));
  CHECK(oracle::ks_two_sample_pvalue(u, u2) > 0.01);
  CHECK(oracle::ks_two_sample_pvalue(u, shifted) < 1e-3);
}

TEST_CASE("KS p-values are uniform under the null") {
  // the calibration of the p-value itself: rejection rate at 5% should be ~5%
  Rng rng(73);
  int rejections = 0;
  const int reps = 2000;
  for (int r = 0; r < reps; ++r) {
    std::vector<double> u;
    for (int i = 0; i < 50; ++i) u.push_back(uniform(rng, 0.0, 1.0));
    if (oracle::ks_uniform_pvalue(u) < 0.05) ++rejections;
  }
  const double rate = static_cast<double>(rejections) / reps;
  CHECK(rate == doctest::Approx(0.05).epsilon(0.5).scale(1.0));
}

TEST_CASE("rejection sampler respects the event and its acceptance rate") {
  const Vector a = (Vector(2) << 1.0, 0.0).finished();
  const SelectionEvent event = half_space(a, -1.0);  // y1 <= -1
  oracle::RejectionSampler sampler{Vector::Zero(2), 1.0, event, 5};
  const oracle::ConditionalSample s = oracle::rejection_sample_conditional(sampler, 4000);
  REQUIRE(s.draws.cols() == 4000);
  CHECK(s.draws.row(0).maxCoeff() <= -1.0);
  // acceptance probability Phi(-1) = 0.1587
  CHECK(s.acceptance_rate() == doctest::Approx(normal_cdf(-1.0)).epsilon(0.05));
  // the first coordinate follows N(0,1) truncated to (-inf, -1]
  std::vector<double> first;
  for (Index c = 0; c < s.draws.cols(); ++c) first.push_back(s.draws(0, c));
  const double stat = oracle::ks_statistic(
      first, [](double x) { return std::min(1.0, normal_cdf(x) / normal_cdf(-1.0)); });
  CHECK(oracle::ks_pvalue(stat, 4000.0) > 0.01);
  // the second coordinate is untouched
  const double mean2 = s.draws.row(1).mean();
  CHECK(std::abs(mean2) < 4.0 / std::sqrt(4000.0));
}

TEST_CASE("rejection sampler reports hopeless acceptance") {
  const Vector a = (Vector(1) << 1.0).finished();
  const SelectionEvent event = half_space(a, -12.0);
  oracle::RejectionSampler sampler{Vector::Zero(1), 1.0, event, 6, 2'000'000};
  CHECK_THROWS_AS(oracle::rejection_sample_conditional(sampler, 10), AcceptanceTooLow);
}

TEST_CASE("line sampler reproduces the truncated normal") {
  Rng rng(74);
  const Dataset data = random_dataset(6, 4, rng);
  const SelectedModel m = marginal_screen(data, 2);
  const SelectionEvent event = encode_ms_event(data, m);
  const Vector eta = gaussian_vector(6, rng);
  const TruncationInterval t = truncation_interval(event, eta, 1.0, data.y);
  const Vector mean = Vector::Zero(6);
  const std::vector<double> draws =
      oracle::rejection_sample_line(event, eta, mean, 1.0, data.y, 7, 3000);
  REQUIRE(draws.size() == 3000);
  for (double d : draws) {
    CHECK(d >= t.v_minus - 1e-9);
    CHECK(d <= t.v_plus + 1e-9);
  }
  const double stat = oracle::ks_statistic(draws, [&](double x) {
    return oracle::quadrature_tn_cdf(0.0, t.scale, t.v_minus, t.v_plus,
                                     std::clamp(x, t.v_minus, t.v_plus));
  });
  CHECK(oracle::ks_pvalue(stat, 3000.0) > 0.001);
}

TEST_CASE("marginal screening regions partition the sample space") {
  Rng rng(75);
  const Dataset data = random_dataset(5, 4, rng);
  const Matrix samples = gaussian_matrix(5, 2000, rng);
  const oracle::PartitionReport report = oracle::enumerate_partition(data, 2, samples);
  CHECK(report.samples == 2000);
  CHECK(report.violations == 0);
  CHECK(report.skipped < 10);
}
