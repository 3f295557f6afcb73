#include "selinf/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "selinf/random.hpp"
#include "selinf/selectors.hpp"

namespace selinf::oracle {

namespace {

constexpr double kKronrodNodes[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for the odd Kronrod nodes 1, 3, 5, 7.
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Rule {
  double kronrod;
  double error;
};

Rule gauss_kronrod(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(mid);
  double k = kKronrodWeights[7] * fc;
  double g = kGaussWeights[3] * fc;
  for (int i = 0; i < 7; ++i) {
    const double dx = half * kKronrodNodes[i];
    const double s = f(mid - dx) + f(mid + dx);
    k += kKronrodWeights[i] * s;
    if (i % 2 == 1) g += kGaussWeights[i / 2] * s;
  }
  return {k * half, std::abs((k - g) * half)};
}

double adaptive(const std::function<double(double)>& f, double a, double b, double abs_tol,
                double total_width, int depth) {
  const Rule r = gauss_kronrod(f, a, b);
  const double local_tol = std::max(abs_tol * (b - a) / total_width,
                                    50.0 * std::numeric_limits<double>::epsilon() * std::abs(r.kronrod));
  if (r.error <= local_tol || depth >= 60) return r.kronrod;
  const double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, abs_tol, total_width, depth + 1) +
         adaptive(f, mid, b, abs_tol, total_width, depth + 1);
}

double kolmogorov_survival(double lambda) {
  if (lambda <= 0.0) return 1.0;
  if (lambda < 1.18) {
    const double c = std::numbers::pi * std::numbers::pi / (8.0 * lambda * lambda);
    double sum = 0.0;
    for (int k = 1; k <= 20; ++k) {
      const double m = 2.0 * k - 1.0;
      sum += std::exp(-m * m * c);
    }
    return std::clamp(1.0 - std::sqrt(2.0 * std::numbers::pi) / lambda * sum, 0.0, 1.0);
  }
  double sum = 0.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += (k % 2 == 1 ? term : -term);
    if (term < 1e-300) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

ConditionalSample rejection_sample_conditional(const RejectionSampler& sampler,
                                               std::size_t count) {
  const Index n = sampler.event.dim();
  if (sampler.mean.size() != n) throw DimensionMismatch("rejection sampler: mean has wrong length");
  if (!(sampler.sigma2 > 0.0)) throw InvalidArgument("rejection sampler: sigma2 must be positive");

  Rng rng(sampler.seed);
  const double sd = std::sqrt(sampler.sigma2);
  ConditionalSample out;
  out.draws.resize(n, static_cast<Index>(count));
  std::size_t accepted = 0;
  while (accepted < count) {
    if (out.proposals >= sampler.max_draws) {
      throw AcceptanceTooLow("rejection sampler: accepted " + std::to_string(accepted) + " of " +
                             std::to_string(count) + " after " + std::to_string(out.proposals) +
                             " proposals");
    }
    if (out.proposals >= 1'000'000 &&
        static_cast<double>(accepted) < 1e-6 * static_cast<double>(out.proposals)) {
      throw AcceptanceTooLow("rejection sampler: acceptance rate below 1e-6");
    }
    ++out.proposals;
    Vector y = sampler.mean + sd * gaussian_vector(n, rng);
    if (min_slack(sampler.event, y) >= 0.0) {
      out.draws.col(static_cast<Index>(accepted++)) = y;
    }
  }
  return out;
}

std::vector<double> rejection_sample_line(const SelectionEvent& event, const Vector& eta,
                                          const Vector& mean, double sigma2,
                                          const Vector& anchor, std::uint64_t seed,
                                          std::size_t count, std::size_t max_draws) {
  const double norm2 = eta.squaredNorm();
  if (!(norm2 > 0.0)) throw ZeroContrast("rejection_sample_line: eta = 0");
  const Vector direction = eta / norm2;
  const Vector orthogonal = anchor - direction * eta.dot(anchor);
  const double center = eta.dot(mean);
  const double sd = std::sqrt(sigma2 * norm2);

  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> out;
  out.reserve(count);
  std::size_t proposals = 0;
  while (out.size() < count) {
    if (++proposals > max_draws) {
      throw AcceptanceTooLow("rejection_sample_line: accepted " + std::to_string(out.size()) +
                             " after " + std::to_string(max_draws) + " proposals");
    }
    const double t = center + sd * normal(rng);
    if (min_slack(event, Vector(orthogonal + t * direction)) >= 0.0) out.push_back(t);
  }
  return out;
}

double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol) {
  if (!(b > a)) return 0.0;
  const Rule coarse = gauss_kronrod(f, a, b);
  const double scale = std::max(std::abs(coarse.kronrod), std::numeric_limits<double>::min());
  return adaptive(f, a, b, rel_tol * scale, b - a, 0);
}

double quadrature_tn_cdf(double mean, double variance, double lower, double upper, double x) {
  if (!(lower < upper)) throw InvalidArgument("quadrature_tn_cdf: need lower < upper");
  if (x <= lower) return 0.0;
  if (x >= upper) return 1.0;
  const double sd = std::sqrt(variance);
  // Density relative to its maximum over [lower, upper], so tails do not underflow.
  const double peak = std::clamp(mean, lower, upper);
  const double peak_offset = (peak - mean) * (peak - mean);
  auto density = [&](double t) {
    return std::exp(-((t - mean) * (t - mean) - peak_offset) / (2.0 * variance));
  };
  // Beyond 40 sd from the peak the relative density is below exp(-800).
  const double lo = std::max(lower, peak - 40.0 * sd);
  const double hi = std::min(upper, peak + 40.0 * sd);
  auto piece = [&](double a, double b) {
    if (!(b > a)) return 0.0;
    if (a < peak && peak < b) return integrate(density, a, peak) + integrate(density, peak, b);
    return integrate(density, a, b);
  };
  const double total = piece(lo, hi);
  const double upto = piece(lo, std::clamp(x, lo, hi));
  return std::clamp(upto / total, 0.0, 1.0);
}

double quadrature_log_normal_cdf(double x) {
  if (x > 0.0) return std::log1p(-std::exp(quadrature_log_normal_cdf(-x)));
  // Phi(x) = exp(-x^2/2) / sqrt(2 pi) * int_{-inf}^{x} exp(-(t^2 - x^2)/2) dt
  auto shifted = [x](double t) { return std::exp(-0.5 * (t * t - x * x)); };
  const double lo = x - 40.0;
  const double integral = integrate(shifted, lo, x, 1e-15);
  return std::log(integral) - 0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

PartitionReport enumerate_partition(const Dataset& data, Index k, const Matrix& samples,
                                    double tie_tol) {
  const Index p = data.p();
  if (k < 1 || k > std::min(p, data.n())) throw InvalidArgument("enumerate_partition: bad k");
  if (samples.rows() != data.n()) throw DimensionMismatch("enumerate_partition: sample length != n");

  struct Region {
    std::vector<Index> support;  // ascending
    std::vector<int> signs;
    SelectionEvent event;
  };
  std::vector<Region> regions;
  std::vector<Index> subset(static_cast<std::size_t>(k));
  // Enumerate k-subsets in lexicographic order, then all sign patterns.
  std::vector<bool> pick(static_cast<std::size_t>(p), false);
  std::fill(pick.begin(), pick.begin() + k, true);
  do {
    std::vector<Index> support;
    for (Index j = 0; j < p; ++j) {
      if (pick[static_cast<std::size_t>(j)]) support.push_back(j);
    }
    for (unsigned mask = 0; mask < (1u << k); ++mask) {
      SelectedModel model;
      model.support = support;
      for (Index i = 0; i < k; ++i) model.signs.push_back((mask >> i) & 1u ? -1 : 1);
      SelectionEvent event = encode_ms_event(data, model);
      regions.push_back({support, model.signs, std::move(event)});
    }
  } while (std::prev_permutation(pick.begin(), pick.end()));

  PartitionReport report;
  Dataset probe = data;
  for (Index s = 0; s < samples.cols(); ++s) {
    ++report.samples;
    probe.y = samples.col(s);
    Vector corr = (data.x.transpose() * probe.y).cwiseAbs();
    std::vector<double> sorted(corr.data(), corr.data() + corr.size());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    const bool tie = (k < p && sorted[static_cast<std::size_t>(k - 1)] - sorted[static_cast<std::size_t>(k)] < tie_tol) ||
                     sorted[static_cast<std::size_t>(k - 1)] < tie_tol;
    if (tie) {
      ++report.skipped;
      report.skipped_samples.push_back(static_cast<std::size_t>(s));
      continue;
    }

    SelectedModel own = marginal_screen(probe, k);
    std::vector<std::pair<Index, int>> own_pairs;
    for (std::size_t i = 0; i < own.support.size(); ++i) own_pairs.emplace_back(own.support[i], own.signs[i]);
    std::sort(own_pairs.begin(), own_pairs.end());

    std::size_t hits = 0;
    bool own_hit = false;
    for (const Region& r : regions) {
      if (min_slack(r.event, probe.y) < 0.0) continue;
      ++hits;
      std::vector<std::pair<Index, int>> pairs;
      for (std::size_t i = 0; i < r.support.size(); ++i) pairs.emplace_back(r.support[i], r.signs[i]);
      own_hit = own_hit || pairs == own_pairs;
    }
    if (hits != 1 || !own_hit) {
      ++report.violations;
      report.violating_samples.push_back(static_cast<std::size_t>(s));
    }
  }
  return report;
}

double ks_statistic(std::vector<double> values, const std::function<double(double)>& cdf) {
  if (values.empty()) throw InvalidArgument("ks_statistic: no values");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw InvalidArgument("ks_two_sample_statistic: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double v = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= v) ++i;
    while (j < b.size() && b[j] <= v) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

double ks_pvalue(double statistic, double n_eff) {
  const double root = std::sqrt(n_eff);
  return kolmogorov_survival((root + 0.12 + 0.11 / root) * statistic);
}

double ks_uniform_pvalue(const std::vector<double>& values) {
  const double d = ks_statistic(values, [](double u) { return std::clamp(u, 0.0, 1.0); });
  return ks_pvalue(d, static_cast<double>(values.size()));
}

double ks_two_sample_pvalue(const std::vector<double>& a, const std::vector<double>& b) {
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  return ks_pvalue(ks_two_sample_statistic(a, b), na * nb / (na + nb));
}

}  // namespace selinf::oracle
