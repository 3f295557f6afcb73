#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "selinf/dataset.hpp"
#include "selinf/random.hpp"

// Small hand-rolled generators for the property tests.
namespace selinf::testing {

inline Dataset random_dataset(Index n, Index p, Rng& rng, double sigma2 = 1.0) {
  return make_dataset(gaussian_matrix(n, p, rng), gaussian_vector(n, rng), sigma2);
}

// y = X beta + noise with a few strong leading coefficients, so the selection
// is not always pure noise.
inline Dataset signal_dataset(Index n, Index p, Rng& rng, double strength, double sigma2 = 1.0) {
  Matrix x = gaussian_matrix(n, p, rng);
  for (Index j = 0; j < p; ++j) x.col(j).normalize();
  Vector beta = Vector::Zero(p);
  for (Index j = 0; j < std::min<Index>(2, p); ++j) beta(j) = strength;
  Vector y = x * beta + std::sqrt(sigma2) * gaussian_vector(n, rng);
  return make_dataset(std::move(x), std::move(y), sigma2);
}

inline double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline Index uniform_index(Rng& rng, Index lo, Index hi) {
  return std::uniform_int_distribution<Index>(lo, hi)(rng);
}

}  // namespace selinf::testing
