#pragma once

#include <optional>
#include <string>
#include <vector>

#include "selinf/numerics.hpp"

namespace selinf {

/// Design with unit-norm columns, response, and (optionally known) noise
/// variance. `column_scales` holds the original column norms so coefficients
/// can be reported on the input scale: beta_original = beta / scale.
struct Dataset {
  Matrix x;
  Vector y;
  std::optional<double> sigma2;
  Vector column_scales;
  std::vector<std::string> names;

  Index n() const { return x.rows(); }
  Index p() const { return x.cols(); }
};

/// Normalizes the columns of x to unit norm, optionally centering x and y
/// first. Throws ConstantColumn for a column with zero norm after centering.
Dataset make_dataset(Matrix x, Vector y, std::optional<double> sigma2 = std::nullopt,
                     bool center = false, std::vector<std::string> names = {});

/// The noise variance, or ValidationError if none was supplied.
double noise_variance(const Dataset& data);

}  // namespace selinf
