#include "selinf/dataset.hpp"

#include <cmath>

namespace selinf {

Dataset make_dataset(Matrix x, Vector y, std::optional<double> sigma2, bool center,
                     std::vector<std::string> names) {
  if (x.rows() < 1 || x.cols() < 1) throw InvalidArgument("dataset: empty design");
  if (x.rows() != y.size()) throw DimensionMismatch("dataset: rows(X) != length(y)");
  if (!x.allFinite() || !y.allFinite()) throw InvalidArgument("dataset: non-finite entry");
  if (sigma2 && !(*sigma2 > 0.0 && std::isfinite(*sigma2))) {
    throw InvalidArgument("dataset: sigma2 must be positive");
  }
  if (names.empty()) {
    for (Index j = 0; j < x.cols(); ++j) names.push_back("x" + std::to_string(j));
  }
  if (static_cast<Index>(names.size()) != x.cols()) {
    throw DimensionMismatch("dataset: one name per column required");
  }
  const Vector raw_norms = x.colwise().norm().transpose();
  if (center) {
    x.rowwise() -= x.colwise().mean();
    y.array() -= y.mean();
  }

  Dataset data;
  data.column_scales = x.colwise().norm().transpose();
  for (Index j = 0; j < x.cols(); ++j) {
    if (!(data.column_scales(j) > 1e-12 * raw_norms(j))) {
      throw ConstantColumn("dataset: column '" + names[j] + "' is constant");
    }
    x.col(j) /= data.column_scales(j);
  }
  data.x = std::move(x);
  data.y = std::move(y);
  data.sigma2 = sigma2;
  data.names = std::move(names);
  return data;
}

double noise_variance(const Dataset& data) {
  if (!data.sigma2) throw ValidationError("noise variance sigma2 is required but was not set");
  return *data.sigma2;
}

}  // namespace selinf
