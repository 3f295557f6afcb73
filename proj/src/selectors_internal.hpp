#pragma once

#include <vector>

#include "selinf/selectors.hpp"

namespace selinf::detail {

Matrix select_columns(const Matrix& x, const std::vector<Index>& columns);

std::vector<Index> complement(Index p, const std::vector<Index>& support);

/// Throws if the model's indices or signs do not fit the data.
void check_model(const Dataset& data, const SelectedModel& model);

}  // namespace selinf::detail
