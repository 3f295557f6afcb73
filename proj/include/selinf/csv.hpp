#pragma once

#include <iosfwd>
#include <string>

#include "selinf/dataset.hpp"

namespace selinf {

/// Reads a comma-delimited numeric table with a header row. The column named
/// `response_column` becomes y; every other column goes into X. X columns and
/// y are centered, then X columns are scaled to unit norm (scales kept).
/// sigma2 is left unset.
///
/// Errors: ParseError (row/column reported, 1-based data rows), ConstantColumn.
Dataset load_csv(const std::string& path, const std::string& response_column);
Dataset read_csv(std::istream& in, const std::string& response_column,
                 const std::string& source = "<stream>");

}  // namespace selinf
