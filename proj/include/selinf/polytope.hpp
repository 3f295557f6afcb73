#pragma once

#include <iosfwd>
#include <variant>
#include <vector>

#include "selinf/numerics.hpp"

namespace selinf {

/// Rows a_j^T y <= b_j stored as a dense matrix.
struct ExplicitRows {
  Matrix a;
  Vector b;
};

/// One row of an implicit block: (c1 m_{i1} + c2 m_{i2})^T y <= bound, where
/// m_i is row i of the block's functional matrix. `second < 0` means the row
/// uses only the first functional.
struct PairRow {
  Index first = 0;
  double first_coef = 1.0;
  Index second = -1;
  double second_coef = 0.0;
  double bound = 0.0;
};

/// Rows generated from a stored matrix of linear functionals (for example
/// X^T or X^T (I - P)). Evaluating every row against y and eta costs two
/// matrix-vector products plus O(1) per row.
struct ImplicitRows {
  Matrix functionals;  // m x n
  std::vector<PairRow> rows;
};

using RowBlock = std::variant<ExplicitRows, ImplicitRows>;

/// A polyhedral selection event {y : A y <= b} in R^n, stored as a list of
/// explicit or implicit row blocks.
class SelectionEvent {
 public:
  explicit SelectionEvent(Index dim = 0) : dim_(dim) {}

  static SelectionEvent from_rows(Matrix a, Vector b);

  void add(ExplicitRows block);
  void add(ImplicitRows block);

  Index dim() const { return dim_; }
  Index row_count() const { return row_count_; }
  bool empty() const { return row_count_ == 0; }
  const std::vector<RowBlock>& blocks() const { return blocks_; }

  /// Materialize every row in block order.
  ExplicitRows to_explicit() const;

 private:
  Index dim_ = 0;
  Index row_count_ = 0;
  std::vector<RowBlock> blocks_;
};

/// True iff A y <= b + tol * (1 + ||y||) holds row-wise.
bool contains(const SelectionEvent& event, const Vector& y, double tol);

/// Smallest slack min_j (b_j - a_j^T y); +inf for an event without rows.
double min_slack(const SelectionEvent& event, const Vector& y);

/// Row concatenation of two events on the same ambient space.
SelectionEvent compose_events(const SelectionEvent& first, const SelectionEvent& second);

/// The range of eta^T y compatible with the event, holding the component of
/// y orthogonal to eta fixed.
struct TruncationInterval {
  double v_minus = -kInf;
  double v_plus = kInf;
  double v_zero = kInf;
  double observed = 0.0;  // eta^T y
  double scale = 0.0;     // sigma^2 ||eta||^2, the variance of eta^T y
  Vector eta;
};

/// Rows whose |alpha_j| is at most this fraction of max |alpha| only feed V0.
inline constexpr double kAlphaZeroTolerance = 1e-12;

/// Truncation limits for eta^T y. Throws EventViolated if y lies outside the
/// event by more than 1e-8 * max(1, ||y||), ZeroContrast if eta = 0.
TruncationInterval truncation_interval(const SelectionEvent& event, const Vector& eta,
                                       double sigma2, const Vector& y);

/// Same computation without the membership check. Useful for y drawn outside
/// the event, where the limits are still functions of the orthogonal part.
TruncationInterval truncation_bounds(const SelectionEvent& event, const Vector& eta,
                                     double sigma2, const Vector& y);

/// Debug dump: one CSV line per row, columns a_1..a_n,b.
void write_event_csv(const SelectionEvent& event, std::ostream& out);

}  // namespace selinf
