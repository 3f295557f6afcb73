#include "selinf/polytope.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

namespace selinf {

namespace {

// Per-block products with y (and optionally eta), computed once so rows can be
// streamed twice without touching the n-dimensional data again.
struct BlockProducts {
  Vector with_y;
  Vector with_eta;
};

BlockProducts products(const RowBlock& block, const Vector& y, const Vector* eta) {
  return std::visit(
      [&](const auto& b) {
        using T = std::decay_t<decltype(b)>;
        BlockProducts out;
        if constexpr (std::is_same_v<T, ExplicitRows>) {
          out.with_y = b.a * y;
          if (eta) out.with_eta = b.a * *eta;
        } else {
          out.with_y = b.functionals * y;
          if (eta) out.with_eta = b.functionals * *eta;
        }
        return out;
      },
      block);
}

double pair_value(const PairRow& row, const Vector& v) {
  double value = row.first_coef * v(row.first);
  if (row.second >= 0) value += row.second_coef * v(row.second);
  return value;
}

// Calls f(a_j^T y, a_j^T eta, b_j) for every row, block by block.
template <typename F>
void stream_rows(const SelectionEvent& event, const Vector& y, const Vector* eta, F&& f) {
  for (const auto& block : event.blocks()) {
    const BlockProducts prod = products(block, y, eta);
    if (const auto* ex = std::get_if<ExplicitRows>(&block)) {
      for (Index j = 0; j < ex->b.size(); ++j) {
        f(prod.with_y(j), eta ? prod.with_eta(j) : 0.0, ex->b(j));
      }
    } else {
      const auto& im = std::get<ImplicitRows>(block);
      for (const PairRow& row : im.rows) {
        f(pair_value(row, prod.with_y), eta ? pair_value(row, prod.with_eta) : 0.0, row.bound);
      }
    }
  }
}

void check_dim(const SelectionEvent& event, const Vector& v, const char* what) {
  if (v.size() != event.dim()) {
    throw DimensionMismatch(std::string(what) + ": length " + std::to_string(v.size()) +
                            " != event dimension " + std::to_string(event.dim()));
  }
}

}  // namespace

SelectionEvent SelectionEvent::from_rows(Matrix a, Vector b) {
  SelectionEvent event(a.cols());
  event.add(ExplicitRows{std::move(a), std::move(b)});
  return event;
}

void SelectionEvent::add(ExplicitRows block) {
  if (block.a.rows() != block.b.size()) {
    throw DimensionMismatch("SelectionEvent: rows(A) != length(b)");
  }
  if (block.a.rows() == 0) return;
  if (block.a.cols() != dim_) throw DimensionMismatch("SelectionEvent: cols(A) != dimension");
  row_count_ += block.a.rows();
  blocks_.emplace_back(std::move(block));
}

void SelectionEvent::add(ImplicitRows block) {
  if (block.rows.empty()) return;
  if (block.functionals.cols() != dim_) {
    throw DimensionMismatch("SelectionEvent: functional width != dimension");
  }
  const Index m = block.functionals.rows();
  for (const PairRow& row : block.rows) {
    if (row.first < 0 || row.first >= m || row.second >= m) {
      throw InvalidArgument("SelectionEvent: row references a missing functional");
    }
  }
  row_count_ += static_cast<Index>(block.rows.size());
  blocks_.emplace_back(std::move(block));
}

ExplicitRows SelectionEvent::to_explicit() const {
  ExplicitRows out{Matrix(row_count_, dim_), Vector(row_count_)};
  Index r = 0;
  for (const auto& block : blocks_) {
    if (const auto* ex = std::get_if<ExplicitRows>(&block)) {
      out.a.middleRows(r, ex->a.rows()) = ex->a;
      out.b.segment(r, ex->b.size()) = ex->b;
      r += ex->a.rows();
      continue;
    }
    const auto& im = std::get<ImplicitRows>(block);
    for (const PairRow& row : im.rows) {
      out.a.row(r) = row.first_coef * im.functionals.row(row.first);
      if (row.second >= 0) out.a.row(r) += row.second_coef * im.functionals.row(row.second);
      out.b(r) = row.bound;
      ++r;
    }
  }
  return out;
}

double min_slack(const SelectionEvent& event, const Vector& y) {
  check_dim(event, y, "min_slack");
  double slack = kInf;
  stream_rows(event, y, nullptr,
              [&](double ay, double, double b) { slack = std::min(slack, b - ay); });
  return slack;
}

bool contains(const SelectionEvent& event, const Vector& y, double tol) {
  return min_slack(event, y) >= -tol * (1.0 + y.norm());
}

SelectionEvent compose_events(const SelectionEvent& first, const SelectionEvent& second) {
  if (first.dim() != second.dim()) {
    throw DimensionMismatch("compose_events: events live in different dimensions");
  }
  SelectionEvent out(first.dim());
  for (const auto* e : {&first, &second}) {
    for (const auto& block : e->blocks()) {
      std::visit([&](const auto& b) { out.add(b); }, block);
    }
  }
  return out;
}

TruncationInterval truncation_bounds(const SelectionEvent& event, const Vector& eta,
                                     double sigma2, const Vector& y) {
  check_dim(event, y, "truncation_interval(y)");
  check_dim(event, eta, "truncation_interval(eta)");
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw InvalidArgument("truncation_interval: sigma2 must be positive and finite");
  }
  const double eta_norm2 = eta.squaredNorm();
  if (!(eta_norm2 > 0.0)) throw ZeroContrast("truncation_interval: contrast has zero norm");

  TruncationInterval out;
  out.eta = eta;
  out.observed = eta.dot(y);
  out.scale = sigma2 * eta_norm2;

  // With Sigma = sigma^2 I, alpha_j = (A eta)_j / ||eta||^2.
  double max_alpha = 0.0;
  stream_rows(event, y, &eta, [&](double, double aeta, double) {
    max_alpha = std::max(max_alpha, std::abs(aeta / eta_norm2));
  });
  const double zero_cut = kAlphaZeroTolerance * max_alpha;

  stream_rows(event, y, &eta, [&](double ay, double aeta, double b) {
    const double alpha = aeta / eta_norm2;
    const double slack = b - ay;
    if (std::abs(alpha) <= zero_cut) {
      out.v_zero = std::min(out.v_zero, slack);
      return;
    }
    const double limit = (slack + alpha * out.observed) / alpha;
    if (alpha > 0.0) {
      out.v_plus = std::min(out.v_plus, limit);
    } else {
      out.v_minus = std::max(out.v_minus, limit);
    }
  });
  return out;
}

TruncationInterval truncation_interval(const SelectionEvent& event, const Vector& eta,
                                       double sigma2, const Vector& y) {
  TruncationInterval out = truncation_bounds(event, eta, sigma2, y);
  const double slack = min_slack(event, y);
  const double tol = 1e-8 * std::max(1.0, y.norm());
  if (slack < -tol) {
    throw EventViolated("truncation_interval: y violates the selection event (min slack " +
                        std::to_string(slack) + ")");
  }
  return out;
}

void write_event_csv(const SelectionEvent& event, std::ostream& out) {
  const ExplicitRows rows = event.to_explicit();
  for (Index j = 0; j < event.dim(); ++j) out << 'a' << (j + 1) << ',';
  out << "b\n";
  const auto old_precision = out.precision(17);
  for (Index r = 0; r < rows.a.rows(); ++r) {
    for (Index j = 0; j < rows.a.cols(); ++j) out << rows.a(r, j) << ',';
    out << rows.b(r) << '\n';
  }
  out.precision(old_precision);
}

}  // namespace selinf
