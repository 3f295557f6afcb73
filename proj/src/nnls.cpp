#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "selectors_internal.hpp"

namespace selinf {

namespace {

Vector solve_on(const Matrix& x, const Vector& y, const std::vector<Index>& passive) {
  return least_squares(detail::select_columns(x, passive), y);
}

}  // namespace

// Lawson & Hanson, "Solving Least Squares Problems", ch. 23.
NnlsFit nnls_solve(const Dataset& data) {
  const Matrix& x = data.x;
  const Vector& y = data.y;
  const Index p = x.cols();
  if (y.size() != x.rows()) throw DimensionMismatch("nnls_solve: rows(X) != length(y)");

  const double eps = std::numeric_limits<double>::epsilon();
  const double tol = 10.0 * eps * static_cast<double>(std::max(x.rows(), p)) *
                     std::max(1.0, (x.transpose() * y).cwiseAbs().maxCoeff());
  const int max_outer = static_cast<int>(3 * p);

  std::vector<bool> passive_mask(static_cast<std::size_t>(p), false);
  Vector beta = Vector::Zero(p);
  Vector w = x.transpose() * y;
  int outer = 0;

  auto passive_set = [&] {
    std::vector<Index> set;
    for (Index j = 0; j < p; ++j) {
      if (passive_mask[static_cast<std::size_t>(j)]) set.push_back(j);
    }
    return set;
  };

  while (true) {
    Index enter = -1;
    double best = tol;
    for (Index j = 0; j < p; ++j) {
      if (!passive_mask[static_cast<std::size_t>(j)] && w(j) > best) {
        best = w(j);
        enter = j;
      }
    }
    if (enter < 0) break;
    if (++outer > max_outer) {
      throw SolverStalled("nnls_solve: no convergence after " + std::to_string(max_outer) +
                          " outer iterations");
    }
    passive_mask[static_cast<std::size_t>(enter)] = true;

    std::vector<Index> passive = passive_set();
    Vector z = solve_on(x, y, passive);
    {
      // A freshly entered column with a non-positive coefficient means w(enter)
      // was rounding noise; drop it and stop.
      const auto pos = std::find(passive.begin(), passive.end(), enter) - passive.begin();
      if (z(pos) <= 0.0) {
        passive_mask[static_cast<std::size_t>(enter)] = false;
        break;
      }
    }

    for (int inner = 0; z.minCoeff() <= 0.0; ++inner) {
      if (inner > 3 * p) throw SolverStalled("nnls_solve: inner loop did not terminate");
      double step = 1.0;
      for (std::size_t i = 0; i < passive.size(); ++i) {
        if (z(static_cast<Index>(i)) <= 0.0) {
          const double b = beta(passive[i]);
          step = std::min(step, b / (b - z(static_cast<Index>(i))));
        }
      }
      for (std::size_t i = 0; i < passive.size(); ++i) {
        const Index j = passive[i];
        beta(j) += step * (z(static_cast<Index>(i)) - beta(j));
        if (beta(j) <= tol) {
          beta(j) = 0.0;
          passive_mask[static_cast<std::size_t>(j)] = false;
        }
      }
      passive = passive_set();
      z = passive.empty() ? Vector(0) : solve_on(x, y, passive);
    }

    beta.setZero();
    for (std::size_t i = 0; i < passive.size(); ++i) beta(passive[i]) = z(static_cast<Index>(i));
    w = x.transpose() * (y - x * beta);
  }

  NnlsFit fit;
  fit.model.procedure = Procedure::Nnls;
  fit.model.support = passive_set();
  fit.model.signs.assign(fit.model.support.size(), 1);
  fit.beta = Vector::Zero(p);
  if (!fit.model.support.empty()) {
    const Vector coef = solve_on(x, y, fit.model.support);
    for (std::size_t i = 0; i < fit.model.support.size(); ++i) {
      fit.beta(fit.model.support[i]) = coef(static_cast<Index>(i));
    }
  }
  fit.dual = -(x.transpose() * (y - x * fit.beta));
  fit.iterations = outer;
  return fit;
}

SelectionEvent encode_nnls_event(const Dataset& data, const SelectedModel& model) {
  detail::check_model(data, model);
  SelectionEvent event(data.n());
  const Matrix xs = detail::select_columns(data.x, model.support);
  const ColumnSpace<double> span(xs);

  if (!model.support.empty()) {
    // Rows of X_S^+ are the contrasts (X_S^T)^+ e_i.
    ImplicitRows primal;
    primal.functionals.resize(xs.cols(), data.n());
    for (Index i = 0; i < xs.cols(); ++i) {
      primal.functionals.row(i) = span.transpose_pinv_apply(Vector::Unit(xs.cols(), i)).transpose();
      primal.rows.push_back({i, -1.0, -1, 0.0, 0.0});
    }
    event.add(std::move(primal));
  }

  const std::vector<Index> others = detail::complement(data.p(), model.support);
  if (!others.empty()) {
    ImplicitRows dual;
    dual.functionals = span.residual_matrix(detail::select_columns(data.x, others)).transpose();
    for (Index r = 0; r < static_cast<Index>(others.size()); ++r) {
      dual.rows.push_back({r, 1.0, -1, 0.0, 0.0});
    }
    event.add(std::move(dual));
  }
  return event;
}

}  // namespace selinf
