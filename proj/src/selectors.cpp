#include "selinf/selectors.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "selectors_internal.hpp"

namespace selinf {

namespace detail {

Matrix select_columns(const Matrix& x, const std::vector<Index>& columns) {
  Matrix out(x.rows(), static_cast<Index>(columns.size()));
  for (std::size_t c = 0; c < columns.size(); ++c) out.col(static_cast<Index>(c)) = x.col(columns[c]);
  return out;
}

std::vector<Index> complement(Index p, const std::vector<Index>& support) {
  std::vector<bool> in(static_cast<std::size_t>(p), false);
  for (Index j : support) in[static_cast<std::size_t>(j)] = true;
  std::vector<Index> out;
  for (Index j = 0; j < p; ++j) {
    if (!in[static_cast<std::size_t>(j)]) out.push_back(j);
  }
  return out;
}

void check_model(const Dataset& data, const SelectedModel& model) {
  if (model.signs.size() != model.support.size()) {
    throw DimensionMismatch("model: one sign per selected column required");
  }
  std::vector<bool> seen(static_cast<std::size_t>(data.p()), false);
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const Index j = model.support[i];
    if (j < 0 || j >= data.p()) {
      throw InvalidArgument("model: column " + std::to_string(j) + " outside [0, " +
                            std::to_string(data.p()) + ")");
    }
    if (seen[static_cast<std::size_t>(j)]) {
      throw InvalidArgument("model: column " + std::to_string(j) + " selected twice");
    }
    seen[static_cast<std::size_t>(j)] = true;
    if (model.signs[i] != 1 && model.signs[i] != -1) {
      throw InvalidArgument("model: signs must be +1 or -1");
    }
  }
}

}  // namespace detail

namespace {

void check_k(const Dataset& data, Index k) {
  if (k < 1 || k > std::min(data.n(), data.p())) {
    throw InvalidArgument("k = " + std::to_string(k) + " outside [1, min(n, p) = " +
                          std::to_string(std::min(data.n(), data.p())) + "]");
  }
}

int sign_of(double v) { return v < 0.0 ? -1 : 1; }

// Rows (-s x_i +/- x_j)^T M y <= 0 for every j in `others`, then -s x_i^T M y <= 0.
void append_dominance_rows(std::vector<PairRow>& rows, Index chosen, int sign,
                           const std::vector<Index>& others) {
  const double c = -static_cast<double>(sign);
  for (Index j : others) {
    rows.push_back({chosen, c, j, 1.0, 0.0});
    rows.push_back({chosen, c, j, -1.0, 0.0});
  }
  rows.push_back({chosen, c, -1, 0.0, 0.0});
}

}  // namespace

std::string_view to_string(Procedure procedure) {
  switch (procedure) {
    case Procedure::MarginalScreening: return "ms";
    case Procedure::Omp: return "omp";
    case Procedure::Nnls: return "nnls";
    case Procedure::MarginalScreeningLasso: return "ms-lasso";
    case Procedure::Lasso: return "lasso";
  }
  return "unknown";
}

Procedure parse_procedure(std::string_view name) {
  if (name == "ms") return Procedure::MarginalScreening;
  if (name == "omp") return Procedure::Omp;
  if (name == "nnls") return Procedure::Nnls;
  if (name == "ms-lasso") return Procedure::MarginalScreeningLasso;
  throw InvalidArgument("unknown procedure '" + std::string(name) +
                        "' (expected ms, omp, nnls or ms-lasso)");
}

SelectedModel marginal_screen(const Dataset& data, Index k) {
  check_k(data, k);
  const Vector corr = data.x.transpose() * data.y;
  std::vector<Index> order(static_cast<std::size_t>(data.p()));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(corr(a)) > std::abs(corr(b));
  });

  SelectedModel model;
  model.procedure = Procedure::MarginalScreening;
  model.support.assign(order.begin(), order.begin() + k);
  for (Index j : model.support) model.signs.push_back(sign_of(corr(j)));
  return model;
}

SelectionEvent encode_ms_event(const Dataset& data, const SelectedModel& model) {
  detail::check_model(data, model);
  if (data.y.size() != data.n()) throw DimensionMismatch("encode_ms_event: length(y) != n");
  const std::vector<Index> others = detail::complement(data.p(), model.support);

  ImplicitRows block;
  block.functionals = data.x.transpose();
  block.rows.reserve(model.support.size() * (2 * others.size() + 1));
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    append_dominance_rows(block.rows, model.support[i], model.signs[i], others);
  }
  SelectionEvent event(data.n());
  event.add(std::move(block));
  return event;
}

SelectedModel omp_select(const Dataset& data, Index k) {
  check_k(data, k);
  SelectedModel model;
  model.procedure = Procedure::Omp;
  std::vector<bool> taken(static_cast<std::size_t>(data.p()), false);
  Vector residual = data.y;

  for (Index step = 0; step < k; ++step) {
    const Vector corr = data.x.transpose() * residual;
    Index best = -1;
    double best_abs = -1.0;
    for (Index j = 0; j < data.p(); ++j) {
      if (taken[static_cast<std::size_t>(j)]) continue;
      if (std::abs(corr(j)) > best_abs) {
        best_abs = std::abs(corr(j));
        best = j;
      }
    }
    model.support.push_back(best);
    model.signs.push_back(sign_of(corr(best)));
    taken[static_cast<std::size_t>(best)] = true;
    try {
      residual = ColumnSpace<double>(detail::select_columns(data.x, model.support)).residual(data.y);
    } catch (const RankDeficient& e) {
      throw RankDeficient("omp_select: rank collapse at step " + std::to_string(step + 1) +
                          ": " + e.what());
    }
  }
  return model;
}

SelectionEvent encode_omp_event(const Dataset& data, const SelectedModel& model) {
  detail::check_model(data, model);
  SelectionEvent event(data.n());
  std::vector<Index> previous;
  for (std::size_t i = 0; i < model.support.size(); ++i) {
    const ColumnSpace<double> span(detail::select_columns(data.x, previous));
    ImplicitRows block;
    block.functionals = span.residual_matrix(data.x).transpose();

    previous.push_back(model.support[i]);
    const std::vector<Index> others = detail::complement(data.p(), previous);
    block.rows.reserve(2 * others.size() + 1);
    append_dominance_rows(block.rows, model.support[i], model.signs[i], others);
    event.add(std::move(block));
  }
  return event;
}

Selection ms_plus_lasso(const Dataset& data, Index k, double lambda) {
  SelectedModel screened = marginal_screen(data, k);
  SelectionEvent screen_event = encode_ms_event(data, screened);

  Dataset sub;
  sub.x = detail::select_columns(data.x, screened.support);
  sub.y = data.y;
  sub.sigma2 = data.sigma2;
  sub.column_scales = Vector::Ones(sub.x.cols());
  for (Index j : screened.support) sub.names.push_back(data.names.empty() ? "" : data.names[j]);

  const LassoFit fit = lasso_fit(sub, lambda);
  SelectionEvent lasso_event = encode_lasso_event(sub, fit.model, lambda);

  std::vector<std::pair<Index, int>> mapped;
  for (std::size_t i = 0; i < fit.model.support.size(); ++i) {
    mapped.emplace_back(screened.support[fit.model.support[i]], fit.model.signs[i]);
  }
  std::sort(mapped.begin(), mapped.end());

  Selection out{SelectedModel{}, compose_events(screen_event, lasso_event)};
  out.model.procedure = Procedure::MarginalScreeningLasso;
  for (const auto& [j, s] : mapped) {
    out.model.support.push_back(j);
    out.model.signs.push_back(s);
  }
  out.model.screened = screened.support;
  out.model.screened_signs = screened.signs;
  return out;
}

Selection run_selection(const Dataset& data, Procedure procedure, Index k, double lambda) {
  switch (procedure) {
    case Procedure::MarginalScreening: {
      SelectedModel model = marginal_screen(data, k);
      SelectionEvent event = encode_ms_event(data, model);
      return {std::move(model), std::move(event)};
    }
    case Procedure::Omp: {
      SelectedModel model = omp_select(data, k);
      SelectionEvent event = encode_omp_event(data, model);
      return {std::move(model), std::move(event)};
    }
    case Procedure::Nnls: {
      NnlsFit fit = nnls_solve(data);
      SelectionEvent event = encode_nnls_event(data, fit.model);
      return {std::move(fit.model), std::move(event)};
    }
    case Procedure::MarginalScreeningLasso:
      return ms_plus_lasso(data, k, lambda);
    case Procedure::Lasso: {
      LassoFit fit = lasso_fit(data, lambda);
      SelectionEvent event = encode_lasso_event(data, fit.model, lambda);
      return {std::move(fit.model), std::move(event)};
    }
  }
  throw InvalidArgument("run_selection: unknown procedure");
}

}  // namespace selinf
