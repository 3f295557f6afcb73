#include <algorithm>
#include <cmath>
#include <string>

#include "selectors_internal.hpp"

namespace selinf {

namespace {

double soft_threshold(double v, double t) {
  if (v > t) return v - t;
  if (v < -t) return v + t;
  return 0.0;
}

// Primal minus dual objective with the residual scaled into the dual ball.
double duality_gap(const Matrix& x, const Vector& y, const Vector& beta, const Vector& residual,
                   double lambda) {
  const double primal = 0.5 * residual.squaredNorm() + lambda * beta.lpNorm<1>();
  const double corr = (x.transpose() * residual).cwiseAbs().maxCoeff();
  const double scale = corr > lambda ? lambda / corr : 1.0;
  const Vector theta = scale * residual;
  const double dual = 0.5 * y.squaredNorm() - 0.5 * (y - theta).squaredNorm();
  return primal - dual;
}

constexpr int kMaxSweeps = 200000;

}  // namespace

LassoFit lasso_fit(const Dataset& data, double lambda) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) {
    throw InvalidArgument("lasso_fit: lambda must be positive");
  }
  const Matrix& x = data.x;
  const Vector& y = data.y;
  const Index p = x.cols();
  const Vector col_norm2 = x.colwise().squaredNorm().transpose();
  const double gap_tol = 1e-10 * std::max(1.0, 0.5 * y.squaredNorm());

  LassoFit fit;
  fit.beta = Vector::Zero(p);
  Vector residual = y;
  fit.duality_gap = duality_gap(x, y, fit.beta, residual, lambda);

  while (fit.duality_gap > gap_tol) {
    if (++fit.sweeps > kMaxSweeps) {
      throw SolverStalled("lasso_fit: duality gap " + std::to_string(fit.duality_gap) +
                          " after " + std::to_string(kMaxSweeps) + " sweeps");
    }
    for (Index j = 0; j < p; ++j) {
      const double old = fit.beta(j);
      const double rho = x.col(j).dot(residual) + col_norm2(j) * old;
      const double updated = soft_threshold(rho, lambda) / col_norm2(j);
      if (updated != old) {
        residual -= (updated - old) * x.col(j);
        fit.beta(j) = updated;
      }
    }
    fit.duality_gap = duality_gap(x, y, fit.beta, residual, lambda);
  }

  fit.model.procedure = Procedure::Lasso;
  for (Index j = 0; j < p; ++j) {
    if (fit.beta(j) != 0.0) {
      fit.model.support.push_back(j);
      fit.model.signs.push_back(fit.beta(j) > 0.0 ? 1 : -1);
    }
  }

  // Polish the active coefficients with the exact KKT solution for (E, z).
  if (!fit.model.support.empty()) {
    const ColumnSpace<double> span(detail::select_columns(x, fit.model.support));
    Vector z(fit.model.size());
    for (Index i = 0; i < z.size(); ++i) z(i) = fit.model.signs[static_cast<std::size_t>(i)];
    const Vector exact = span.solve(y) - lambda * span.gram_inverse() * z;
    bool consistent = true;
    for (Index i = 0; i < z.size(); ++i) consistent = consistent && exact(i) * z(i) > 0.0;
    if (consistent) {
      for (Index i = 0; i < z.size(); ++i) fit.beta(fit.model.support[static_cast<std::size_t>(i)]) = exact(i);
    }
  }
  return fit;
}

SelectionEvent encode_lasso_event(const Dataset& data, const SelectedModel& model,
                                  double lambda) {
  detail::check_model(data, model);
  if (!(lambda > 0.0)) throw InvalidArgument("encode_lasso_event: lambda must be positive");
  SelectionEvent event(data.n());
  const Matrix xe = detail::select_columns(data.x, model.support);
  const ColumnSpace<double> span(xe);
  Vector z(model.size());
  for (Index i = 0; i < z.size(); ++i) z(i) = model.signs[static_cast<std::size_t>(i)];

  const std::vector<Index> others = detail::complement(data.p(), model.support);
  if (!others.empty()) {
    // |x_j^T (I - P_E) y + lambda x_j^T (X_E^T)^+ z| <= lambda
    const Matrix xo = detail::select_columns(data.x, others);
    ImplicitRows inactive;
    inactive.functionals = span.residual_matrix(xo).transpose();
    const Vector offset = model.support.empty()
                              ? Vector::Zero(xo.cols())
                              : Vector(lambda * (xo.transpose() * span.transpose_pinv_apply(z)));
    for (Index r = 0; r < xo.cols(); ++r) {
      inactive.rows.push_back({r, 1.0, -1, 0.0, lambda - offset(r)});
      inactive.rows.push_back({r, -1.0, -1, 0.0, lambda + offset(r)});
    }
    event.add(std::move(inactive));
  }

  if (!model.support.empty()) {
    // z_i ((X_E^T)^+ e_i)^T y >= lambda z_i ((X_E^T X_E)^{-1} z)_i
    ImplicitRows active;
    active.functionals.resize(xe.cols(), data.n());
    const Vector shrink = lambda * (span.gram_inverse() * z);
    for (Index i = 0; i < xe.cols(); ++i) {
      active.functionals.row(i) = span.transpose_pinv_apply(Vector::Unit(xe.cols(), i)).transpose();
      active.rows.push_back({i, -z(i), -1, 0.0, -z(i) * shrink(i)});
    }
    event.add(std::move(active));
  }
  return event;
}

}  // namespace selinf
