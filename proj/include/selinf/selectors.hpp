#pragma once

#include <string_view>
#include <vector>

#include "selinf/dataset.hpp"
#include "selinf/polytope.hpp"

namespace selinf {

// `Lasso` tags a standalone lasso_fit; it is not selectable from the CLI.
enum class Procedure { MarginalScreening, Omp, Nnls, MarginalScreeningLasso, Lasso };

std::string_view to_string(Procedure procedure);
/// Parses the CLI spelling: ms, omp, nnls, ms-lasso.
Procedure parse_procedure(std::string_view name);

/// Outcome of a selection procedure. `support` is ordered: selection order
/// for OMP, decreasing |x_j^T y| for marginal screening, ascending index for
/// NNLS and the Lasso. `signs` is aligned with `support`.
struct SelectedModel {
  Procedure procedure = Procedure::MarginalScreening;
  std::vector<Index> support;
  std::vector<int> signs;
  /// First-stage support for two-stage procedures (marginal screening + Lasso).
  std::vector<Index> screened;
  std::vector<int> screened_signs;

  Index size() const { return static_cast<Index>(support.size()); }
};

/// Model plus the polyhedron of responses that reproduce it.
struct Selection {
  SelectedModel model;
  SelectionEvent event;
};

/// The k columns with the largest |x_j^T y|; ties go to the lowest index.
SelectedModel marginal_screen(const Dataset& data, Index k);

/// k (2 (p - k) + 1) rows with b = 0: for i in S and j outside S,
/// (-s_i x_i +/- x_j)^T y <= 0, plus -s_i x_i^T y <= 0.
SelectionEvent encode_ms_event(const Dataset& data, const SelectedModel& model);

/// Orthogonal matching pursuit for k steps.
SelectedModel omp_select(const Dataset& data, Index k);

/// Per-step rows on the projected design X^T (I - P_{i-1}); rows for
/// already-selected columns are identically zero and omitted.
SelectionEvent encode_omp_event(const Dataset& data, const SelectedModel& model);

struct NnlsFit {
  Vector beta;
  Vector dual;  // lambda_j = -x_j^T (y - X beta)
  SelectedModel model;
  int iterations = 0;
};

/// Lawson-Hanson active-set solver for min_{beta >= 0} 0.5 ||y - X beta||^2.
/// Throws SolverStalled after 3p outer iterations.
NnlsFit nnls_solve(const Dataset& data);

/// -X_S^+ y <= 0 (positive coefficients) and X_{-S}^T (I - P_S) y <= 0
/// (dual feasibility). For an empty support this is X^T y <= 0.
SelectionEvent encode_nnls_event(const Dataset& data, const SelectedModel& model);

struct LassoFit {
  Vector beta;
  SelectedModel model;
  int sweeps = 0;
  double duality_gap = 0.0;
};

/// Coordinate descent for min 0.5 ||y - X beta||^2 + lambda ||beta||_1,
/// run until the duality gap is below 1e-10 * max(1, 0.5 ||y||^2).
LassoFit lasso_fit(const Dataset& data, double lambda);

/// KKT rows of the Lasso for fixed active set E and signs z:
/// |X_{-E}^T ((I - P_E) y + lambda (X_E^T)^+ z)| <= lambda and
/// z * ((X_E^T X_E)^{-1} (X_E^T y - lambda z)) >= 0.
SelectionEvent encode_lasso_event(const Dataset& data, const SelectedModel& model,
                                  double lambda);

/// Marginal screening to k columns followed by the Lasso on the screened
/// columns. The event is the composition of both stage events.
Selection ms_plus_lasso(const Dataset& data, Index k, double lambda);

/// Run `procedure` and encode its event. `k` is ignored by NNLS and `lambda`
/// is used only by marginal screening + Lasso.
Selection run_selection(const Dataset& data, Procedure procedure, Index k, double lambda);

}  // namespace selinf
