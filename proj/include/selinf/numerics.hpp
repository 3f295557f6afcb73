#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>

#include "selinf/errors.hpp"

namespace selinf {

template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = MatrixX<double>;
using Vector = VectorX<double>;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Column-pivoted QR of a tall matrix with full column rank.
///
/// A column is considered dependent when its pivot falls below
/// rows * epsilon * |R(0,0)|; construction throws RankDeficient in that case.
/// The factor answers least-squares solves, projections onto the column
/// space, and minimum-norm solves against the transpose.
template <typename Scalar>
class ColumnSpace {
 public:
  using Mat = MatrixX<Scalar>;
  using Vec = VectorX<Scalar>;

  template <typename Derived>
  explicit ColumnSpace(const Eigen::MatrixBase<Derived>& a) : qr_(a.rows(), a.cols()) {
    if (a.cols() == 0) {
      rows_ = a.rows();
      return;
    }
    if (a.rows() < a.cols()) {
      throw RankDeficient("ColumnSpace: more columns (" + std::to_string(a.cols()) +
                          ") than rows (" + std::to_string(a.rows()) + ")");
    }
    rows_ = a.rows();
    qr_.setThreshold(Scalar(a.rows()) * std::numeric_limits<Scalar>::epsilon());
    qr_.compute(a);
    if (qr_.rank() < a.cols()) {
      throw RankDeficient("ColumnSpace: rank " + std::to_string(qr_.rank()) + " < " +
                          std::to_string(a.cols()) + " columns");
    }
    q_ = qr_.householderQ() * Mat::Identity(a.rows(), a.cols());
  }

  Index rows() const { return rows_; }
  Index cols() const { return q_.cols(); }

  /// Orthonormal basis of the column space (rows x cols).
  const Mat& basis() const { return q_; }

  /// argmin_b ||y - A b||.
  template <typename Derived>
  Vec solve(const Eigen::MatrixBase<Derived>& y) const {
    if (cols() == 0) return Vec(0);
    return qr_.solve(y.derived().template cast<Scalar>().eval());
  }

  /// Minimum-norm solution of A^T eta = v, i.e. (A^T)^+ v = A (A^T A)^{-1} v.
  template <typename Derived>
  Vec transpose_pinv_apply(const Eigen::MatrixBase<Derived>& v) const {
    const Index k = cols();
    if (v.size() != k) throw DimensionMismatch("transpose_pinv_apply: length mismatch");
    if (k == 0) return Vec::Zero(rows_);
    // A P = Q R  =>  (A^T)^+ v = Q R^{-T} P^T v
    Vec permuted = qr_.colsPermutation().transpose() * v.derived().template cast<Scalar>();
    Vec w = qr_.matrixR()
                .topLeftCorner(k, k)
                .template triangularView<Eigen::Upper>()
                .transpose()
                .solve(permuted);
    return q_ * w;
  }

  /// (A^T A)^{-1}
  Mat gram_inverse() const {
    const Index k = cols();
    Mat r_inv = qr_.matrixR()
                    .topLeftCorner(k, k)
                    .template triangularView<Eigen::Upper>()
                    .solve(Mat::Identity(k, k));
    Mat inner = r_inv * r_inv.transpose();
    const auto& perm = qr_.colsPermutation();
    return perm * inner * perm.transpose();
  }

  template <typename Derived>
  Vec project(const Eigen::MatrixBase<Derived>& y) const {
    if (cols() == 0) return Vec::Zero(y.size());
    return q_ * (q_.transpose() * y);
  }

  /// (I - A A^+) y
  template <typename Derived>
  Vec residual(const Eigen::MatrixBase<Derived>& y) const {
    return y - project(y);
  }

  /// (I - A A^+) M, column by column.
  template <typename Derived>
  Mat residual_matrix(const Eigen::MatrixBase<Derived>& m) const {
    if (cols() == 0) return m;
    return m - q_ * (q_.transpose() * m);
  }

 private:
  Eigen::ColPivHouseholderQR<Mat> qr_;
  Mat q_;
  Index rows_ = 0;
};

template <typename Derived>
ColumnSpace(const Eigen::MatrixBase<Derived>&) -> ColumnSpace<typename Derived::Scalar>;

/// Least-squares coefficients of y on the columns of x (full column rank).
template <typename DerivedX, typename DerivedY>
VectorX<typename DerivedX::Scalar> least_squares(const Eigen::MatrixBase<DerivedX>& x,
                                                  const Eigen::MatrixBase<DerivedY>& y) {
  if (x.rows() != y.size()) throw DimensionMismatch("least_squares: rows(X) != length(y)");
  return ColumnSpace<typename DerivedX::Scalar>(x).solve(y);
}

/// a^+ v for a matrix of full rank in either orientation: least squares when a
/// is tall, the minimum-norm solution when a is wide.
template <typename DerivedA, typename DerivedV>
VectorX<typename DerivedA::Scalar> pseudoinverse_apply(const Eigen::MatrixBase<DerivedA>& a,
                                                        const Eigen::MatrixBase<DerivedV>& v) {
  if (a.rows() != v.size()) throw DimensionMismatch("pseudoinverse_apply: rows(A) != length(v)");
  if (a.rows() >= a.cols()) return ColumnSpace<typename DerivedA::Scalar>(a).solve(v);
  return ColumnSpace<typename DerivedA::Scalar>(a.transpose()).transpose_pinv_apply(v);
}

// Gaussian special functions. All are total on the extended reals.
double normal_pdf(double x);
double normal_cdf(double x);
double normal_sf(double x);
double log_normal_cdf(double x);
double log_normal_sf(double x);
double normal_quantile(double p);

/// log(exp(a) - exp(b)) for a >= b.
double log_diff_exp(double a, double b);

}  // namespace selinf
