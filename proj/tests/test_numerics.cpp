#include <doctest.h>

#include <cmath>

#include "selinf/numerics.hpp"
#include "selinf/oracle.hpp"
#include "support.hpp"

using namespace selinf;
using selinf::testing::uniform;
using selinf::testing::uniform_index;

namespace {

// Normal equations in long double: a deliberately different route to the
// least-squares solution than the pivoted QR under test.
Vector normal_equations_ls(const Matrix& x, const Vector& y) {
  using LMat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
  using LVec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
  const LMat xl = x.cast<long double>();
  const LMat g = xl.transpose() * xl;
  const LVec rhs = xl.transpose() * y.cast<long double>();
  return g.llt().solve(rhs).cast<double>();
}

}  // namespace

TEST_CASE("least_squares agrees with long-double normal equations") {
  Rng rng(11);
  for (int rep = 0; rep < 200; ++rep) {
    const Index n = uniform_index(rng, 3, 30);
    const Index p = uniform_index(rng, 1, n);
    const Matrix x = gaussian_matrix(n, p, rng);
    const Vector y = gaussian_vector(n, rng);
    const Vector beta = least_squares(x, y);
    const Vector ref = normal_equations_ls(x, y);
    // normal equations square the condition number, so compare loosely
    CHECK((beta - ref).norm() <= 1e-7 * (1.0 + ref.norm()));
    // residual orthogonal to the columns
    CHECK((x.transpose() * (y - x * beta)).lpNorm<Eigen::Infinity>() <= 1e-12 * (1.0 + y.norm()) * n);
  }
}

TEST_CASE("least_squares is exact on a consistent system") {
  Matrix x(4, 2);
  x << 1, 0, 0, 1, 1, 1, 2, -1;
  const Vector beta = (Vector(2) << 3.0, -2.0).finished();
  const Vector y = x * beta;
  CHECK((least_squares(x, y) - beta).norm() <= 1e-14);
}

TEST_CASE("pseudoinverse_apply satisfies the Moore-Penrose conditions") {
  Rng rng(12);
  for (int rep = 0; rep < 100; ++rep) {
    const Index r = uniform_index(rng, 1, 8);
    const Index c = uniform_index(rng, 1, 8);
    const Matrix a = gaussian_matrix(r, c, rng);
    // build A^+ one column at a time
    Matrix pinv(c, r);
    for (Index i = 0; i < r; ++i) pinv.col(i) = pseudoinverse_apply(a, Vector::Unit(r, i));
    CHECK((a * pinv * a - a).norm() <= 1e-10 * a.norm());
    CHECK((pinv * a * pinv - pinv).norm() <= 1e-10 * (1.0 + pinv.norm()));
    CHECK(((a * pinv).transpose() - a * pinv).norm() <= 1e-10);
    CHECK(((pinv * a).transpose() - pinv * a).norm() <= 1e-10);
  }
}

TEST_CASE("eta for a selected coefficient picks out the least-squares coefficient") {
  Rng rng(13);
  const Matrix xs = gaussian_matrix(15, 3, rng);
  const Vector y = gaussian_vector(15, rng);
  const Vector beta = least_squares(xs, y);
  for (Index j = 0; j < 3; ++j) {
    const Vector eta = pseudoinverse_apply(xs.transpose(), Vector::Unit(3, j));
    CHECK(eta.dot(y) == doctest::Approx(beta(j)).epsilon(1e-12));
    // ||eta||^2 = ((X^T X)^{-1})_jj
    const Matrix g_inv = (xs.transpose() * xs).inverse();
    CHECK(eta.squaredNorm() == doctest::Approx(g_inv(j, j)).epsilon(1e-10));
  }
}

TEST_CASE("ColumnSpace projection, residual, and gram inverse") {
  Rng rng(14);
  const Matrix a = gaussian_matrix(12, 4, rng);
  const ColumnSpace span(a);
  const Vector y = gaussian_vector(12, rng);
  const Vector py = span.project(y);
  CHECK((span.project(py) - py).norm() <= 1e-13);
  CHECK((a.transpose() * span.residual(y)).norm() <= 1e-12);
  CHECK((span.gram_inverse() - (a.transpose() * a).inverse()).norm() <= 1e-10);
  CHECK(span.cols() == 4);
  CHECK(span.rows() == 12);
}

TEST_CASE("ColumnSpace with no columns projects to zero") {
  const ColumnSpace span(Matrix(5, 0));
  const Vector y = Vector::Ones(5);
  CHECK(span.project(y).norm() == 0.0);
  CHECK(span.residual(y) == y);
  CHECK(span.transpose_pinv_apply(Vector(0)).size() == 5);
}

TEST_CASE("rank-deficient inputs raise RankDeficient") {
  Matrix a(5, 3);
  a.col(0) = Vector::LinSpaced(5, 1.0, 5.0);
  a.col(1) = Vector::Ones(5);
  a.col(2) = 2.0 * a.col(0) - 3.0 * a.col(1);
  CHECK_THROWS_AS(ColumnSpace<double>{a}, RankDeficient);
  CHECK_THROWS_AS(least_squares(a, Vector::Ones(5)), RankDeficient);
  CHECK_THROWS_AS(ColumnSpace<double>{Matrix::Ones(2, 3)}, RankDeficient);
}

TEST_CASE("dimension mismatch raises DimensionMismatch") {
  CHECK_THROWS_AS(least_squares(Matrix::Identity(3, 2), Vector::Ones(4)), DimensionMismatch);
  CHECK_THROWS_AS(pseudoinverse_apply(Matrix::Identity(3, 2), Vector::Ones(2)), DimensionMismatch);
}

TEST_CASE("templated on the scalar type") {
  Eigen::MatrixXf a(3, 2);
  a << 1, 0, 0, 1, 1, 1;
  const Eigen::VectorXf y = Eigen::Vector3f(1, 2, 3);
  const Eigen::VectorXf beta = least_squares(a, y);
  CHECK(beta(0) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK(beta(1) == doctest::Approx(2.0).epsilon(1e-5));
}

TEST_CASE("normal cdf and log cdf match high-precision values") {
  struct Row {
    double x, cdf, log_cdf;
  };
  // 50-digit references
  const Row rows[] = {
      {-37.5, 4.6053530095819548438e-308, -707.66898931750719107},
      {-10.0, 7.619853024160526066e-24, -53.231285150512470578},
      {-3.0, 0.0013498980316300945267, -6.6077262215103495433},
      {-1.0, 0.15865525393145705141, -1.8410216450092635058},
      {0.0, 0.5, -0.69314718055994530942},
      {0.5, 0.69146246127401310364, -0.36894641528865639307},
      {2.0, 0.9772498680518207928, -0.023012909328963488465},
      {8.5, 0.99999999999999999052, -9.4795348222033183991e-18},
  };
  for (const Row& r : rows) {
    CAPTURE(r.x);
    CHECK(normal_cdf(r.x) == doctest::Approx(r.cdf).epsilon(1e-13));
    CHECK(log_normal_cdf(r.x) == doctest::Approx(r.log_cdf).epsilon(1e-13));
    CHECK(log_normal_sf(-r.x) == doctest::Approx(r.log_cdf).epsilon(1e-13));
  }
}

TEST_CASE("log cdf stays finite far into the tail") {
  // asymptotic: log Phi(x) ~ -x^2/2 - log(-x) - log(sqrt(2 pi))
  for (double x : {-40.0, -100.0, -1e3, -1e6}) {
    const double approx = -0.5 * x * x - std::log(-x) - 0.5 * std::log(2.0 * M_PI);
    CHECK(std::isfinite(log_normal_cdf(x)));
    CHECK(log_normal_cdf(x) == doctest::Approx(approx).epsilon(1.0 / (x * x)));
  }
  CHECK(log_normal_cdf(-kInf) == -kInf);
  CHECK(log_normal_cdf(kInf) == 0.0);
}

TEST_CASE("log cdf agrees with the quadrature oracle") {
  Rng rng(15);
  for (int rep = 0; rep < 200; ++rep) {
    const double x = uniform(rng, -35.0, 8.0);
    CAPTURE(x);
    const double ref = oracle::quadrature_log_normal_cdf(x);
    CHECK(std::abs(log_normal_cdf(x) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
  }
}

TEST_CASE("normal quantile matches high-precision values and inverts the cdf") {
  CHECK(normal_quantile(1e-300) == doctest::Approx(-37.047096299361199237).epsilon(1e-13));
  CHECK(normal_quantile(1e-12) == doctest::Approx(-7.0344838253011319298).epsilon(1e-13));
  CHECK(normal_quantile(1e-10) == doctest::Approx(-6.3613409024040561991).epsilon(1e-13));
  CHECK(normal_quantile(0.025) == doctest::Approx(-1.9599639845400542118).epsilon(1e-14));
  CHECK(normal_quantile(0.3) == doctest::Approx(-0.52440051270804081597).epsilon(1e-14));
  CHECK(normal_quantile(0.5) == 0.0);
  CHECK(normal_quantile(0.95) == doctest::Approx(1.6448536269514722843).epsilon(1e-14));
  CHECK(normal_quantile(0.0) == -kInf);
  CHECK(normal_quantile(1.0) == kInf);
  CHECK(std::isnan(normal_quantile(1.5)));

  Rng rng(16);
  for (int rep = 0; rep < 500; ++rep) {
    // above ~5 the cdf itself rounds toward 1, so the round trip is ill-posed there
    const double x = uniform(rng, -30.0, 5.0);
    CHECK(normal_quantile(normal_cdf(x)) == doctest::Approx(x).epsilon(1e-9));
  }
}

TEST_CASE("log_diff_exp") {
  CHECK(log_diff_exp(-700.0, -700.5) == doctest::Approx(-700.93275212956718857).epsilon(1e-15));
  CHECK(log_diff_exp(3.0, 3.0 - std::ldexp(1.0, -33)) ==
        doctest::Approx(-19.873856958536402872).epsilon(1e-13));
  CHECK(log_diff_exp(1.0, -kInf) == 1.0);
  CHECK(log_diff_exp(2.0, 2.0) == -kInf);
}
