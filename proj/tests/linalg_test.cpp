#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>

#include "ies/linalg.hpp"
#include "test_util.hpp"

using ies::Index;
using ies::Matrix;
using ies::Vector;

namespace {

double residual_bound(const Matrix& m) { return 1e-8 * std::max(1.0, m.norm()); }

void check_eigen_pairs(const Matrix& m, const ies::EigenPairs<double>& e) {
  const Index n = m.rows();
  for (Index i = 0; i + 1 < n; ++i) CHECK(e.values(i) >= e.values(i + 1));
  for (Index i = 0; i < n; ++i) {
    CHECK(e.vectors.col(i).norm() == doctest::Approx(1.0).epsilon(1e-12));
    const double r = (m * e.vectors.col(i) - e.values(i) * e.vectors.col(i)).norm();
    CHECK(r <= residual_bound(m));
  }
}

}  // namespace

TEST_CASE("symmetric_eigen on the identity") {
  const Matrix id = Matrix::Identity(3, 3);
  const auto e = ies::symmetric_eigen(id);
  CHECK(e.values.isApprox(Vector::Ones(3)));
  CHECK((e.vectors.transpose() * e.vectors - Matrix::Identity(3, 3)).norm() < 1e-12);
}

TEST_CASE("symmetric_eigen on the 2x2 swap matrix") {
  Matrix m(2, 2);
  m << 0, 1, 1, 0;
  const auto e = ies::symmetric_eigen(m);
  CHECK(e.values(0) == doctest::Approx(1.0));
  CHECK(e.values(1) == doctest::Approx(-1.0));
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(e.vectors(0, 0) == doctest::Approx(h));
  CHECK(e.vectors(1, 0) == doctest::Approx(h));
  // Sign convention: the largest-magnitude entry (first on ties) is positive.
  CHECK(e.vectors(0, 1) == doctest::Approx(h));
  CHECK(e.vectors(1, 1) == doctest::Approx(-h));
}

TEST_CASE("symmetric_eigen reconstructs random matrices") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix m = testing::random_symmetric(rng, 6);
    const auto e = ies::symmetric_eigen(m);
    const Matrix rebuilt = e.vectors * e.values.asDiagonal() * e.vectors.transpose();
    CHECK((rebuilt - m).cwiseAbs().maxCoeff() < 1e-8);
    check_eigen_pairs(m, e);
  }
}

TEST_CASE("symmetric_eigen agrees with a Jacobi reference on the spectrum") {
  std::mt19937_64 rng(5);
  const Matrix m = testing::random_symmetric(rng, 9);
  const auto e = ies::symmetric_eigen(m);
  const auto ref = oracle::jacobi_eigen(testing::to_rows(m));
  for (Index i = 0; i < 9; ++i) CHECK(e.values(i) == doctest::Approx(ref.values[i]).epsilon(1e-10));
}

TEST_CASE("symmetric_eigen is bitwise deterministic") {
  std::mt19937_64 rng(3);
  const Matrix m = testing::random_symmetric(rng, 30);
  const auto a = ies::symmetric_eigen(m);
  const auto b = ies::symmetric_eigen(m);
  CHECK(a.values == b.values);
  CHECK(a.vectors == b.vectors);
}

TEST_CASE("symmetric_eigen input validation") {
  CHECK_THROWS_AS(ies::symmetric_eigen(Matrix::Zero(2, 3)), ies::DimensionError);
  Matrix nan = Matrix::Identity(2, 2);
  nan(0, 1) = nan(1, 0) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(ies::symmetric_eigen(nan), ies::InvalidDataError);
  Matrix skew(2, 2);
  skew << 1, 2, 3, 1;
  CHECK_THROWS_AS(ies::symmetric_eigen(skew), ies::InvalidDataError);

  // A rounding-level asymmetry is averaged away.
  Matrix near(2, 2);
  near << 2, 1, 1 + 1e-14, 2;
  CHECK(ies::symmetric_eigen(near).values(0) == doctest::Approx(3.0));
}

TEST_CASE("symmetric_eigen works for float scalars") {
  Eigen::MatrixXf m(2, 2);
  m << 2.f, 1.f, 1.f, 2.f;
  const auto e = ies::symmetric_eigen(m);
  CHECK(e.values(0) == doctest::Approx(3.0f));
  CHECK(e.values(1) == doctest::Approx(1.0f));
}

TEST_CASE("covariance") {
  SUBCASE("identical rows give a zero matrix") {
    Matrix x(4, 3);
    x.rowwise() = Eigen::RowVector3d(1.5, -2.0, 7.0);
    CHECK(ies::covariance(x).cwiseAbs().maxCoeff() == 0.0);
  }
  SUBCASE("1-D column [0, 2] has sample variance 2") {
    Matrix x(2, 1);
    x << 0, 2;
    CHECK(ies::covariance(x)(0, 0) == doctest::Approx(2.0));
  }
  SUBCASE("independent columns have near-zero covariance") {
    std::mt19937_64 rng(9);
    std::normal_distribution<double> a(0.0, 1.0), b(0.0, 2.0);
    Matrix x(20000, 2);
    for (Index i = 0; i < x.rows(); ++i) x.row(i) << a(rng), b(rng);
    const Matrix c = ies::covariance(x);
    // Standard error of the sample covariance is about sd_a sd_b / sqrt(n) = 0.014.
    CHECK(std::abs(c(0, 1)) < 0.06);
    CHECK(c(0, 0) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(c(1, 1) == doctest::Approx(4.0).epsilon(0.05));
    CHECK(c(0, 1) == c(1, 0));
  }
  SUBCASE("fewer than two rows") {
    CHECK_THROWS_AS(ies::covariance(Matrix::Ones(1, 3)), ies::InsufficientDataError);
  }
}

TEST_CASE("pca on axis-aligned data with variances 9 and 1") {
  // The four sign combinations of (a, b) give zero covariance between columns.
  const double a = std::sqrt(27.0 / 4.0);
  const double b = std::sqrt(3.0 / 4.0);
  Matrix x(4, 2);
  x << a, b, a, -b, -a, b, -a, -b;
  const auto p = ies::pca(x);
  CHECK(p.variances(0) == doctest::Approx(9.0));
  CHECK(p.variances(1) == doctest::Approx(1.0));
  CHECK(p.weights(0) == doctest::Approx(0.9));
  CHECK(p.weights(1) == doctest::Approx(0.1));
  CHECK(p.weights.sum() == doctest::Approx(1.0));
}

TEST_CASE("pca rejects zero-variance data") {
  Matrix x(6, 3);
  x.rowwise() = Eigen::RowVector3d(0.1, 0.2, 0.3);
  CHECK_THROWS_AS(ies::pca(x), ies::DegenerateDataError);
}

TEST_CASE("pca invariants on random data") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 25; ++trial) {
    const auto rows = oracle::random_rows(rng, 10 + trial, 2 + trial % 6);
    Matrix x = testing::to_matrix(rows);
    // Correlate the columns so the axes are not trivially aligned.
    x.col(0) += 0.7 * x.col(1);
    const auto p = ies::pca(x);
    const Matrix cov = ies::covariance(x);
    CHECK(p.variances.sum() == doctest::Approx(cov.trace()).epsilon(1e-9));
    CHECK((p.variances.array() >= 0.0).all());
    for (Index i = 0; i + 1 < p.variances.size(); ++i) CHECK(p.variances(i) >= p.variances(i + 1));

    const Matrix pc = ies::covariance(p.projected);
    const double scale = pc.diagonal().maxCoeff();
    for (Index i = 0; i < pc.rows(); ++i) {
      for (Index j = 0; j < pc.cols(); ++j) {
        if (i != j) CHECK(std::abs(pc(i, j)) <= 1e-8 * scale);
      }
    }
    check_eigen_pairs(cov, ies::symmetric_eigen(cov));
  }
}
