#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "ies/errors.hpp"

namespace ies {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Matrix = Mat<double>;
using Vector = Vec<double>;
using Index = Eigen::Index;

/// Full spectrum of a symmetric matrix. values are sorted descending and
/// column i of vectors is the unit eigenvector for values[i].
template <typename Scalar>
struct EigenPairs {
  Vec<Scalar> values;
  Mat<Scalar> vectors;
};

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidDataError(std::string(what) + " contains NaN or Inf entries");
  }
}

namespace detail {

template <typename Scalar>
Scalar symmetry_tolerance() {
  return std::max(Scalar(1e-10), Scalar(100) * std::numeric_limits<Scalar>::epsilon());
}

/// Flip each column so that its largest-magnitude entry is positive.
/// The first entry wins among equal magnitudes.
template <typename Scalar>
void canonicalize_signs(Mat<Scalar>& vectors) {
  for (Index c = 0; c < vectors.cols(); ++c) {
    Index arg = 0;
    vectors.col(c).cwiseAbs().maxCoeff(&arg);
    if (vectors(arg, c) < Scalar(0)) vectors.col(c) = -vectors.col(c);
  }
}

}  // namespace detail

/// Dense symmetric eigendecomposition, full spectrum, sorted descending.
///
/// Input is symmetrized by averaging with its transpose. A symmetry defect
/// larger than 1e-10 relative to the largest entry is rejected.
template <typename Derived>
EigenPairs<typename Derived::Scalar> symmetric_eigen(const Eigen::MatrixBase<Derived>& m) {
  using Scalar = typename Derived::Scalar;
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("symmetric_eigen: expected a non-empty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
  require_finite(m, "symmetric_eigen input");

  const Scalar scale = m.cwiseAbs().maxCoeff();
  const Scalar defect = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (defect > detail::symmetry_tolerance<Scalar>() * scale) {
    throw InvalidDataError("symmetric_eigen: input is not symmetric");
  }
  const Mat<Scalar> sym = (m + m.transpose()) / Scalar(2);

  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> solver(sym, Eigen::ComputeEigenvectors);
  if (solver.info() != Eigen::Success) {
    throw InvalidDataError("symmetric_eigen: eigensolver did not converge");
  }

  const Index n = sym.rows();
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index(0));
  const auto& ascending = solver.eigenvalues();
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return ascending(a) > ascending(b); });

  EigenPairs<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Index i = 0; i < n; ++i) {
    const Index src = order[static_cast<std::size_t>(i)];
    out.values(i) = ascending(src);
    out.vectors.col(i) = solver.eigenvectors().col(src);
  }
  detail::canonicalize_signs(out.vectors);
  return out;
}

/// Column means subtracted from every row.
template <typename Derived>
Mat<typename Derived::Scalar> center_columns(const Eigen::MatrixBase<Derived>& data) {
  return data.rowwise() - data.colwise().mean();
}

/// Sample covariance (divisor n-1) of the mean-centered columns.
template <typename Derived>
Mat<typename Derived::Scalar> covariance(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  if (data.rows() < 2) {
    throw InsufficientDataError("covariance needs at least 2 rows, got " +
                                std::to_string(data.rows()));
  }
  require_finite(data, "covariance input");
  const Mat<Scalar> centered = center_columns(data);
  Mat<Scalar> cov = (centered.transpose() * centered) / Scalar(data.rows() - 1);
  return (cov + cov.transpose()) / Scalar(2);
}

template <typename Scalar>
struct Pca {
  Mat<Scalar> axes;       // U: covariance eigenvectors, descending eigenvalue
  Mat<Scalar> projected;  // P = centered data x U
  Vec<Scalar> variances;  // sample variance of each column of P
  Vec<Scalar> weights;    // variances / sum(variances)
};

/// True when the columns of data carry no variance beyond rounding of the mean.
template <typename Derived>
bool has_zero_variance(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  if (data.rows() < 2) return true;
  const Scalar max_abs = data.cwiseAbs().maxCoeff();
  if (max_abs == Scalar(0)) return true;
  const Mat<Scalar> centered = center_columns(data);
  const Scalar noise = Scalar(16) * Scalar(data.rows()) *
                       std::numeric_limits<Scalar>::epsilon() * max_abs;
  return centered.cwiseAbs().maxCoeff() <= noise;
}

/// Principal component analysis on mean-centered data.
/// Throws DegenerateDataError when the total variance is zero.
template <typename Derived>
Pca<typename Derived::Scalar> pca(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  const Mat<Scalar> cov = covariance(data);
  if (has_zero_variance(data)) {
    throw DegenerateDataError("pca: total variance is zero");
  }
  auto eig = symmetric_eigen(cov);

  Pca<Scalar> out;
  out.axes = std::move(eig.vectors);
  out.projected = center_columns(data) * out.axes;
  out.variances = out.projected.colwise().squaredNorm().transpose() / Scalar(data.rows() - 1);

  const Scalar total = out.variances.sum();
  if (!(total > Scalar(0))) {
    throw DegenerateDataError("pca: total variance is zero");
  }
  for (Index i = 0; i < out.variances.size(); ++i) {
    if (out.variances(i) < Scalar(1e-12) * total) out.variances(i) = Scalar(0);
  }
  out.weights = out.variances / out.variances.sum();
  return out;
}

/// Squared Euclidean distance between rows i and j, summed left to right.
template <typename Derived>
typename Derived::Scalar row_squared_distance(const Eigen::MatrixBase<Derived>& data, Index i,
                                              Index j) {
  using Scalar = typename Derived::Scalar;
  Scalar acc(0);
  for (Index c = 0; c < data.cols(); ++c) {
    const Scalar d = data(i, c) - data(j, c);
    acc += d * d;
  }
  return acc;
}

/// n x n matrix of squared row distances; exactly symmetric, zero diagonal.
template <typename Derived>
Mat<typename Derived::Scalar> pairwise_squared_distances(const Eigen::MatrixBase<Derived>& data) {
  using Scalar = typename Derived::Scalar;
  const Index n = data.rows();
  Mat<Scalar> out = Mat<Scalar>::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      out(i, j) = out(j, i) = row_squared_distance(data, i, j);
    }
  }
  return out;
}

}  // namespace ies
