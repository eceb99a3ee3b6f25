#include "ies/affinity.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ies {
namespace {

double kernel_distance(double squared, DistanceExponent exponent) {
  return exponent == DistanceExponent::kSquared ? squared : std::sqrt(squared);
}

void check_exponent(DistanceExponent exponent) {
  if (exponent != DistanceExponent::kLinear && exponent != DistanceExponent::kSquared) {
    throw InvalidParameterError("distance exponent must be 1 or 2");
  }
}

}  // namespace

Matrix affinity_global(const Matrix& data, double sigma_sq, DistanceExponent exponent) {
  if (!(sigma_sq > 0.0) || !std::isfinite(sigma_sq)) {
    throw InvalidParameterError("sigma_sq must be a positive finite number");
  }
  check_exponent(exponent);
  require_finite(data, "affinity input");
  const Index n = data.rows();
  const double denom = 2.0 * sigma_sq;
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = kernel_distance(row_squared_distance(data, i, j), exponent);
      a(i, j) = a(j, i) = std::exp(-d / denom);
    }
  }
  return a;
}

Matrix affinity_local(const Matrix& data, const Vector& local_sigmas, DistanceExponent exponent) {
  const Index n = data.rows();
  if (local_sigmas.size() != n) {
    throw DimensionError("local_sigmas has " + std::to_string(local_sigmas.size()) +
                         " entries for " + std::to_string(n) + " points");
  }
  check_exponent(exponent);
  require_finite(data, "affinity input");
  require_finite(local_sigmas, "local_sigmas");
  if ((local_sigmas.array() < 0.0).any()) {
    throw InvalidParameterError("local sigmas must be nonnegative");
  }
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      const double d = kernel_distance(row_squared_distance(data, i, j), exponent);
      const double scale = local_sigmas(i) * local_sigmas(j);
      double value;
      if (scale > 0.0) {
        value = std::exp(-d / scale);
      } else {
        value = d == 0.0 ? 1.0 : 0.0;
      }
      a(i, j) = a(j, i) = value;
    }
  }
  return a;
}

std::vector<Index> isolated_points(const Matrix& affinity) {
  std::vector<Index> out;
  const Vector degree = affinity.rowwise().sum();
  for (Index i = 0; i < degree.size(); ++i) {
    if (!(degree(i) > std::numeric_limits<double>::min())) out.push_back(i);
  }
  return out;
}

Matrix normalized_laplacian(const Matrix& affinity) {
  if (affinity.rows() != affinity.cols() || affinity.rows() == 0) {
    throw DimensionError("affinity matrix must be square and non-empty");
  }
  require_finite(affinity, "affinity matrix");
  if (auto isolated = isolated_points(affinity); !isolated.empty()) {
    throw IsolatedPointError(std::vector<std::ptrdiff_t>(isolated.begin(), isolated.end()));
  }
  const Vector inv_sqrt = affinity.rowwise().sum().cwiseSqrt().cwiseInverse();
  Matrix l = inv_sqrt.asDiagonal() * affinity * inv_sqrt.asDiagonal();
  // Restore exact symmetry lost to rounding in the two diagonal scalings.
  return (l + l.transpose()) / 2.0;
}

}  // namespace ies
