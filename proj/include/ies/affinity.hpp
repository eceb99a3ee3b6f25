#pragma once

#include "ies/linalg.hpp"

namespace ies {

/// Power applied to the Euclidean distance inside the Gaussian kernel.
/// kSquared is the usual NJW / self-tuning kernel; kLinear keeps the plain norm.
enum class DistanceExponent { kLinear = 1, kSquared = 2 };

/// A_ij = exp(-d_ij^p / (2 sigma_sq)) for i != j, zero diagonal.
Matrix affinity_global(const Matrix& data, double sigma_sq,
                       DistanceExponent exponent = DistanceExponent::kSquared);

/// A_ij = exp(-d_ij^p / (sigma_i sigma_j)) for i != j, zero diagonal.
/// A pair with sigma_i sigma_j = 0 gets 1 when coincident and 0 otherwise.
Matrix affinity_local(const Matrix& data, const Vector& local_sigmas,
                      DistanceExponent exponent = DistanceExponent::kSquared);

/// D^{-1/2} A D^{-1/2}, D the row sums of A.
/// Throws IsolatedPointError listing every row whose sum is zero.
Matrix normalized_laplacian(const Matrix& affinity);

/// Rows of the affinity matrix with zero sum, in ascending order.
std::vector<Index> isolated_points(const Matrix& affinity);

}  // namespace ies
