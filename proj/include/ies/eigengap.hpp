#pragma once

#include "ies/linalg.hpp"

namespace ies {

struct EigengapEstimate {
  Index k = 1;
  /// gaps(i) = |lambda_i - lambda_{i+1}|, zero-based, length n - 1.
  Vector gaps;
  /// Largest cluster count considered.
  Index search_limit = 1;
};

inline constexpr double kDefaultSearchFraction = 0.5;

/// Cluster count at the largest eigengap among the first
/// max(1, floor(search_fraction * n)) gaps. Ties resolve to the smaller count.
/// eigenvalues must be sorted descending.
EigengapEstimate eigengap_k(const Vector& eigenvalues,
                            double search_fraction = kDefaultSearchFraction);

}  // namespace ies
