#pragma once

#include "ies/linalg.hpp"

namespace ies {

enum class ScaleKind { kGlobal, kLocal };

/// Affinity width estimated from data. Global estimates carry sigma_sq and the
/// PCA bookkeeping; local estimates carry one sigma per point.
struct ScalingEstimate {
  ScaleKind kind = ScaleKind::kGlobal;
  double sigma_sq = 0.0;
  Vector local_sigmas;
  Index components_used = 0;
  double variance_captured = 0.0;
  /// Neighbour rank actually used for local estimates, min(k, n - 1).
  Index neighbor_rank = 0;

  static ScalingEstimate global(double sigma_sq);
  static ScalingEstimate local(Vector sigmas);

  friend bool operator==(const ScalingEstimate& a, const ScalingEstimate& b);
};

inline constexpr double kDefaultVarianceThreshold = 0.95;
inline constexpr Index kDefaultKnn = 7;

/// Exact comparison, including sizes.
bool same_entries(const Vector& a, const Vector& b);

/// Variance-weighted mean of the leading principal-axis variances.
///
/// The leading y axes are the fewest whose cumulative explained-variance
/// ratio reaches variance_threshold; sigma_sq = sum(w_i v_i) / sum(w_i) over
/// those axes.
ScalingEstimate estimate_global_sigma(const Matrix& data,
                                      double variance_threshold = kDefaultVarianceThreshold);

/// Distance from each point to its k-th nearest neighbour, k clipped to n - 1.
ScalingEstimate estimate_local_sigmas(const Matrix& data, Index k = kDefaultKnn);

}  // namespace ies
