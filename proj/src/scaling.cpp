#include "ies/scaling.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace ies {

ScalingEstimate ScalingEstimate::global(double sigma_sq) {
  ScalingEstimate s;
  s.kind = ScaleKind::kGlobal;
  s.sigma_sq = sigma_sq;
  return s;
}

ScalingEstimate ScalingEstimate::local(Vector sigmas) {
  ScalingEstimate s;
  s.kind = ScaleKind::kLocal;
  s.local_sigmas = std::move(sigmas);
  return s;
}

bool same_entries(const Vector& a, const Vector& b) {
  return a.size() == b.size() && (a.size() == 0 || a == b);
}

bool operator==(const ScalingEstimate& a, const ScalingEstimate& b) {
  return a.kind == b.kind && a.sigma_sq == b.sigma_sq &&
         same_entries(a.local_sigmas, b.local_sigmas) &&
         a.components_used == b.components_used &&
         a.variance_captured == b.variance_captured && a.neighbor_rank == b.neighbor_rank;
}

ScalingEstimate estimate_global_sigma(const Matrix& data, double variance_threshold) {
  if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
    throw InvalidParameterError("variance_threshold must lie in (0, 1]");
  }
  if (data.rows() < 2) {
    throw InsufficientDataError("global scale needs at least 2 points");
  }
  const Pca<double> p = pca(data);
  const Index m = p.weights.size();

  // Cumulative ratios can land a few ulps below 1 when every axis is needed.
  constexpr double kSlack = 1e-12;
  Index used = m;
  double cumulative = 0.0;
  for (Index i = 0; i < m; ++i) {
    cumulative += p.weights(i);
    if (cumulative >= variance_threshold - kSlack) {
      used = i + 1;
      break;
    }
  }

  double weighted = 0.0;
  double weight_sum = 0.0;
  for (Index i = 0; i < used; ++i) {
    weighted += p.weights(i) * p.variances(i);
    weight_sum += p.weights(i);
  }

  ScalingEstimate out = ScalingEstimate::global(weighted / weight_sum);
  out.components_used = used;
  out.variance_captured = std::min(1.0, weight_sum);
  if (!(out.sigma_sq > 0.0)) {
    throw DegenerateDataError("global scale estimate is not positive");
  }
  return out;
}

ScalingEstimate estimate_local_sigmas(const Matrix& data, Index k) {
  const Index n = data.rows();
  if (n < 2) {
    throw InsufficientDataError("local scale needs at least 2 points");
  }
  if (k < 1) {
    throw InvalidParameterError("neighbour rank k must be at least 1");
  }
  require_finite(data, "local scale input");
  const Index rank = std::min(k, n - 1);

  Vector sigmas(n);
  std::vector<std::pair<double, Index>> neighbours;
  neighbours.reserve(static_cast<std::size_t>(n - 1));
  for (Index i = 0; i < n; ++i) {
    neighbours.clear();
    for (Index j = 0; j < n; ++j) {
      if (j != i) neighbours.emplace_back(row_squared_distance(data, i, j), j);
    }
    auto kth = neighbours.begin() + (rank - 1);
    std::nth_element(neighbours.begin(), kth, neighbours.end());
    sigmas(i) = std::sqrt(kth->first);
  }

  ScalingEstimate out = ScalingEstimate::local(std::move(sigmas));
  out.neighbor_rank = rank;
  return out;
}

}  // namespace ies
