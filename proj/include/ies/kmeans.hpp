#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ies/linalg.hpp"

namespace ies {

struct KMeansOptions {
  int max_iter = 300;
  /// Stop once no centroid moves farther than this.
  double tol = 1e-8;
  /// Independent farthest-point starts; the lowest final SSE wins.
  int restarts = 10;
  /// Row used as the first centre of a single start. When unset the starts
  /// are distinct rows drawn from the seed.
  std::optional<Index> first_center;
};

struct KMeansResult {
  /// Dense cluster ids in [0, centroids.rows()).
  std::vector<Index> assignments;
  Matrix centroids;
  double sse = 0.0;
  int iterations = 0;
  bool converged = false;
  /// SSE after every Lloyd iteration of the returned run; non-increasing.
  std::vector<double> sse_history;

  Index cluster_count() const { return centroids.rows(); }
};

/// Lloyd iteration from deterministic farthest-point starts.
///
/// Each start draws its first centre with the seed, each further centre is
/// the point farthest from the centres chosen so far. The run with the lowest
/// SSE is returned, the earliest one on ties. Clusters that empty out
/// are dropped and the survivors renumbered, so the returned k may be smaller
/// than requested.
KMeansResult kmeans(const Matrix& data, Index k, std::uint64_t seed,
                    const KMeansOptions& options = {});

/// Sum over points of the squared distance to the assigned centroid.
double sse(const Matrix& data, const std::vector<Index>& assignments, const Matrix& centroids);

/// Per-cluster means of data under assignments (k rows).
Matrix cluster_means(const Matrix& data, const std::vector<Index>& assignments, Index k);

}  // namespace ies
