#include "ies/kmeans.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <random>
#include <string>

namespace ies {
namespace {

/// First centres of the starts: distinct rows from a seeded partial shuffle.
std::vector<Index> start_rows(Index n, std::uint64_t seed, const KMeansOptions& options) {
  if (options.first_center) {
    const Index start = *options.first_center;
    if (start < 0 || start >= n) throw InvalidParameterError("first_center out of range");
    return {start};
  }
  const Index count = std::min<Index>(n, options.restarts);
  std::vector<Index> rows(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = i;
  std::mt19937_64 rng(seed);
  for (Index i = 0; i < count; ++i) {
    const auto span = static_cast<std::uint64_t>(n - i);
    const Index j = i + static_cast<Index>(rng() % span);
    std::swap(rows[static_cast<std::size_t>(i)], rows[static_cast<std::size_t>(j)]);
  }
  rows.resize(static_cast<std::size_t>(count));
  return rows;
}

std::vector<Index> initial_centers(const Matrix& data, Index k, Index start) {
  const Index n = data.rows();
  std::vector<Index> centers{start};
  Vector nearest(n);
  for (Index i = 0; i < n; ++i) nearest(i) = row_squared_distance(data, i, start);
  while (static_cast<Index>(centers.size()) < k) {
    Index far = 0;
    for (Index i = 1; i < n; ++i) {
      if (nearest(i) > nearest(far)) far = i;
    }
    centers.push_back(far);
    for (Index i = 0; i < n; ++i) {
      double d = 0.0;
      for (Index c = 0; c < data.cols(); ++c) {
        const double diff = data(i, c) - data(far, c);
        d += diff * diff;
      }
      nearest(i) = std::min(nearest(i), d);
    }
  }
  return centers;
}

double point_to_centroid(const Matrix& data, Index i, const Matrix& centroids, Index c) {
  double d = 0.0;
  for (Index j = 0; j < data.cols(); ++j) {
    const double diff = data(i, j) - centroids(c, j);
    d += diff * diff;
  }
  return d;
}

/// Nearest centroid for every point; ties go to the lower id.
std::vector<Index> assign(const Matrix& data, const Matrix& centroids) {
  std::vector<Index> out(static_cast<std::size_t>(data.rows()));
  for (Index i = 0; i < data.rows(); ++i) {
    Index best = 0;
    double best_d = point_to_centroid(data, i, centroids, 0);
    for (Index c = 1; c < centroids.rows(); ++c) {
      const double d = point_to_centroid(data, i, centroids, c);
      if (d < best_d) {
        best_d = d;
        best = c;
      }
    }
    out[static_cast<std::size_t>(i)] = best;
  }
  return out;
}

/// Drops centroids without members and renumbers assignments densely.
void drop_empty(std::vector<Index>& assignments, Matrix& centroids) {
  const Index k = centroids.rows();
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index a : assignments) ++counts[static_cast<std::size_t>(a)];
  std::vector<Index> remap(static_cast<std::size_t>(k), -1);
  Index next = 0;
  for (Index c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) remap[static_cast<std::size_t>(c)] = next++;
  }
  if (next == k) return;
  Matrix kept(next, centroids.cols());
  for (Index c = 0; c < k; ++c) {
    const Index to = remap[static_cast<std::size_t>(c)];
    if (to >= 0) kept.row(to) = centroids.row(c);
  }
  centroids = std::move(kept);
  for (Index& a : assignments) a = remap[static_cast<std::size_t>(a)];
}

}  // namespace

Matrix cluster_means(const Matrix& data, const std::vector<Index>& assignments, Index k) {
  Matrix sums = Matrix::Zero(k, data.cols());
  Vector counts = Vector::Zero(k);
  for (Index i = 0; i < data.rows(); ++i) {
    const Index a = assignments[static_cast<std::size_t>(i)];
    sums.row(a) += data.row(i);
    counts(a) += 1.0;
  }
  for (Index c = 0; c < k; ++c) {
    if (counts(c) > 0.0) sums.row(c) /= counts(c);
  }
  return sums;
}

double sse(const Matrix& data, const std::vector<Index>& assignments, const Matrix& centroids) {
  if (static_cast<Index>(assignments.size()) != data.rows()) {
    throw DimensionError("assignments has " + std::to_string(assignments.size()) +
                         " entries for " + std::to_string(data.rows()) + " points");
  }
  if (centroids.rows() > 0 && centroids.cols() != data.cols()) {
    throw DimensionError("centroid dimension does not match data");
  }
  double total = 0.0;
  for (Index i = 0; i < data.rows(); ++i) {
    const Index a = assignments[static_cast<std::size_t>(i)];
    if (a < 0 || a >= centroids.rows()) {
      throw DimensionError("assignment id " + std::to_string(a) + " outside centroid range");
    }
    total += point_to_centroid(data, i, centroids, a);
  }
  return total;
}

namespace {

KMeansResult lloyd(const Matrix& data, Index k, Index start, const KMeansOptions& options) {
  Matrix centroids(k, data.cols());
  const auto seeds = initial_centers(data, k, start);
  for (Index c = 0; c < k; ++c) centroids.row(c) = data.row(seeds[static_cast<std::size_t>(c)]);

  KMeansResult out;
  std::vector<Index> labels;
  for (int iter = 1; iter <= options.max_iter; ++iter) {
    labels = assign(data, centroids);
    drop_empty(labels, centroids);
    const Matrix updated = cluster_means(data, labels, centroids.rows());
    double movement = 0.0;
    for (Index c = 0; c < centroids.rows(); ++c) {
      movement = std::max(movement, (updated.row(c) - centroids.row(c)).norm());
    }
    centroids = updated;
    out.sse_history.push_back(sse(data, labels, centroids));
    assert(out.sse_history.size() < 2 ||
           out.sse_history.back() <=
               out.sse_history[out.sse_history.size() - 2] * (1.0 + 1e-12) + 1e-300);
    out.iterations = iter;
    if (movement < options.tol) {
      out.converged = true;
      break;
    }
  }

  out.assignments = std::move(labels);
  out.centroids = std::move(centroids);
  out.sse = out.sse_history.back();
  return out;
}

}  // namespace

KMeansResult kmeans(const Matrix& data, Index k, std::uint64_t seed, const KMeansOptions& options) {
  const Index n = data.rows();
  if (k < 1) throw InvalidParameterError("k must be at least 1");
  if (k > n) {
    throw InvalidParameterError("k = " + std::to_string(k) + " exceeds the " +
                                std::to_string(n) + " available points");
  }
  if (options.max_iter < 1) throw InvalidParameterError("max_iter must be positive");
  if (options.restarts < 1) throw InvalidParameterError("restarts must be positive");
  require_finite(data, "kmeans input");

  std::optional<KMeansResult> best;
  for (Index start : start_rows(n, seed, options)) {
    KMeansResult run = lloyd(data, k, start, options);
    if (!best || run.sse < best->sse) best = std::move(run);
  }
  return std::move(*best);
}

}  // namespace ies
