#pragma once

// Independent reference computations used only by tests. Plain loops over
// std::vector, no Eigen, so they do not share code paths with the library.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <random>
#include <utility>
#include <vector>

namespace oracle {

using Rows = std::vector<std::vector<double>>;

struct Spectrum {
  std::vector<double> values;  // descending
  Rows vectors;                // vectors[i] is the eigenvector for values[i]
};

/// Cyclic Jacobi rotations on a symmetric matrix.
inline Spectrum jacobi_eigen(Rows a) {
  const std::size_t n = a.size();
  Rows v(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) v[i][i] = 1.0;

  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    double scale = 0.0;
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = 0; q < n; ++q) {
        scale += a[p][q] * a[p][q];
        if (p != q) off += a[p][q] * a[p][q];
      }
    }
    if (off <= 1e-30 * std::max(scale, 1e-300)) break;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        if (a[p][q] == 0.0) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p];
          const double akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k];
          const double aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v[k][p];
          const double vkq = v[k][q];
          v[k][p] = c * vkp - s * vkq;
          v[k][q] = s * vkp + c * vkq;
        }
      }
    }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return a[x][x] > a[y][y]; });
  Spectrum out;
  for (std::size_t i : order) {
    out.values.push_back(a[i][i]);
    std::vector<double> vec(n);
    for (std::size_t k = 0; k < n; ++k) vec[k] = v[k][i];
    out.vectors.push_back(std::move(vec));
  }
  return out;
}

inline Rows covariance(const Rows& x) {
  const std::size_t n = x.size();
  const std::size_t m = x.front().size();
  std::vector<double> mean(m, 0.0);
  for (const auto& row : x) {
    for (std::size_t j = 0; j < m; ++j) mean[j] += row[j];
  }
  for (auto& v : mean) v /= static_cast<double>(n);
  Rows cov(m, std::vector<double>(m, 0.0));
  for (const auto& row : x) {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < m; ++j) cov[i][j] += (row[i] - mean[i]) * (row[j] - mean[j]);
    }
  }
  for (auto& r : cov) {
    for (auto& v : r) v /= static_cast<double>(n - 1);
  }
  return cov;
}

struct GlobalSigma {
  double sigma_sq = 0.0;
  std::size_t components = 0;
};

/// Covariance eigenvalues as axis variances, explained-variance cutoff, weighted mean.
inline GlobalSigma global_sigma(const Rows& x, double threshold) {
  auto spec = jacobi_eigen(covariance(x));
  double total = 0.0;
  for (double& v : spec.values) {
    v = std::max(v, 0.0);
    total += v;
  }
  GlobalSigma out;
  double cum = 0.0;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t i = 0; i < spec.values.size(); ++i) {
    const double w = spec.values[i] / total;
    cum += w;
    num += w * spec.values[i];
    den += w;
    out.components = i + 1;
    if (cum >= threshold - 1e-12) break;
  }
  out.sigma_sq = num / den;
  return out;
}

inline double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

/// Distance to the k-th nearest other point, k clipped to n - 1.
inline std::vector<double> knn_sigmas(const Rows& x, std::size_t k) {
  const std::size_t n = x.size();
  const std::size_t rank = std::min(k, n - 1);
  std::vector<double> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> d;
    for (std::size_t j = 0; j < n; ++j) {
      if (j != i) d.push_back(distance(x[i], x[j]));
    }
    std::sort(d.begin(), d.end());
    out.push_back(d[rank - 1]);
  }
  return out;
}

inline double partition_sse(const Rows& x, const std::vector<int>& labels, int k) {
  const std::size_t m = x.front().size();
  Rows sums(static_cast<std::size_t>(k), std::vector<double>(m, 0.0));
  std::vector<int> counts(static_cast<std::size_t>(k), 0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    ++counts[c];
    for (std::size_t j = 0; j < m; ++j) sums[c][j] += x[i][j];
  }
  double total = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const auto c = static_cast<std::size_t>(labels[i]);
    for (std::size_t j = 0; j < m; ++j) {
      const double d = x[i][j] - sums[c][j] / counts[c];
      total += d * d;
    }
  }
  return total;
}

/// Minimum SSE over every assignment of the points to at most k groups.
inline double best_partition_sse(const Rows& x, int k) {
  const std::size_t n = x.size();
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  while (true) {
    best = std::min(best, partition_sse(x, labels, k));
    std::size_t i = 0;
    while (i < n && labels[i] == k - 1) labels[i++] = 0;
    if (i == n) break;
    ++labels[i];
  }
  return best;
}

/// Affinity with unit weight inside blocks, zero across, zero diagonal.
inline Rows block_affinity(const std::vector<int>& sizes) {
  std::vector<int> block;
  for (std::size_t b = 0; b < sizes.size(); ++b) block.insert(block.end(), sizes[b], static_cast<int>(b));
  const std::size_t n = block.size();
  Rows a(n, std::vector<double>(n, 0.0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a[i][j] = (i != j && block[i] == block[j]) ? 1.0 : 0.0;
  }
  return a;
}

/// True when both labelings induce the same partition.
template <typename A, typename B>
bool same_partition(const std::vector<A>& a, const std::vector<B>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
    }
  }
  return true;
}

/// Fraction of points whose cluster's modal label equals their own label.
inline double majority_accuracy(const std::vector<std::int64_t>& clusters,
                                const std::vector<std::int64_t>& labels) {
  std::vector<std::int64_t> ids = clusters;
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  std::size_t hits = 0;
  for (auto c : ids) {
    std::vector<std::int64_t> members;
    for (std::size_t i = 0; i < clusters.size(); ++i) {
      if (clusters[i] == c) members.push_back(labels[i]);
    }
    std::sort(members.begin(), members.end());
    std::size_t best = 0;
    for (std::size_t i = 0; i < members.size();) {
      std::size_t j = i;
      while (j < members.size() && members[j] == members[i]) ++j;
      best = std::max(best, j - i);
      i = j;
    }
    hits += best;
  }
  return static_cast<double>(hits) / static_cast<double>(clusters.size());
}

inline Rows random_rows(std::mt19937_64& rng, std::size_t n, std::size_t m, double lo = -5.0,
                        double hi = 5.0) {
  std::uniform_real_distribution<double> u(lo, hi);
  Rows x(n, std::vector<double>(m));
  for (auto& r : x) {
    for (auto& v : r) v = u(rng);
  }
  return x;
}

}  // namespace oracle
