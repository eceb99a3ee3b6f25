#pragma once

#include <cstdint>
#include <vector>

#include "ies/affinity.hpp"
#include "ies/kmeans.hpp"
#include "ies/scaling.hpp"

namespace ies {

struct NjwOptions {
  DistanceExponent exponent = DistanceExponent::kSquared;
  KMeansOptions kmeans;
};

/// Affinity of the matching kind for a scaling estimate.
Matrix build_affinity(const Matrix& data, const ScalingEstimate& scaling,
                      DistanceExponent exponent = DistanceExponent::kSquared);

/// Top-k eigenvectors of the Laplacian with every row scaled to unit length.
Matrix spectral_embed(const Matrix& laplacian, Index k);

/// Same as above from an already computed (descending) spectrum.
Matrix spectral_embed(const EigenPairs<double>& spectrum, Index k);

struct NjwResult {
  std::vector<Index> assignments;
  Matrix embedding;
  KMeansResult clustering;
};

/// Embedding plus k-means for a precomputed Laplacian spectrum.
NjwResult njw_from_spectrum(const EigenPairs<double>& spectrum, Index k, std::uint64_t seed,
                            const KMeansOptions& kmeans_options = {});

/// affinity -> normalized Laplacian -> top-k embedding -> k-means.
NjwResult njw_run(const Matrix& data, Index k, const ScalingEstimate& scaling, std::uint64_t seed,
                  const NjwOptions& options = {});

/// Cluster id per row of data; ids are dense from 0.
std::vector<Index> njw_cluster(const Matrix& data, Index k, const ScalingEstimate& scaling,
                               std::uint64_t seed, const NjwOptions& options = {});

}  // namespace ies
