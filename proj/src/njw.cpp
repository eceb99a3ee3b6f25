#include "ies/njw.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace ies {

Matrix build_affinity(const Matrix& data, const ScalingEstimate& scaling,
                      DistanceExponent exponent) {
  if (scaling.kind == ScaleKind::kGlobal) {
    return affinity_global(data, scaling.sigma_sq, exponent);
  }
  return affinity_local(data, scaling.local_sigmas, exponent);
}

Matrix spectral_embed(const EigenPairs<double>& spectrum, Index k) {
  const Index n = spectrum.vectors.rows();
  if (k < 1 || k > n) {
    throw InvalidParameterError("embedding dimension " + std::to_string(k) +
                                " outside [1, " + std::to_string(n) + "]");
  }
  Matrix y = spectrum.vectors.leftCols(k);
  const double floor = std::sqrt(std::numeric_limits<double>::min());
  for (Index i = 0; i < n; ++i) {
    const double norm = y.row(i).norm();
    if (!(norm > floor)) {
      throw DegenerateEmbeddingError("row " + std::to_string(i) +
                                     " of the eigenvector matrix is numerically zero");
    }
    y.row(i) /= norm;
  }
  return y;
}

Matrix spectral_embed(const Matrix& laplacian, Index k) {
  if (k < 1 || k > laplacian.rows()) {
    throw InvalidParameterError("embedding dimension " + std::to_string(k) +
                                " outside [1, " + std::to_string(laplacian.rows()) + "]");
  }
  return spectral_embed(symmetric_eigen(laplacian), k);
}

NjwResult njw_from_spectrum(const EigenPairs<double>& spectrum, Index k, std::uint64_t seed,
                            const KMeansOptions& kmeans_options) {
  NjwResult out;
  out.embedding = spectral_embed(spectrum, k);
  out.clustering = kmeans(out.embedding, k, seed, kmeans_options);
  out.assignments = out.clustering.assignments;
  return out;
}

NjwResult njw_run(const Matrix& data, Index k, const ScalingEstimate& scaling, std::uint64_t seed,
                  const NjwOptions& options) {
  if (k < 1 || k > data.rows()) {
    throw InvalidParameterError("k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(data.rows()) + "]");
  }
  const Matrix laplacian = normalized_laplacian(build_affinity(data, scaling, options.exponent));
  return njw_from_spectrum(symmetric_eigen(laplacian), k, seed, options.kmeans);
}

std::vector<Index> njw_cluster(const Matrix& data, Index k, const ScalingEstimate& scaling,
                               std::uint64_t seed, const NjwOptions& options) {
  return njw_run(data, k, scaling, seed, options).assignments;
}

}  // namespace ies
