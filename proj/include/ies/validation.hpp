#pragma once

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include "ies/njw.hpp"

namespace ies {

using LabelId = std::int64_t;
using CountMatrix = Eigen::Matrix<std::int64_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Ground-truth label x generated cluster contingency table.
struct AssociationMatrix {
  CountMatrix counts;              // rows follow label_ids, columns cluster_ids
  std::vector<LabelId> label_ids;  // ascending
  std::vector<LabelId> cluster_ids;  // ascending

  std::int64_t total() const { return counts.sum(); }
};

/// Square label x label table after majority-vote labelling of clusters and
/// merging of clusters that received the same label.
struct ConfusionMatrix {
  CountMatrix counts;  // rows: true label, columns: assigned label
  std::vector<LabelId> label_ids;
  std::map<LabelId, LabelId> cluster_label_map;

  std::int64_t total() const { return counts.sum(); }
};

struct LabelMetrics {
  LabelId label = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::int64_t support = 0;

  bool operator==(const LabelMetrics&) const = default;
};

/// Support-weighted averages plus the two cluster-quality indicators.
struct MetricsReport {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::vector<LabelMetrics> per_label;
  Index n_clusters = 0;
  /// generated clusters / ground-truth labels
  double indicator_cluster_ratio = 0.0;
  /// fraction of labels that own at least one cluster after the majority vote
  double indicator_label_recovery = 0.0;

  bool operator==(const MetricsReport&) const = default;
};

AssociationMatrix association_matrix(const std::vector<LabelId>& assignments,
                                     const std::vector<LabelId>& labels);

/// Each cluster takes its modal label; ties go to the label with more points
/// overall, then to the smaller label id.
ConfusionMatrix confusion_from_association(const AssociationMatrix& am);

MetricsReport metrics(const ConfusionMatrix& cm, Index n_clusters_generated);

/// association -> confusion -> metrics in one call.
MetricsReport evaluate(const std::vector<LabelId>& assignments, const std::vector<LabelId>& labels);

enum class ElbowSpace { kEmbedding, kRaw };

struct ElbowPoint {
  Index k = 0;
  double sse = 0.0;
};

/// SSE of the final k-means for every k in [k_min, k_max], same seed each time.
/// kEmbedding measures it on the spectral embedding, kRaw on the input rows
/// with cluster means as centroids.
std::vector<ElbowPoint> elbow_sweep(const Matrix& data, Index k_min, Index k_max,
                                    const ScalingEstimate& scaling, std::uint64_t seed,
                                    ElbowSpace space = ElbowSpace::kEmbedding,
                                    const NjwOptions& options = {}, bool parallel = false);

}  // namespace ies
