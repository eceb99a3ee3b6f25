#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ies/affinity.hpp"
#include "ies/eigengap.hpp"
#include "ies/kmeans.hpp"
#include "ies/scaling.hpp"

namespace ies {

/// Why a node of the search tree was not split further.
enum class LeafReason {
  kEigengapOne,    // eigengap estimated a single cluster
  kMinSize,        // fewer members than min_node_size
  kDegenerate,     // zero variance or a degenerate spectral embedding
  kIsolated,       // zero affinity to every other member
  kDepthCap,       // depth limit reached
  kSplitCollapse,  // k-means returned a single effective cluster
};

enum class Mode { kIesGlobal, kIesLocal, kEls, kNjw, kLegacyEigengap };

std::string to_string(LeafReason reason);
std::string to_string(Mode mode);
LeafReason leaf_reason_from_string(const std::string& s);
Mode mode_from_string(const std::string& s);

struct IesConfig {
  double variance_threshold = kDefaultVarianceThreshold;
  Index knn_k = kDefaultKnn;
  double search_fraction = kDefaultSearchFraction;
  Index min_node_size = 5;
  int depth_cap = 32;
  DistanceExponent exponent = DistanceExponent::kSquared;
  /// Fixed global sigma^2 used at every node instead of the PCA estimate.
  std::optional<double> sigma_override;
  /// Expand sibling subtrees on separate threads. Output is identical either way.
  bool parallel_siblings = false;
  int kmeans_max_iter = 300;
  double kmeans_tol = 1e-8;

  void validate() const;
};

struct ClusterTreeNode {
  Index id = 0;
  std::vector<Index> members;  // indices into the root dataset, ascending
  int depth = 0;
  std::optional<ScalingEstimate> scaling;
  Index estimated_k = 1;
  std::vector<Index> children;
  std::optional<LeafReason> leaf_reason;

  bool is_leaf() const { return children.empty(); }
  friend bool operator==(const ClusterTreeNode&, const ClusterTreeNode&) = default;
};

struct ClusteringOutcome {
  /// Nodes in depth-first pre-order; tree[i].id == i and tree[0] is the root.
  std::vector<ClusterTreeNode> tree;
  /// Leaf node id for every row of the input.
  std::vector<Index> leaf_assignments;
  Mode mode = Mode::kIesGlobal;
  double runtime_ms = 0.0;
  std::uint64_t master_seed = 0;

  std::vector<Index> leaf_ids() const;
  Index leaf_count() const;
  /// Leaf assignments renumbered 0..L-1 in leaf pre-order.
  std::vector<Index> cluster_labels() const;
};

/// Depth-first divisive search that re-estimates the scale and the eigengap
/// cluster count at every node and stops where the eigengap finds one cluster.
ClusteringOutcome ies_cluster(const Matrix& data, ScaleKind scale, const IesConfig& config,
                              std::uint64_t master_seed);

/// A single local-scaling eigengap round; its children are the final clusters.
ClusteringOutcome els_cluster(const Matrix& data, const IesConfig& config,
                              std::uint64_t master_seed);

/// A single PCA-scaled eigengap round, the non-iterated baseline.
ClusteringOutcome legacy_eigengap_cluster(const Matrix& data, const IesConfig& config,
                                          std::uint64_t master_seed);

/// Plain one-shot NJW with a caller-chosen k, packaged as a depth-1 tree.
ClusteringOutcome njw_outcome(const Matrix& data, Index k, ScaleKind scale,
                              const IesConfig& config, std::uint64_t master_seed);

/// First violated structural invariant of the tree, if any.
std::optional<std::string> tree_violation(const ClusteringOutcome& outcome, Index n);

/// Seed for a child given its parent's seed and its position among siblings.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child_index);

}  // namespace ies
