#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "ies/dataset.hpp"
#include "ies/ies.hpp"

namespace ies {

inline constexpr int kSchemaVersion = 1;

/// Everything a single CLI invocation can configure.
struct RunConfig {
  /// ies-global, ies-local, els, njw, legacy-eigengap or elbow.
  std::string mode = "ies-global";
  std::optional<double> sigma_override;
  std::optional<Index> k_override;
  double variance_threshold = kDefaultVarianceThreshold;
  Index knn_k = kDefaultKnn;
  double search_fraction = kDefaultSearchFraction;
  Index min_node_size = 5;
  int depth_cap = 32;
  int distance_exponent = 2;
  std::uint64_t master_seed = 0;
  ElbowSpace elbow_space = ElbowSpace::kEmbedding;
  std::optional<Index> k_min;
  std::optional<Index> k_max;
  bool parallel = false;

  /// Throws ConfigError for out-of-range values or a missing k in njw mode.
  void validate() const;
  IesConfig ies_config() const;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// External validation of a clustering against ground-truth labels.
struct Evaluation {
  AssociationMatrix association;
  ConfusionMatrix confusion;
  MetricsReport metrics;
  std::map<LabelId, std::string> label_names;

  friend bool operator==(const Evaluation& a, const Evaluation& b);
};

Evaluation evaluate_labels(const std::vector<LabelId>& clusters, const std::vector<LabelId>& labels,
                           std::map<LabelId, std::string> label_names = {});

struct Report {
  int schema_version = kSchemaVersion;
  std::string mode;
  RunConfig params;
  std::vector<ClusterTreeNode> tree;
  /// Leaf node id per input row.
  std::vector<Index> assignments;
  std::optional<Evaluation> metrics;
  double runtime_ms = 0.0;

  friend bool operator==(const Report&, const Report&) = default;
};

/// Runs a clustering mode (not elbow). Runtime covers dispatch through
/// evaluation; parsing happens before this call.
Report run(const RunConfig& config, const Dataset& dataset);

/// Elbow curve over [k_min, k_max] with a PCA (or overridden) global scale.
std::vector<ElbowPoint> run_elbow(const RunConfig& config, const Dataset& dataset);

/// "k,sse" header followed by one row per point.
std::string elbow_csv(const std::vector<ElbowPoint>& points);

void to_json(nlohmann::json& j, const RunConfig& c);
void from_json(const nlohmann::json& j, RunConfig& c);
void to_json(nlohmann::json& j, const Evaluation& e);
void from_json(const nlohmann::json& j, Evaluation& e);
void to_json(nlohmann::json& j, const Report& r);
void from_json(const nlohmann::json& j, Report& r);

}  // namespace ies
