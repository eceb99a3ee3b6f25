#include "ies/report.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace ies {
namespace {

using nlohmann::json;

const char* const kModes[] = {"ies-global", "ies-local", "els", "njw", "legacy-eigengap", "elbow"};

bool is_local_mode(const std::string& mode) { return mode == "ies-local" || mode == "els"; }

std::string to_string(ElbowSpace s) { return s == ElbowSpace::kEmbedding ? "embedding" : "raw"; }

ElbowSpace elbow_space_from_string(const std::string& s) {
  if (s == "embedding") return ElbowSpace::kEmbedding;
  if (s == "raw") return ElbowSpace::kRaw;
  throw ConfigError("elbow space must be 'embedding' or 'raw', got '" + s + "'");
}

json counts_to_json(const CountMatrix& m) {
  json rows = json::array();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

CountMatrix counts_from_json(const json& j, std::size_t rows, std::size_t cols) {
  CountMatrix m = CountMatrix::Zero(static_cast<Index>(rows), static_cast<Index>(cols));
  if (j.size() != rows) throw InvalidDataError("count matrix row count mismatch");
  for (std::size_t r = 0; r < rows; ++r) {
    if (j[r].size() != cols) throw InvalidDataError("count matrix column count mismatch");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Index>(r), static_cast<Index>(c)) = j[r][c].get<std::int64_t>();
    }
  }
  return m;
}

bool same_counts(const CountMatrix& a, const CountMatrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.size() == 0 || a == b);
}

template <typename T>
json optional_to_json(const std::optional<T>& v) {
  return v ? json(*v) : json(nullptr);
}

template <typename T>
std::optional<T> optional_from_json(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<T>();
}

json scaling_to_json(const ClusterTreeNode& node) {
  const auto& s = *node.scaling;
  json j = {{"node", node.id}, {"depth", node.depth}};
  if (s.kind == ScaleKind::kGlobal) {
    j["kind"] = "global";
    j["sigma_sq"] = s.sigma_sq;
    j["components_used"] = s.components_used;
    j["variance_captured"] = s.variance_captured;
  } else {
    j["kind"] = "local";
    j["neighbor_rank"] = s.neighbor_rank;
    j["local_sigmas"] = std::vector<double>(s.local_sigmas.data(),
                                            s.local_sigmas.data() + s.local_sigmas.size());
  }
  return j;
}

ScalingEstimate scaling_from_json(const json& j) {
  const auto kind = j.at("kind").get<std::string>();
  if (kind == "global") {
    ScalingEstimate s = ScalingEstimate::global(j.at("sigma_sq").get<double>());
    s.components_used = j.at("components_used").get<Index>();
    s.variance_captured = j.at("variance_captured").get<double>();
    return s;
  }
  if (kind == "local") {
    const auto v = j.at("local_sigmas").get<std::vector<double>>();
    ScalingEstimate s =
        ScalingEstimate::local(Eigen::Map<const Vector>(v.data(), static_cast<Index>(v.size())));
    s.neighbor_rank = j.at("neighbor_rank").get<Index>();
    return s;
  }
  throw InvalidDataError("unknown scaling kind '" + kind + "'");
}

Matrix checked_features(const Dataset& d) {
  if (d.size() < 1 || d.dims() < 1) throw InvalidDataError("dataset is empty");
  return d.features;
}

}  // namespace

void RunConfig::validate() const {
  if (std::find(std::begin(kModes), std::end(kModes), mode) == std::end(kModes)) {
    throw ConfigError("unknown mode '" + mode + "'");
  }
  if (mode == "njw" && !k_override) throw ConfigError("mode njw requires --k");
  if (k_override && *k_override < 1) throw ConfigError("k must be at least 1");
  if (sigma_override && is_local_mode(mode)) {
    throw ConfigError("--sigma applies to global-scale modes only");
  }
  if (distance_exponent != 1 && distance_exponent != 2) {
    throw ConfigError("distance exponent must be 1 or 2");
  }
  if (k_min && *k_min < 1) throw ConfigError("k-min must be at least 1");
  if (k_min && k_max && *k_max < *k_min) throw ConfigError("k-max must not be below k-min");
  ies_config().validate();
}

IesConfig RunConfig::ies_config() const {
  IesConfig c;
  c.variance_threshold = variance_threshold;
  c.knn_k = knn_k;
  c.search_fraction = search_fraction;
  c.min_node_size = min_node_size;
  c.depth_cap = depth_cap;
  c.exponent = distance_exponent == 1 ? DistanceExponent::kLinear : DistanceExponent::kSquared;
  c.sigma_override = sigma_override;
  c.parallel_siblings = parallel;
  return c;
}

bool operator==(const Evaluation& a, const Evaluation& b) {
  return same_counts(a.association.counts, b.association.counts) &&
         a.association.label_ids == b.association.label_ids &&
         a.association.cluster_ids == b.association.cluster_ids &&
         same_counts(a.confusion.counts, b.confusion.counts) &&
         a.confusion.label_ids == b.confusion.label_ids &&
         a.confusion.cluster_label_map == b.confusion.cluster_label_map &&
         a.metrics == b.metrics && a.label_names == b.label_names;
}

Evaluation evaluate_labels(const std::vector<LabelId>& clusters, const std::vector<LabelId>& labels,
                           std::map<LabelId, std::string> label_names) {
  Evaluation e;
  e.association = association_matrix(clusters, labels);
  e.confusion = confusion_from_association(e.association);
  e.metrics = metrics(e.confusion, static_cast<Index>(e.association.cluster_ids.size()));
  e.label_names = std::move(label_names);
  return e;
}

Report run(const RunConfig& config, const Dataset& dataset) {
  config.validate();
  if (config.mode == "elbow") throw ConfigError("elbow mode produces a curve, use run_elbow");
  const Matrix data = checked_features(dataset);
  const IesConfig ies = config.ies_config();

  const auto start = std::chrono::steady_clock::now();
  ClusteringOutcome outcome;
  const Mode mode = mode_from_string(config.mode);
  switch (mode) {
    case Mode::kIesGlobal:
      outcome = ies_cluster(data, ScaleKind::kGlobal, ies, config.master_seed);
      break;
    case Mode::kIesLocal:
      outcome = ies_cluster(data, ScaleKind::kLocal, ies, config.master_seed);
      break;
    case Mode::kEls:
      outcome = els_cluster(data, ies, config.master_seed);
      break;
    case Mode::kLegacyEigengap:
      outcome = legacy_eigengap_cluster(data, ies, config.master_seed);
      break;
    case Mode::kNjw:
      outcome = njw_outcome(data, *config.k_override, ScaleKind::kGlobal, ies, config.master_seed);
      break;
  }

  Report r;
  r.mode = config.mode;
  r.params = config;
  r.assignments = outcome.leaf_assignments;
  if (dataset.labels) {
    const std::vector<LabelId> clusters(r.assignments.begin(), r.assignments.end());
    r.metrics = evaluate_labels(clusters, *dataset.labels, dataset.label_names);
  }
  r.tree = std::move(outcome.tree);
  const auto stop = std::chrono::steady_clock::now();
  r.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return r;
}

std::vector<ElbowPoint> run_elbow(const RunConfig& config, const Dataset& dataset) {
  config.validate();
  const Matrix data = checked_features(dataset);
  const Index n = data.rows();
  const Index k_min = config.k_min.value_or(1);
  const Index k_max = config.k_max.value_or(config.k_override.value_or(std::min<Index>(n, 20)));

  const ScalingEstimate scaling = config.sigma_override
                                      ? ScalingEstimate::global(*config.sigma_override)
                                      : estimate_global_sigma(data, config.variance_threshold);
  NjwOptions options;
  options.exponent = config.ies_config().exponent;
  return elbow_sweep(data, k_min, k_max, scaling, config.master_seed, config.elbow_space, options,
                     config.parallel);
}

std::string elbow_csv(const std::vector<ElbowPoint>& points) {
  std::ostringstream out;
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  out << "k,sse\n";
  for (const auto& p : points) out << p.k << ',' << p.sse << '\n';
  return out.str();
}

void to_json(json& j, const RunConfig& c) {
  j = {{"mode", c.mode},
       {"sigma", optional_to_json(c.sigma_override)},
       {"k", optional_to_json(c.k_override)},
       {"variance_threshold", c.variance_threshold},
       {"knn", c.knn_k},
       {"search_fraction", c.search_fraction},
       {"min_node_size", c.min_node_size},
       {"depth_cap", c.depth_cap},
       {"distance_exponent", c.distance_exponent},
       {"seed", c.master_seed},
       {"elbow_space", to_string(c.elbow_space)},
       {"k_min", optional_to_json(c.k_min)},
       {"k_max", optional_to_json(c.k_max)},
       {"parallel", c.parallel}};
}

void from_json(const json& j, RunConfig& c) {
  c.mode = j.at("mode").get<std::string>();
  c.sigma_override = optional_from_json<double>(j, "sigma");
  c.k_override = optional_from_json<Index>(j, "k");
  c.variance_threshold = j.at("variance_threshold").get<double>();
  c.knn_k = j.at("knn").get<Index>();
  c.search_fraction = j.at("search_fraction").get<double>();
  c.min_node_size = j.at("min_node_size").get<Index>();
  c.depth_cap = j.at("depth_cap").get<int>();
  c.distance_exponent = j.at("distance_exponent").get<int>();
  c.master_seed = j.at("seed").get<std::uint64_t>();
  c.elbow_space = elbow_space_from_string(j.at("elbow_space").get<std::string>());
  c.k_min = optional_from_json<Index>(j, "k_min");
  c.k_max = optional_from_json<Index>(j, "k_max");
  c.parallel = j.value("parallel", false);
}

void to_json(json& j, const Evaluation& e) {
  const auto& m = e.metrics;
  json per_label = json::array();
  for (const auto& l : m.per_label) {
    per_label.push_back({{"label", l.label},
                         {"precision", l.precision},
                         {"recall", l.recall},
                         {"f_measure", l.f_measure},
                         {"support", l.support}});
  }
  json cluster_map = json::array();
  for (const auto& [cluster, label] : e.confusion.cluster_label_map) {
    cluster_map.push_back({{"cluster", cluster}, {"label", label}});
  }
  json names = json::object();
  for (const auto& [id, name] : e.label_names) names[std::to_string(id)] = name;

  j = {{"accuracy", m.accuracy},
       {"precision", m.precision},
       {"recall", m.recall},
       {"f_measure", m.f_measure},
       {"n_clusters", m.n_clusters},
       {"n_labels", e.confusion.label_ids.size()},
       {"indicator_cluster_ratio", m.indicator_cluster_ratio},
       {"indicator_label_recovery", m.indicator_label_recovery},
       {"per_label", per_label},
       {"majority_tie_break", "larger-class-support-then-smaller-label-id"},
       {"association",
        {{"label_ids", e.association.label_ids},
         {"cluster_ids", e.association.cluster_ids},
         {"counts", counts_to_json(e.association.counts)}}},
       {"confusion",
        {{"label_ids", e.confusion.label_ids},
         {"counts", counts_to_json(e.confusion.counts)},
         {"cluster_label_map", cluster_map}}},
       {"label_names", names}};
}

void from_json(const json& j, Evaluation& e) {
  auto& m = e.metrics;
  m.accuracy = j.at("accuracy").get<double>();
  m.precision = j.at("precision").get<double>();
  m.recall = j.at("recall").get<double>();
  m.f_measure = j.at("f_measure").get<double>();
  m.n_clusters = j.at("n_clusters").get<Index>();
  m.indicator_cluster_ratio = j.at("indicator_cluster_ratio").get<double>();
  m.indicator_label_recovery = j.at("indicator_label_recovery").get<double>();
  m.per_label.clear();
  for (const auto& l : j.at("per_label")) {
    LabelMetrics lm;
    lm.label = l.at("label").get<LabelId>();
    lm.precision = l.at("precision").get<double>();
    lm.recall = l.at("recall").get<double>();
    lm.f_measure = l.at("f_measure").get<double>();
    lm.support = l.at("support").get<std::int64_t>();
    m.per_label.push_back(lm);
  }

  const auto& a = j.at("association");
  a.at("label_ids").get_to(e.association.label_ids);
  a.at("cluster_ids").get_to(e.association.cluster_ids);
  e.association.counts = counts_from_json(a.at("counts"), e.association.label_ids.size(),
                                          e.association.cluster_ids.size());

  const auto& c = j.at("confusion");
  c.at("label_ids").get_to(e.confusion.label_ids);
  e.confusion.counts = counts_from_json(c.at("counts"), e.confusion.label_ids.size(),
                                        e.confusion.label_ids.size());
  e.confusion.cluster_label_map.clear();
  for (const auto& entry : c.at("cluster_label_map")) {
    e.confusion.cluster_label_map[entry.at("cluster").get<LabelId>()] =
        entry.at("label").get<LabelId>();
  }

  e.label_names.clear();
  for (const auto& [key, value] : j.at("label_names").items()) {
    e.label_names[std::stoll(key)] = value.get<std::string>();
  }
}

void to_json(json& j, const Report& r) {
  json sigma_trace = json::array();
  json tree = json::array();
  for (const auto& node : r.tree) {
    if (node.scaling) sigma_trace.push_back(scaling_to_json(node));
    tree.push_back({{"id", node.id},
                    {"depth", node.depth},
                    {"size", node.members.size()},
                    {"members", node.members},
                    {"estimated_k", node.estimated_k},
                    {"children", node.children},
                    {"leaf_reason", node.leaf_reason ? json(to_string(*node.leaf_reason))
                                                     : json(nullptr)}});
  }
  j = {{"schema_version", r.schema_version},
       {"mode", r.mode},
       {"params", r.params},
       {"sigma_trace", sigma_trace},
       {"tree", tree},
       {"assignments", r.assignments},
       {"runtime_ms", r.runtime_ms}};
  if (r.metrics) j["metrics"] = *r.metrics;
}

void from_json(const json& j, Report& r) {
  r.schema_version = j.at("schema_version").get<int>();
  if (r.schema_version != kSchemaVersion) {
    throw InvalidDataError("unsupported report schema version " +
                           std::to_string(r.schema_version));
  }
  r.mode = j.at("mode").get<std::string>();
  j.at("params").get_to(r.params);
  r.tree.clear();
  for (const auto& n : j.at("tree")) {
    ClusterTreeNode node;
    node.id = n.at("id").get<Index>();
    node.depth = n.at("depth").get<int>();
    n.at("members").get_to(node.members);
    node.estimated_k = n.at("estimated_k").get<Index>();
    n.at("children").get_to(node.children);
    if (!n.at("leaf_reason").is_null()) {
      node.leaf_reason = leaf_reason_from_string(n.at("leaf_reason").get<std::string>());
    }
    r.tree.push_back(std::move(node));
  }
  for (const auto& s : j.at("sigma_trace")) {
    const auto id = s.at("node").get<Index>();
    if (id < 0 || id >= static_cast<Index>(r.tree.size())) {
      throw InvalidDataError("sigma_trace refers to unknown node " + std::to_string(id));
    }
    r.tree[static_cast<std::size_t>(id)].scaling = scaling_from_json(s);
  }
  j.at("assignments").get_to(r.assignments);
  r.runtime_ms = j.at("runtime_ms").get<double>();
  if (j.contains("metrics") && !j.at("metrics").is_null()) {
    r.metrics = j.at("metrics").get<Evaluation>();
  } else {
    r.metrics.reset();
  }
}

}  // namespace ies
