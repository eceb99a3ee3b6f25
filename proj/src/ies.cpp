#include "ies/ies.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <stdexcept>
#include <utility>

#include "ies/njw.hpp"

namespace ies {
namespace {

constexpr int kMaxParallelDepth = 4;

struct Settings {
  ScaleKind scale = ScaleKind::kGlobal;
  IesConfig config;
  /// Overrides the eigengap estimate at the root (fixed-k NJW).
  std::optional<Index> root_k;
};

struct PendingNode {
  std::vector<Index> members;
  int depth = 0;
  std::uint64_t seed = 0;
  std::optional<LeafReason> forced_leaf;
};

struct Expansion {
  std::optional<ScalingEstimate> scaling;
  Index estimated_k = 1;
  std::optional<LeafReason> leaf_reason;
  std::vector<PendingNode> children;
};

Matrix gather_rows(const Matrix& data, const std::vector<Index>& rows) {
  Matrix out(static_cast<Index>(rows.size()), data.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Index>(i)) = data.row(rows[i]);
  return out;
}

Matrix gather_square(const Matrix& m, const std::vector<Index>& keep) {
  const auto n = static_cast<Index>(keep.size());
  Matrix out(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out(i, j) = m(keep[static_cast<std::size_t>(i)], keep[static_cast<std::size_t>(j)]);
    }
  }
  return out;
}

Expansion leaf(LeafReason reason, std::optional<ScalingEstimate> scaling = std::nullopt,
               Index k = 1) {
  Expansion e;
  e.leaf_reason = reason;
  e.scaling = std::move(scaling);
  e.estimated_k = k;
  return e;
}

PendingNode child_of(const PendingNode& parent, std::vector<Index> members, std::size_t position) {
  PendingNode c;
  c.members = std::move(members);
  c.depth = parent.depth + 1;
  c.seed = derive_seed(parent.seed, position);
  return c;
}

ScalingEstimate estimate_scale(const Matrix& sub, const Settings& s) {
  if (s.scale == ScaleKind::kLocal) return estimate_local_sigmas(sub, s.config.knn_k);
  if (s.config.sigma_override) return ScalingEstimate::global(*s.config.sigma_override);
  return estimate_global_sigma(sub, s.config.variance_threshold);
}

/// Processes one node. Pure in (data, node, settings).
Expansion expand(const Matrix& data, const PendingNode& node, const Settings& s) {
  if (node.forced_leaf) return leaf(*node.forced_leaf);

  const auto size = static_cast<Index>(node.members.size());
  const bool is_root = node.depth == 0;
  const bool fixed_k = is_root && s.root_k.has_value();
  if (!fixed_k && size < s.config.min_node_size) return leaf(LeafReason::kMinSize);
  if (node.depth >= s.config.depth_cap) return leaf(LeafReason::kDepthCap);
  if (size < 2) return leaf(LeafReason::kMinSize);

  const Matrix sub = gather_rows(data, node.members);
  if (has_zero_variance(sub)) return leaf(LeafReason::kDegenerate);

  ScalingEstimate scaling;
  try {
    scaling = estimate_scale(sub, s);
  } catch (const DegenerateDataError&) {
    return leaf(LeafReason::kDegenerate);
  }

  Matrix affinity = build_affinity(sub, scaling, s.config.exponent);

  // Zero-affinity points become singleton leaves. Removing them leaves every
  // other degree unchanged, so the rest is split within this node.
  Expansion e;
  std::vector<Index> kept_local;
  std::vector<Index> kept;
  {
    const auto isolated = isolated_points(affinity);
    std::size_t cursor = 0;
    for (Index local = 0; local < size; ++local) {
      const Index global = node.members[static_cast<std::size_t>(local)];
      if (cursor < isolated.size() && isolated[cursor] == local) {
        ++cursor;
        PendingNode single = child_of(node, {global}, e.children.size());
        single.forced_leaf = LeafReason::kIsolated;
        e.children.push_back(std::move(single));
      } else {
        kept_local.push_back(local);
        kept.push_back(global);
      }
    }
    if (!isolated.empty()) affinity = gather_square(affinity, kept_local);
  }
  const bool ejected = !e.children.empty();
  const auto kept_size = static_cast<Index>(kept.size());

  // With isolated points ejected the remainder is one more child; a remainder
  // that cannot be split further is a leaf for the given reason.
  auto finish = [&](LeafReason reason, Index k) -> Expansion {
    if (!ejected) return leaf(reason, std::move(scaling), k);
    if (!kept.empty()) {
      PendingNode rest = child_of(node, kept, e.children.size());
      rest.forced_leaf = reason;
      e.children.push_back(std::move(rest));
    }
    e.scaling = std::move(scaling);
    e.estimated_k = k;
    return std::move(e);
  };

  if (kept_size < 2) return finish(LeafReason::kIsolated, 1);

  const auto spectrum = symmetric_eigen(normalized_laplacian(affinity));
  affinity.resize(0, 0);

  Index k;
  if (fixed_k) {
    k = std::min(*s.root_k, kept_size);
  } else {
    k = eigengap_k(spectrum.values, s.config.search_fraction).k;
    if (k == 1) return finish(LeafReason::kEigengapOne, 1);
  }

  KMeansOptions km;
  km.max_iter = s.config.kmeans_max_iter;
  km.tol = s.config.kmeans_tol;
  NjwResult split;
  try {
    split = njw_from_spectrum(spectrum, k, node.seed, km);
  } catch (const DegenerateEmbeddingError&) {
    return finish(LeafReason::kDegenerate, k);
  }
  const Index effective = split.clustering.cluster_count();
  if (effective < 2) return finish(LeafReason::kSplitCollapse, k);

  std::vector<std::vector<Index>> groups(static_cast<std::size_t>(effective));
  for (Index local = 0; local < kept_size; ++local) {
    groups[static_cast<std::size_t>(split.assignments[static_cast<std::size_t>(local)])].push_back(
        kept[static_cast<std::size_t>(local)]);
  }
  e.scaling = std::move(scaling);
  e.estimated_k = k;
  for (auto& g : groups) {
    if (!g.empty()) e.children.push_back(child_of(node, std::move(g), e.children.size()));
  }
  return e;
}

ClusterTreeNode make_node(Index id, const PendingNode& pending, Expansion& e) {
  ClusterTreeNode n;
  n.id = id;
  n.members = pending.members;
  n.depth = pending.depth;
  n.scaling = std::move(e.scaling);
  n.estimated_k = e.estimated_k;
  n.leaf_reason = e.leaf_reason;
  return n;
}

/// Depth-first traversal with an explicit LIFO stack; ids in pre-order.
std::vector<ClusterTreeNode> search_sequential(const Matrix& data, PendingNode root,
                                               const Settings& s) {
  std::vector<ClusterTreeNode> tree;
  struct Frame {
    PendingNode node;
    Index parent;
  };
  std::vector<Frame> stack;
  stack.push_back({std::move(root), -1});
  while (!stack.empty()) {
    Frame frame = std::move(stack.back());
    stack.pop_back();
    Expansion e = expand(data, frame.node, s);
    const auto id = static_cast<Index>(tree.size());
    tree.push_back(make_node(id, frame.node, e));
    if (frame.parent >= 0) tree[static_cast<std::size_t>(frame.parent)].children.push_back(id);
    for (auto it = e.children.rbegin(); it != e.children.rend(); ++it) {
      stack.push_back({std::move(*it), id});
    }
  }
  return tree;
}

struct Subtree {
  PendingNode node;
  Expansion expansion;
  std::vector<Subtree> children;
};

Subtree search_subtree(const Matrix& data, PendingNode node, const Settings& s) {
  Subtree t;
  t.expansion = expand(data, node, s);
  t.node = std::move(node);
  auto pending = std::move(t.expansion.children);
  t.expansion.children.clear();
  t.children.resize(pending.size());
  if (t.node.depth < kMaxParallelDepth && pending.size() > 1) {
    std::vector<std::future<Subtree>> futures;
    for (std::size_t i = 1; i < pending.size(); ++i) {
      futures.push_back(std::async(std::launch::async, search_subtree, std::cref(data),
                                   std::move(pending[i]), std::cref(s)));
    }
    t.children[0] = search_subtree(data, std::move(pending[0]), s);
    for (std::size_t i = 1; i < pending.size(); ++i) t.children[i] = futures[i - 1].get();
  } else {
    for (std::size_t i = 0; i < pending.size(); ++i) {
      t.children[i] = search_subtree(data, std::move(pending[i]), s);
    }
  }
  return t;
}

Index flatten(Subtree& t, std::vector<ClusterTreeNode>& tree) {
  const auto id = static_cast<Index>(tree.size());
  tree.push_back(make_node(id, t.node, t.expansion));
  for (auto& c : t.children) {
    const Index child = flatten(c, tree);
    tree[static_cast<std::size_t>(id)].children.push_back(child);
  }
  return id;
}

ClusteringOutcome run_search(const Matrix& data, Mode mode, const Settings& s,
                             std::uint64_t master_seed) {
  const auto start = std::chrono::steady_clock::now();
  s.config.validate();
  const Index n = data.rows();
  if (n < 1) throw InvalidDataError("dataset is empty");
  require_finite(data, "dataset");

  PendingNode root;
  root.members.resize(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) root.members[static_cast<std::size_t>(i)] = i;
  root.seed = derive_seed(master_seed, 0);

  ClusteringOutcome out;
  out.mode = mode;
  out.master_seed = master_seed;
  if (s.config.parallel_siblings) {
    Subtree t = search_subtree(data, std::move(root), s);
    flatten(t, out.tree);
  } else {
    out.tree = search_sequential(data, std::move(root), s);
  }

  out.leaf_assignments.assign(static_cast<std::size_t>(n), -1);
  for (const auto& node : out.tree) {
    if (!node.is_leaf()) continue;
    for (Index m : node.members) out.leaf_assignments[static_cast<std::size_t>(m)] = node.id;
  }
  if (auto violation = tree_violation(out, n)) {
    throw std::logic_error("cluster tree invariant violated: " + *violation);
  }
  const auto stop = std::chrono::steady_clock::now();
  out.runtime_ms = std::chrono::duration<double, std::milli>(stop - start).count();
  return out;
}

}  // namespace

std::string to_string(LeafReason reason) {
  switch (reason) {
    case LeafReason::kEigengapOne:
      return "eigengap-one";
    case LeafReason::kMinSize:
      return "min-size";
    case LeafReason::kDegenerate:
      return "degenerate";
    case LeafReason::kIsolated:
      return "isolated";
    case LeafReason::kDepthCap:
      return "depth-cap";
    case LeafReason::kSplitCollapse:
      return "split-collapse";
  }
  return "unknown";
}

std::string to_string(Mode mode) {
  switch (mode) {
    case Mode::kIesGlobal:
      return "ies-global";
    case Mode::kIesLocal:
      return "ies-local";
    case Mode::kEls:
      return "els";
    case Mode::kNjw:
      return "njw";
    case Mode::kLegacyEigengap:
      return "legacy-eigengap";
  }
  return "unknown";
}

LeafReason leaf_reason_from_string(const std::string& s) {
  for (auto r : {LeafReason::kEigengapOne, LeafReason::kMinSize, LeafReason::kDegenerate,
                 LeafReason::kIsolated, LeafReason::kDepthCap, LeafReason::kSplitCollapse}) {
    if (to_string(r) == s) return r;
  }
  throw InvalidDataError("unknown leaf reason '" + s + "'");
}

Mode mode_from_string(const std::string& s) {
  for (auto m : {Mode::kIesGlobal, Mode::kIesLocal, Mode::kEls, Mode::kNjw,
                 Mode::kLegacyEigengap}) {
    if (to_string(m) == s) return m;
  }
  throw ConfigError("unknown mode '" + s + "'");
}

void IesConfig::validate() const {
  if (!(variance_threshold > 0.0 && variance_threshold <= 1.0)) {
    throw ConfigError("variance threshold must lie in (0, 1]");
  }
  if (knn_k < 1) throw ConfigError("knn must be at least 1");
  if (!(search_fraction > 0.0 && search_fraction <= 1.0)) {
    throw ConfigError("search fraction must lie in (0, 1]");
  }
  if (min_node_size < 2) throw ConfigError("min node size must be at least 2");
  if (depth_cap < 0) throw ConfigError("depth cap must be nonnegative");
  if (sigma_override && !(*sigma_override > 0.0 && std::isfinite(*sigma_override))) {
    throw ConfigError("sigma override must be positive");
  }
  if (kmeans_max_iter < 1) throw ConfigError("k-means iteration cap must be positive");
  if (!(kmeans_tol >= 0.0)) throw ConfigError("k-means tolerance must be nonnegative");
}

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t child_index) {
  // splitmix64 finalizer over the combined state.
  std::uint64_t z = parent ^ (0x9e3779b97f4a7c15ULL * (child_index + 1));
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::vector<Index> ClusteringOutcome::leaf_ids() const {
  std::vector<Index> out;
  for (const auto& node : tree) {
    if (node.is_leaf()) out.push_back(node.id);
  }
  return out;
}

Index ClusteringOutcome::leaf_count() const { return static_cast<Index>(leaf_ids().size()); }

std::vector<Index> ClusteringOutcome::cluster_labels() const {
  std::vector<Index> dense(tree.size(), -1);
  Index next = 0;
  for (const auto& node : tree) {
    if (node.is_leaf()) dense[static_cast<std::size_t>(node.id)] = next++;
  }
  std::vector<Index> out(leaf_assignments.size());
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = dense[static_cast<std::size_t>(leaf_assignments[i])];
  }
  return out;
}

std::optional<std::string> tree_violation(const ClusteringOutcome& outcome, Index n) {
  const auto& tree = outcome.tree;
  if (tree.empty()) return "tree is empty";
  if (static_cast<Index>(tree.front().members.size()) != n) return "root does not hold every point";
  if (static_cast<Index>(outcome.leaf_assignments.size()) != n) return "assignment length != n";

  for (std::size_t i = 0; i < tree.size(); ++i) {
    const auto& node = tree[i];
    if (node.id != static_cast<Index>(i)) return "node ids are not positional";
    if (node.members.empty()) return "node " + std::to_string(i) + " is empty";
    if (node.is_leaf() != node.leaf_reason.has_value()) {
      return "node " + std::to_string(i) + " leaf flag disagrees with leaf reason";
    }
    if (node.is_leaf()) continue;
    if (node.children.size() < 2) return "internal node " + std::to_string(i) + " has < 2 children";
    std::vector<Index> merged;
    for (Index c : node.children) {
      if (c <= node.id || c >= static_cast<Index>(tree.size())) return "bad child id";
      const auto& child = tree[static_cast<std::size_t>(c)];
      if (child.members.size() >= node.members.size()) return "child not smaller than parent";
      if (child.depth != node.depth + 1) return "child depth mismatch";
      merged.insert(merged.end(), child.members.begin(), child.members.end());
    }
    std::sort(merged.begin(), merged.end());
    std::vector<Index> parent = node.members;
    std::sort(parent.begin(), parent.end());
    if (merged != parent) {
      return "children of node " + std::to_string(i) + " do not partition its members";
    }
  }

  std::vector<int> seen(static_cast<std::size_t>(n), 0);
  for (const auto& node : tree) {
    if (!node.is_leaf()) continue;
    for (Index m : node.members) {
      if (m < 0 || m >= n) return "member index out of range";
      if (++seen[static_cast<std::size_t>(m)] > 1) return "point in more than one leaf";
      if (outcome.leaf_assignments[static_cast<std::size_t>(m)] != node.id) {
        return "assignment disagrees with leaf membership";
      }
    }
  }
  for (int s : seen) {
    if (s != 1) return "point missing from every leaf";
  }
  return std::nullopt;
}

ClusteringOutcome ies_cluster(const Matrix& data, ScaleKind scale, const IesConfig& config,
                              std::uint64_t master_seed) {
  Settings s;
  s.scale = scale;
  s.config = config;
  return run_search(data, scale == ScaleKind::kGlobal ? Mode::kIesGlobal : Mode::kIesLocal, s,
                    master_seed);
}

ClusteringOutcome els_cluster(const Matrix& data, const IesConfig& config,
                              std::uint64_t master_seed) {
  if (data.rows() < 2) throw InsufficientDataError("ELS needs at least 2 points");
  Settings s;
  s.scale = ScaleKind::kLocal;
  s.config = config;
  s.config.depth_cap = 1;
  return run_search(data, Mode::kEls, s, master_seed);
}

ClusteringOutcome legacy_eigengap_cluster(const Matrix& data, const IesConfig& config,
                                          std::uint64_t master_seed) {
  if (data.rows() < 2) throw InsufficientDataError("eigengap baseline needs at least 2 points");
  Settings s;
  s.scale = ScaleKind::kGlobal;
  s.config = config;
  s.config.depth_cap = 1;
  return run_search(data, Mode::kLegacyEigengap, s, master_seed);
}

ClusteringOutcome njw_outcome(const Matrix& data, Index k, ScaleKind scale,
                              const IesConfig& config, std::uint64_t master_seed) {
  if (k < 1 || k > data.rows()) {
    throw InvalidParameterError("k = " + std::to_string(k) + " outside [1, " +
                                std::to_string(data.rows()) + "]");
  }
  Settings s;
  s.scale = scale;
  s.config = config;
  s.config.depth_cap = 1;
  s.root_k = k;
  return run_search(data, Mode::kNjw, s, master_seed);
}

}  // namespace ies
