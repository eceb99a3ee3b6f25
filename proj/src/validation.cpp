#include "ies/validation.hpp"

#include <algorithm>
#include <atomic>
#include <future>
#include <string>
#include <thread>

namespace ies {
namespace {

std::vector<LabelId> sorted_unique(std::vector<LabelId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

Index position(const std::vector<LabelId>& sorted, LabelId id) {
  return static_cast<Index>(std::lower_bound(sorted.begin(), sorted.end(), id) - sorted.begin());
}

}  // namespace

AssociationMatrix association_matrix(const std::vector<LabelId>& assignments,
                                     const std::vector<LabelId>& labels) {
  if (assignments.size() != labels.size()) {
    throw DimensionError("assignments (" + std::to_string(assignments.size()) +
                         ") and labels (" + std::to_string(labels.size()) +
                         ") differ in length");
  }
  AssociationMatrix am;
  am.label_ids = sorted_unique(labels);
  am.cluster_ids = sorted_unique(assignments);
  am.counts = CountMatrix::Zero(static_cast<Index>(am.label_ids.size()),
                                static_cast<Index>(am.cluster_ids.size()));
  for (std::size_t i = 0; i < labels.size(); ++i) {
    ++am.counts(position(am.label_ids, labels[i]), position(am.cluster_ids, assignments[i]));
  }
  return am;
}

ConfusionMatrix confusion_from_association(const AssociationMatrix& am) {
  const auto n_labels = static_cast<Index>(am.label_ids.size());
  if (am.counts.rows() != n_labels ||
      am.counts.cols() != static_cast<Index>(am.cluster_ids.size())) {
    throw DimensionError("association matrix shape does not match its id lists");
  }
  const Eigen::Matrix<std::int64_t, Eigen::Dynamic, 1> support = am.counts.rowwise().sum();

  ConfusionMatrix cm;
  cm.label_ids = am.label_ids;
  cm.counts = CountMatrix::Zero(n_labels, n_labels);
  for (Index c = 0; c < am.counts.cols(); ++c) {
    Index best = 0;
    for (Index l = 1; l < n_labels; ++l) {
      const auto count = am.counts(l, c);
      const auto best_count = am.counts(best, c);
      // Labels are visited in ascending id order, so an exact tie keeps the smaller id.
      if (count > best_count || (count == best_count && support(l) > support(best))) best = l;
    }
    cm.cluster_label_map[am.cluster_ids[static_cast<std::size_t>(c)]] =
        am.label_ids[static_cast<std::size_t>(best)];
    cm.counts.col(best) += am.counts.col(c);
  }
  return cm;
}

MetricsReport metrics(const ConfusionMatrix& cm, Index n_clusters_generated) {
  const auto n_labels = static_cast<Index>(cm.label_ids.size());
  if (cm.counts.rows() != n_labels || cm.counts.cols() != n_labels) {
    throw DimensionError("confusion matrix must be square over its labels");
  }
  MetricsReport r;
  r.n_clusters = n_clusters_generated;
  const auto total = static_cast<double>(cm.total());
  if (n_labels == 0 || total == 0.0) return r;

  std::vector<bool> owns_cluster(static_cast<std::size_t>(n_labels), false);
  for (const auto& [cluster, label] : cm.cluster_label_map) {
    owns_cluster[static_cast<std::size_t>(position(cm.label_ids, label))] = true;
  }

  std::int64_t diagonal = 0;
  for (Index l = 0; l < n_labels; ++l) {
    const std::int64_t hit = cm.counts(l, l);
    const std::int64_t predicted = cm.counts.col(l).sum();
    const std::int64_t actual = cm.counts.row(l).sum();
    diagonal += hit;

    LabelMetrics m;
    m.label = cm.label_ids[static_cast<std::size_t>(l)];
    m.support = actual;
    m.precision = predicted > 0 ? static_cast<double>(hit) / static_cast<double>(predicted) : 0.0;
    m.recall = actual > 0 ? static_cast<double>(hit) / static_cast<double>(actual) : 0.0;
    const double pr = m.precision + m.recall;
    m.f_measure = pr > 0.0 ? 2.0 * m.precision * m.recall / pr : 0.0;
    r.per_label.push_back(m);

    const double w = static_cast<double>(actual) / total;
    r.precision += w * m.precision;
    r.recall += w * m.recall;
    r.f_measure += w * m.f_measure;
  }
  r.accuracy = static_cast<double>(diagonal) / total;
  r.indicator_cluster_ratio =
      static_cast<double>(n_clusters_generated) / static_cast<double>(n_labels);
  r.indicator_label_recovery =
      static_cast<double>(std::count(owns_cluster.begin(), owns_cluster.end(), true)) /
      static_cast<double>(n_labels);
  return r;
}

MetricsReport evaluate(const std::vector<LabelId>& assignments,
                       const std::vector<LabelId>& labels) {
  const auto am = association_matrix(assignments, labels);
  return metrics(confusion_from_association(am), static_cast<Index>(am.cluster_ids.size()));
}

std::vector<ElbowPoint> elbow_sweep(const Matrix& data, Index k_min, Index k_max,
                                    const ScalingEstimate& scaling, std::uint64_t seed,
                                    ElbowSpace space, const NjwOptions& options, bool parallel) {
  const Index n = data.rows();
  if (k_min < 1 || k_max < k_min || k_max > n) {
    throw InvalidParameterError("elbow range [" + std::to_string(k_min) + ", " +
                                std::to_string(k_max) + "] must lie within [1, " +
                                std::to_string(n) + "]");
  }
  // The spectrum does not depend on k, so it is computed once.
  const auto spectrum =
      symmetric_eigen(normalized_laplacian(build_affinity(data, scaling, options.exponent)));

  auto point = [&](Index k) {
    const NjwResult r = njw_from_spectrum(spectrum, k, seed, options.kmeans);
    ElbowPoint p;
    p.k = k;
    if (space == ElbowSpace::kEmbedding) {
      p.sse = r.clustering.sse;
    } else {
      const Index used = r.clustering.cluster_count();
      p.sse = sse(data, r.assignments, cluster_means(data, r.assignments, used));
    }
    return p;
  };

  std::vector<ElbowPoint> out(static_cast<std::size_t>(k_max - k_min + 1));
  if (parallel) {
    std::atomic<Index> next{k_min};
    auto worker = [&] {
      for (Index k = next++; k <= k_max; k = next++) {
        out[static_cast<std::size_t>(k - k_min)] = point(k);
      }
    };
    const auto workers = std::max(1U, std::thread::hardware_concurrency());
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < workers; ++w) pool.push_back(std::async(std::launch::async, worker));
    for (auto& f : pool) f.get();
  } else {
    for (Index k = k_min; k <= k_max; ++k) out[static_cast<std::size_t>(k - k_min)] = point(k);
  }
  return out;
}

}  // namespace ies
