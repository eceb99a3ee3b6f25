#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "ies/validation.hpp"
#include "test_util.hpp"

using ies::Index;
using ies::LabelId;

TEST_CASE("association matrix counts label and cluster pairs") {
  const auto am = ies::association_matrix({7, 7, 3, 3, 3}, {1, 2, 2, 2, 1});
  CHECK(am.label_ids == std::vector<LabelId>{1, 2});
  CHECK(am.cluster_ids == std::vector<LabelId>{3, 7});
  CHECK(am.counts(0, 0) == 1);
  CHECK(am.counts(1, 0) == 2);
  CHECK(am.counts(0, 1) == 1);
  CHECK(am.counts(1, 1) == 1);
  CHECK(am.total() == 5);
  CHECK_THROWS_AS(ies::association_matrix({0, 1}, {0}), ies::DimensionError);
}

TEST_CASE("a 19 to 1 cluster takes the majority label") {
  std::vector<LabelId> clusters(20, 0);
  std::vector<LabelId> labels(19, 14501);
  labels.push_back(18001);
  const auto cm = ies::confusion_from_association(ies::association_matrix(clusters, labels));
  CHECK(cm.cluster_label_map.at(0) == 14501);
  CHECK(cm.counts(0, 0) == 19);
  CHECK(cm.counts(1, 0) == 1);
  CHECK(cm.counts(1, 1) == 0);
}

TEST_CASE("clusters with the same majority label merge") {
  std::vector<LabelId> clusters;
  std::vector<LabelId> labels;
  for (LabelId c = 0; c < 5; ++c) {
    for (int i = 0; i < 4; ++i) {
      clusters.push_back(c);
      labels.push_back(1);
    }
    clusters.push_back(c);
    labels.push_back(2);
  }
  const auto cm = ies::confusion_from_association(ies::association_matrix(clusters, labels));
  CHECK(cm.counts(0, 0) == 20);
  CHECK(cm.counts(1, 0) == 5);
  CHECK(cm.counts.col(1).sum() == 0);
  const auto m = ies::metrics(cm, 5);
  CHECK(m.accuracy == doctest::Approx(0.8));
  CHECK(m.indicator_label_recovery == doctest::Approx(0.5));
}

TEST_CASE("majority ties prefer the larger class, then the smaller id") {
  // Cluster 0 is split 2:2 between labels 5 and 9; label 9 has more points overall.
  const auto a = ies::confusion_from_association(
      ies::association_matrix({0, 0, 0, 0, 1, 1}, {5, 5, 9, 9, 9, 9}));
  CHECK(a.cluster_label_map.at(0) == 9);
  const auto b = ies::confusion_from_association(
      ies::association_matrix({0, 0, 1, 1}, {5, 9, 5, 9}));
  CHECK(b.cluster_label_map.at(0) == 5);
  CHECK(b.cluster_label_map.at(1) == 5);
}

TEST_CASE("hand-checked two label metrics") {
  // Confusion [[3, 1], [0, 2]].
  const std::vector<LabelId> clusters{0, 0, 0, 1, 1, 1};
  const std::vector<LabelId> labels{0, 0, 0, 0, 1, 1};
  const auto m = ies::evaluate(clusters, labels);
  CHECK(m.accuracy == doctest::Approx(5.0 / 6.0));
  REQUIRE(m.per_label.size() == 2);
  CHECK(m.per_label[0].precision == doctest::Approx(1.0));
  CHECK(m.per_label[1].precision == doctest::Approx(2.0 / 3.0));
  CHECK(m.per_label[0].recall == doctest::Approx(0.75));
  CHECK(m.per_label[1].recall == doctest::Approx(1.0));
  CHECK(m.per_label[0].support == 4);
  CHECK(m.per_label[1].support == 2);

  const double f0 = 2.0 * 1.0 * 0.75 / 1.75;
  const double f1 = 2.0 * (2.0 / 3.0) / (5.0 / 3.0);
  CHECK(m.per_label[0].f_measure == doctest::Approx(f0));
  CHECK(m.precision == doctest::Approx((4.0 + 2.0 * 2.0 / 3.0) / 6.0));
  CHECK(m.recall == doctest::Approx((4.0 * 0.75 + 2.0) / 6.0));
  CHECK(m.f_measure == doctest::Approx((4.0 * f0 + 2.0 * f1) / 6.0));
  CHECK(m.n_clusters == 2);
  CHECK(m.indicator_cluster_ratio == doctest::Approx(1.0));
}

TEST_CASE("cluster ratio indicator") {
  std::vector<LabelId> clusters;
  std::vector<LabelId> labels;
  for (LabelId c = 0; c < 44; ++c) {
    clusters.push_back(c);
    labels.push_back(c % 16);
  }
  const auto m = ies::evaluate(clusters, labels);
  CHECK(m.n_clusters == 44);
  CHECK(m.indicator_cluster_ratio == doctest::Approx(2.75));
  CHECK(m.indicator_label_recovery == doctest::Approx(1.0));
  CHECK(m.accuracy == 1.0);
}

TEST_CASE("accuracy matches the majority oracle on random partitions") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 5 + static_cast<int>(rng() % 60);
    const int n_labels = 1 + static_cast<int>(rng() % 5);
    const int n_clusters = 1 + static_cast<int>(rng() % 8);
    std::vector<LabelId> c(static_cast<std::size_t>(n));
    std::vector<LabelId> l(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      c[static_cast<std::size_t>(i)] = static_cast<LabelId>(rng() % n_clusters) * 3 + 100;
      l[static_cast<std::size_t>(i)] = static_cast<LabelId>(rng() % n_labels) - 2;
    }
    const auto cm = ies::confusion_from_association(ies::association_matrix(c, l));
    const auto m = ies::metrics(cm, n_clusters);
    CHECK(cm.total() == n);
    CHECK(m.accuracy == doctest::Approx(static_cast<double>(cm.counts.trace()) / n));
    CHECK(m.accuracy == doctest::Approx(oracle::majority_accuracy(c, l)));
    CHECK(m.precision >= 0.0);
    CHECK(m.recall == doctest::Approx(m.accuracy));
    CHECK(m.f_measure <= 1.0 + 1e-12);

    std::vector<std::size_t> perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<LabelId> pc(perm.size());
    std::vector<LabelId> pl(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
      pc[i] = c[perm[i]];
      pl[i] = l[perm[i]];
    }
    CHECK(ies::evaluate(pc, pl) == ies::evaluate(c, l));
  }
}

TEST_CASE("elbow sweep") {
  std::mt19937_64 rng(3);
  const ies::Matrix a = testing::to_matrix(oracle::random_rows(rng, 12, 2));
  const auto s = ies::estimate_global_sigma(a);
  const auto raw = ies::elbow_sweep(a, 1, 12, s, 0, ies::ElbowSpace::kRaw);
  REQUIRE(raw.size() == 12);
  CHECK(raw.front().k == 1);
  CHECK(raw.back().sse == doctest::Approx(0.0).epsilon(1e-12));
  CHECK_THROWS_AS(ies::elbow_sweep(a, 3, 2, s, 0), ies::InvalidParameterError);
  CHECK_THROWS_AS(ies::elbow_sweep(a, 1, 13, s, 0), ies::InvalidParameterError);

  const auto e1 = ies::elbow_sweep(a, 1, 6, s, 4);
  const auto e2 = ies::elbow_sweep(a, 1, 6, s, 4, ies::ElbowSpace::kEmbedding, {}, true);
  REQUIRE(e1.size() == e2.size());
  for (std::size_t i = 0; i < e1.size(); ++i) {
    CHECK(e1[i].k == e2[i].k);
    CHECK(e1[i].sse == e2[i].sse);
  }
}

TEST_CASE("elbow drops sharply at the block count") {
  ies::Matrix x(60, 2);
  std::mt19937_64 rng(10);
  std::normal_distribution<double> g(0.0, 0.2);
  const double cx[3] = {0, 10, 0};
  const double cy[3] = {0, 0, 10};
  for (Index i = 0; i < 60; ++i) {
    x(i, 0) = cx[i / 20] + g(rng);
    x(i, 1) = cy[i / 20] + g(rng);
  }
  const auto s = ies::estimate_global_sigma(x);
  for (auto space : {ies::ElbowSpace::kEmbedding, ies::ElbowSpace::kRaw}) {
    const auto curve = ies::elbow_sweep(x, 1, 5, s, 0, space);
    CHECK(curve[2].sse / curve[1].sse < 0.2);
  }
}
