#include "ies/synthetic.hpp"

#include <random>

namespace ies {

void SyntheticSpec::validate() const {
  if (dims < 1) throw ConfigError("synthetic dims must be at least 1");
  if (groups.empty()) throw ConfigError("synthetic spec needs at least one group");
  if (!(noise_sd >= 0.0)) throw ConfigError("noise_sd must be nonnegative");
  for (const auto& g : groups) {
    if (g.count < 1) throw ConfigError("group count must be at least 1");
    if (static_cast<Index>(g.center.size()) > dims) throw ConfigError("group center exceeds dims");
    if (g.spread.size() != 1 && static_cast<Index>(g.spread.size()) != dims) {
      throw ConfigError("group spread must have 1 or dims entries");
    }
    for (double s : g.spread) {
      if (!(s >= 0.0)) throw ConfigError("group spread must be nonnegative");
    }
  }
}

Dataset generate_synthetic(const SyntheticSpec& spec) {
  spec.validate();
  Index n = 0;
  for (const auto& g : spec.groups) n += g.count;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  Dataset out;
  out.features.resize(n, spec.dims);
  out.labels.emplace();
  Index row = 0;
  for (std::size_t gi = 0; gi < spec.groups.size(); ++gi) {
    const auto& g = spec.groups[gi];
    for (Index i = 0; i < g.count; ++i, ++row) {
      for (Index d = 0; d < spec.dims; ++d) {
        const auto du = static_cast<std::size_t>(d);
        const double center = du < g.center.size() ? g.center[du] : 0.0;
        const double sd = g.spread.size() == 1 ? g.spread[0] : g.spread[du];
        double v = center;
        if (sd > 0.0) v += sd * normal(rng);
        if (spec.noise_sd > 0.0) v += spec.noise_sd * normal(rng);
        out.features(row, d) = v;
      }
      out.labels->push_back(static_cast<LabelId>(gi));
    }
    out.label_names[static_cast<LabelId>(gi)] = std::to_string(gi);
  }
  for (Index d = 0; d < spec.dims; ++d) out.feature_names.push_back("x" + std::to_string(d));
  return out;
}

SyntheticSpec nested_multiscale_spec(Index n, Index dims, double coarse, double fine,
                                     double spread, std::uint64_t seed) {
  if (dims < 2) throw ConfigError("nested layout needs at least 2 dims");
  if (n < 3) throw ConfigError("nested layout needs at least 3 points");
  SyntheticSpec spec;
  spec.dims = dims;
  spec.seed = seed;
  const Index base = n / 3;
  const Index counts[3] = {base, base, n - 2 * base};
  const std::vector<double> centers[3] = {{0.0, 0.0}, {coarse, 0.0}, {coarse, fine}};
  for (int i = 0; i < 3; ++i) spec.groups.push_back({centers[i], {spread}, counts[i]});
  return spec;
}

void to_json(nlohmann::json& j, const GroupSpec& g) {
  j = {{"center", g.center}, {"spread", g.spread}, {"count", g.count}};
}

void from_json(const nlohmann::json& j, GroupSpec& g) {
  j.at("center").get_to(g.center);
  const auto& spread = j.at("spread");
  if (spread.is_array()) {
    spread.get_to(g.spread);
  } else {
    g.spread = {spread.get<double>()};
  }
  j.at("count").get_to(g.count);
}

void to_json(nlohmann::json& j, const SyntheticSpec& s) {
  j = {{"groups", s.groups}, {"noise_sd", s.noise_sd}, {"dims", s.dims}, {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, SyntheticSpec& s) {
  j.at("groups").get_to(s.groups);
  s.noise_sd = j.value("noise_sd", 0.0);
  j.at("dims").get_to(s.dims);
  s.seed = j.value("seed", std::uint64_t{0});
}

}  // namespace ies
