#pragma once

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "ies/dataset.hpp"

namespace ies {

struct GroupSpec {
  std::vector<double> center;  // zero-padded up to dims
  std::vector<double> spread;  // per-dimension sd; a single value applies to all
  Index count = 1;
};

struct SyntheticSpec {
  std::vector<GroupSpec> groups;
  double noise_sd = 0.0;
  Index dims = 1;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Gaussian blobs, one label per group (the group's position). Every
/// coordinate also receives white noise of sd noise_sd. Deterministic in seed.
Dataset generate_synthetic(const SyntheticSpec& spec);

/// Two groups `coarse` apart along axis 0, the second one made of two
/// subgroups `fine` apart along axis 1. Labels 0, 1, 2; n split evenly.
SyntheticSpec nested_multiscale_spec(Index n = 300, Index dims = 20, double coarse = 100.0,
                                     double fine = 1.0, double spread = 0.1,
                                     std::uint64_t seed = 0);

void to_json(nlohmann::json& j, const GroupSpec& g);
void from_json(const nlohmann::json& j, GroupSpec& g);
void to_json(nlohmann::json& j, const SyntheticSpec& s);
void from_json(const nlohmann::json& j, SyntheticSpec& s);

}  // namespace ies
