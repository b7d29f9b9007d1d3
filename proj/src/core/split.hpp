#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace smf {

// Deterministic train/validation/test partition of a scene set.
struct SplitSpec {
  double train = 0.6;
  double validation = 0.2;
  double test = 0.2;
  std::uint64_t seed = 1;

  void validate() const;
};

struct SplitAssignment {
  // scene_id -> one of "train" | "val" | "test"; every scene appears exactly once.
  std::map<std::string, std::string> by_scene;

  std::vector<std::string> ids_in(const std::string& split) const;
};

// Shuffles the sorted scene ids with the spec's seed, then cuts the shuffled
// order at the cumulative fractions (rounded), so the same ids and seed always
// produce the same partition.
SplitAssignment assign_splits(std::vector<std::string> scene_ids, const SplitSpec& spec);

// Manifest file: one "scene_id<TAB>split" line per scene.
std::string serialize_split(const SplitAssignment& assignment);
SplitAssignment parse_split(const std::string& text);

SplitAssignment load_split(const std::string& path);
void save_split(const SplitAssignment& assignment, const std::string& path);

}  // namespace smf
