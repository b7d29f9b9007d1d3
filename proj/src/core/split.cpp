#include "core/split.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace smf {

void SplitSpec::validate() const {
  if (!(train > 0.0) || !(validation > 0.0) || !(test > 0.0)) {
    throw_usage("split fractions must all be positive");
  }
  if (std::abs(train + validation + test - 1.0) > 1e-9) {
    throw_usage("split fractions must sum to 1");
  }
}

std::vector<std::string> SplitAssignment::ids_in(const std::string& split) const {
  std::vector<std::string> ids;
  for (const auto& [id, name] : by_scene) {
    if (name == split) ids.push_back(id);
  }
  return ids;
}

SplitAssignment assign_splits(std::vector<std::string> scene_ids, const SplitSpec& spec) {
  spec.validate();
  std::sort(scene_ids.begin(), scene_ids.end());
  Rng rng(Rng::mix(spec.seed, 0x53504C49ULL));  // dedicated split stream
  shuffle(scene_ids, rng);

  std::size_t n = scene_ids.size();
  auto n_train = static_cast<std::size_t>(std::llround(spec.train * static_cast<double>(n)));
  auto n_train_val = static_cast<std::size_t>(
      std::llround((spec.train + spec.validation) * static_cast<double>(n)));
  n_train = std::min(n_train, n);
  n_train_val = std::min(std::max(n_train_val, n_train), n);

  SplitAssignment out;
  for (std::size_t i = 0; i < n; ++i) {
    const char* name = i < n_train ? "train" : (i < n_train_val ? "val" : "test");
    out.by_scene[scene_ids[i]] = name;
  }
  return out;
}

std::string serialize_split(const SplitAssignment& assignment) {
  std::string text;
  for (const auto& [id, split] : assignment.by_scene) {
    text += id;
    text += '\t';
    text += split;
    text += '\n';
  }
  return text;
}

SplitAssignment parse_split(const std::string& text) {
  SplitAssignment out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw_data("split manifest line " + std::to_string(lineno) + ": expected 'scene_id<TAB>split'");
    }
    std::string id = line.substr(0, tab);
    std::string split = line.substr(tab + 1);
    if (split != "train" && split != "val" && split != "test") {
      throw_data("split manifest line " + std::to_string(lineno) + ": unknown split '" + split + "'");
    }
    if (!out.by_scene.emplace(id, split).second) {
      throw_data("split manifest line " + std::to_string(lineno) + ": duplicate scene '" + id + "'");
    }
  }
  return out;
}

SplitAssignment load_split(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open split manifest '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_split(buf.str());
}

void save_split(const SplitAssignment& assignment, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write split manifest '" + path + "'");
  out << serialize_split(assignment);
  if (!out) throw_data("failed writing split manifest '" + path + "'");
}

}  // namespace smf
