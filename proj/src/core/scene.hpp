#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/pose.hpp"

namespace smf {

struct PersonTrack {
  std::string person_id;
  PoseSequence sequence;

  bool operator==(const PersonTrack&) const = default;
};

// A multi-person scene: every person is present in every frame and all tracks
// share the same frame count, joint layout and frame rate. Optionally carries
// one raw context feature vector per frame.
struct Scene {
  std::string scene_id;
  double frame_rate = 25.0;
  std::size_t dims = 2;
  std::vector<std::string> joint_names;
  std::size_t root_joint = 0;
  std::vector<PersonTrack> persons;
  std::optional<std::vector<Vec>> context_raw;

  std::size_t joints() const { return joint_names.size(); }
  std::size_t frames() const { return persons.empty() ? 0 : persons.front().sequence.length(); }
  std::size_t person_count() const { return persons.size(); }

  const PersonTrack& person(std::size_t i) const { return persons[i]; }

  // Enforces all invariants; every construction path (parser, generator,
  // programmatic builders) funnels through this.
  void validate() const;

  bool operator==(const Scene&) const = default;
};

// Canonical scene file format (JSON, one scene per file).
Scene parse_scene(const std::string& text);
std::string serialize_scene(const Scene& scene);

Scene load_scene(const std::string& path);
void save_scene(const Scene& scene, const std::string& path);

}  // namespace smf
