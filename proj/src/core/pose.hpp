#pragma once

#include <cstddef>
#include <vector>

#include "core/tensor.hpp"

namespace smf {

// One body pose: L joints by D coordinates, row-major. Units are pixels for
// D=2 and centimeters for D=3.
struct Pose {
  std::size_t joints = 0;
  std::size_t dims = 0;
  Vec coords;  // joints * dims values

  Pose() = default;
  Pose(std::size_t joints, std::size_t dims);

  double& at(std::size_t joint, std::size_t d) { return coords[joint * dims + d]; }
  double at(std::size_t joint, std::size_t d) const { return coords[joint * dims + d]; }

  // Validates L >= 2, D in {2,3} and finiteness.
  void validate(const std::string& what) const;

  bool operator==(const Pose&) const = default;
};

struct PoseSequence {
  std::vector<Pose> frames;
  double frame_rate = 25.0;

  std::size_t length() const { return frames.size(); }
  std::size_t joints() const { return frames.empty() ? 0 : frames.front().joints; }
  std::size_t dims() const { return frames.empty() ? 0 : frames.front().dims; }

  // Validates T >= 1, uniform L/D across frames, positive frame rate.
  void validate(const std::string& what) const;

  bool operator==(const PoseSequence&) const = default;
};

// First differences of a pose sequence: deltas[i] = frames[i+1] - frames[i],
// flattened to joints*dims values per step.
struct OffsetSequence {
  std::size_t joints = 0;
  std::size_t dims = 0;
  std::vector<Vec> deltas;

  std::size_t length() const { return deltas.size(); }

  bool operator==(const OffsetSequence&) const = default;
};

// Subtracts the root joint from every joint. Returns the centered pose and
// the root position that was removed.
std::pair<Pose, Vec> center_pose(const Pose& pose, std::size_t root);

// Adds a root position back onto a centered pose.
Pose uncenter_pose(const Pose& local, const Vec& root_position);

OffsetSequence to_offsets(const PoseSequence& seq);
PoseSequence from_offsets(const Pose& start, const OffsetSequence& offsets, double frame_rate);

// Maps a millisecond horizon to a 1-based frame index: round(ms/1000 * fps),
// clamped to at least 1.
std::size_t ms_to_frame(double ms, double frame_rate);

}  // namespace smf
