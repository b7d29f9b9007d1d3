#include "core/pose.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace smf {

Pose::Pose(std::size_t joints_, std::size_t dims_)
    : joints(joints_), dims(dims_), coords(joints_ * dims_, 0.0) {}

void Pose::validate(const std::string& what) const {
  if (joints < 2) throw_data(what + ": pose needs at least 2 joints, got " + std::to_string(joints));
  if (dims != 2 && dims != 3) throw_data(what + ": dims must be 2 or 3, got " + std::to_string(dims));
  if (coords.size() != joints * dims) throw_data(what + ": coordinate count mismatch");
  for (double v : coords) {
    if (!std::isfinite(v)) throw_data(what + ": non-finite coordinate");
  }
}

void PoseSequence::validate(const std::string& what) const {
  if (frames.empty()) throw_data(what + ": empty pose sequence");
  if (!(frame_rate > 0.0)) throw_data(what + ": frame_rate must be positive");
  const Pose& first = frames.front();
  for (std::size_t t = 0; t < frames.size(); ++t) {
    frames[t].validate(what + " frame " + std::to_string(t));
    if (frames[t].joints != first.joints || frames[t].dims != first.dims) {
      throw_data(what + ": frame " + std::to_string(t) + " has inconsistent joint layout");
    }
  }
}

std::pair<Pose, Vec> center_pose(const Pose& pose, std::size_t root) {
  if (root >= pose.joints) {
    throw_usage("center_pose: root joint " + std::to_string(root) + " out of range for " +
                std::to_string(pose.joints) + " joints");
  }
  Vec root_position(pose.dims);
  for (std::size_t d = 0; d < pose.dims; ++d) root_position[d] = pose.at(root, d);
  Pose local(pose.joints, pose.dims);
  for (std::size_t j = 0; j < pose.joints; ++j) {
    for (std::size_t d = 0; d < pose.dims; ++d) {
      local.at(j, d) = pose.at(j, d) - root_position[d];
    }
  }
  return {std::move(local), std::move(root_position)};
}

Pose uncenter_pose(const Pose& local, const Vec& root_position) {
  if (root_position.size() != local.dims) throw_usage("uncenter_pose: root dimension mismatch");
  Pose out(local.joints, local.dims);
  for (std::size_t j = 0; j < local.joints; ++j) {
    for (std::size_t d = 0; d < local.dims; ++d) {
      out.at(j, d) = local.at(j, d) + root_position[d];
    }
  }
  return out;
}

OffsetSequence to_offsets(const PoseSequence& seq) {
  if (seq.length() < 2) throw_usage("to_offsets: need at least 2 frames");
  OffsetSequence out;
  out.joints = seq.joints();
  out.dims = seq.dims();
  out.deltas.reserve(seq.length() - 1);
  for (std::size_t t = 0; t + 1 < seq.length(); ++t) {
    Vec delta(out.joints * out.dims);
    for (std::size_t i = 0; i < delta.size(); ++i) {
      delta[i] = seq.frames[t + 1].coords[i] - seq.frames[t].coords[i];
    }
    out.deltas.push_back(std::move(delta));
  }
  return out;
}

PoseSequence from_offsets(const Pose& start, const OffsetSequence& offsets, double frame_rate) {
  if (offsets.joints != start.joints || offsets.dims != start.dims) {
    throw_usage("from_offsets: offsets do not match the start pose layout");
  }
  PoseSequence out;
  out.frame_rate = frame_rate;
  out.frames.reserve(offsets.length() + 1);
  out.frames.push_back(start);
  for (const Vec& delta : offsets.deltas) {
    Pose next = out.frames.back();
    for (std::size_t i = 0; i < delta.size(); ++i) next.coords[i] += delta[i];
    out.frames.push_back(std::move(next));
  }
  return out;
}

std::size_t ms_to_frame(double ms, double frame_rate) {
  if (!(ms > 0.0)) throw_usage("ms_to_frame: horizon must be positive");
  if (!(frame_rate > 0.0)) throw_usage("ms_to_frame: frame_rate must be positive");
  auto frame = static_cast<long long>(std::llround(ms / 1000.0 * frame_rate));
  return frame < 1 ? 1 : static_cast<std::size_t>(frame);
}

}  // namespace smf
