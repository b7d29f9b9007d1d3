#include "core/baselines.hpp"

#include <cmath>

#include "core/errors.hpp"

namespace smf {

MotionRule parse_motion_rule(const std::string& name) {
  if (name == "zero") return MotionRule::zero;
  if (name == "constant") return MotionRule::constant;
  throw_usage("unknown motion rule '" + name + "' (expected zero|constant)");
}

std::string motion_rule_name(MotionRule rule) {
  return rule == MotionRule::zero ? "zero" : "constant";
}

std::vector<Vec> rule_root_trajectory(const PoseSequence& obs, std::size_t root,
                                      MotionRule rule, std::size_t t_pred) {
  if (obs.frames.empty()) throw_usage("motion rule: empty observation");
  if (rule == MotionRule::constant && obs.length() < 2) {
    throw_usage("constant motion rule needs at least 2 observed frames");
  }
  const Pose& last = obs.frames.back();
  const std::size_t dims = obs.dims();
  Vec anchor(dims), velocity(dims, 0.0);
  for (std::size_t d = 0; d < dims; ++d) anchor[d] = last.at(root, d);
  if (rule == MotionRule::constant) {
    const Pose& prev = obs.frames[obs.length() - 2];
    for (std::size_t d = 0; d < dims; ++d) velocity[d] = last.at(root, d) - prev.at(root, d);
  }
  std::vector<Vec> roots(t_pred, Vec(dims));
  for (std::size_t k = 1; k <= t_pred; ++k) {
    for (std::size_t d = 0; d < dims; ++d) {
      roots[k - 1][d] = anchor[d] + static_cast<double>(k) * velocity[d];
    }
  }
  return roots;
}

PoseSequence zero_pose_zero_motion(const PoseSequence& obs, std::size_t t_pred) {
  if (obs.frames.empty()) throw_usage("zero_pose_zero_motion: empty observation");
  PoseSequence out;
  out.frame_rate = obs.frame_rate;
  out.frames.assign(t_pred, obs.frames.back());
  return out;
}

PoseSequence zero_pose_constant_motion(const PoseSequence& obs, std::size_t root,
                                       std::size_t t_pred) {
  if (obs.length() < 2) throw_usage("zero_pose_constant_motion: need at least 2 observed frames");
  const Pose& last = obs.frames.back();
  const Pose& prev = obs.frames[obs.length() - 2];
  const std::size_t dims = obs.dims();
  Vec velocity(dims);
  for (std::size_t d = 0; d < dims; ++d) velocity[d] = last.at(root, d) - prev.at(root, d);

  PoseSequence out;
  out.frame_rate = obs.frame_rate;
  for (std::size_t k = 1; k <= t_pred; ++k) {
    Pose pose = last;
    for (std::size_t j = 0; j < pose.joints; ++j) {
      for (std::size_t d = 0; d < dims; ++d) {
        pose.at(j, d) = last.at(j, d) + static_cast<double>(k) * velocity[d];
      }
    }
    out.frames.push_back(std::move(pose));
  }
  return out;
}

PoseSequence constant_pose_constant_motion(const PoseSequence& obs, std::size_t root,
                                           std::size_t t_pred) {
  if (obs.length() < 2) {
    throw_usage("constant_pose_constant_motion: need at least 2 observed frames");
  }
  const std::size_t dims = obs.dims();
  auto [local_last, root_last] = center_pose(obs.frames.back(), root);
  auto [local_prev, root_prev] = center_pose(obs.frames[obs.length() - 2], root);

  Vec root_velocity(dims);
  for (std::size_t d = 0; d < dims; ++d) root_velocity[d] = root_last[d] - root_prev[d];
  Pose local_velocity(local_last.joints, dims);
  for (std::size_t i = 0; i < local_velocity.coords.size(); ++i) {
    local_velocity.coords[i] = local_last.coords[i] - local_prev.coords[i];
  }

  PoseSequence out;
  out.frame_rate = obs.frame_rate;
  for (std::size_t k = 1; k <= t_pred; ++k) {
    Pose pose(local_last.joints, dims);
    for (std::size_t j = 0; j < pose.joints; ++j) {
      for (std::size_t d = 0; d < dims; ++d) {
        pose.at(j, d) = root_last[d] + static_cast<double>(k) * root_velocity[d] +
                        local_last.at(j, d) + static_cast<double>(k) * local_velocity.at(j, d);
      }
    }
    out.frames.push_back(std::move(pose));
  }
  return out;
}

PoseSequence compose_local_pose(const PoseSequence& local_pred,
                                const std::vector<Vec>& root_positions) {
  if (root_positions.size() != local_pred.length()) {
    throw_usage("compose_local_pose: root trajectory length mismatch");
  }
  PoseSequence out;
  out.frame_rate = local_pred.frame_rate;
  for (std::size_t k = 0; k < local_pred.length(); ++k) {
    out.frames.push_back(uncenter_pose(local_pred.frames[k], root_positions[k]));
  }
  return out;
}

PoseSequence compose_local_pose(const PoseSequence& local_pred, const PoseSequence& obs,
                                std::size_t root, MotionRule rule) {
  for (std::size_t k = 0; k < local_pred.length(); ++k) {
    for (std::size_t d = 0; d < local_pred.dims(); ++d) {
      if (std::abs(local_pred.frames[k].at(root, d)) > 1e-9) {
        throw_usage("compose_local_pose: frame " + std::to_string(k) +
                    " is not centered at the root joint");
      }
    }
  }
  return compose_local_pose(local_pred,
                            rule_root_trajectory(obs, root, rule, local_pred.length()));
}

}  // namespace smf
