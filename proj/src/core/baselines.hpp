#pragma once

#include <string>

#include "core/pose.hpp"
#include "core/scene.hpp"

namespace smf {

// Parameter-free global-motion rules. "constant" estimates the root velocity
// from the last two observed frames.
enum class MotionRule { zero, constant };

MotionRule parse_motion_rule(const std::string& name);
std::string motion_rule_name(MotionRule rule);

// Root positions for the prediction window under a motion rule:
// frame k (1-based) = last observed root (+ k * v for "constant").
std::vector<Vec> rule_root_trajectory(const PoseSequence& obs, std::size_t root,
                                      MotionRule rule, std::size_t t_pred);

// Repeats the last observed pose in place.
PoseSequence zero_pose_zero_motion(const PoseSequence& obs, std::size_t t_pred);

// Translates the last observed pose rigidly by the estimated root velocity.
PoseSequence zero_pose_constant_motion(const PoseSequence& obs, std::size_t root,
                                       std::size_t t_pred);

// Root moves with constant velocity and every joint's neck-centered
// coordinates extrapolate with their own last local velocity.
PoseSequence constant_pose_constant_motion(const PoseSequence& obs, std::size_t root,
                                           std::size_t t_pred);

// Places centered predicted poses onto a rule-driven global root trajectory.
// local_pred must be centered: the root coordinate of every frame must be
// zero to within 1e-9.
PoseSequence compose_local_pose(const PoseSequence& local_pred, const PoseSequence& obs,
                                std::size_t root, MotionRule rule);

// Overload with an explicit root trajectory (one position per predicted frame).
PoseSequence compose_local_pose(const PoseSequence& local_pred,
                                const std::vector<Vec>& root_positions);

}  // namespace smf
