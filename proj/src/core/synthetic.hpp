#pragma once

#include <cstdint>
#include <string>

#include "core/scene.hpp"

namespace smf {

// Named joint layouts for generated scenes. "posetrack14" and "ntu13" mirror
// the canonical 2D/3D evaluation skeletons; "synth6" is a compact skeleton for
// fast experiments.
struct JointSet {
  std::string name;
  std::vector<std::string> joint_names;
  std::size_t dims = 2;
  std::size_t root = 0;
  std::vector<double> template_coords;  // joints * dims, relative to root
  std::vector<std::size_t> arm_joints;  // joints deflected by "react"

  static const JointSet& by_name(const std::string& name);
};

struct SynthConfig {
  std::string scenario = "independent";  // approach | react | mirror | independent
  std::string joint_set = "synth6";
  std::size_t persons = 2;  // only "independent" honors counts other than 2
  std::size_t frames = 16;
  double frame_rate = 25.0;
  double scale = 1.0;
  double start_gap = 36.0;       // initial root separation (approach/react/mirror)
  double speed_min = 0.8;        // per-frame root speed range
  double speed_max = 1.45;
  double react_threshold = 12.0; // root distance that triggers the reaction
  double react_rate = 2.5;       // per-frame arm deflection once triggered
  std::size_t react_ramp = 6;    // frames until the deflection saturates
  double osc_amplitude = 0.5;
  double osc_period = 8.0;       // frames per limb oscillation cycle
  std::size_t mirror_lag = 2;
  double walk_step = 1.0;        // per-dim random walk step bound (independent)

  void validate() const;
};

// Deterministic synthetic social scene. All coordinates are quantized to a
// fixed binary grid (2^-20) so downstream difference/sum round trips stay
// exact in double arithmetic.
Scene generate_synthetic(const SynthConfig& config, std::uint64_t seed,
                         const std::string& scene_id);

// Quantization helper shared with the fixtures/tests.
double grid_quantize(double x);

}  // namespace smf
