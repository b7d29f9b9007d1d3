#include "core/synthetic.hpp"

#include <cmath>

#include "core/errors.hpp"
#include "core/rng.hpp"

namespace smf {

namespace {

const JointSet kSynth6 = {
    "synth6",
    {"neck", "head", "lwrist", "rwrist", "lhip", "rhip"},
    2,
    0,
    {0, 0, 0, 2, -2, 1, 2, 1, -1, -2, 1, -2},
    {2, 3},
};

const JointSet kPoseTrack14 = {
    "posetrack14",
    {"head", "neck", "lshoulder", "rshoulder", "lelbow", "relbow", "lwrist", "rwrist",
     "lhip", "rhip", "lknee", "rknee", "lankle", "rankle"},
    2,
    1,
    {0, 20,  0, 0,  -8, -2,  8, -2,  -12, -16,  12, -16,  -14, -30,  14, -30,
     -6, -40,  6, -40,  -7, -65,  7, -65,  -7, -90,  7, -90},
    {4, 5, 6, 7},
};

const JointSet kNtu13 = {
    "ntu13",
    {"head", "neck", "spine_mid", "lshoulder", "rshoulder", "lelbow", "relbow",
     "lwrist", "rwrist", "lhip", "rhip", "lknee", "rknee"},
    3,
    1,
    {0, 25, 0,  0, 0, 0,  0, -20, 0,  -15, -3, 0,  15, -3, 0,  -20, -25, 0,
     20, -25, 0,  -23, -45, 0,  23, -45, 0,  -9, -55, 0,  9, -55, 0,
     -10, -90, 0,  10, -90, 0},
    {5, 6, 7, 8},
};

constexpr double kGrid = 1048576.0;  // 2^20

struct PersonMotion {
  Vec start;          // root at frame 0
  Vec velocity;       // per-frame root displacement (linear scenarios)
  Vec phases;         // one oscillation phase per joint
};

Vec root_at(const PersonMotion& m, std::size_t t) {
  Vec r(m.start.size());
  for (std::size_t d = 0; d < r.size(); ++d) {
    r[d] = m.start[d] + static_cast<double>(t) * m.velocity[d];
  }
  return r;
}

double distance(const Vec& a, const Vec& b) {
  double acc = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) acc += (a[d] - b[d]) * (a[d] - b[d]);
  return std::sqrt(acc);
}

}  // namespace

double grid_quantize(double x) { return std::nearbyint(x * kGrid) / kGrid; }

const JointSet& JointSet::by_name(const std::string& name) {
  if (name == "synth6") return kSynth6;
  if (name == "posetrack14") return kPoseTrack14;
  if (name == "ntu13") return kNtu13;
  throw_usage("unknown joint set '" + name + "' (expected synth6|posetrack14|ntu13)");
}

void SynthConfig::validate() const {
  if (scenario != "approach" && scenario != "react" && scenario != "mirror" &&
      scenario != "independent") {
    throw_usage("unknown scenario '" + scenario +
                "' (expected approach|react|mirror|independent)");
  }
  JointSet::by_name(joint_set);
  if (frames < 2) throw_usage("synthetic scenes need at least 2 frames");
  if (persons < 1) throw_usage("synthetic scenes need at least 1 person");
  if (scenario != "independent" && persons != 2) {
    throw_usage("scenario '" + scenario + "' is defined for exactly 2 persons");
  }
  if (!(frame_rate > 0.0)) throw_usage("frame_rate must be positive");
  if (!(speed_min > 0.0) || speed_max < speed_min) throw_usage("invalid speed range");
  if (!(osc_period > 0.0)) throw_usage("osc_period must be positive");
  if (react_ramp < 1) throw_usage("react_ramp must be at least 1");
}

Scene generate_synthetic(const SynthConfig& config, std::uint64_t seed,
                         const std::string& scene_id) {
  config.validate();
  const JointSet& js = JointSet::by_name(config.joint_set);
  const std::size_t L = js.joint_names.size();
  const std::size_t D = js.dims;
  const std::size_t T = config.frames;
  const bool paired = config.scenario != "independent";
  const std::size_t N = paired ? 2 : config.persons;

  Scene scene;
  scene.scene_id = scene_id;
  scene.frame_rate = config.frame_rate;
  scene.dims = D;
  scene.joint_names = js.joint_names;
  scene.root_joint = js.root;

  Rng rng(Rng::mix(seed, 0x53594E54ULL));

  // Draw per-person motion. Draw order is fixed: speeds first, then phases,
  // then (for independent) the walk steps, so scenes are seed-reproducible.
  std::vector<PersonMotion> motion(N);
  double half_gap = grid_quantize(config.start_gap / 2.0);
  for (std::size_t p = 0; p < N; ++p) {
    PersonMotion& m = motion[p];
    m.start.assign(D, 0.0);
    m.velocity.assign(D, 0.0);
    if (paired) {
      double speed = grid_quantize(rng.uniform(config.speed_min, config.speed_max));
      double side = p == 0 ? -1.0 : 1.0;
      m.start[0] = side * half_gap;
      m.velocity[0] = -side * speed;  // both walk toward the midline
    } else {
      for (std::size_t d = 0; d < D; ++d) {
        m.start[d] = grid_quantize(rng.uniform(-config.start_gap, config.start_gap));
      }
    }
    m.phases.resize(L);
    for (std::size_t j = 0; j < L; ++j) m.phases[j] = rng.uniform(0.0, 2.0 * M_PI);
  }

  // Independent random-walk root tracks (quantized per step).
  std::vector<std::vector<Vec>> walk_roots;
  if (!paired) {
    walk_roots.assign(N, {});
    for (std::size_t p = 0; p < N; ++p) {
      Vec pos = motion[p].start;
      walk_roots[p].push_back(pos);
      for (std::size_t t = 1; t < T; ++t) {
        for (std::size_t d = 0; d < D; ++d) {
          pos[d] += grid_quantize(rng.uniform(-config.walk_step, config.walk_step));
        }
        walk_roots[p].push_back(pos);
      }
    }
  }

  // React trigger: first frame whose root distance falls under the threshold.
  std::size_t trigger = T;  // T means "never"
  if (config.scenario == "react") {
    for (std::size_t t = 0; t < T; ++t) {
      if (distance(root_at(motion[0], t), root_at(motion[1], t)) < config.react_threshold) {
        trigger = t;
        break;
      }
    }
  }
  double react_rate = grid_quantize(config.react_rate);

  auto base_pose = [&](std::size_t p, std::size_t t) {
    Pose pose(L, D);
    Vec root = paired ? root_at(motion[p], t) : walk_roots[p][t];
    for (std::size_t j = 0; j < L; ++j) {
      for (std::size_t d = 0; d < D; ++d) {
        double v = root[d] + config.scale * js.template_coords[j * D + d];
        if (j != js.root) {
          v += config.osc_amplitude *
               std::sin(2.0 * M_PI * static_cast<double>(t) / config.osc_period +
                        motion[p].phases[j] + static_cast<double>(d) * M_PI_2);
          v = grid_quantize(v);
        }
        pose.at(j, d) = v;
      }
    }
    return pose;
  };

  double mirror_axis = 0.0;  // midline between the two starts

  for (std::size_t p = 0; p < N; ++p) {
    PersonTrack track;
    track.person_id = "p" + std::to_string(p);
    track.sequence.frame_rate = config.frame_rate;
    for (std::size_t t = 0; t < T; ++t) {
      Pose pose(L, D);
      if (config.scenario == "mirror" && p == 1) {
        std::size_t src = t >= config.mirror_lag ? t - config.mirror_lag : 0;
        pose = base_pose(0, src);
        for (std::size_t j = 0; j < L; ++j) {
          pose.at(j, 0) = 2.0 * mirror_axis - pose.at(j, 0);
        }
      } else {
        pose = base_pose(p, t);
        if (config.scenario == "react" && p == 1 && t >= trigger) {
          std::size_t held = std::min(t - trigger + 1, config.react_ramp);
          double deflect = react_rate * static_cast<double>(held);
          for (std::size_t j : js.arm_joints) pose.at(j, 1) += deflect;
        }
      }
      track.sequence.frames.push_back(std::move(pose));
    }
    scene.persons.push_back(std::move(track));
  }

  scene.validate();
  return scene;
}

}  // namespace smf
