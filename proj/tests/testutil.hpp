#pragma once

#include <string>
#include <vector>

#include "core/rng.hpp"
#include "core/scene.hpp"

namespace smf::testutil {

// Grid-quantized random coordinate (multiples of 1/1024) so additive round
// trips stay bit-exact.
inline double grid_coord(Rng& rng, double range = 100.0) {
  auto steps = static_cast<long long>(range * 1024.0);
  return static_cast<double>(static_cast<long long>(rng.below(2 * steps + 1)) - steps) / 1024.0;
}

// Random-walk scene with grid coordinates; persons p0..p{n-1}.
inline Scene random_scene(std::uint64_t seed, std::size_t persons, std::size_t frames,
                          std::size_t joints, std::size_t dims,
                          const std::string& id = "random") {
  Rng rng(seed);
  Scene scene;
  scene.scene_id = id;
  scene.frame_rate = 25.0;
  scene.dims = dims;
  for (std::size_t j = 0; j < joints; ++j) scene.joint_names.push_back("j" + std::to_string(j));
  scene.root_joint = 0;
  for (std::size_t p = 0; p < persons; ++p) {
    PersonTrack track;
    track.person_id = "p" + std::to_string(p);
    Pose pose(joints, dims);
    for (double& c : pose.coords) c = grid_coord(rng, 50.0);
    for (std::size_t t = 0; t < frames; ++t) {
      for (double& c : pose.coords) c += grid_coord(rng, 1.0);
      track.sequence.frames.push_back(pose);
    }
    scene.persons.push_back(std::move(track));
  }
  scene.validate();
  return scene;
}

}  // namespace smf::testutil
