#include <doctest.h>

#include "core/errors.hpp"
#include "core/pose.hpp"
#include "core/rng.hpp"

using namespace smf;

namespace {

// Random pose on a dyadic grid (multiples of 1/1024) so centering round trips
// are exact in double arithmetic.
Pose grid_pose(Rng& rng, std::size_t joints, std::size_t dims) {
  Pose pose(joints, dims);
  for (double& c : pose.coords) {
    c = static_cast<double>(static_cast<long long>(rng.below(204800)) - 102400) / 1024.0;
  }
  return pose;
}

}  // namespace

TEST_CASE("center_pose subtracts the root position") {
  Pose pose(2, 2);
  pose.at(0, 0) = 3;  // neck
  pose.at(0, 1) = 4;
  pose.at(1, 0) = 3;  // head
  pose.at(1, 1) = 5;
  auto [local, root] = center_pose(pose, 0);
  CHECK(local.at(0, 0) == 0.0);
  CHECK(local.at(0, 1) == 0.0);
  CHECK(local.at(1, 0) == 0.0);
  CHECK(local.at(1, 1) == 1.0);
  CHECK(root == Vec{3, 4});
}

TEST_CASE("center_pose of an already-centered pose is the identity") {
  Pose pose(3, 2);
  pose.at(1, 0) = -2;
  pose.at(2, 1) = 5;
  auto [local, root] = center_pose(pose, 0);
  CHECK(local == pose);
  CHECK(root == Vec{0, 0});
}

TEST_CASE("uncenter(center(p)) == p bitwise for grid poses") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    Pose pose = grid_pose(rng, 5, 2);
    auto [local, root] = center_pose(pose, 2);
    CHECK(uncenter_pose(local, root) == pose);
  }
}

TEST_CASE("center_pose rejects an out-of-range root") {
  Pose pose(2, 2);
  CHECK_THROWS_AS(center_pose(pose, 2), Error);
}

TEST_CASE("to_offsets basic example") {
  PoseSequence seq;
  seq.frames.resize(3, Pose(2, 2));
  seq.frames[1].at(0, 0) = 1;
  seq.frames[2].at(0, 0) = 3;
  OffsetSequence offsets = to_offsets(seq);
  REQUIRE(offsets.length() == 2);
  CHECK(offsets.deltas[0] == Vec{1, 0, 0, 0});
  CHECK(offsets.deltas[1] == Vec{2, 0, 0, 0});
}

TEST_CASE("constant sequence has zero offsets") {
  PoseSequence seq;
  Pose pose(2, 2);
  pose.at(1, 1) = 7;
  seq.frames.assign(4, pose);
  for (const Vec& d : to_offsets(seq).deltas) {
    CHECK(d == Vec{0, 0, 0, 0});
  }
}

TEST_CASE("offsets round trip exactly") {
  Rng rng(23);
  PoseSequence seq;
  seq.frame_rate = 25;
  for (int t = 0; t < 6; ++t) seq.frames.push_back(grid_pose(rng, 4, 3));
  PoseSequence rebuilt = from_offsets(seq.frames[0], to_offsets(seq), seq.frame_rate);
  CHECK(rebuilt == seq);
}

TEST_CASE("to_offsets needs two frames") {
  PoseSequence seq;
  seq.frames.resize(1, Pose(2, 2));
  CHECK_THROWS_AS(to_offsets(seq), Error);
}

TEST_CASE("ms_to_frame at 25 fps") {
  CHECK(ms_to_frame(80, 25) == 2);
  CHECK(ms_to_frame(160, 25) == 4);
  CHECK(ms_to_frame(320, 25) == 8);
  CHECK(ms_to_frame(560, 25) == 14);
  // 400 ms lands on frame 10, the last frame of a 10-frame window at 25 fps.
  CHECK(ms_to_frame(400, 25) == 10);
  // Sub-frame horizons clamp to the first predicted frame.
  CHECK(ms_to_frame(1, 25) == 1);
  CHECK_THROWS_AS(ms_to_frame(0, 25), Error);
  CHECK_THROWS_AS(ms_to_frame(80, 0), Error);
}
