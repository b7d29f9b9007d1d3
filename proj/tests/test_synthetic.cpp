#include <doctest.h>

#include <cmath>

#include "core/errors.hpp"
#include "core/scene.hpp"
#include "core/synthetic.hpp"

using namespace smf;

namespace {

double root_distance(const Scene& scene, std::size_t t) {
  const Pose& a = scene.persons[0].sequence.frames[t];
  const Pose& b = scene.persons[1].sequence.frames[t];
  double acc = 0.0;
  for (std::size_t d = 0; d < scene.dims; ++d) {
    double diff = a.at(scene.root_joint, d) - b.at(scene.root_joint, d);
    acc += diff * diff;
  }
  return std::sqrt(acc);
}

}  // namespace

TEST_CASE("same seed yields identical scenes") {
  for (const char* scenario : {"approach", "react", "mirror", "independent"}) {
    SynthConfig config;
    config.scenario = scenario;
    Scene a = generate_synthetic(config, 99, "s");
    Scene b = generate_synthetic(config, 99, "s");
    CHECK(a == b);
    Scene c = generate_synthetic(config, 100, "s");
    CHECK(a != c);
  }
}

TEST_CASE("approach roots move exactly linearly") {
  SynthConfig config;
  config.scenario = "approach";
  Scene scene = generate_synthetic(config, 7, "approach-0");
  for (std::size_t p = 0; p < 2; ++p) {
    const PoseSequence& seq = scene.persons[p].sequence;
    for (std::size_t d = 0; d < scene.dims; ++d) {
      double start = seq.frames[0].at(scene.root_joint, d);
      double v = seq.frames[1].at(scene.root_joint, d) - start;
      for (std::size_t t = 0; t < seq.length(); ++t) {
        CHECK(seq.frames[t].at(scene.root_joint, d) == start + static_cast<double>(t) * v);
      }
    }
  }
  // The two persons close on each other along x.
  CHECK(root_distance(scene, scene.frames() - 1) < root_distance(scene, 0));
}

TEST_CASE("react deflects the arms exactly at the threshold crossing") {
  SynthConfig config;
  config.scenario = "react";
  config.frames = 20;
  Scene react = generate_synthetic(config, 31, "react-0");

  // Independent scan: regenerate the same motion without the reaction and
  // diff the two scenes frame by frame.
  SynthConfig plain = config;
  plain.scenario = "approach";
  Scene approach = generate_synthetic(plain, 31, "react-0");

  // Trigger frame from an independent distance scan of the generated scene.
  std::size_t scan_trigger = react.frames();
  for (std::size_t t = 0; t < react.frames(); ++t) {
    if (root_distance(react, t) < config.react_threshold) {
      scan_trigger = t;
      break;
    }
  }
  REQUIRE(scan_trigger > 0);
  REQUIRE(scan_trigger < react.frames());

  const JointSet& js = JointSet::by_name(config.joint_set);
  for (std::size_t t = 0; t < react.frames(); ++t) {
    bool any_diff = false;
    for (std::size_t j = 0; j < react.joints(); ++j) {
      for (std::size_t d = 0; d < react.dims; ++d) {
        double a = react.persons[1].sequence.frames[t].at(j, d);
        double b = approach.persons[1].sequence.frames[t].at(j, d);
        bool arm = std::find(js.arm_joints.begin(), js.arm_joints.end(), j) != js.arm_joints.end();
        if (a != b) {
          any_diff = true;
          CHECK(arm);
          CHECK(d == 1);  // the reaction pattern is a vertical deflection
        }
      }
    }
    CHECK(any_diff == (t >= scan_trigger));
  }
  // Person 1 is untouched by the reaction.
  CHECK(react.persons[0] == approach.persons[0]);
}

TEST_CASE("mirror reflects person 1 with the configured lag") {
  SynthConfig config;
  config.scenario = "mirror";
  config.mirror_lag = 2;
  Scene scene = generate_synthetic(config, 12, "mirror-0");
  for (std::size_t t = config.mirror_lag; t < scene.frames(); ++t) {
    const Pose& src = scene.persons[0].sequence.frames[t - config.mirror_lag];
    const Pose& dst = scene.persons[1].sequence.frames[t];
    for (std::size_t j = 0; j < scene.joints(); ++j) {
      CHECK(dst.at(j, 0) == -src.at(j, 0));
      CHECK(dst.at(j, 1) == src.at(j, 1));
    }
  }
}

TEST_CASE("independent scenes support other person counts") {
  SynthConfig config;
  config.scenario = "independent";
  config.persons = 4;
  Scene scene = generate_synthetic(config, 3, "independent-0");
  CHECK(scene.person_count() == 4);
  CHECK(parse_scene(serialize_scene(scene)) == scene);
}

TEST_CASE("generated scenes survive a serialize/parse round trip unchanged") {
  for (const char* scenario : {"approach", "react", "mirror", "independent"}) {
    SynthConfig config;
    config.scenario = scenario;
    Scene scene = generate_synthetic(config, 5, std::string(scenario) + "-0");
    CHECK(parse_scene(serialize_scene(scene)) == scene);
  }
}

TEST_CASE("ntu13 and posetrack14 joint sets generate valid scenes") {
  SynthConfig config;
  config.scenario = "approach";
  config.joint_set = "posetrack14";
  config.scale = 1.0;
  Scene pt = generate_synthetic(config, 2, "pt");
  CHECK(pt.joints() == 14);
  CHECK(pt.dims == 2);
  CHECK(pt.joint_names[pt.root_joint] == "neck");

  config.joint_set = "ntu13";
  Scene ntu = generate_synthetic(config, 2, "ntu");
  CHECK(ntu.joints() == 13);
  CHECK(ntu.dims == 3);
  CHECK(ntu.joint_names[ntu.root_joint] == "neck");
}

TEST_CASE("unknown scenario is rejected") {
  SynthConfig config;
  config.scenario = "dance";
  CHECK_THROWS_WITH_AS(generate_synthetic(config, 1, "x"), doctest::Contains("dance"), Error);
}
