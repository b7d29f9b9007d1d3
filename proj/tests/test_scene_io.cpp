#include <doctest.h>

#include "core/errors.hpp"
#include "core/scene.hpp"
#include "testutil.hpp"

using namespace smf;

namespace {

Scene minimal_scene() {
  Scene scene;
  scene.scene_id = "mini";
  scene.frame_rate = 25.0;
  scene.dims = 2;
  scene.joint_names = {"neck", "head"};
  scene.root_joint = 0;
  PersonTrack track;
  track.person_id = "p0";
  Pose a(2, 2), b(2, 2);
  a.at(1, 1) = 1.5;
  b.at(0, 0) = 0.25;
  b.at(1, 1) = 2.0;
  track.sequence.frames = {a, b};
  scene.persons.push_back(track);
  return scene;
}

}  // namespace

TEST_CASE("minimal scene round-trips bit-identically") {
  Scene scene = minimal_scene();
  std::string text = serialize_scene(scene);
  Scene parsed = parse_scene(text);
  CHECK(parsed == scene);
  CHECK(serialize_scene(parsed) == text);
}

TEST_CASE("random scenes round trip through parse/serialize") {
  for (std::uint64_t seed : {1ULL, 2ULL, 3ULL}) {
    Scene scene = testutil::random_scene(seed, 3, 5, 4, 3);
    CHECK(parse_scene(serialize_scene(scene)) == scene);
  }
}

TEST_CASE("scene with context round trips") {
  Scene scene = minimal_scene();
  scene.context_raw = std::vector<Vec>{{0.5, -1.0, 2.0}, {1.0, 0.0, -0.125}};
  CHECK(parse_scene(serialize_scene(scene)) == scene);
}

TEST_CASE("persons of unequal length are rejected naming the person") {
  Scene scene = minimal_scene();
  PersonTrack other = scene.persons[0];
  other.person_id = "p1";
  other.sequence.frames.push_back(other.sequence.frames.back());
  scene.persons.push_back(other);
  CHECK_THROWS_WITH_AS(serialize_scene(scene), doctest::Contains("p1"), Error);
}

TEST_CASE("context_raw of wrong length is rejected") {
  Scene scene = minimal_scene();
  scene.context_raw = std::vector<Vec>{{1.0, 2.0}};
  CHECK_THROWS_WITH_AS(scene.validate(), doctest::Contains("context_raw"), Error);
}

TEST_CASE("missing fields produce descriptive parse errors") {
  CHECK_THROWS_WITH_AS(parse_scene("{}"), doctest::Contains("scene_id"), Error);
  CHECK_THROWS_WITH_AS(parse_scene("not json"), doctest::Contains("invalid JSON"), Error);
  CHECK_THROWS_WITH_AS(parse_scene(R"({"scene_id":"x","frame_rate":25,"dims":2,
      "joint_names":["a","b"],"root_joint":0})"),
                       doctest::Contains("persons"), Error);
}

TEST_CASE("non-finite coordinates are rejected at parse") {
  std::string text = serialize_scene(minimal_scene());
  auto pos = text.find("1.5");
  REQUIRE(pos != std::string::npos);
  text.replace(pos, 3, "1e999");  // parses as infinity in strict JSON readers? -> error path
  CHECK_THROWS_AS(parse_scene(text), Error);
}

TEST_CASE("duplicate person ids are rejected") {
  Scene scene = minimal_scene();
  scene.persons.push_back(scene.persons[0]);
  CHECK_THROWS_WITH_AS(scene.validate(), doctest::Contains("duplicate"), Error);
}

TEST_CASE("ragged joints in one frame are rejected") {
  Scene scene = minimal_scene();
  scene.persons[0].sequence.frames[1] = Pose(3, 2);
  CHECK_THROWS_AS(scene.validate(), Error);
}

TEST_CASE("single-frame persons are rejected") {
  Scene scene = minimal_scene();
  scene.persons[0].sequence.frames.pop_back();
  CHECK_THROWS_WITH_AS(scene.validate(), doctest::Contains("2 frames"), Error);
}
