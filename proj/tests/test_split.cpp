#include <doctest.h>

#include <set>

#include "core/errors.hpp"
#include "core/split.hpp"

using namespace smf;

TEST_CASE("split partitions the scene set") {
  std::vector<std::string> ids;
  for (int i = 0; i < 60; ++i) ids.push_back("scene-" + std::to_string(i));
  SplitSpec spec;
  spec.train = 2.0 / 3.0;
  spec.validation = 1.0 / 6.0;
  spec.test = 1.0 / 6.0;
  spec.seed = 9;
  SplitAssignment assignment = assign_splits(ids, spec);

  CHECK(assignment.by_scene.size() == 60);
  std::set<std::string> seen;
  for (const auto& [id, split] : assignment.by_scene) {
    CHECK((split == "train" || split == "val" || split == "test"));
    seen.insert(id);
  }
  CHECK(seen.size() == 60);
  CHECK(assignment.ids_in("train").size() == 40);
  CHECK(assignment.ids_in("val").size() == 10);
  CHECK(assignment.ids_in("test").size() == 10);
}

TEST_CASE("split assignment is deterministic and input-order independent") {
  std::vector<std::string> ids = {"c", "a", "d", "b", "e", "f", "g", "h", "i", "j"};
  SplitSpec spec;
  spec.seed = 4;
  SplitAssignment first = assign_splits(ids, spec);
  std::reverse(ids.begin(), ids.end());
  SplitAssignment second = assign_splits(ids, spec);
  CHECK(first.by_scene == second.by_scene);

  spec.seed = 5;
  SplitAssignment third = assign_splits(ids, spec);
  CHECK(first.by_scene != third.by_scene);
}

TEST_CASE("split manifest round trips") {
  std::vector<std::string> ids = {"x-0", "x-1", "x-2", "x-3", "x-4"};
  SplitAssignment assignment = assign_splits(ids, SplitSpec{});
  std::string text = serialize_split(assignment);
  SplitAssignment parsed = parse_split(text);
  CHECK(parsed.by_scene == assignment.by_scene);
}

TEST_CASE("split manifest rejects malformed lines") {
  CHECK_THROWS_AS(parse_split("scene without tab\n"), Error);
  CHECK_THROWS_AS(parse_split("a\tnowhere\n"), Error);
  CHECK_THROWS_AS(parse_split("a\ttrain\na\ttest\n"), Error);
}

TEST_CASE("split fractions must be positive and sum to one") {
  SplitSpec bad;
  bad.train = 0.5;
  bad.validation = 0.2;
  bad.test = 0.2;
  CHECK_THROWS_AS(bad.validate(), Error);
  bad.test = -0.3;
  CHECK_THROWS_AS(bad.validate(), Error);
}
