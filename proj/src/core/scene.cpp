#include "core/scene.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"

namespace smf {

void Scene::validate() const {
  if (scene_id.empty()) throw_data("scene: scene_id must not be empty");
  if (!(frame_rate > 0.0)) throw_data("scene '" + scene_id + "': frame_rate must be positive");
  if (dims != 2 && dims != 3) throw_data("scene '" + scene_id + "': dims must be 2 or 3");
  if (joint_names.size() < 2) throw_data("scene '" + scene_id + "': need at least 2 joints");
  if (root_joint >= joint_names.size()) {
    throw_data("scene '" + scene_id + "': root_joint " + std::to_string(root_joint) +
               " out of range");
  }
  if (persons.empty()) throw_data("scene '" + scene_id + "': needs at least one person");

  std::set<std::string> ids;
  std::size_t expected_frames = persons.front().sequence.length();
  for (const PersonTrack& track : persons) {
    if (track.person_id.empty()) throw_data("scene '" + scene_id + "': empty person_id");
    if (!ids.insert(track.person_id).second) {
      throw_data("scene '" + scene_id + "': duplicate person_id '" + track.person_id + "'");
    }
    const std::string what = "scene '" + scene_id + "' person '" + track.person_id + "'";
    track.sequence.validate(what);
    if (track.sequence.length() < 2) throw_data(what + ": needs at least 2 frames");
    if (track.sequence.length() != expected_frames) {
      throw_data(what + ": has " + std::to_string(track.sequence.length()) +
                 " frames, expected " + std::to_string(expected_frames) +
                 " (person absent in some frames)");
    }
    if (track.sequence.joints() != joint_names.size()) {
      throw_data(what + ": joint count " + std::to_string(track.sequence.joints()) +
                 " does not match joint_names (" + std::to_string(joint_names.size()) + ")");
    }
    if (track.sequence.dims() != dims) throw_data(what + ": coordinate dims mismatch");
    if (track.sequence.frame_rate != frame_rate) throw_data(what + ": frame_rate mismatch");
  }

  if (context_raw) {
    if (context_raw->size() != expected_frames) {
      throw_data("scene '" + scene_id + "': context_raw has " +
                 std::to_string(context_raw->size()) + " entries, expected " +
                 std::to_string(expected_frames));
    }
    std::size_t dim = context_raw->front().size();
    if (dim == 0) throw_data("scene '" + scene_id + "': context_raw entries must be non-empty");
    for (std::size_t t = 0; t < context_raw->size(); ++t) {
      if ((*context_raw)[t].size() != dim) {
        throw_data("scene '" + scene_id + "': context_raw entry " + std::to_string(t) +
                   " has inconsistent dimension");
      }
      for (double v : (*context_raw)[t]) {
        if (!std::isfinite(v)) {
          throw_data("scene '" + scene_id + "': non-finite context feature at frame " +
                     std::to_string(t));
        }
      }
    }
  }
}

namespace {

using json = nlohmann::ordered_json;

double number_at(const json& node, const std::string& path) {
  if (!node.is_number()) throw_data("scene parse: expected number at " + path);
  return node.get<double>();
}

}  // namespace

Scene parse_scene(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_data(std::string("scene parse: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw_data("scene parse: top level must be an object");
  for (const char* field : {"scene_id", "frame_rate", "dims", "joint_names", "root_joint", "persons"}) {
    if (!doc.contains(field)) throw_data(std::string("scene parse: missing field '") + field + "'");
  }

  Scene scene;
  if (!doc["scene_id"].is_string()) throw_data("scene parse: scene_id must be a string");
  scene.scene_id = doc["scene_id"].get<std::string>();
  scene.frame_rate = number_at(doc["frame_rate"], "frame_rate");
  if (!doc["dims"].is_number_integer()) throw_data("scene parse: dims must be an integer");
  scene.dims = doc["dims"].get<std::size_t>();
  if (!doc["joint_names"].is_array()) throw_data("scene parse: joint_names must be an array");
  for (const auto& name : doc["joint_names"]) {
    if (!name.is_string()) throw_data("scene parse: joint_names entries must be strings");
    scene.joint_names.push_back(name.get<std::string>());
  }
  if (!doc["root_joint"].is_number_integer()) throw_data("scene parse: root_joint must be an integer");
  scene.root_joint = doc["root_joint"].get<std::size_t>();

  if (!doc["persons"].is_array()) throw_data("scene parse: persons must be an array");
  for (const auto& pnode : doc["persons"]) {
    if (!pnode.is_object() || !pnode.contains("person_id") || !pnode.contains("frames")) {
      throw_data("scene parse: each person needs person_id and frames");
    }
    PersonTrack track;
    track.person_id = pnode["person_id"].get<std::string>();
    track.sequence.frame_rate = scene.frame_rate;
    const auto& frames = pnode["frames"];
    if (!frames.is_array()) {
      throw_data("scene parse: person '" + track.person_id + "': frames must be an array");
    }
    for (std::size_t t = 0; t < frames.size(); ++t) {
      const auto& fnode = frames[t];
      const std::string where =
          "person '" + track.person_id + "' frame " + std::to_string(t);
      if (!fnode.is_array()) throw_data("scene parse: " + where + " must be an array of joints");
      Pose pose(fnode.size(), scene.dims);
      for (std::size_t j = 0; j < fnode.size(); ++j) {
        const auto& jnode = fnode[j];
        if (!jnode.is_array() || jnode.size() != scene.dims) {
          throw_data("scene parse: " + where + " joint " + std::to_string(j) + " must have " +
                     std::to_string(scene.dims) + " coordinates");
        }
        for (std::size_t d = 0; d < scene.dims; ++d) {
          pose.at(j, d) = number_at(jnode[d], where);
        }
      }
      track.sequence.frames.push_back(std::move(pose));
    }
    scene.persons.push_back(std::move(track));
  }

  if (doc.contains("context_raw") && !doc["context_raw"].is_null()) {
    const auto& ctx = doc["context_raw"];
    if (!ctx.is_array()) throw_data("scene parse: context_raw must be an array");
    std::vector<Vec> raw;
    for (std::size_t t = 0; t < ctx.size(); ++t) {
      if (!ctx[t].is_array()) {
        throw_data("scene parse: context_raw entry " + std::to_string(t) + " must be an array");
      }
      Vec features;
      for (const auto& v : ctx[t]) features.push_back(number_at(v, "context_raw"));
      raw.push_back(std::move(features));
    }
    scene.context_raw = std::move(raw);
  }

  scene.validate();
  return scene;
}

std::string serialize_scene(const Scene& scene) {
  scene.validate();
  json doc;
  doc["scene_id"] = scene.scene_id;
  doc["frame_rate"] = scene.frame_rate;
  doc["dims"] = scene.dims;
  doc["joint_names"] = scene.joint_names;
  doc["root_joint"] = scene.root_joint;
  json persons = json::array();
  for (const PersonTrack& track : scene.persons) {
    json frames = json::array();
    for (const Pose& pose : track.sequence.frames) {
      json fnode = json::array();
      for (std::size_t j = 0; j < pose.joints; ++j) {
        json jnode = json::array();
        for (std::size_t d = 0; d < pose.dims; ++d) jnode.push_back(pose.at(j, d));
        fnode.push_back(std::move(jnode));
      }
      frames.push_back(std::move(fnode));
    }
    persons.push_back({{"person_id", track.person_id}, {"frames", std::move(frames)}});
  }
  doc["persons"] = std::move(persons);
  if (scene.context_raw) {
    json ctx = json::array();
    for (const Vec& features : *scene.context_raw) ctx.push_back(features);
    doc["context_raw"] = std::move(ctx);
  }
  return doc.dump(1) + "\n";
}

Scene load_scene(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_data("cannot open scene file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_scene(buf.str());
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(e.what()) + " (file '" + path + "')");
  }
}

void save_scene(const Scene& scene, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw_data("cannot write scene file '" + path + "'");
  out << serialize_scene(scene);
  if (!out) throw_data("failed writing scene file '" + path + "'");
}

}  // namespace smf
