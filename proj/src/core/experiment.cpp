#include "core/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "core/errors.hpp"
#include "core/split.hpp"
#include "core/synthetic.hpp"

namespace smf {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::size_t size_field(const json& doc, const char* key, std::size_t fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number_integer() || doc[key].get<long long>() < 0) {
    throw_usage(std::string("config: '") + key + "' must be a non-negative integer");
  }
  return doc[key].get<std::size_t>();
}

double number_field(const json& doc, const char* key, double fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_number()) throw_usage(std::string("config: '") + key + "' must be a number");
  return doc[key].get<double>();
}

std::string string_field(const json& doc, const char* key, const std::string& fallback) {
  if (!doc.contains(key)) return fallback;
  if (!doc[key].is_string()) throw_usage(std::string("config: '") + key + "' must be a string");
  return doc[key].get<std::string>();
}

ModelConfig model_from_json(const json& doc) {
  static const std::vector<std::string> known = {
      "t_obs", "t_pred", "joints", "dims", "hidden", "context_out", "context_raw",
      "pooling", "variant", "motion_rule", "dropout_p", "lr", "lr_decay",
      "batch_size", "max_epochs", "patience", "seed"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw_usage("config: unknown model field '" + key + "'");
    }
  }
  ModelConfig m;
  m.t_obs = size_field(doc, "t_obs", m.t_obs);
  m.t_pred = size_field(doc, "t_pred", m.t_pred);
  m.joints = size_field(doc, "joints", m.joints);
  m.dims = size_field(doc, "dims", m.dims);
  m.hidden = size_field(doc, "hidden", m.hidden);
  m.context_out = size_field(doc, "context_out", m.context_out);
  m.context_raw = size_field(doc, "context_raw", m.context_raw);
  if (doc.contains("pooling")) m.pooling = parse_pooling(doc["pooling"].get<std::string>());
  if (doc.contains("variant")) m.variant = parse_variant(doc["variant"].get<std::string>());
  if (doc.contains("motion_rule")) {
    m.motion_rule = parse_motion_rule(doc["motion_rule"].get<std::string>());
  }
  m.dropout_p = number_field(doc, "dropout_p", m.dropout_p);
  m.lr = number_field(doc, "lr", m.lr);
  m.lr_decay = number_field(doc, "lr_decay", m.lr_decay);
  m.batch_size = size_field(doc, "batch_size", m.batch_size);
  m.max_epochs = size_field(doc, "max_epochs", m.max_epochs);
  m.patience = size_field(doc, "patience", m.patience);
  if (doc.contains("seed")) m.seed = doc["seed"].get<std::uint64_t>();
  return m;
}

}  // namespace

void ExperimentConfig::validate() const {
  model.validate();
  for (const std::string& method : methods) {
    if (method != kZeroZero && method != kZeroConstant && method != kConstantConstant &&
        method != "model") {
      throw_usage("config: unknown method '" + method + "'");
    }
  }
  for (double ms : horizons_ms) {
    if (!(ms > 0.0)) throw_usage("config: horizons must be positive milliseconds");
  }
}

ExperimentConfig parse_experiment_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw_usage(std::string("config: invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw_usage("config: top level must be an object");
  static const std::vector<std::string> known = {
      "model", "data_dir", "split_manifest", "context_provider",
      "output_dir", "horizons_ms", "methods", "metric"};
  for (const auto& [key, value] : doc.items()) {
    if (std::find(known.begin(), known.end(), key) == known.end()) {
      throw_usage("config: unknown field '" + key + "'");
    }
  }

  ExperimentConfig config;
  if (doc.contains("model")) {
    if (!doc["model"].is_object()) throw_usage("config: 'model' must be an object");
    config.model = model_from_json(doc["model"]);
  }
  config.data_dir = string_field(doc, "data_dir", config.data_dir);
  config.split_manifest = string_field(doc, "split_manifest", config.split_manifest);
  config.context_provider = string_field(doc, "context_provider", config.context_provider);
  config.output_dir = string_field(doc, "output_dir", config.output_dir);
  if (doc.contains("horizons_ms")) {
    if (!doc["horizons_ms"].is_array()) throw_usage("config: 'horizons_ms' must be an array");
    for (const auto& v : doc["horizons_ms"]) {
      if (!v.is_number()) throw_usage("config: horizons must be numbers");
      config.horizons_ms.push_back(v.get<double>());
    }
  }
  if (doc.contains("methods")) {
    if (!doc["methods"].is_array()) throw_usage("config: 'methods' must be an array");
    for (const auto& v : doc["methods"]) {
      if (!v.is_string()) throw_usage("config: methods must be strings");
      config.methods.push_back(v.get<std::string>());
    }
  }
  if (doc.contains("metric")) config.metric = parse_metric_def(doc["metric"].get<std::string>());
  config.validate();
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw_usage("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();

  json doc;
  try {
    doc = json::parse(buf.str());
  } catch (const json::parse_error& e) {
    throw_usage("config '" + path + "': invalid JSON: " + e.what());
  }

  for (const std::string& override_spec : overrides) {
    auto eq = override_spec.find('=');
    if (eq == std::string::npos) {
      throw_usage("override '" + override_spec + "' must look like key=value");
    }
    std::string key = override_spec.substr(0, eq);
    std::string value = override_spec.substr(eq + 1);
    json parsed;
    try {
      parsed = json::parse(value);
    } catch (const json::parse_error&) {
      parsed = value;  // plain strings may be given unquoted
    }
    json* node = &doc;
    std::size_t start = 0;
    while (true) {
      auto dot = key.find('.', start);
      std::string part = key.substr(start, dot == std::string::npos ? dot : dot - start);
      if (part.empty()) throw_usage("override '" + override_spec + "' has an empty key part");
      if (dot == std::string::npos) {
        (*node)[part] = parsed;
        break;
      }
      node = &(*node)[part];
      start = dot + 1;
    }
  }
  return parse_experiment_config(doc.dump());
}

ScenePrediction baseline_predict(const Scene& scene, const std::string& method,
                                 std::size_t t_obs, std::size_t t_pred) {
  if (scene.frames() < t_obs) {
    throw_usage("scene '" + scene.scene_id + "' has fewer than t_obs frames");
  }
  ScenePrediction prediction;
  prediction.scene_id = scene.scene_id;
  for (const PersonTrack& track : scene.persons) {
    PoseSequence obs;
    obs.frame_rate = scene.frame_rate;
    obs.frames.assign(track.sequence.frames.begin(), track.sequence.frames.begin() + t_obs);

    PoseSequence predicted;
    if (method == kZeroZero) {
      predicted = zero_pose_zero_motion(obs, t_pred);
    } else if (method == kZeroConstant) {
      predicted = zero_pose_constant_motion(obs, scene.root_joint, t_pred);
    } else if (method == kConstantConstant) {
      predicted = constant_pose_constant_motion(obs, scene.root_joint, t_pred);
    } else {
      throw_usage("unknown baseline '" + method + "'");
    }

    PersonPrediction person;
    person.person_id = track.person_id;
    person.absolute = std::move(predicted);
    const Pose& last_obs = obs.frames.back();
    person.offsets.joints = scene.joints();
    person.offsets.dims = scene.dims;
    Vec prev = last_obs.coords;
    for (const Pose& frame : person.absolute.frames) {
      Vec delta(frame.coords.size());
      for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = frame.coords[i] - prev[i];
      person.offsets.deltas.push_back(std::move(delta));
      prev = frame.coords;
    }
    prediction.persons.push_back(std::move(person));
  }
  return prediction;
}

Scene prediction_to_scene(const ScenePrediction& prediction, const Scene& source) {
  Scene out;
  out.scene_id = prediction.scene_id + "-pred";
  out.frame_rate = source.frame_rate;
  out.dims = source.dims;
  out.joint_names = source.joint_names;
  out.root_joint = source.root_joint;
  for (const PersonPrediction& person : prediction.persons) {
    PersonTrack track;
    track.person_id = person.person_id;
    track.sequence = person.absolute;
    track.sequence.frame_rate = source.frame_rate;
    out.persons.push_back(std::move(track));
  }
  out.validate();
  return out;
}

std::vector<Scene> load_split_scenes(const std::string& data_dir,
                                     const SplitAssignment& assignment,
                                     const std::string& split) {
  std::vector<std::string> ids = assignment.ids_in(split);
  std::sort(ids.begin(), ids.end());
  std::vector<Scene> scenes;
  scenes.reserve(ids.size());
  for (const std::string& id : ids) {
    fs::path path = fs::path(data_dir) / (id + ".json");
    Scene scene = load_scene(path.string());
    if (scene.scene_id != id) {
      throw_data("scene file '" + path.string() + "' holds scene_id '" + scene.scene_id + "'");
    }
    scenes.push_back(std::move(scene));
  }
  return scenes;
}

void run_generate(const std::string& scenario, std::size_t count, std::uint64_t seed,
                  const std::string& out_dir, const std::string& options_json) {
  SynthConfig synth;
  synth.scenario = scenario;
  SplitSpec split_spec;
  split_spec.seed = seed;

  if (!options_json.empty()) {
    json doc;
    try {
      doc = json::parse(options_json);
    } catch (const json::parse_error& e) {
      throw_usage(std::string("generate options: invalid JSON: ") + e.what());
    }
    static const std::vector<std::string> known = {
        "joint_set", "persons", "frames", "frame_rate", "scale", "start_gap",
        "speed_min", "speed_max", "react_threshold", "react_rate", "react_ramp",
        "osc_amplitude", "osc_period", "mirror_lag", "walk_step",
        "train_frac", "val_frac", "test_frac"};
    for (const auto& [key, value] : doc.items()) {
      if (std::find(known.begin(), known.end(), key) == known.end()) {
        throw_usage("generate options: unknown field '" + key + "'");
      }
    }
    synth.joint_set = string_field(doc, "joint_set", synth.joint_set);
    synth.persons = size_field(doc, "persons", synth.persons);
    synth.frames = size_field(doc, "frames", synth.frames);
    synth.frame_rate = number_field(doc, "frame_rate", synth.frame_rate);
    synth.scale = number_field(doc, "scale", synth.scale);
    synth.start_gap = number_field(doc, "start_gap", synth.start_gap);
    synth.speed_min = number_field(doc, "speed_min", synth.speed_min);
    synth.speed_max = number_field(doc, "speed_max", synth.speed_max);
    synth.react_threshold = number_field(doc, "react_threshold", synth.react_threshold);
    synth.react_rate = number_field(doc, "react_rate", synth.react_rate);
    synth.react_ramp = size_field(doc, "react_ramp", synth.react_ramp);
    synth.osc_amplitude = number_field(doc, "osc_amplitude", synth.osc_amplitude);
    synth.osc_period = number_field(doc, "osc_period", synth.osc_period);
    synth.mirror_lag = size_field(doc, "mirror_lag", synth.mirror_lag);
    synth.walk_step = number_field(doc, "walk_step", synth.walk_step);
    split_spec.train = number_field(doc, "train_frac", split_spec.train);
    split_spec.validation = number_field(doc, "val_frac", split_spec.validation);
    split_spec.test = number_field(doc, "test_frac", split_spec.test);
  }
  synth.validate();
  split_spec.validate();

  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw_data("cannot create output directory '" + out_dir + "': " + ec.message());

  std::vector<std::string> ids;
  for (std::size_t i = 0; i < count; ++i) {
    char suffix[16];
    std::snprintf(suffix, sizeof(suffix), "%04zu", i);
    std::string id = scenario + "-" + suffix;
    Scene scene = generate_synthetic(synth, Rng::mix(seed, i), id);
    save_scene(scene, (fs::path(out_dir) / (id + ".json")).string());
    ids.push_back(std::move(id));
  }
  save_split(assign_splits(ids, split_spec), (fs::path(out_dir) / "split.tsv").string());
}

void run_train(const ExperimentConfig& config) {
  config.validate();
  if (config.data_dir.empty() || config.split_manifest.empty()) {
    throw_usage("train: config needs data_dir and split_manifest");
  }
  SplitAssignment assignment = load_split(config.split_manifest);
  Dataset dataset;
  dataset.train = load_split_scenes(config.data_dir, assignment, "train");
  dataset.validation = load_split_scenes(config.data_dir, assignment, "val");
  auto provider = make_context_provider(config.context_provider, config.model.context_raw);

  Checkpoint checkpoint = train(dataset, config.model, *provider);

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw_data("cannot create output directory '" + config.output_dir + "'");
  save_checkpoint(checkpoint, (fs::path(config.output_dir) / "checkpoint.smf").string());
  std::ofstream history((fs::path(config.output_dir) / "history.csv").string(),
                        std::ios::binary | std::ios::trunc);
  if (!history) throw_data("cannot write history.csv");
  history << checkpoint.history_csv();
}

namespace {

std::string model_method_name(const ModelConfig& config) {
  std::string name = variant_name(config.variant);
  if (variant_local(config.variant)) {
    name += "+" + motion_rule_name(config.motion_rule) + "-motion";
  }
  return name;
}

std::string scene_group(const std::string& scene_id) {
  auto dash = scene_id.rfind('-');
  return dash == std::string::npos ? scene_id : scene_id.substr(0, dash);
}

}  // namespace

void run_evaluate(const ExperimentConfig& config, const std::optional<std::string>& checkpoint_path) {
  config.validate();
  if (config.data_dir.empty() || config.split_manifest.empty()) {
    throw_usage("evaluate: config needs data_dir and split_manifest");
  }
  if (config.methods.empty()) throw_usage("evaluate: no methods requested");
  if (config.horizons_ms.empty()) throw_usage("evaluate: no horizons requested");

  SplitAssignment assignment = load_split(config.split_manifest);
  std::vector<Scene> scenes = load_split_scenes(config.data_dir, assignment, "test");
  if (scenes.empty()) throw_data("evaluate: empty test split");

  std::optional<Checkpoint> checkpoint;
  bool wants_model = std::find(config.methods.begin(), config.methods.end(), "model") !=
                     config.methods.end();
  if (wants_model) {
    if (!checkpoint_path) throw_usage("evaluate: method 'model' needs a checkpoint");
    checkpoint = load_checkpoint(*checkpoint_path);
    const ModelConfig& m = checkpoint->config;
    std::string mismatches;
    if (m.t_obs != config.model.t_obs) mismatches += " t_obs";
    if (m.t_pred != config.model.t_pred) mismatches += " t_pred";
    if (m.joints != config.model.joints) mismatches += " joints";
    if (m.dims != config.model.dims) mismatches += " dims";
    if (!mismatches.empty()) {
      throw_usage("evaluate: checkpoint incompatible with config, fields:" + mismatches);
    }
  }
  auto provider = make_context_provider(
      config.context_provider,
      checkpoint ? checkpoint->config.context_raw : config.model.context_raw);

  const std::size_t t_obs = config.model.t_obs;
  const std::size_t t_pred = config.model.t_pred;
  for (const Scene& scene : scenes) {
    if (scene.frames() < t_obs + t_pred) {
      throw_data("evaluate: scene '" + scene.scene_id + "' is shorter than t_obs + t_pred");
    }
  }

  HorizonReport report;
  report.def = config.metric;
  std::string curves_csv = "method,frame,metric\n";
  std::string groups_csv = "group,method,horizon_ms,frame_index,metric\n";

  for (const std::string& method : config.methods) {
    std::string label = method;
    std::vector<HorizonReport> per_scene;
    std::map<std::string, std::vector<HorizonReport>> per_group;
    std::vector<double> curve_sum(t_pred, 0.0);

    for (const Scene& scene : scenes) {
      ScenePrediction prediction;
      if (method == "model") {
        prediction = forecast_scene(scene, checkpoint->params, checkpoint->config, *provider);
        label = model_method_name(checkpoint->config);
      } else {
        prediction = baseline_predict(scene, method, t_obs, t_pred);
      }
      HorizonReport scene_report =
          global_metric(prediction, scene, t_obs, config.horizons_ms, label, config.metric);
      per_group[scene_group(scene.scene_id)].push_back(scene_report);
      per_scene.push_back(std::move(scene_report));
      std::vector<double> curve = metric_curve(prediction, scene, t_obs, config.metric);
      for (std::size_t k = 0; k < t_pred; ++k) curve_sum[k] += curve[k];
    }

    HorizonReport mean = average_reports(per_scene);
    report.rows.insert(report.rows.end(), mean.rows.begin(), mean.rows.end());
    for (std::size_t k = 0; k < t_pred; ++k) {
      curves_csv += label + "," + std::to_string(k + 1) + "," +
                    format_double(curve_sum[k] / static_cast<double>(scenes.size())) + "\n";
    }
    for (const auto& [group, reports] : per_group) {
      HorizonReport group_mean = average_reports(reports);
      for (const HorizonRow& row : group_mean.rows) {
        groups_csv += group + "," + row.method + "," + format_double(row.horizon_ms) + "," +
                      std::to_string(row.frame_index) + "," + format_double(row.metric) + "\n";
      }
    }
  }

  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec) throw_data("cannot create output directory '" + config.output_dir + "'");
  save_report_csv(report, (fs::path(config.output_dir) / "report.csv").string());
  std::ofstream curves((fs::path(config.output_dir) / "curves.csv").string(),
                       std::ios::binary | std::ios::trunc);
  curves << curves_csv;
  std::ofstream groups((fs::path(config.output_dir) / "report_groups.csv").string(),
                       std::ios::binary | std::ios::trunc);
  groups << groups_csv;
  if (!curves || !groups) throw_data("failed writing evaluation outputs");
}

void run_predict(const std::string& checkpoint_path, const std::string& scene_path,
                 const std::string& context_spec, const std::string& out_path) {
  Checkpoint checkpoint = load_checkpoint(checkpoint_path);
  Scene scene = load_scene(scene_path);
  auto provider = make_context_provider(context_spec, checkpoint.config.context_raw);
  ScenePrediction prediction =
      forecast_scene(scene, checkpoint.params, checkpoint.config, *provider);
  save_scene(prediction_to_scene(prediction, scene), out_path);
}

GradCheckResult gradcheck_suite(std::uint64_t seed, std::size_t n_seeds) {
  GradCheckResult result;
  const Variant variants[] = {Variant::joint,      Variant::joint_context,
                              Variant::joint_social, Variant::joint_social_context,
                              Variant::local_pose, Variant::local_pose_social};
  const Pooling poolings[] = {Pooling::max, Pooling::sum, Pooling::average};

  for (std::size_t s = 0; s < n_seeds; ++s) {
    std::uint64_t run_seed = seed + s;
    for (Variant variant : variants) {
      ModelConfig config;
      config.variant = variant;
      config.t_obs = 3;
      config.t_pred = 2;
      config.joints = 3;
      config.dims = 2;
      config.hidden = 4;
      config.context_out = 2;
      config.context_raw = 3;
      config.pooling = poolings[s % 3];
      config.dropout_p = 0.0;  // forecasting path; dropout is exercised in unit tests
      config.seed = run_seed;

      // Random two-person scene with embedded context features.
      Rng rng(Rng::mix(run_seed, 0x47434B21ULL));
      Scene scene;
      scene.scene_id = "gradcheck";
      scene.frame_rate = 25.0;
      scene.dims = config.dims;
      scene.joint_names = {"neck", "a", "b"};
      scene.root_joint = 0;
      const std::size_t frames = config.t_obs + config.t_pred;
      for (std::size_t p = 0; p < 2; ++p) {
        PersonTrack track;
        track.person_id = "p" + std::to_string(p);
        Pose pose(config.joints, config.dims);
        for (double& c : pose.coords) c = rng.uniform(-2.0, 2.0);
        for (std::size_t t = 0; t < frames; ++t) {
          for (double& c : pose.coords) c += rng.uniform(-0.5, 0.5);
          track.sequence.frames.push_back(pose);
        }
        scene.persons.push_back(std::move(track));
      }
      std::vector<Vec> raw(frames, Vec(config.context_raw));
      for (Vec& v : raw) {
        for (double& c : v) c = rng.uniform(-1.0, 1.0);
      }
      scene.context_raw = std::move(raw);
      scene.validate();

      auto provider = scene_context_provider(config.context_raw);
      ParamSet params = init_params(config, run_seed);

      SceneForwardCache cache;
      scene_loss(scene, params, config, *provider, RunMode::eval, nullptr, &cache);
      ParamSet analytic = params.zeros_like();
      scene_loss_backward(cache, params, config, analytic);

      auto loss_fn = [&](const ParamSet& p) {
        return scene_loss(scene, p, config, *provider, RunMode::eval, nullptr);
      };
      ParamSet numeric = finite_diff_grad(loss_fn, params, 1e-5);

      for (const std::string& name : params.names()) {
        const Tensor& a = analytic.at(name);
        const Tensor& n = numeric.at(name);
        for (std::size_t i = 0; i < a.size(); ++i) {
          double denom = std::max({std::abs(a[i]), std::abs(n[i]), 1e-8});
          double rel = std::abs(a[i] - n[i]) / denom;
          if (rel > result.max_rel_error) {
            result.max_rel_error = rel;
            result.worst = variant_name(variant) + " seed=" + std::to_string(run_seed) + " " +
                           name + "[" + std::to_string(i) + "]";
          }
        }
      }
    }
  }
  return result;
}

}  // namespace smf
