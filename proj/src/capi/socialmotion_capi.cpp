#include "socialmotion.h"

#include <cstring>
#include <string>

#include "core/checkpoint.hpp"
#include "core/errors.hpp"
#include "core/experiment.hpp"
#include "core/model.hpp"
#include "core/scene.hpp"
#include "core/social.hpp"

struct smf_scene {
  smf::Scene scene;
};

struct smf_model {
  smf::Checkpoint checkpoint;
  std::string variant;
};

namespace {

thread_local std::string g_last_error;

int fail(const smf::Error& e) {
  g_last_error = e.what();
  return e.exit_code();
}

int fail(const std::exception& e) {
  g_last_error = e.what();
  return SMF_ERR_DATA;
}

int usage_fail(const char* msg) {
  g_last_error = msg;
  return SMF_ERR_USAGE;
}

std::vector<std::string> collect(const char* const* items, size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) {
    if (!items[i]) smf::throw_usage("null override string");
    out.emplace_back(items[i]);
  }
  return out;
}

}  // namespace

extern "C" {

const char* smf_version(void) { return "1.0.0"; }

const char* smf_last_error(void) { return g_last_error.c_str(); }

int smf_scene_load(const char* path, smf_scene** out) {
  if (!path || !out) return usage_fail("smf_scene_load: null argument");
  try {
    auto* handle = new smf_scene{smf::load_scene(path)};
    *out = handle;
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_scene_parse(const char* text, size_t len, smf_scene** out) {
  if (!text || !out) return usage_fail("smf_scene_parse: null argument");
  try {
    auto* handle = new smf_scene{smf::parse_scene(std::string(text, len))};
    *out = handle;
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_scene_save(const smf_scene* scene, const char* path) {
  if (!scene || !path) return usage_fail("smf_scene_save: null argument");
  try {
    smf::save_scene(scene->scene, path);
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

void smf_scene_free(smf_scene* scene) { delete scene; }

const char* smf_scene_id(const smf_scene* scene) { return scene->scene.scene_id.c_str(); }
size_t smf_scene_person_count(const smf_scene* scene) { return scene->scene.person_count(); }
size_t smf_scene_frame_count(const smf_scene* scene) { return scene->scene.frames(); }
size_t smf_scene_joint_count(const smf_scene* scene) { return scene->scene.joints(); }
size_t smf_scene_dims(const smf_scene* scene) { return scene->scene.dims; }
double smf_scene_frame_rate(const smf_scene* scene) { return scene->scene.frame_rate; }

int smf_model_load(const char* checkpoint_path, smf_model** out) {
  if (!checkpoint_path || !out) return usage_fail("smf_model_load: null argument");
  try {
    auto* handle = new smf_model{smf::load_checkpoint(checkpoint_path), ""};
    handle->variant = smf::variant_name(handle->checkpoint.config.variant);
    *out = handle;
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

void smf_model_free(smf_model* model) { delete model; }

const char* smf_model_variant(const smf_model* model) { return model->variant.c_str(); }

int smf_model_forecast(const smf_model* model, const smf_scene* scene, const char* context_spec,
                       smf_scene** out_prediction) {
  if (!model || !scene || !out_prediction) return usage_fail("smf_model_forecast: null argument");
  try {
    auto provider = smf::make_context_provider(context_spec ? context_spec : "zero",
                                               model->checkpoint.config.context_raw);
    smf::ScenePrediction prediction = smf::forecast_scene(
        scene->scene, model->checkpoint.params, model->checkpoint.config, *provider);
    auto* handle = new smf_scene{smf::prediction_to_scene(prediction, scene->scene)};
    *out_prediction = handle;
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_generate(const char* scenario, size_t count, uint64_t seed, const char* out_dir,
                 const char* options_json) {
  if (!scenario || !out_dir) return usage_fail("smf_generate: null argument");
  try {
    smf::run_generate(scenario, count, seed, out_dir, options_json ? options_json : "");
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_train(const char* config_path, const char* const* overrides, size_t n_overrides) {
  if (!config_path || (n_overrides > 0 && !overrides)) {
    return usage_fail("smf_train: null argument");
  }
  try {
    smf::ExperimentConfig config =
        smf::load_experiment_config(config_path, collect(overrides, n_overrides));
    smf::run_train(config);
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_evaluate(const char* config_path, const char* checkpoint_path,
                 const char* const* overrides, size_t n_overrides) {
  if (!config_path || (n_overrides > 0 && !overrides)) {
    return usage_fail("smf_evaluate: null argument");
  }
  try {
    smf::ExperimentConfig config =
        smf::load_experiment_config(config_path, collect(overrides, n_overrides));
    std::optional<std::string> checkpoint;
    if (checkpoint_path) checkpoint = checkpoint_path;
    smf::run_evaluate(config, checkpoint);
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

int smf_gradcheck(uint64_t seed, size_t n_seeds, double tolerance, double* max_rel_error) {
  if (!max_rel_error || n_seeds == 0) return usage_fail("smf_gradcheck: bad arguments");
  try {
    smf::GradCheckResult result = smf::gradcheck_suite(seed, n_seeds);
    *max_rel_error = result.max_rel_error;
    if (result.max_rel_error > tolerance) {
      g_last_error = "gradient check failed: max relative error " +
                     std::to_string(result.max_rel_error) + " at " + result.worst;
      return SMF_ERR_NUMERIC;
    }
    return SMF_OK;
  } catch (const smf::Error& e) {
    return fail(e);
  } catch (const std::exception& e) {
    return fail(e);
  }
}

}  // extern "C"
