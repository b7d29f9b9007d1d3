// smf — command line front end for the socialmotion forecasting library.
// Subcommands: generate | validate | train | evaluate | predict | gradcheck.
// Exit codes: 0 success, 1 usage/config error, 2 data error, 3 numerical failure.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "socialmotion.h"

namespace {

int report_failure(int status) {
  std::fprintf(stderr, "error: %s\n", smf_last_error());
  return status;
}

std::vector<const char*> to_cstrs(const std::vector<std::string>& items) {
  std::vector<const char*> out;
  out.reserve(items.size());
  for (const std::string& s : items) out.push_back(s.c_str());
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"socialmotion: joint human motion and pose forecasting toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(smf_version()));

  // generate
  auto* generate = app.add_subcommand("generate", "Write synthetic scene files and a split manifest");
  std::string scenario;
  std::size_t count = 0;
  std::uint64_t gen_seed = 1;
  std::string gen_out = "scenes";
  std::string gen_options;
  generate->add_option("scenario", scenario, "approach|react|mirror|independent")->required();
  generate->add_option("count", count, "number of scenes")->required();
  generate->add_option("--seed", gen_seed, "generator seed");
  generate->add_option("--out", gen_out, "output directory");
  generate->add_option("--options", gen_options, "JSON object of generator options");

  // validate
  auto* validate = app.add_subcommand("validate", "Parse scene files and check every invariant");
  std::vector<std::string> validate_files;
  validate->add_option("files", validate_files, "scene files")->required();

  // train
  auto* train = app.add_subcommand("train", "Train a model from an experiment config");
  std::string train_config;
  std::vector<std::string> train_sets;
  train->add_option("config", train_config, "experiment config file")->required();
  train->add_option("--set", train_sets, "override config values (dotted.key=value)");

  // evaluate
  auto* evaluate = app.add_subcommand("evaluate", "Evaluate methods on the test split");
  std::string eval_config, eval_checkpoint;
  std::vector<std::string> eval_sets;
  evaluate->add_option("config", eval_config, "experiment config file")->required();
  evaluate->add_option("--checkpoint", eval_checkpoint, "checkpoint for the 'model' method");
  evaluate->add_option("--set", eval_sets, "override config values (dotted.key=value)");

  // predict
  auto* predict = app.add_subcommand("predict", "Forecast one scene with a trained checkpoint");
  std::string pred_checkpoint, pred_scene, pred_out, pred_context = "zero";
  predict->add_option("checkpoint", pred_checkpoint, "checkpoint file")->required();
  predict->add_option("scene", pred_scene, "scene file")->required();
  predict->add_option("out", pred_out, "output scene file")->required();
  predict->add_option("--context", pred_context, "context provider: zero|scene|<feature file>");

  // gradcheck
  auto* gradcheck = app.add_subcommand("gradcheck", "Finite-difference check of all gradients");
  std::uint64_t gc_seed = 1;
  std::size_t gc_seeds = 3;
  double gc_tolerance = 1e-4;
  gradcheck->add_option("--seed", gc_seed, "first seed");
  gradcheck->add_option("--seeds", gc_seeds, "number of seeds");
  gradcheck->add_option("--tolerance", gc_tolerance, "maximum relative error");

  CLI11_PARSE(app, argc, argv);

  if (*generate) {
    int status = smf_generate(scenario.c_str(), count, gen_seed, gen_out.c_str(),
                              gen_options.empty() ? nullptr : gen_options.c_str());
    if (status != SMF_OK) return report_failure(status);
    std::printf("wrote %zu scene(s) and split.tsv to %s\n", count, gen_out.c_str());
    return 0;
  }

  if (*validate) {
    for (const std::string& file : validate_files) {
      smf_scene* scene = nullptr;
      int status = smf_scene_load(file.c_str(), &scene);
      if (status != SMF_OK) {
        std::fprintf(stderr, "%s: INVALID: %s\n", file.c_str(), smf_last_error());
        return status;
      }
      std::printf("%s: ok (%zu persons, %zu frames, %zu joints, %zuD)\n", file.c_str(),
                  smf_scene_person_count(scene), smf_scene_frame_count(scene),
                  smf_scene_joint_count(scene), smf_scene_dims(scene));
      smf_scene_free(scene);
    }
    return 0;
  }

  if (*train) {
    auto overrides = to_cstrs(train_sets);
    int status = smf_train(train_config.c_str(), overrides.data(), overrides.size());
    if (status != SMF_OK) return report_failure(status);
    std::printf("training done\n");
    return 0;
  }

  if (*evaluate) {
    auto overrides = to_cstrs(eval_sets);
    int status = smf_evaluate(eval_config.c_str(),
                              eval_checkpoint.empty() ? nullptr : eval_checkpoint.c_str(),
                              overrides.data(), overrides.size());
    if (status != SMF_OK) return report_failure(status);
    std::printf("evaluation done\n");
    return 0;
  }

  if (*predict) {
    smf_model* model = nullptr;
    int status = smf_model_load(pred_checkpoint.c_str(), &model);
    if (status != SMF_OK) return report_failure(status);
    smf_scene* scene = nullptr;
    status = smf_scene_load(pred_scene.c_str(), &scene);
    if (status != SMF_OK) {
      smf_model_free(model);
      return report_failure(status);
    }
    smf_scene* prediction = nullptr;
    status = smf_model_forecast(model, scene, pred_context.c_str(), &prediction);
    if (status == SMF_OK) status = smf_scene_save(prediction, pred_out.c_str());
    if (status == SMF_OK) {
      std::printf("wrote %zu predicted frame(s) to %s\n", smf_scene_frame_count(prediction),
                  pred_out.c_str());
    }
    smf_scene_free(prediction);
    smf_scene_free(scene);
    smf_model_free(model);
    return status == SMF_OK ? 0 : report_failure(status);
  }

  if (*gradcheck) {
    double max_rel_error = 0.0;
    int status = smf_gradcheck(gc_seed, gc_seeds, gc_tolerance, &max_rel_error);
    std::printf("max relative error: %.3e (tolerance %.1e)\n", max_rel_error, gc_tolerance);
    if (status != SMF_OK) return report_failure(status);
    return 0;
  }

  return 1;
}
