#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "core/checkpoint.hpp"
#include "core/metrics.hpp"
#include "core/model.hpp"
#include "core/split.hpp"
#include "core/train.hpp"

namespace smf {

// Experiment description: one JSON document, CLI flags can override any field
// through dotted "key=value" pairs.
struct ExperimentConfig {
  ModelConfig model;
  std::string data_dir;
  std::string split_manifest;
  std::string context_provider = "zero";  // "zero" | "scene" | feature file path
  std::string output_dir = "out";
  std::vector<double> horizons_ms;
  std::vector<std::string> methods;  // baseline names and/or "model"
  MetricDef metric = MetricDef::stacked_l2;

  void validate() const;
};

ExperimentConfig parse_experiment_config(const std::string& text);
ExperimentConfig load_experiment_config(const std::string& path,
                                        const std::vector<std::string>& overrides);

// Baseline method names accepted in `methods`.
inline constexpr const char* kZeroZero = "ZeroPose-ZeroMotion";
inline constexpr const char* kZeroConstant = "ZeroPose-ConstantMotion";
inline constexpr const char* kConstantConstant = "ConstantPose-ConstantMotion";

// Closed-form baseline prediction for a whole scene.
ScenePrediction baseline_predict(const Scene& scene, const std::string& method,
                                 std::size_t t_obs, std::size_t t_pred);

// Converts a prediction into a scene file (same joints, ids and frame rate as
// the source; t_pred frames; scene_id suffixed with "-pred").
Scene prediction_to_scene(const ScenePrediction& prediction, const Scene& source);

// Scenes of one split, loaded from data_dir/<scene_id>.json, sorted by id.
std::vector<Scene> load_split_scenes(const std::string& data_dir,
                                     const SplitAssignment& assignment,
                                     const std::string& split);

// CLI-facing runners. They throw smf::Error on failure; exit-code mapping
// happens at the C API boundary.
void run_generate(const std::string& scenario, std::size_t count, std::uint64_t seed,
                  const std::string& out_dir, const std::string& options_json);
void run_train(const ExperimentConfig& config);
void run_evaluate(const ExperimentConfig& config, const std::optional<std::string>& checkpoint);
void run_predict(const std::string& checkpoint_path, const std::string& scene_path,
                 const std::string& context_spec, const std::string& out_path);

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::string worst;  // "variant seed=... param[index]"
};

// Finite-difference check of the end-to-end scene loss gradient for every
// model variant at toy dimensions, over `n_seeds` consecutive seeds.
GradCheckResult gradcheck_suite(std::uint64_t seed, std::size_t n_seeds);

}  // namespace smf
