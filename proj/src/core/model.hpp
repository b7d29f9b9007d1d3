#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/baselines.hpp"
#include "core/gru.hpp"
#include "core/params.hpp"
#include "core/pose.hpp"
#include "core/scene.hpp"
#include "core/social.hpp"

namespace smf {

// Which feature blocks feed the decoder and whether the pipeline runs on
// absolute ("joint") or neck-centered ("local-pose") coordinates.
enum class Variant {
  joint,
  joint_context,
  joint_social,
  joint_social_context,
  local_pose,
  local_pose_social,
};

Variant parse_variant(const std::string& name);
std::string variant_name(Variant v);
bool variant_social(Variant v);
bool variant_context(Variant v);
bool variant_local(Variant v);

struct ModelConfig {
  std::size_t t_obs = 15;
  std::size_t t_pred = 15;
  std::size_t joints = 14;
  std::size_t dims = 2;
  std::size_t hidden = 1024;       // encoder hidden size K (also the social block)
  std::size_t context_out = 256;   // context feature size K_C
  std::size_t context_raw = 1024;  // raw context feature size F
  Pooling pooling = Pooling::max;
  Variant variant = Variant::joint;
  MotionRule motion_rule = MotionRule::zero;  // local-pose variants only
  double dropout_p = 0.7;
  double lr = 5e-4;
  double lr_decay = 0.95;
  std::size_t batch_size = 8;
  std::size_t max_epochs = 100;
  std::size_t patience = 10;
  std::uint64_t seed = 1;

  std::size_t input_dim() const { return joints * dims; }
  // All variants share one decoder width: [h ; S ; C] with zero blocks where a
  // branch is disabled, so ablations only change the information content.
  std::size_t decoder_hidden() const { return hidden + hidden + context_out; }

  void validate() const;
};

// Canonical parameter inventory for a configuration: names, shapes and order.
std::vector<std::pair<std::string, std::vector<std::size_t>>> param_inventory(
    const ModelConfig& config);

ParamSet init_params(const ModelConfig& config, std::uint64_t seed);
ParamSet zero_params(const ModelConfig& config);

struct PersonPrediction {
  std::string person_id;
  PoseSequence absolute;   // t_pred frames of absolute coordinates
  OffsetSequence offsets;  // satisfies from_offsets(last observed pose, offsets)
};

struct ScenePrediction {
  std::string scene_id;
  std::vector<PersonPrediction> persons;
};

// Mean over persons, steps and coordinates of squared offset differences.
double joint_loss(const std::vector<std::vector<Vec>>& pred_offsets,
                  const std::vector<std::vector<Vec>>& gt_offsets);

// Forward-pass state kept for the backward pass. Offsets here are in model
// coordinates: absolute first differences for joint variants, neck-centered
// first differences for local-pose variants.
struct SceneForwardCache {
  struct PersonState {
    std::vector<GruStepCache> encoder_steps;
    Vec embedding;
    DecodeCache decode;
    std::vector<Vec> pred_offsets;
    std::vector<Vec> gt_offsets;
  };
  std::vector<std::size_t> sorted_order;  // person indices sorted by person_id
  std::vector<PersonState> persons;       // in scene order
  PoolCache pool;
  Vec social;
  ContextMlpCache context;
  bool has_context = false;
  double loss = 0.0;
};

// Loss of one scene (observation = first t_obs frames, target = next t_pred
// frames). In train mode the context branch applies dropout driven by `rng`.
double scene_loss(const Scene& scene, const ParamSet& params, const ModelConfig& config,
                  const ContextProvider& context, RunMode mode, Rng* rng,
                  SceneForwardCache* cache = nullptr);

// Accumulates dLoss/dParams for a cached forward pass into `grads`.
void scene_loss_backward(const SceneForwardCache& cache, const ParamSet& params,
                         const ModelConfig& config, ParamSet& grads);

// Full-model prediction for the first t_obs frames of a scene. Local-pose
// variants predict centered poses and place them on the configured motion
// rule's root trajectory.
ScenePrediction forecast_scene(const Scene& scene, const ParamSet& params,
                               const ModelConfig& config, const ContextProvider& context);

}  // namespace smf
