#include "core/model.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace smf {

Variant parse_variant(const std::string& name) {
  if (name == "joint") return Variant::joint;
  if (name == "joint+context") return Variant::joint_context;
  if (name == "joint+social") return Variant::joint_social;
  if (name == "joint+social+context") return Variant::joint_social_context;
  if (name == "local-pose") return Variant::local_pose;
  if (name == "local-pose+social") return Variant::local_pose_social;
  throw_usage("unknown variant '" + name +
              "' (expected joint|joint+context|joint+social|joint+social+context|"
              "local-pose|local-pose+social)");
}

std::string variant_name(Variant v) {
  switch (v) {
    case Variant::joint: return "joint";
    case Variant::joint_context: return "joint+context";
    case Variant::joint_social: return "joint+social";
    case Variant::joint_social_context: return "joint+social+context";
    case Variant::local_pose: return "local-pose";
    case Variant::local_pose_social: return "local-pose+social";
  }
  return "?";
}

bool variant_social(Variant v) {
  return v == Variant::joint_social || v == Variant::joint_social_context ||
         v == Variant::local_pose_social;
}

bool variant_context(Variant v) {
  return v == Variant::joint_context || v == Variant::joint_social_context;
}

bool variant_local(Variant v) {
  return v == Variant::local_pose || v == Variant::local_pose_social;
}

void ModelConfig::validate() const {
  if (t_obs < 2) throw_usage("model config: t_obs must be at least 2");
  if (t_pred < 1) throw_usage("model config: t_pred must be at least 1");
  if (joints < 2) throw_usage("model config: joints must be at least 2");
  if (dims != 2 && dims != 3) throw_usage("model config: dims must be 2 or 3");
  if (hidden < 1) throw_usage("model config: hidden must be positive");
  if (context_out < 1) throw_usage("model config: context_out must be positive");
  if (context_raw < 1) throw_usage("model config: context_raw must be positive");
  if (!(dropout_p >= 0.0) || dropout_p >= 1.0) {
    throw_usage("model config: dropout_p must lie in [0, 1)");
  }
  if (!(lr > 0.0)) throw_usage("model config: lr must be positive");
  if (!(lr_decay > 0.0) || lr_decay > 1.0) throw_usage("model config: lr_decay must be in (0, 1]");
  if (batch_size < 1) throw_usage("model config: batch_size must be positive");
  if (max_epochs < 1) throw_usage("model config: max_epochs must be positive");
}

std::vector<std::pair<std::string, std::vector<std::size_t>>> param_inventory(
    const ModelConfig& config) {
  config.validate();
  const std::size_t in = config.input_dim();
  const std::size_t k = config.hidden;
  const std::size_t dk = config.decoder_hidden();
  std::vector<std::pair<std::string, std::vector<std::size_t>>> inv;
  for (const char* gate : {"reset", "update", "cand"}) {
    inv.push_back({std::string("encoder.") + gate + ".W", {k, in}});
    inv.push_back({std::string("encoder.") + gate + ".U", {k, k}});
    inv.push_back({std::string("encoder.") + gate + ".b", {k}});
  }
  for (const char* gate : {"reset", "update", "cand"}) {
    inv.push_back({std::string("decoder.") + gate + ".W", {dk, in}});
    inv.push_back({std::string("decoder.") + gate + ".U", {dk, dk}});
    inv.push_back({std::string("decoder.") + gate + ".b", {dk}});
  }
  inv.push_back({"out.W", {in, dk}});
  inv.push_back({"out.b", {in}});
  if (variant_context(config.variant)) {
    const std::size_t f = config.context_raw;
    inv.push_back({"context.fc1.W", {f, f}});
    inv.push_back({"context.fc1.b", {f}});
    inv.push_back({"context.fc2.W", {config.context_out, f}});
    inv.push_back({"context.fc2.b", {config.context_out}});
  }
  return inv;
}

ParamSet zero_params(const ModelConfig& config) {
  ParamSet params;
  for (auto& [name, shape] : param_inventory(config)) params.add(name, Tensor(shape));
  return params;
}

ParamSet init_params(const ModelConfig& config, std::uint64_t seed) {
  ParamSet params = zero_params(config);
  Rng rng(Rng::mix(seed, 0x494E4954ULL));
  init_uniform_fan_in(params, rng);
  return params;
}

double joint_loss(const std::vector<std::vector<Vec>>& pred_offsets,
                  const std::vector<std::vector<Vec>>& gt_offsets) {
  if (pred_offsets.size() != gt_offsets.size() || pred_offsets.empty()) {
    throw_usage("joint_loss: person count mismatch");
  }
  double sum = 0.0;
  std::size_t count = 0;
  for (std::size_t j = 0; j < pred_offsets.size(); ++j) {
    if (pred_offsets[j].size() != gt_offsets[j].size()) {
      throw_usage("joint_loss: step count mismatch for person " + std::to_string(j));
    }
    for (std::size_t t = 0; t < pred_offsets[j].size(); ++t) {
      const Vec& a = pred_offsets[j][t];
      const Vec& b = gt_offsets[j][t];
      if (a.size() != b.size()) throw_usage("joint_loss: coordinate count mismatch");
      for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
      }
      count += a.size();
    }
  }
  if (count == 0) throw_usage("joint_loss: empty offsets");
  double loss = sum / static_cast<double>(count);
  if (!std::isfinite(loss)) throw_numeric("joint_loss: non-finite loss");
  return loss;
}

namespace {

// Flattened first differences of the (possibly centered) observed frames.
std::vector<Vec> model_offsets(const PoseSequence& seq, std::size_t from, std::size_t to,
                               bool centered, std::size_t root) {
  std::vector<Vec> out;
  auto frame_coords = [&](std::size_t t) {
    if (!centered) return seq.frames[t].coords;
    return center_pose(seq.frames[t], root).first.coords;
  };
  Vec prev = frame_coords(from);
  for (std::size_t t = from + 1; t <= to; ++t) {
    Vec cur = frame_coords(t);
    Vec delta(cur.size());
    for (std::size_t i = 0; i < cur.size(); ++i) delta[i] = cur[i] - prev[i];
    out.push_back(std::move(delta));
    prev = std::move(cur);
  }
  return out;
}

void check_scene_shapes(const Scene& scene, const ModelConfig& config, std::size_t needed) {
  if (scene.joints() != config.joints) {
    throw_usage("scene '" + scene.scene_id + "' has " + std::to_string(scene.joints()) +
                " joints, model expects " + std::to_string(config.joints));
  }
  if (scene.dims != config.dims) {
    throw_usage("scene '" + scene.scene_id + "' has dims " + std::to_string(scene.dims) +
                ", model expects " + std::to_string(config.dims));
  }
  if (scene.frames() < needed) {
    throw_usage("scene '" + scene.scene_id + "' has " + std::to_string(scene.frames()) +
                " frames, need at least " + std::to_string(needed));
  }
}

// Shared forward pass; fills the cache and (when requested) the loss.
void forward_scene(const Scene& scene, const ParamSet& params, const ModelConfig& config,
                   const ContextProvider& context, RunMode mode, Rng* rng, bool with_loss,
                   SceneForwardCache& cache) {
  config.validate();
  check_scene_shapes(scene, config, with_loss ? config.t_obs + config.t_pred : config.t_obs);

  const bool local = variant_local(config.variant);
  const bool social = variant_social(config.variant);
  const bool with_context = variant_context(config.variant);
  const std::size_t n = scene.person_count();

  GruParams encoder = GruParams::view(params, "encoder");
  GruParams decoder = GruParams::view(params, "decoder");
  const Tensor& w_out = params.at("out.W");
  const Tensor& b_out = params.at("out.b");

  cache.persons.assign(n, {});
  cache.sorted_order.resize(n);
  for (std::size_t i = 0; i < n; ++i) cache.sorted_order[i] = i;
  std::sort(cache.sorted_order.begin(), cache.sorted_order.end(),
            [&](std::size_t a, std::size_t b) {
              return scene.persons[a].person_id < scene.persons[b].person_id;
            });

  // Encoder: one embedding per person from the observed offsets.
  for (std::size_t j = 0; j < n; ++j) {
    auto& state = cache.persons[j];
    std::vector<Vec> inputs = model_offsets(scene.persons[j].sequence, 0, config.t_obs - 1,
                                            local, scene.root_joint);
    state.embedding = encode_steps(inputs, encoder, &state.encoder_steps);
  }

  // Social feature: pooled in id-sorted order so the reduction sequence (and
  // max tie-breaking) is independent of person order in the file.
  cache.social.assign(config.hidden, 0.0);
  if (social) {
    std::vector<Vec> sorted_embeddings;
    sorted_embeddings.reserve(n);
    for (std::size_t idx : cache.sorted_order) {
      sorted_embeddings.push_back(cache.persons[idx].embedding);
    }
    cache.social = social_pool(sorted_embeddings, config.pooling, &cache.pool);
  }

  // Context feature: one shared vector per scene.
  Vec context_feature(config.context_out, 0.0);
  cache.has_context = with_context;
  if (with_context) {
    Vec raw = context.raw_for(scene, config.t_obs);
    if (raw.size() != config.context_raw) {
      throw_usage("context provider returned dimension " + std::to_string(raw.size()) +
                  ", model expects " + std::to_string(config.context_raw));
    }
    context_feature = context_mlp_forward(raw, params, "context", mode, config.dropout_p, rng,
                                          &cache.context);
  }

  // Decoder: conditioned on [h_j ; S ; C], seeded with the last observed offset.
  for (std::size_t j = 0; j < n; ++j) {
    auto& state = cache.persons[j];
    Vec init;
    init.reserve(config.decoder_hidden());
    init.insert(init.end(), state.embedding.begin(), state.embedding.end());
    init.insert(init.end(), cache.social.begin(), cache.social.end());
    init.insert(init.end(), context_feature.begin(), context_feature.end());

    const Vec& last_offset = state.encoder_steps.back().x;
    state.pred_offsets = decode_offsets(init, last_offset, config.t_pred, decoder, w_out, b_out,
                                        &state.decode);
  }

  cache.loss = 0.0;
  if (with_loss) {
    std::vector<std::vector<Vec>> pred(n), gt(n);
    for (std::size_t j = 0; j < n; ++j) {
      cache.persons[j].gt_offsets = model_offsets(
          scene.persons[j].sequence, config.t_obs - 1, config.t_obs + config.t_pred - 1, local,
          scene.root_joint);
      pred[j] = cache.persons[j].pred_offsets;
      gt[j] = cache.persons[j].gt_offsets;
    }
    cache.loss = joint_loss(pred, gt);
  }
}

}  // namespace

double scene_loss(const Scene& scene, const ParamSet& params, const ModelConfig& config,
                  const ContextProvider& context, RunMode mode, Rng* rng,
                  SceneForwardCache* cache) {
  SceneForwardCache local_cache;
  SceneForwardCache& c = cache ? *cache : local_cache;
  forward_scene(scene, params, config, context, mode, rng, /*with_loss=*/true, c);
  return c.loss;
}

void scene_loss_backward(const SceneForwardCache& cache, const ParamSet& params,
                         const ModelConfig& config, ParamSet& grads) {
  const std::size_t n = cache.persons.size();
  const std::size_t k = config.hidden;
  const std::size_t kc = config.context_out;
  const bool social = variant_social(config.variant);

  GruParams encoder = GruParams::view(params, "encoder");
  GruParams decoder = GruParams::view(params, "decoder");
  const Tensor& w_out = params.at("out.W");
  const Tensor& b_out = params.at("out.b");
  GruGrads enc_grads = GruGrads::view(grads, "encoder");
  GruGrads dec_grads = GruGrads::view(grads, "decoder");
  Tensor& d_w_out = grads.at("out.W");
  Tensor& d_b_out = grads.at("out.b");

  std::size_t coord_count = 0;
  for (const auto& p : cache.persons) {
    for (const Vec& v : p.pred_offsets) coord_count += v.size();
  }
  const double scale = 2.0 / static_cast<double>(coord_count);

  std::vector<Vec> d_embeddings(n, Vec(k, 0.0));
  Vec d_social_total(k, 0.0);
  Vec d_context_total(kc, 0.0);

  for (std::size_t j = 0; j < n; ++j) {
    const auto& state = cache.persons[j];
    std::vector<Vec> d_outputs(state.pred_offsets.size());
    for (std::size_t t = 0; t < d_outputs.size(); ++t) {
      const Vec& pred = state.pred_offsets[t];
      const Vec& gt = state.gt_offsets[t];
      Vec d(pred.size());
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = scale * (pred[i] - gt[i]);
      d_outputs[t] = std::move(d);
    }
    Vec d_init = decode_backward(decoder, w_out, b_out, state.decode, d_outputs, dec_grads,
                                 d_w_out, d_b_out);
    for (std::size_t i = 0; i < k; ++i) d_embeddings[j][i] += d_init[i];
    for (std::size_t i = 0; i < k; ++i) d_social_total[i] += d_init[k + i];
    for (std::size_t i = 0; i < kc; ++i) d_context_total[i] += d_init[2 * k + i];
  }

  if (social) {
    std::vector<Vec> d_sorted(n, Vec(k, 0.0));
    social_pool_backward(d_social_total, config.pooling, cache.pool, d_sorted);
    for (std::size_t pos = 0; pos < n; ++pos) {
      std::size_t j = cache.sorted_order[pos];
      for (std::size_t i = 0; i < k; ++i) d_embeddings[j][i] += d_sorted[pos][i];
    }
  }

  if (cache.has_context) {
    context_mlp_backward(d_context_total, params, "context", cache.context, grads);
  }

  for (std::size_t j = 0; j < n; ++j) {
    encode_backward(encoder, cache.persons[j].encoder_steps, d_embeddings[j], enc_grads);
  }
}

ScenePrediction forecast_scene(const Scene& scene, const ParamSet& params,
                               const ModelConfig& config, const ContextProvider& context) {
  SceneForwardCache cache;
  forward_scene(scene, params, config, context, RunMode::eval, nullptr, /*with_loss=*/false,
                cache);

  const bool local = variant_local(config.variant);
  ScenePrediction prediction;
  prediction.scene_id = scene.scene_id;

  for (std::size_t j = 0; j < scene.person_count(); ++j) {
    const PersonTrack& track = scene.persons[j];
    const Pose& last_obs = track.sequence.frames[config.t_obs - 1];

    PersonPrediction person;
    person.person_id = track.person_id;
    person.offsets.joints = config.joints;
    person.offsets.dims = config.dims;

    if (!local) {
      person.offsets.deltas = cache.persons[j].pred_offsets;
    } else {
      // Rebuild centered poses from the predicted centered offsets, strip the
      // model's root drift exactly, then place them on the rule trajectory.
      Pose last_centered = center_pose(last_obs, scene.root_joint).first;
      PoseSequence centered;
      centered.frame_rate = scene.frame_rate;
      Pose cur = last_centered;
      for (const Vec& delta : cache.persons[j].pred_offsets) {
        for (std::size_t i = 0; i < delta.size(); ++i) cur.coords[i] += delta[i];
        centered.frames.push_back(center_pose(cur, scene.root_joint).first);
      }
      PoseSequence obs;
      obs.frame_rate = scene.frame_rate;
      obs.frames.assign(track.sequence.frames.begin(),
                        track.sequence.frames.begin() + config.t_obs);
      PoseSequence absolute =
          compose_local_pose(centered, obs, scene.root_joint, config.motion_rule);
      // Canonical offsets anchored at the last observed pose so that the
      // stored (offsets, absolute) pair round-trips exactly.
      Vec prev = last_obs.coords;
      for (const Pose& frame : absolute.frames) {
        Vec delta(frame.coords.size());
        for (std::size_t i = 0; i < delta.size(); ++i) delta[i] = frame.coords[i] - prev[i];
        person.offsets.deltas.push_back(std::move(delta));
        prev = frame.coords;
      }
    }

    PoseSequence rebuilt = from_offsets(last_obs, person.offsets, scene.frame_rate);
    person.absolute.frame_rate = scene.frame_rate;
    person.absolute.frames.assign(rebuilt.frames.begin() + 1, rebuilt.frames.end());
    prediction.persons.push_back(std::move(person));
  }
  return prediction;
}

}  // namespace smf
