#include "core/train.hpp"

#include <algorithm>
#include <cmath>

#include "core/errors.hpp"

namespace smf {

bool EarlyStopper::observe(double val_loss) {
  ++epoch_;
  if (!has_best_ || val_loss < best_) {
    best_ = val_loss;
    best_epoch_ = epoch_;
    has_best_ = true;
    failures_ = 0;
    return true;
  }
  ++failures_;
  return false;
}

double evaluate_loss(const std::vector<Scene>& scenes, const ParamSet& params,
                     const ModelConfig& config, const ContextProvider& context) {
  if (scenes.empty()) throw_usage("evaluate_loss: empty scene list");
  double sum = 0.0;
  for (const Scene& scene : scenes) {
    sum += scene_loss(scene, params, config, context, RunMode::eval, nullptr);
  }
  return sum / static_cast<double>(scenes.size());
}

Checkpoint train(const Dataset& dataset, const ModelConfig& config,
                 const ContextProvider& context) {
  config.validate();
  if (dataset.train.empty()) throw_usage("train: empty training split");
  if (dataset.validation.empty()) throw_usage("train: empty validation split");
  for (const Scene& scene : dataset.train) {
    if (scene.frames() < config.t_obs + config.t_pred) {
      throw_data("train: scene '" + scene.scene_id + "' is shorter than t_obs + t_pred");
    }
  }

  ParamSet params = init_params(config, config.seed);
  AdamState adam = AdamState::for_params(params);
  Rng shuffle_rng(Rng::mix(config.seed, 0x53485546ULL));
  Rng dropout_rng(Rng::mix(config.seed, 0x44524F50ULL));

  Checkpoint checkpoint;
  checkpoint.config = config;
  ParamSet best_params = params;
  EarlyStopper stopper(config.patience);

  std::vector<std::size_t> order(dataset.train.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  double lr = config.lr;
  for (std::size_t epoch = 1; epoch <= config.max_epochs; ++epoch) {
    shuffle(order, shuffle_rng);

    double epoch_loss_sum = 0.0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += config.batch_size, ++batch_index) {
      std::size_t end = std::min(begin + config.batch_size, order.size());
      std::size_t batch_scenes = end - begin;
      ParamSet grads = params.zeros_like();
      double batch_loss = 0.0;
      for (std::size_t i = begin; i < end; ++i) {
        const Scene& scene = dataset.train[order[i]];
        SceneForwardCache cache;
        double loss;
        try {
          loss = scene_loss(scene, params, config, context, RunMode::train, &dropout_rng, &cache);
        } catch (const Error& e) {
          if (e.kind() == Error::Kind::numeric) {
            throw Error(Error::Kind::numeric,
                        "epoch " + std::to_string(epoch) + " batch " +
                            std::to_string(batch_index) + " (scene '" + scene.scene_id +
                            "'): " + e.what());
          }
          throw;
        }
        if (!std::isfinite(loss)) {
          throw_numeric("epoch " + std::to_string(epoch) + " batch " +
                        std::to_string(batch_index) + " (scene '" + scene.scene_id +
                        "'): non-finite loss");
        }
        batch_loss += loss;
        scene_loss_backward(cache, params, config, grads);
      }
      // Average over the scenes in the batch.
      double inv = 1.0 / static_cast<double>(batch_scenes);
      for (const std::string& name : grads.names()) {
        Tensor& g = grads.at(name);
        for (std::size_t i = 0; i < g.size(); ++i) g[i] *= inv;
      }
      adam_update(params, grads, adam, lr);
      epoch_loss_sum += batch_loss;
    }

    double train_loss = epoch_loss_sum / static_cast<double>(order.size());
    double val_loss = evaluate_loss(dataset.validation, params, config, context);

    EpochRecord rec;
    rec.epoch = static_cast<std::uint32_t>(epoch);
    rec.train_loss = train_loss;
    rec.val_loss = val_loss;
    rec.lr = lr;
    checkpoint.history.push_back(rec);

    if (stopper.observe(val_loss)) best_params = params;
    lr *= config.lr_decay;
    if (stopper.should_stop()) break;
  }

  checkpoint.best_epoch = static_cast<std::uint32_t>(stopper.best_epoch());
  checkpoint.params = std::move(best_params);
  return checkpoint;
}

}  // namespace smf
