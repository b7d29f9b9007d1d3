#pragma once

#include <vector>

#include "core/checkpoint.hpp"
#include "core/model.hpp"
#include "core/scene.hpp"
#include "core/social.hpp"

namespace smf {

// Tracks validation loss across epochs. Training stops once the loss has
// failed to improve for more than `patience` consecutive epochs, so with
// patience 0 the first non-improving epoch ends the run.
class EarlyStopper {
 public:
  explicit EarlyStopper(std::size_t patience) : patience_(patience) {}

  // Returns true when the epoch improved on the best value so far.
  bool observe(double val_loss);
  bool should_stop() const { return failures_ > patience_; }
  std::size_t best_epoch() const { return best_epoch_; }  // 1-based

 private:
  std::size_t patience_;
  std::size_t failures_ = 0;
  std::size_t epoch_ = 0;
  std::size_t best_epoch_ = 0;
  double best_ = 0.0;
  bool has_best_ = false;
};

struct Dataset {
  std::vector<Scene> train;  // sorted by scene_id
  std::vector<Scene> validation;
  std::vector<Scene> test;
};

// Mini-batch Adam on the joint offset loss. Scenes are the batch unit (the
// social feature couples all persons of a scene); gradients are averaged over
// the scenes in a batch, the learning rate is multiplied by lr_decay after
// each epoch and the checkpoint keeps the best-validation parameters.
Checkpoint train(const Dataset& dataset, const ModelConfig& config,
                 const ContextProvider& context);

// Mean eval-mode scene loss over a split.
double evaluate_loss(const std::vector<Scene>& scenes, const ParamSet& params,
                     const ModelConfig& config, const ContextProvider& context);

}  // namespace smf
