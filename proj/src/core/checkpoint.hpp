#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "core/model.hpp"
#include "core/params.hpp"

namespace smf {

struct EpochRecord {
  std::uint32_t epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;
};

struct Checkpoint {
  ModelConfig config;
  ParamSet params;  // best-validation parameters
  std::vector<EpochRecord> history;
  std::uint32_t best_epoch = 0;

  std::string history_csv() const;
};

// Versioned binary container: magic, format version, canonical-text config
// block, training history, best-epoch marker, then per-parameter records
// (name length, name, rank, shape, little-endian float64 payload). Loading
// validates the parameter inventory against the embedded config.
void save_checkpoint(const Checkpoint& checkpoint, const std::string& path);
Checkpoint load_checkpoint(const std::string& path);

// Canonical single-line JSON encoding of a ModelConfig (used inside the
// checkpoint container and for compatibility checks).
std::string config_to_text(const ModelConfig& config);
ModelConfig config_from_text(const std::string& text);

}  // namespace smf
