#pragma once

#include <cstdint>
#include <string>

#include <nlohmann/json.hpp>

#include "cloudgan/metrics/losses.hpp"
#include "cloudgan/networks/discriminator.hpp"
#include "cloudgan/networks/generator.hpp"

namespace cloudgan::train {

struct TrainConfig {
  int epochs = 100;
  int batch_size = 2;
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double adam_epsilon = 1e-8;
  /// Global gradient-norm clip per network; 0 disables clipping.
  double grad_clip = 0.0;
  /// Training crop side; clamped to the image size when larger.
  int crop = 256;
  bool flip = true;
  std::uint64_t seed = 0;
  metrics::LossWeights weights;
  networks::GeneratorConfig generator;
  networks::DiscriminatorConfig discriminator;

  void validate() const;
};

/// Canonical JSON: {discriminator, generator, losses, train}. nlohmann's
/// default object type sorts keys, so dump() is the sorted, whitespace-free form.
nlohmann::json to_json(const TrainConfig& cfg);

/// Inverse of to_json. Missing keys keep their defaults; unknown keys are rejected.
TrainConfig train_config_from_json(const nlohmann::json& j);

/// SHA-256 of the canonical JSON with train.epochs removed, so extending a
/// run with resume keeps the same identity while any other change does not.
std::string config_hash(const TrainConfig& cfg);

}  // namespace cloudgan::train
