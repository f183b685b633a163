#include "cloudgan/train/config.hpp"

#include "cloudgan/core/json_fields.hpp"
#include "cloudgan/core/sha256.hpp"

namespace cloudgan::train {
using nlohmann::json;

void TrainConfig::validate() const {
  if (epochs < 1) throw ConfigError("train.epochs must be >= 1");
  if (batch_size < 1) throw ConfigError("train.batch_size must be >= 1");
  if (!(lr > 0.0)) throw ConfigError("train.lr must be > 0");
  if (!(beta1 >= 0.0 && beta1 < 1.0) || !(beta2 >= 0.0 && beta2 < 1.0)) {
    throw ConfigError("train.beta1/beta2 must lie in [0, 1)");
  }
  if (!(adam_epsilon > 0.0)) throw ConfigError("train.adam_epsilon must be > 0");
  if (!(grad_clip >= 0.0)) throw ConfigError("train.grad_clip must be >= 0");
  if (crop < 1) throw ConfigError("train.crop must be >= 1");
  weights.validate();
  generator.validate();
  discriminator.validate();
}

json to_json(const TrainConfig& cfg) {
  json j;
  j["generator"] = {{"variant", networks::to_string(cfg.generator.variant)},
                    {"mode", attention::to_string(cfg.generator.mode)},
                    {"base_channels", cfg.generator.base_channels},
                    {"sarbs_per_stage", cfg.generator.sarbs_per_stage},
                    {"stages", cfg.generator.stage_count()}};
  j["discriminator"] = {{"layers", cfg.discriminator.layers}, {"base_channels", cfg.discriminator.base_channels}};
  j["losses"] = {{"lambda_l1", cfg.weights.lambda_l1},
                 {"lambda_att", cfg.weights.lambda_att},
                 {"attention_tau", cfg.weights.attention_tau},
                 {"adversarial", "least_squares"}};
  j["train"] = {{"epochs", cfg.epochs},   {"batch_size", cfg.batch_size},
                {"lr", cfg.lr},           {"beta1", cfg.beta1},
                {"beta2", cfg.beta2},     {"adam_epsilon", cfg.adam_epsilon},
                {"grad_clip", cfg.grad_clip}, {"crop", cfg.crop},
                {"flip", cfg.flip},       {"seed", cfg.seed}};
  return j;
}

TrainConfig train_config_from_json(const json& j) {
  TrainConfig cfg;
  const JsonSection root(j, "config", {"generator", "discriminator", "losses", "train"});

  if (root.has("generator")) {
    const JsonSection g(root.at("generator"), "generator",
                        {"variant", "mode", "base_channels", "sarbs_per_stage", "stages"});
    std::string variant = networks::to_string(cfg.generator.variant);
    std::string mode = attention::to_string(cfg.generator.mode);
    g.read("variant", variant);
    g.read("mode", mode);
    cfg.generator.variant = networks::parse_generator_variant(variant);
    cfg.generator.mode = attention::parse_neighborhood_mode(mode);
    if (cfg.generator.variant == networks::GeneratorVariant::Dual) {
      cfg.generator.sarbs_per_stage = networks::GeneratorConfig::kDualSarbsPerStage;
      cfg.generator.stages = networks::GeneratorConfig::kDualStages;
    }
    g.read("base_channels", cfg.generator.base_channels);
    g.read("sarbs_per_stage", cfg.generator.sarbs_per_stage);
    g.read("stages", cfg.generator.stages);
    if (cfg.generator.variant == networks::GeneratorVariant::Dual &&
        cfg.generator.stages != networks::GeneratorConfig::kDualStages) {
      throw ConfigError("generator.stages is fixed to 2 for the DUAL variant");
    }
  }
  if (root.has("discriminator")) {
    const JsonSection d(root.at("discriminator"), "discriminator", {"layers", "base_channels"});
    d.read("layers", cfg.discriminator.layers);
    d.read("base_channels", cfg.discriminator.base_channels);
  }
  if (root.has("losses")) {
    const JsonSection l(root.at("losses"), "losses", {"lambda_l1", "lambda_att", "attention_tau", "adversarial"});
    l.read("lambda_l1", cfg.weights.lambda_l1);
    l.read("lambda_att", cfg.weights.lambda_att);
    l.read("attention_tau", cfg.weights.attention_tau);
    std::string adversarial = "least_squares";
    l.read("adversarial", adversarial);
    if (adversarial != "least_squares") throw ConfigError("losses.adversarial supports only 'least_squares'");
  }
  if (root.has("train")) {
    const JsonSection t(root.at("train"), "train",
                        {"epochs", "batch_size", "lr", "beta1", "beta2", "adam_epsilon", "grad_clip", "crop", "flip",
                         "seed"});
    t.read("epochs", cfg.epochs);
    t.read("batch_size", cfg.batch_size);
    t.read("lr", cfg.lr);
    t.read("beta1", cfg.beta1);
    t.read("beta2", cfg.beta2);
    t.read("adam_epsilon", cfg.adam_epsilon);
    t.read("grad_clip", cfg.grad_clip);
    t.read("crop", cfg.crop);
    t.read("flip", cfg.flip);
    t.read("seed", cfg.seed);
  }
  cfg.validate();
  return cfg;
}

std::string config_hash(const TrainConfig& cfg) {
  json j = to_json(cfg);
  j["train"].erase("epochs");
  return sha256_hex(j.dump());
}

}  // namespace cloudgan::train
