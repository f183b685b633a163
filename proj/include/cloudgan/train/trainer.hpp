#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "cloudgan/data/dataset.hpp"
#include "cloudgan/metrics/report.hpp"
#include "cloudgan/networks/discriminator.hpp"
#include "cloudgan/networks/generator.hpp"
#include "cloudgan/train/adam.hpp"
#include "cloudgan/train/checkpoint.hpp"
#include "cloudgan/train/config.hpp"

namespace cloudgan::train {

struct TrainLogRow {
  int epoch = 0;
  double g_adv = 0.0;
  double d_adv = 0.0;
  double l1 = 0.0;   // model range [-1, 1]
  double att = 0.0;
  double val_psnr = 0.0;
  double val_ssim = 0.0;
  double wall_seconds = 0.0;
};

using TrainLog = std::vector<TrainLogRow>;

/// CSV: epoch,g_adv,d_adv,l1,att,val_psnr,val_ssim,wall_seconds
void write_train_log_csv(const TrainLog& log, const std::filesystem::path& path, bool append = false);
TrainLog read_train_log_csv(const std::filesystem::path& path);

struct StepLosses {
  double g_adv = 0.0;
  double d_adv = 0.0;
  double l1 = 0.0;
  double att = 0.0;
  bool finite() const;
};

/// In-process observation points.
struct TrainHooks {
  /// Called after each step's losses are computed, before the finite check.
  std::function<void(int epoch, int step, StepLosses&)> on_step;
  std::function<void(const TrainLogRow&)> on_epoch;
};

struct TrainResult {
  Checkpoint checkpoint;
  TrainLog log;
};

/// Adversarial trainer with a 1:1 discriminator/generator update ratio.
///
/// Each step: generator forward on the batch; one discriminator Adam step on
/// the least-squares loss; one generator Adam step on
/// g_adv + lambda_l1 * L1 + lambda_att * attention loss, with g_adv scored by
/// the freshly updated discriminator. Sample order and crops for epoch e are
/// drawn from streams keyed by (seed, e), so a resumed run replays the same data.
class Trainer {
 public:
  Trainer(TrainConfig cfg, std::vector<data::ImagePair> train, std::vector<data::ImagePair> val);
  Trainer(const Trainer&) = delete;
  Trainer& operator=(const Trainer&) = delete;

  /// Fresh parameters derived from cfg.seed.
  void initialize();
  /// Parameters, optimizer moments and epoch from a checkpoint with a matching hash.
  void restore(const Checkpoint& ckpt);

  /// Trains epochs completed_epochs()+1 .. cfg.epochs. With a checkpoint_dir,
  /// writes `last.ckpt` before the first epoch of a fresh run and after every
  /// epoch. A non-finite loss writes `abort.json` there and throws
  /// NumericError; the previous `last.ckpt` stays untouched.
  TrainResult run(const std::optional<std::filesystem::path>& checkpoint_dir = std::nullopt,
                  const TrainHooks& hooks = {});

  Checkpoint snapshot();

  int completed_epochs() const { return epoch_; }
  const std::string& hash() const { return hash_; }
  const TrainConfig& config() const { return cfg_; }
  networks::Generator<float>& generator() { return generator_; }
  networks::Discriminator<float>& discriminator() { return discriminator_; }

 private:
  StepLosses step(const std::vector<data::ImagePair>& batch);

  TrainConfig cfg_;
  std::string hash_;
  std::vector<data::ImagePair> train_;
  std::vector<data::ImagePair> val_;
  networks::Generator<float> generator_;
  networks::Discriminator<float> discriminator_;
  Adam g_opt_;
  Adam d_opt_;
  int epoch_ = 0;
  nlohmann::json last_metrics_ = nlohmann::json::object();
};

TrainResult train(const TrainConfig& cfg, std::vector<data::ImagePair> train_pairs,
                  std::vector<data::ImagePair> val_pairs,
                  const std::optional<std::filesystem::path>& checkpoint_dir = std::nullopt,
                  const TrainHooks& hooks = {});

/// Continues from ckpt up to cfg.epochs. Throws ConfigError when the
/// checkpoint's config_hash differs from config_hash(cfg). A checkpoint that
/// already reached cfg.epochs is returned unchanged with an empty log.
TrainResult resume(const Checkpoint& ckpt, const TrainConfig& cfg, std::vector<data::ImagePair> train_pairs,
                   std::vector<data::ImagePair> val_pairs,
                   const std::optional<std::filesystem::path>& checkpoint_dir = std::nullopt,
                   const TrainHooks& hooks = {});

/// Generator rebuilt from the config and weights stored in a checkpoint.
networks::Generator<float> generator_from_checkpoint(const Checkpoint& ckpt);

/// A checkpoint for an untrained generator; zero_tail makes it the identity.
Checkpoint initial_checkpoint(const TrainConfig& cfg, bool zero_tail);

struct InferenceResult {
  data::Raster image;
  std::vector<data::Raster> attention_maps;  // single-channel, values in (0, 1)
};

/// from_model_range(generator(to_model_range(raster))). Requires 3 channels.
InferenceResult infer(const networks::Generator<float>& generator, const data::Raster& raster);
InferenceResult infer(const Checkpoint& ckpt, const data::Raster& raster);

struct ComparisonRow {
  std::string label;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
  std::size_t n = 0;
};

struct LabeledCheckpoint {
  std::string label;
  Checkpoint checkpoint;
};

inline const char* kBaselineLabel = "Cloudy input (identity)";

/// Baseline row (identity restorer) followed by one row per checkpoint.
std::vector<ComparisonRow> compare(std::span<const LabeledCheckpoint> checkpoints,
                                   std::span<const data::ImagePair> pairs);

/// Markdown table with the columns | | PSNR | SSIM |.
std::string render_comparison(std::span<const ComparisonRow> rows);
void write_comparison_csv(std::span<const ComparisonRow> rows, const std::filesystem::path& path);

}  // namespace cloudgan::train
