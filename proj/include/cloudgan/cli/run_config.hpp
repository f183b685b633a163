#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudgan/data/dataset.hpp"
#include "cloudgan/detect/detector.hpp"
#include "cloudgan/train/config.hpp"

namespace cloudgan::cli {

struct DatasetSection {
  std::string root;       // dataset root with cloud/ and label/
  std::string manifest;   // pre-split manifest; takes precedence over root
  int train_count = 320;
  int val_count = 80;
  int pool = 400;
  std::uint64_t split_seed = 0;
  /// Square side every loaded image is area-resized to; 0 keeps the native size.
  int resize = 0;
};

struct DetectSection {
  double threshold = detect::kDefaultThreshold;
  double delta = detect::kDefaultDelta;
  /// Absent: the default rules when the stack carries their bands, else RGB only.
  std::optional<std::vector<detect::BandRule>> rules;
};

/// The JSON run configuration {dataset, generator, discriminator, losses, train, detect}.
struct RunConfig {
  DatasetSection dataset;
  train::TrainConfig train;
  DetectSection detect;

  void validate() const;
};

nlohmann::json to_json(const RunConfig& cfg);
/// Strict: unknown keys anywhere are a ConfigError.
RunConfig run_config_from_json(const nlohmann::json& j);
/// Defaults when path is empty.
RunConfig load_run_config(const std::filesystem::path& path);
/// SHA-256 of the sorted-key, whitespace-free JSON.
std::string run_config_hash(const RunConfig& cfg);

/// --seed drives both the training streams and the split shuffle.
void apply_seed(RunConfig& cfg, std::uint64_t seed);

/// Manifest named in the config, or a fresh split of dataset.root.
data::DatasetManifest resolve_manifest(const RunConfig& cfg, const std::optional<std::filesystem::path>& override_path);
/// Pairs of one split, resized when dataset.resize is set.
std::vector<data::ImagePair> load_split(const RunConfig& cfg, const data::DatasetManifest& m, data::SplitRole role);
data::Raster maybe_resize(const RunConfig& cfg, const data::Raster& r);

/// `<out>/<UTC timestamp>-<hash8>/{checkpoints,logs,reports,plots,samples}`;
/// a numeric suffix keeps concurrent runs apart.
std::filesystem::path make_run_dir(const std::filesystem::path& out, const std::string& hash);

}  // namespace cloudgan::cli
