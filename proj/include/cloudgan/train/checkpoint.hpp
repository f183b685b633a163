#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudgan/core/param.hpp"

namespace cloudgan::train {

struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> values;
};

/// Model/optimizer snapshot.
///
/// On disk: the 8 magic bytes "CLDGCKP1", a little-endian uint64 header
/// length, a UTF-8 JSON header, then the raw little-endian float32 payloads.
/// The header is {format, epoch, config_hash, config, metrics, optimizer,
/// tensors: [{name, shape, dtype: "float32", offset}]} with byte offsets
/// relative to the start of the payload.
struct Checkpoint {
  int epoch = 0;
  std::string config_hash;
  nlohmann::json config;     // TrainConfig as written by to_json()
  nlohmann::json metrics;    // snapshot, e.g. {val_psnr_db, val_ssim}
  nlohmann::json optimizer;  // step counters
  std::vector<NamedTensor> tensors;

  const NamedTensor* find(const std::string& name) const;
};

/// Writes to `<path>.tmp` and renames, so a crash never leaves a torn file.
void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path);

/// Throws DataError for missing or corrupt files.
Checkpoint load_checkpoint(const std::filesystem::path& path);

/// Appends every parameter as "<prefix><param name>".
void store_params(Checkpoint& ckpt, const std::string& prefix, const ParamRefs<float>& params);
/// Copies stored values back; throws DataError on a missing name or shape mismatch.
void restore_params(const Checkpoint& ckpt, const std::string& prefix, const ParamRefs<float>& params);

}  // namespace cloudgan::train
