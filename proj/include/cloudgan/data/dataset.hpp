#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudgan/data/raster.hpp"

namespace cloudgan::data {

/// Aligned cloudy/clean images of one scene.
struct ImagePair {
  std::string id;
  Raster cloudy;
  Raster clean;

  /// Throws ShapeError if the two rasters differ in shape.
  void validate() const;
};

enum class SplitRole { Train, Val };

std::string to_string(SplitRole role);
SplitRole parse_split_role(const std::string& text);

struct ManifestWarning {
  std::string id;
  std::string message;
};

/// Pairs found under `root/cloud/<id>.<ext>` and `root/label/<id>.<ext>`.
struct DatasetManifest {
  std::filesystem::path root;
  std::vector<std::string> pair_ids;         // sorted, unique
  std::map<std::string, SplitRole> split;    // assigned ids only
  std::vector<ManifestWarning> warnings;     // unmatched stems

  std::vector<std::string> ids(SplitRole role) const;  // in pair_ids order
};

struct SplitSpec {
  int train_count = 320;
  int val_count = 80;
  std::uint64_t seed = 0;
  /// Leading sorted ids considered before shuffling; 0 means all.
  int pool = 400;
};

inline const char* kCloudDir = "cloud";
inline const char* kLabelDir = "label";

/// Scans root; stems present in only one subdirectory are skipped with a warning.
DatasetManifest build_manifest(const std::filesystem::path& root);

/// Fisher-Yates shuffle of the first `pool` ids driven by Rng(seed): for
/// i = n-1 down to 1, swap i with bounded(i + 1). The first train_count ids
/// become TRAIN, the next val_count VAL, the rest stay unassigned.
DatasetManifest split_manifest(const DatasetManifest& m, const SplitSpec& s);

/// {root, pairs: [{id, split}]}; split is "train", "val" or null.
nlohmann::json manifest_to_json(const DatasetManifest& m);
DatasetManifest manifest_from_json(const nlohmann::json& j);
void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
DatasetManifest load_manifest(const std::filesystem::path& path);

/// Path of `<root>/<sub>/<id>.<ext>` for the first supported extension found.
std::filesystem::path find_image(const std::filesystem::path& root, const std::string& sub, const std::string& id);

ImagePair load_pair(const DatasetManifest& m, const std::string& id);
std::vector<ImagePair> load_pairs(const DatasetManifest& m, SplitRole role);

/// Same random crop window and horizontal flip applied to both images.
/// The window origin and flip come from Rng(seed): y0 = bounded(H - crop + 1),
/// x0 = bounded(W - crop + 1), flip = allow_flip && coin().
ImagePair augment(const ImagePair& p, int crop, std::uint64_t seed, bool allow_flip = true);

}  // namespace cloudgan::data
