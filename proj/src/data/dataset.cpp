#include "cloudgan/data/dataset.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <set>

#include "cloudgan/core/rng.hpp"

namespace cloudgan::data {
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::array<const char*, 5> kExtensions{".png", ".tif", ".tiff", ".jpg", ".jpeg"};

bool supported(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return std::find(kExtensions.begin(), kExtensions.end(), ext) != kExtensions.end();
}

std::set<std::string> stems(const fs::path& dir) {
  std::set<std::string> out;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && supported(entry.path())) out.insert(entry.path().stem().string());
  }
  return out;
}

}  // namespace

void ImagePair::validate() const {
  if (cloudy.shape() != clean.shape()) {
    throw ShapeError("pair " + id + ": cloudy " + cloudy.shape().str() + " vs clean " + clean.shape().str());
  }
}

std::string to_string(SplitRole role) { return role == SplitRole::Train ? "train" : "val"; }

SplitRole parse_split_role(const std::string& text) {
  if (text == "train" || text == "TRAIN") return SplitRole::Train;
  if (text == "val" || text == "VAL") return SplitRole::Val;
  throw ConfigError("unknown split '" + text + "' (expected train or val)");
}

std::vector<std::string> DatasetManifest::ids(SplitRole role) const {
  std::vector<std::string> out;
  for (const auto& id : pair_ids) {
    auto it = split.find(id);
    if (it != split.end() && it->second == role) out.push_back(id);
  }
  return out;
}

DatasetManifest build_manifest(const fs::path& root) {
  const fs::path cloud = root / kCloudDir;
  const fs::path label = root / kLabelDir;
  if (!fs::is_directory(cloud)) throw DataError("missing directory " + cloud.string());
  if (!fs::is_directory(label)) throw DataError("missing directory " + label.string());

  const auto cloudy = stems(cloud);
  const auto clean = stems(label);
  DatasetManifest m;
  m.root = root;
  for (const auto& id : cloudy) {
    if (clean.count(id)) {
      m.pair_ids.push_back(id);
    } else {
      m.warnings.push_back({id, "present in cloud/ but not in label/"});
    }
  }
  for (const auto& id : clean) {
    if (!cloudy.count(id)) m.warnings.push_back({id, "present in label/ but not in cloud/"});
  }
  return m;
}

DatasetManifest split_manifest(const DatasetManifest& m, const SplitSpec& s) {
  if (s.train_count < 0 || s.val_count < 0 || s.pool < 0) throw ConfigError("split counts must be non-negative");
  std::vector<std::string> candidates = m.pair_ids;
  std::sort(candidates.begin(), candidates.end());
  if (s.pool > 0 && static_cast<std::size_t>(s.pool) < candidates.size()) candidates.resize(s.pool);
  const std::size_t wanted = static_cast<std::size_t>(s.train_count) + s.val_count;
  if (wanted > candidates.size()) {
    throw ConfigError("split asks for " + std::to_string(wanted) + " pairs but only " +
                      std::to_string(candidates.size()) + " are available");
  }

  Rng rng(s.seed);
  for (std::size_t i = candidates.size(); i > 1; --i) {
    const std::size_t j = rng.bounded(i);
    std::swap(candidates[i - 1], candidates[j]);
  }

  DatasetManifest out = m;
  out.split.clear();
  for (std::size_t i = 0; i < wanted; ++i) {
    out.split[candidates[i]] = i < static_cast<std::size_t>(s.train_count) ? SplitRole::Train : SplitRole::Val;
  }
  return out;
}

json manifest_to_json(const DatasetManifest& m) {
  json pairs = json::array();
  for (const auto& id : m.pair_ids) {
    auto it = m.split.find(id);
    pairs.push_back({{"id", id}, {"split", it == m.split.end() ? json(nullptr) : json(to_string(it->second))}});
  }
  return {{"root", m.root.string()}, {"pairs", pairs}};
}

DatasetManifest manifest_from_json(const json& j) {
  try {
    DatasetManifest m;
    m.root = j.at("root").get<std::string>();
    std::set<std::string> seen;
    for (const auto& p : j.at("pairs")) {
      const auto id = p.at("id").get<std::string>();
      if (!seen.insert(id).second) throw ConfigError("manifest lists pair '" + id + "' twice");
      m.pair_ids.push_back(id);
      if (p.contains("split") && !p.at("split").is_null()) m.split[id] = parse_split_role(p.at("split").get<std::string>());
    }
    return m;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed manifest: ") + e.what());
  }
}

void save_manifest(const DatasetManifest& m, const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write manifest " + path.string());
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) throw IoError("cannot write manifest " + path.string());
}

DatasetManifest load_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing manifest " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("malformed manifest " + path.string() + ": " + e.what());
  }
  return manifest_from_json(j);
}

fs::path find_image(const fs::path& root, const std::string& sub, const std::string& id) {
  for (const char* ext : kExtensions) {
    fs::path candidate = root / sub / (id + ext);
    if (fs::is_regular_file(candidate)) return candidate;
  }
  throw DataError("no image for pair '" + id + "' in " + (root / sub).string());
}

ImagePair load_pair(const DatasetManifest& m, const std::string& id) {
  ImagePair p{id, load_raster(find_image(m.root, kCloudDir, id)), load_raster(find_image(m.root, kLabelDir, id))};
  p.validate();
  return p;
}

std::vector<ImagePair> load_pairs(const DatasetManifest& m, SplitRole role) {
  std::vector<ImagePair> out;
  for (const auto& id : m.ids(role)) out.push_back(load_pair(m, id));
  return out;
}

ImagePair augment(const ImagePair& p, int crop, std::uint64_t seed, bool allow_flip) {
  p.validate();
  const int h = p.cloudy.height();
  const int w = p.cloudy.width();
  if (crop < 1 || crop > std::min(h, w)) {
    throw ConfigError("crop " + std::to_string(crop) + " does not fit a " + std::to_string(h) + "x" +
                      std::to_string(w) + " image");
  }
  Rng rng(seed);
  const int y0 = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(h - crop + 1)));
  const int x0 = static_cast<int>(rng.bounded(static_cast<std::uint64_t>(w - crop + 1)));
  const bool flip = allow_flip && rng.coin();

  const auto cut = [&](const Raster& src) {
    Raster out(crop, crop, src.channels());
    for (int c = 0; c < src.channels(); ++c) {
      for (int y = 0; y < crop; ++y) {
        for (int x = 0; x < crop; ++x) {
          const int sx = flip ? x0 + crop - 1 - x : x0 + x;
          out.at(y, x, c) = src.at(y0 + y, sx, c);
        }
      }
    }
    return out;
  };
  return {p.id, cut(p.cloudy), cut(p.clean)};
}

}  // namespace cloudgan::data
