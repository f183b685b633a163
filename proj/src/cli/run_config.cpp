#include "cloudgan/cli/run_config.hpp"

#include <chrono>
#include <ctime>
#include <fstream>

#include "cloudgan/core/json_fields.hpp"
#include "cloudgan/core/sha256.hpp"

namespace cloudgan::cli {
namespace fs = std::filesystem;
using nlohmann::json;

void RunConfig::validate() const {
  if (dataset.train_count < 0 || dataset.val_count < 0 || dataset.pool < 0) {
    throw ConfigError("dataset counts must be non-negative");
  }
  if (dataset.resize < 0) throw ConfigError("dataset.resize must be >= 0");
  if (!(detect.threshold >= 0.0 && detect.threshold <= 1.0)) throw ConfigError("detect.threshold must lie in [0, 1]");
  if (!(detect.delta >= 0.0)) throw ConfigError("detect.delta must be >= 0");
  train.validate();
}

json to_json(const RunConfig& cfg) {
  json j = train::to_json(cfg.train);
  const auto& d = cfg.dataset;
  j["dataset"] = {{"root", d.root},           {"manifest", d.manifest}, {"train_count", d.train_count},
                  {"val_count", d.val_count}, {"pool", d.pool},         {"split_seed", d.split_seed},
                  {"resize", d.resize}};
  j["detect"] = {{"threshold", cfg.detect.threshold}, {"delta", cfg.detect.delta}};
  if (cfg.detect.rules) j["detect"]["rules"] = detect::rules_to_json(*cfg.detect.rules);
  return j;
}

RunConfig run_config_from_json(const json& j) {
  JsonSection top(j, "config", {"dataset", "generator", "discriminator", "losses", "train", "detect"});
  RunConfig cfg;
  json train_part = json::object();
  for (const char* key : {"generator", "discriminator", "losses", "train"}) {
    if (j.contains(key)) train_part[key] = j.at(key);
  }
  cfg.train = train::train_config_from_json(train_part);
  if (top.has("dataset")) {
    JsonSection s(j.at("dataset"), "dataset",
                  {"root", "manifest", "train_count", "val_count", "pool", "split_seed", "resize"});
    s.read("root", cfg.dataset.root);
    s.read("manifest", cfg.dataset.manifest);
    s.read("train_count", cfg.dataset.train_count);
    s.read("val_count", cfg.dataset.val_count);
    s.read("pool", cfg.dataset.pool);
    s.read("split_seed", cfg.dataset.split_seed);
    s.read("resize", cfg.dataset.resize);
  }
  if (top.has("detect")) {
    JsonSection s(j.at("detect"), "detect", {"threshold", "delta", "rules"});
    s.read("threshold", cfg.detect.threshold);
    s.read("delta", cfg.detect.delta);
    if (s.has("rules")) cfg.detect.rules = detect::rules_from_json(s.at("rules"));
  }
  cfg.validate();
  return cfg;
}

RunConfig load_run_config(const fs::path& path) {
  if (path.empty()) return RunConfig{};
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return run_config_from_json(j);
}

std::string run_config_hash(const RunConfig& cfg) { return sha256_hex(to_json(cfg).dump()); }

void apply_seed(RunConfig& cfg, std::uint64_t seed) {
  cfg.train.seed = seed;
  cfg.dataset.split_seed = seed;
}

data::DatasetManifest resolve_manifest(const RunConfig& cfg, const std::optional<fs::path>& override_path) {
  if (override_path) return data::load_manifest(*override_path);
  if (!cfg.dataset.manifest.empty()) return data::load_manifest(cfg.dataset.manifest);
  if (cfg.dataset.root.empty()) throw ConfigError("no dataset: set dataset.root or dataset.manifest, or pass --manifest");
  const data::DatasetManifest m = data::build_manifest(cfg.dataset.root);
  data::SplitSpec spec;
  spec.train_count = cfg.dataset.train_count;
  spec.val_count = cfg.dataset.val_count;
  spec.pool = cfg.dataset.pool;
  spec.seed = cfg.dataset.split_seed;
  return data::split_manifest(m, spec);
}

data::Raster maybe_resize(const RunConfig& cfg, const data::Raster& r) {
  const int side = cfg.dataset.resize;
  if (side == 0 || (r.height() == side && r.width() == side)) return r;
  return data::resize_raster(r, side, side);
}

std::vector<data::ImagePair> load_split(const RunConfig& cfg, const data::DatasetManifest& m, data::SplitRole role) {
  std::vector<data::ImagePair> pairs = data::load_pairs(m, role);
  for (auto& p : pairs) {
    p.cloudy = maybe_resize(cfg, p.cloudy);
    p.clean = maybe_resize(cfg, p.clean);
  }
  return pairs;
}

fs::path make_run_dir(const fs::path& out, const std::string& hash) {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y%m%dT%H%M%SZ", &tm);
  const std::string base = std::string(stamp) + "-" + hash.substr(0, 8);
  fs::path dir = out / base;
  for (int k = 1; fs::exists(dir); ++k) dir = out / (base + "-" + std::to_string(k));
  std::error_code ec;
  for (const char* sub : {"checkpoints", "logs", "reports", "plots", "samples"}) {
    fs::create_directories(dir / sub, ec);
    if (ec) throw IoError("cannot create run directory " + (dir / sub).string() + ": " + ec.message());
  }
  return dir;
}

}  // namespace cloudgan::cli
