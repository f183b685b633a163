#include "cloudgan/detect/band_stack.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <set>

#include <nlohmann/json.hpp>

namespace cloudgan::detect {
namespace fs = std::filesystem;
using nlohmann::json;

static_assert(std::endian::native == std::endian::little, "band planes are stored little-endian");

bool BandStack::has(const std::string& name) const {
  return std::find(band_names.begin(), band_names.end(), name) != band_names.end();
}

std::span<const float> BandStack::band(const std::string& name) const {
  const auto it = std::find(band_names.begin(), band_names.end(), name);
  if (it == band_names.end()) throw ConfigError("band '" + name + "' is not in the stack");
  return data.channel(static_cast<int>(it - band_names.begin()));
}

void BandStack::validate() const {
  if (band_names.empty()) throw ShapeError("band stack needs at least one band");
  if (static_cast<int>(band_names.size()) != data.channels()) {
    throw ShapeError("band stack has " + std::to_string(data.channels()) + " planes but " +
                     std::to_string(band_names.size()) + " names");
  }
  if (std::set<std::string>(band_names.begin(), band_names.end()).size() != band_names.size()) {
    throw ConfigError("band names must be unique");
  }
  for (float v : data.storage()) {
    if (!std::isfinite(v) || v < 0.0f || v > 1.0f) throw NumericError("band value outside [0, 1]");
  }
}

BandStack stack_from_rgb(const data::Raster& rgb, std::optional<std::string> timestamp) {
  if (rgb.channels() < 3) throw ShapeError("RGB detection needs at least 3 channels");
  return {rgb.tensor().slice_channels(0, 3), {"R", "G", "B"}, std::move(timestamp)};
}

BandStack load_band_stack(const fs::path& dir) {
  std::ifstream meta_in(dir / "meta.json");
  if (!meta_in) throw DataError("missing " + (dir / "meta.json").string());
  BandStack stack;
  try {
    json meta;
    meta_in >> meta;
    const int width = meta.at("width").get<int>();
    const int height = meta.at("height").get<int>();
    stack.band_names = meta.at("bands").get<std::vector<std::string>>();
    if (meta.contains("timestamp") && !meta.at("timestamp").is_null()) {
      stack.timestamp = meta.at("timestamp").get<std::string>();
    }
    if (width < 1 || height < 1) throw DataError("band stack " + dir.string() + " has an empty extent");
    stack.data = Tensor<float>(static_cast<int>(stack.band_names.size()), height, width);
  } catch (const json::exception& e) {
    throw DataError("malformed " + (dir / "meta.json").string() + ": " + e.what());
  }

  for (std::size_t b = 0; b < stack.band_names.size(); ++b) {
    const fs::path plane = dir / (stack.band_names[b] + ".f32");
    std::ifstream in(plane, std::ios::binary);
    if (!in) throw DataError("missing band plane " + plane.string());
    auto dst = stack.data.channel(static_cast<int>(b));
    const auto bytes = static_cast<std::streamsize>(dst.size() * sizeof(float));
    if (fs::file_size(plane) != static_cast<std::uintmax_t>(bytes) ||
        !in.read(reinterpret_cast<char*>(dst.data()), bytes)) {
      throw DataError("band plane " + plane.string() + " does not match the declared extent");
    }
  }
  stack.validate();
  return stack;
}

void save_band_stack(const BandStack& stack, const fs::path& dir) {
  stack.validate();
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string());
  json meta{{"width", stack.width()},
            {"height", stack.height()},
            {"bands", stack.band_names},
            {"timestamp", stack.timestamp ? json(*stack.timestamp) : json(nullptr)}};
  std::ofstream out(dir / "meta.json");
  if (!out) throw IoError("cannot write " + (dir / "meta.json").string());
  out << meta.dump(2) << '\n';
  for (std::size_t b = 0; b < stack.band_names.size(); ++b) {
    const auto plane = stack.data.channel(static_cast<int>(b));
    std::ofstream f(dir / (stack.band_names[b] + ".f32"), std::ios::binary);
    f.write(reinterpret_cast<const char*>(plane.data()), static_cast<std::streamsize>(plane.size() * sizeof(float)));
    if (!f) throw IoError("cannot write band plane " + stack.band_names[b]);
  }
}

}  // namespace cloudgan::detect
