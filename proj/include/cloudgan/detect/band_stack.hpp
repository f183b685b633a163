#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cloudgan/core/tensor.hpp"
#include "cloudgan/data/raster.hpp"

namespace cloudgan::detect {

/// Multi-band reflectance raster, one plane per named band, values in [0, 1].
struct BandStack {
  Tensor<float> data;  // B x H x W
  std::vector<std::string> band_names;
  std::optional<std::string> timestamp;  // ISO-8601

  int height() const { return data.height(); }
  int width() const { return data.width(); }
  bool has(const std::string& band) const;
  /// Throws ConfigError naming the band when absent.
  std::span<const float> band(const std::string& band) const;
  void validate() const;
};

/// Bands "R", "G", "B" taken from an RGB raster.
BandStack stack_from_rgb(const data::Raster& rgb, std::optional<std::string> timestamp = std::nullopt);

/// On-disk stack: `<dir>/meta.json` {width, height, bands, timestamp} plus one
/// little-endian float32 plane `<dir>/<band>.f32` per band, row-major.
BandStack load_band_stack(const std::filesystem::path& dir);
void save_band_stack(const BandStack& stack, const std::filesystem::path& dir);

}  // namespace cloudgan::detect
