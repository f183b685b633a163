#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudgan/detect/band_stack.hpp"

namespace cloudgan::detect {

struct CloudMask {
  Tensor<float> prob;          // 1 x H x W, in [0, 1]
  Tensor<std::uint8_t> mask;   // 1 x H x W, 1 where prob >= threshold
  double threshold = 0.65;
};

/// One additive term of the multi-band score.
struct BandRule {
  enum class Kind { Boost, Penalty };
  std::string band;
  double threshold = 0.0;
  double weight = 0.0;
  /// Boost adds weight where value >= threshold; Penalty subtracts weight where value < threshold.
  Kind kind = Kind::Boost;
};

/// Cirrus-band boost (B10 >= 0.01, +0.3) and water-darkness penalty (B08 < 0.05, -0.3).
std::vector<BandRule> default_rules();
std::vector<BandRule> rules_from_json(const nlohmann::json& j);
nlohmann::json rules_to_json(std::span<const BandRule> rules);

inline constexpr double kDefaultThreshold = 0.65;
inline constexpr double kDefaultDelta = 0.15;

/// Looks for red/green/blue under the names R,G,B, then red,green,blue, then B04,B03,B02.
std::array<std::string, 3> rgb_band_names(const BandStack& stack);

/// prob = mean(R,G,B) * (1 - (max - min)), clamped to [0, 1].
CloudMask detect_rgb(const BandStack& stack, double threshold = kDefaultThreshold);

/// detect_rgb probability adjusted by every rule, clamped to [0, 1].
CloudMask detect_multiband(const BandStack& stack, std::span<const BandRule> rules,
                           double threshold = kDefaultThreshold);

struct SeriesParams {
  double threshold = kDefaultThreshold;
  double delta = kDefaultDelta;
  std::vector<BandRule> rules;  // empty: RGB heuristic only
};

/// Per-pixel temporal median of brightness over the series; a pixel is cloudy
/// at time t when its single-frame prob >= threshold and its brightness exceeds
/// the median by more than delta. Needs >= 2 co-registered stacks.
std::vector<CloudMask> detect_series(std::span<const BandStack> stacks, const SeriesParams& params = {});

struct Tint {
  float r = 1.0f;
  float g = 0.0f;
  float b = 0.0f;
};

/// Masked pixels become (1 - opacity) * pixel + opacity * tint; others are copied.
data::Raster overlay(const data::Raster& image, const CloudMask& mask, Tint tint = {}, double opacity = 0.5);

struct MaskStats {
  double fraction = 0.0;
};

MaskStats mask_stats(const CloudMask& mask);

/// Intersection over union of two binary masks; 1 when both are empty.
double mask_iou(const Tensor<std::uint8_t>& a, const Tensor<std::uint8_t>& b);

/// The binary mask as an 8-bit style grayscale raster (0 or 1).
data::Raster mask_raster(const CloudMask& mask);

}  // namespace cloudgan::detect
