#include "cloudgan/detect/detector.hpp"

#include <algorithm>
#include <cmath>

#include "cloudgan/core/json_fields.hpp"

namespace cloudgan::detect {
using nlohmann::json;

namespace {

CloudMask threshold_mask(Tensor<float> prob, double threshold) {
  CloudMask out{std::move(prob), Tensor<std::uint8_t>(1, 0, 0), threshold};
  out.mask = Tensor<std::uint8_t>(1, out.prob.height(), out.prob.width());
  for (std::size_t i = 0; i < out.prob.size(); ++i) {
    out.mask.storage()[i] = out.prob.storage()[i] >= threshold ? 1 : 0;
  }
  return out;
}

void check_threshold(double threshold) {
  if (!(threshold >= 0.0 && threshold <= 1.0)) throw ConfigError("detection threshold must lie in [0, 1]");
}

/// Summed smallest first so the result does not depend on the band order.
float mean3(float a, float b, float c) {
  const float lo = std::min({a, b, c});
  const float hi = std::max({a, b, c});
  const float mid = std::max(std::min(a, b), std::min(std::max(a, b), c));
  return (lo + mid + hi) / 3.0f;
}

Tensor<float> rgb_probability(const BandStack& stack) {
  stack.validate();
  const auto names = rgb_band_names(stack);
  const auto r = stack.band(names[0]);
  const auto g = stack.band(names[1]);
  const auto b = stack.band(names[2]);
  Tensor<float> prob(1, stack.height(), stack.width());
  for (std::size_t i = 0; i < prob.size(); ++i) {
    const float brightness = mean3(r[i], g[i], b[i]);
    const float whiteness = 1.0f - (std::max({r[i], g[i], b[i]}) - std::min({r[i], g[i], b[i]}));
    prob.storage()[i] = std::clamp(brightness * whiteness, 0.0f, 1.0f);
  }
  return prob;
}

std::vector<float> brightness(const BandStack& stack) {
  const auto names = rgb_band_names(stack);
  const auto r = stack.band(names[0]);
  const auto g = stack.band(names[1]);
  const auto b = stack.band(names[2]);
  std::vector<float> out(r.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = mean3(r[i], g[i], b[i]);
  return out;
}

}  // namespace

std::vector<BandRule> default_rules() {
  return {{"B10", 0.01, 0.3, BandRule::Kind::Boost}, {"B08", 0.05, 0.3, BandRule::Kind::Penalty}};
}

std::vector<BandRule> rules_from_json(const json& j) {
  if (!j.is_array()) throw ConfigError("detection rules must be a JSON array");
  std::vector<BandRule> rules;
  for (const auto& entry : j) {
    const JsonSection s(entry, "rule", {"band", "threshold", "weight", "kind"});
    if (!s.has("band")) throw ConfigError("detection rule needs a 'band'");
    BandRule rule;
    std::string kind = "boost";
    s.read("band", rule.band);
    s.read("threshold", rule.threshold);
    s.read("weight", rule.weight);
    s.read("kind", kind);
    if (kind == "boost") {
      rule.kind = BandRule::Kind::Boost;
    } else if (kind == "penalty") {
      rule.kind = BandRule::Kind::Penalty;
    } else {
      throw ConfigError("detection rule kind must be 'boost' or 'penalty'");
    }
    if (!(rule.weight >= 0.0)) throw ConfigError("detection rule weight must be >= 0");
    rules.push_back(rule);
  }
  return rules;
}

json rules_to_json(std::span<const BandRule> rules) {
  json out = json::array();
  for (const auto& r : rules) {
    out.push_back({{"band", r.band},
                   {"threshold", r.threshold},
                   {"weight", r.weight},
                   {"kind", r.kind == BandRule::Kind::Boost ? "boost" : "penalty"}});
  }
  return out;
}

std::array<std::string, 3> rgb_band_names(const BandStack& stack) {
  static const std::array<std::array<std::string, 3>, 3> kAliases{
      {{"R", "G", "B"}, {"red", "green", "blue"}, {"B04", "B03", "B02"}}};
  for (const auto& names : kAliases) {
    if (stack.has(names[0]) && stack.has(names[1]) && stack.has(names[2])) return names;
  }
  throw ConfigError("band stack lacks red/green/blue bands (R,G,B or B04,B03,B02)");
}

CloudMask detect_rgb(const BandStack& stack, double threshold) {
  check_threshold(threshold);
  return threshold_mask(rgb_probability(stack), threshold);
}

CloudMask detect_multiband(const BandStack& stack, std::span<const BandRule> rules, double threshold) {
  check_threshold(threshold);
  Tensor<float> prob = rgb_probability(stack);
  if (rules.empty()) return threshold_mask(std::move(prob), threshold);

  std::vector<double> adjust(prob.size(), 0.0);
  for (const auto& rule : rules) {
    const auto plane = stack.band(rule.band);
    for (std::size_t i = 0; i < adjust.size(); ++i) {
      if (rule.kind == BandRule::Kind::Boost && plane[i] >= rule.threshold) adjust[i] += rule.weight;
      if (rule.kind == BandRule::Kind::Penalty && plane[i] < rule.threshold) adjust[i] -= rule.weight;
    }
  }
  for (std::size_t i = 0; i < prob.size(); ++i) {
    prob.storage()[i] = static_cast<float>(std::clamp(prob.storage()[i] + adjust[i], 0.0, 1.0));
  }
  return threshold_mask(std::move(prob), threshold);
}

std::vector<CloudMask> detect_series(std::span<const BandStack> stacks, const SeriesParams& params) {
  if (stacks.size() < 2) throw ConfigError("series detection needs at least 2 frames");
  check_threshold(params.threshold);
  for (const auto& s : stacks) {
    if (s.height() != stacks[0].height() || s.width() != stacks[0].width()) {
      throw ShapeError("series frames are not co-registered (extent mismatch)");
    }
  }

  std::vector<std::vector<float>> bright;
  for (const auto& s : stacks) bright.push_back(brightness(s));
  const std::size_t n = bright[0].size();
  std::vector<float> median(n);
  std::vector<float> column(stacks.size());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t t = 0; t < stacks.size(); ++t) column[t] = bright[t][i];
    std::sort(column.begin(), column.end());
    const std::size_t mid = column.size() / 2;
    median[i] = column.size() % 2 ? column[mid] : 0.5f * (column[mid - 1] + column[mid]);
  }

  std::vector<CloudMask> out;
  for (std::size_t t = 0; t < stacks.size(); ++t) {
    CloudMask m = detect_multiband(stacks[t], params.rules, params.threshold);
    for (std::size_t i = 0; i < n; ++i) {
      if (m.mask.storage()[i] && !(bright[t][i] > median[i] + params.delta)) m.mask.storage()[i] = 0;
    }
    out.push_back(std::move(m));
  }
  return out;
}

data::Raster overlay(const data::Raster& image, const CloudMask& mask, Tint tint, double opacity) {
  if (mask.mask.height() != image.height() || mask.mask.width() != image.width()) {
    throw ShapeError("overlay: mask " + mask.mask.shape().str() + " vs image " + image.shape().str());
  }
  if (!(opacity >= 0.0 && opacity <= 1.0)) throw ConfigError("overlay opacity must lie in [0, 1]");
  data::Raster out = image;
  const float colour[3] = {tint.r, tint.g, tint.b};
  const float a = static_cast<float>(opacity);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      if (!mask.mask(0, y, x)) continue;
      for (int c = 0; c < image.channels(); ++c) {
        const float t = colour[std::min(c, 2)];
        out.at(y, x, c) = std::clamp((1.0f - a) * image.at(y, x, c) + a * t, 0.0f, 1.0f);
      }
    }
  }
  return out;
}

MaskStats mask_stats(const CloudMask& mask) {
  if (mask.mask.empty()) return {};
  std::size_t on = 0;
  for (auto v : mask.mask.storage()) on += v ? 1 : 0;
  return {static_cast<double>(on) / static_cast<double>(mask.mask.size())};
}

double mask_iou(const Tensor<std::uint8_t>& a, const Tensor<std::uint8_t>& b) {
  require_same_shape(a, b, "mask_iou");
  std::size_t inter = 0;
  std::size_t uni = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const bool x = a.storage()[i] != 0;
    const bool y = b.storage()[i] != 0;
    inter += x && y;
    uni += x || y;
  }
  return uni == 0 ? 1.0 : static_cast<double>(inter) / static_cast<double>(uni);
}

data::Raster mask_raster(const CloudMask& mask) {
  data::Raster out(mask.mask.height(), mask.mask.width(), 1);
  for (std::size_t i = 0; i < mask.mask.size(); ++i) {
    out.mutable_tensor().storage()[i] = mask.mask.storage()[i] ? 1.0f : 0.0f;
  }
  return out;
}

}  // namespace cloudgan::detect
