#include "cloudgan/data/synthetic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>

#include "cloudgan/core/rng.hpp"

namespace cloudgan::data {
namespace fs = std::filesystem;

namespace {

// Bilinearly interpolated lattice noise with `cells` cells per side, in [0, 1].
std::vector<float> value_noise(Rng& rng, int size, int cells) {
  std::vector<float> lattice(static_cast<std::size_t>(cells + 1) * (cells + 1));
  for (auto& v : lattice) v = static_cast<float>(rng.uniform());
  std::vector<float> out(static_cast<std::size_t>(size) * size);
  for (int y = 0; y < size; ++y) {
    const float fy = static_cast<float>(y) * cells / size;
    const int iy = static_cast<int>(fy);
    float ty = fy - iy;
    ty = ty * ty * (3 - 2 * ty);
    for (int x = 0; x < size; ++x) {
      const float fx = static_cast<float>(x) * cells / size;
      const int ix = static_cast<int>(fx);
      float tx = fx - ix;
      tx = tx * tx * (3 - 2 * tx);
      const auto at = [&](int a, int b) { return lattice[static_cast<std::size_t>(a) * (cells + 1) + b]; };
      const float top = at(iy, ix) * (1 - tx) + at(iy, ix + 1) * tx;
      const float bottom = at(iy + 1, ix) * (1 - tx) + at(iy + 1, ix + 1) * tx;
      out[static_cast<std::size_t>(y) * size + x] = top * (1 - ty) + bottom * ty;
    }
  }
  return out;
}

std::vector<float> fractal_noise(Rng& rng, int size, int base_cells, int octaves) {
  std::vector<float> acc(static_cast<std::size_t>(size) * size, 0.0f);
  float amplitude = 1.0f;
  float total = 0.0f;
  for (int o = 0; o < octaves; ++o) {
    const auto layer = value_noise(rng, size, base_cells << o);
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] += amplitude * layer[i];
    total += amplitude;
    amplitude *= 0.5f;
  }
  for (auto& v : acc) v /= total;
  return acc;
}

float smoothstep(float lo, float hi, float v) {
  const float t = std::clamp((v - lo) / (hi - lo), 0.0f, 1.0f);
  return t * t * (3 - 2 * t);
}

}  // namespace

SyntheticScene synthesize_scene(std::uint64_t seed, const SyntheticOptions& opts) {
  if (opts.size < 8) throw ConfigError("synthetic scenes must be at least 8x8");
  if (opts.min_blobs < 0 || opts.max_blobs < opts.min_blobs) throw ConfigError("invalid synthetic blob range");
  Rng rng(seed);
  const int n = opts.size;

  // Terrain palette: water, vegetation, soil, bare rock.
  constexpr std::array<std::array<float, 3>, 4> palette{{{0.08f, 0.14f, 0.26f},
                                                         {0.16f, 0.32f, 0.14f},
                                                         {0.42f, 0.33f, 0.20f},
                                                         {0.50f, 0.47f, 0.42f}}};
  const auto elevation = fractal_noise(rng, n, 3, 4);
  const auto moisture = fractal_noise(rng, n, 4, 3);
  const auto texture = value_noise(rng, n, std::max(4, n / 6));

  Raster clean(n, n, 3);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * n + x;
      const float e = elevation[i];
      const float land = smoothstep(0.36f, 0.42f, e);
      const float rock = smoothstep(0.62f, 0.72f, e);
      const float wet = moisture[i];
      for (int c = 0; c < 3; ++c) {
        const float ground = palette[1][c] * wet + palette[2][c] * (1 - wet);
        float v = palette[0][c] * (1 - land) + (ground * (1 - rock) + palette[3][c] * rock) * land;
        v += 0.06f * (texture[i] - 0.5f);
        clean.at(y, x, c) = std::clamp(v, 0.0f, 1.0f);
      }
    }
  }

  // Cloud density: Gaussian blobs modulated by fractal noise for ragged edges.
  const auto puff = fractal_noise(rng, n, 4, 4);
  std::vector<float> density(static_cast<std::size_t>(n) * n, 0.0f);
  const int blobs = opts.min_blobs + static_cast<int>(rng.bounded(opts.max_blobs - opts.min_blobs + 1));
  for (int b = 0; b < blobs; ++b) {
    const double cy = rng.uniform(0.0, n);
    const double cx = rng.uniform(0.0, n);
    const double r = rng.uniform(opts.min_radius, opts.max_radius) * n;
    const double stretch = rng.uniform(0.6, 1.6);
    for (int y = 0; y < n; ++y) {
      for (int x = 0; x < n; ++x) {
        const double dy = (y - cy) / r;
        const double dx = (x - cx) / (r * stretch);
        density[static_cast<std::size_t>(y) * n + x] += static_cast<float>(std::exp(-0.5 * (dx * dx + dy * dy) * 2.0));
      }
    }
  }

  Tensor<float> alpha(1, n, n);
  const float tone = static_cast<float>(rng.uniform(0.9, 0.98));
  Raster cloudy(n, n, 3);
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) {
      const std::size_t i = static_cast<std::size_t>(y) * n + x;
      const float d = density[i] * (0.55f + 0.9f * puff[i]);
      const float a = static_cast<float>(opts.max_opacity) * smoothstep(0.25f, 0.85f, d);
      alpha(0, y, x) = a;
      for (int c = 0; c < 3; ++c) {
        cloudy.at(y, x, c) = std::clamp(clean.at(y, x, c) * (1 - a) + a * tone, 0.0f, 1.0f);
      }
    }
  }

  char id[32];
  std::snprintf(id, sizeof id, "%016llx", static_cast<unsigned long long>(seed));
  return {{id, std::move(cloudy), std::move(clean)}, std::move(alpha)};
}

void write_synthetic_dataset(const fs::path& root, int count, std::uint64_t seed, const SyntheticOptions& opts) {
  std::error_code ec;
  fs::create_directories(root / kCloudDir, ec);
  fs::create_directories(root / kLabelDir, ec);
  if (ec) throw IoError("cannot create dataset directories under " + root.string());
  for (int i = 0; i < count; ++i) {
    const auto scene = synthesize_scene(derive_seed(seed, "synthetic", static_cast<std::uint64_t>(i)), opts);
    char id[16];
    std::snprintf(id, sizeof id, "%05d", i);
    save_raster(scene.pair.cloudy, root / kCloudDir / (std::string(id) + ".png"));
    save_raster(scene.pair.clean, root / kLabelDir / (std::string(id) + ".png"));
  }
}

}  // namespace cloudgan::data
