#pragma once

#include <cstdint>
#include <filesystem>

#include "cloudgan/data/dataset.hpp"

namespace cloudgan::data {

/// Knobs for procedurally generated cloudy/clean pairs.
struct SyntheticOptions {
  int size = 512;
  int min_blobs = 3;
  int max_blobs = 7;
  /// Peak cloud opacity; below 1 the ground stays partially visible.
  double max_opacity = 0.75;
  /// Cloud radius range as a fraction of the image side.
  double min_radius = 0.08;
  double max_radius = 0.22;
};

struct SyntheticScene {
  ImagePair pair;
  Tensor<float> cloud_alpha;  // 1 x H x W blend weight of the cloud layer
};

/// Earth-toned terrain (value noise over a vegetation/soil/water palette)
/// under a white cloud layer: cloudy = clean * (1 - alpha) + alpha * cloud_tone.
SyntheticScene synthesize_scene(std::uint64_t seed, const SyntheticOptions& opts = {});

/// Writes `count` pairs as `<root>/cloud/<id>.png` and `<root>/label/<id>.png`
/// with ids "00000", "00001", ...
void write_synthetic_dataset(const std::filesystem::path& root, int count, std::uint64_t seed,
                             const SyntheticOptions& opts = {});

}  // namespace cloudgan::data
