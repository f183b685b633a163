#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cloudgan/data/raster.hpp"
#include "cloudgan/train/trainer.hpp"

namespace cloudgan::train {

struct PlotSample {
  std::string id;
  data::Raster cloudy;
  data::Raster generated;
  data::Raster clean;
  std::vector<data::Raster> attention_maps;
};

/// cloudy | generated | ground truth, side by side with no gutter.
data::Raster make_triptych(const data::Raster& cloudy, const data::Raster& generated, const data::Raster& clean);

/// Jet-coloured attention map blended 50/50 over an RGB image.
data::Raster attention_overlay(const data::Raster& image, const data::Raster& attention);

/// Writes loss_curves_<tag>.png, val_metrics_<tag>.png, one
/// triptych_<id>_<tag>.png per sample and attention_<id>_<k>_<tag>.png per map.
std::vector<std::filesystem::path> emit_plots(const TrainLog& log, std::span<const PlotSample> samples,
                                              const std::filesystem::path& out_dir, const std::string& tag);

}  // namespace cloudgan::train
