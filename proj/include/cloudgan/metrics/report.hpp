#pragma once

#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "cloudgan/data/dataset.hpp"
#include "cloudgan/networks/generator.hpp"

namespace cloudgan::metrics {

struct ImageMetrics {
  std::string id;
  double psnr_db = 0.0;
  double ssim = 0.0;
};

struct EvaluationFailure {
  std::string id;
  std::string reason;
};

/// Per-image and aggregate quality of a model on one split.
///
/// mean_ssim averages every row. mean_psnr_db averages the finite rows; rows
/// with an infinite PSNR (exact reconstructions) are counted in
/// infinite_psnr instead. Failed images (non-finite output) are listed apart.
struct MetricReport {
  std::vector<ImageMetrics> per_image;
  std::vector<EvaluationFailure> failures;
  double mean_psnr_db = 0.0;
  double mean_ssim = 0.0;
  int infinite_psnr = 0;

  void recompute_means();
};

/// Maps a model-range image to a model-range image.
using Restorer = std::function<Tensor<float>(const Tensor<float>&)>;

/// Full-resolution evaluation in pair order (the means are reduced in that order).
MetricReport evaluate(const Restorer& model, std::span<const data::ImagePair> pairs);
MetricReport evaluate(const networks::Generator<float>& generator, std::span<const data::ImagePair> pairs);

/// The cloudy input passed through unchanged (the identity restorer).
MetricReport evaluate_identity(std::span<const data::ImagePair> pairs);

/// "inf" for infinities, otherwise fixed with `digits` decimals.
std::string format_metric(double value, int digits = 6);

/// CSV with header id,psnr_db,ssim.
void write_report_csv(const MetricReport& report, const std::filesystem::path& path);
MetricReport read_report_csv(const std::filesystem::path& path);

/// {mean_psnr_db, mean_ssim, n, config_hash, infinite_psnr, failures}.
nlohmann::json report_summary(const MetricReport& report, const std::string& config_hash);
void write_report_summary(const MetricReport& report, const std::string& config_hash,
                          const std::filesystem::path& path);

}  // namespace cloudgan::metrics
