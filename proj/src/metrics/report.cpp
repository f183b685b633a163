#include "cloudgan/metrics/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "cloudgan/metrics/quality.hpp"

namespace cloudgan::metrics {
using nlohmann::json;

namespace {

double parse_metric(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  try {
    return std::stod(text);
  } catch (const std::exception&) {
    throw ConfigError("malformed metric value '" + text + "'");
  }
}

json metric_json(double v) { return std::isfinite(v) ? json(v) : json(format_metric(v)); }

}  // namespace

void MetricReport::recompute_means() {
  double psnr_sum = 0.0;
  double ssim_sum = 0.0;
  int finite = 0;
  infinite_psnr = 0;
  for (const auto& row : per_image) {
    ssim_sum += row.ssim;
    if (std::isinf(row.psnr_db)) {
      ++infinite_psnr;
    } else {
      psnr_sum += row.psnr_db;
      ++finite;
    }
  }
  mean_ssim = per_image.empty() ? 0.0 : ssim_sum / static_cast<double>(per_image.size());
  if (finite > 0) {
    mean_psnr_db = psnr_sum / finite;
  } else {
    mean_psnr_db = per_image.empty() ? 0.0 : std::numeric_limits<double>::infinity();
  }
}

MetricReport evaluate(const Restorer& model, std::span<const data::ImagePair> pairs) {
  if (pairs.empty()) throw DataError("cannot evaluate on an empty split");
  MetricReport report;
  for (const auto& pair : pairs) {
    pair.validate();
    const Tensor<float> output = model(data::to_model_range(pair.cloudy));
    if (!output.all_finite()) {
      report.failures.push_back({pair.id, "non-finite model output"});
      continue;
    }
    const data::Raster restored = data::from_model_range(output);
    report.per_image.push_back({pair.id, psnr(restored, pair.clean), ssim(restored, pair.clean)});
  }
  report.recompute_means();
  return report;
}

MetricReport evaluate(const networks::Generator<float>& generator, std::span<const data::ImagePair> pairs) {
  return evaluate([&](const Tensor<float>& x) { return generator.forward(x).image; }, pairs);
}

MetricReport evaluate_identity(std::span<const data::ImagePair> pairs) {
  if (pairs.empty()) throw DataError("cannot evaluate on an empty split");
  MetricReport report;
  for (const auto& pair : pairs) {
    pair.validate();
    report.per_image.push_back({pair.id, psnr(pair.cloudy, pair.clean), ssim(pair.cloudy, pair.clean)});
  }
  report.recompute_means();
  return report;
}

std::string format_metric(double value, int digits) {
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

void write_report_csv(const MetricReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write report " + path.string());
  out << "id,psnr_db,ssim\n";
  for (const auto& row : report.per_image) {
    out << row.id << ',' << format_metric(row.psnr_db, 10) << ',' << format_metric(row.ssim, 10) << '\n';
  }
  if (!out) throw IoError("cannot write report " + path.string());
}

MetricReport read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("missing report " + path.string());
  std::string line;
  std::getline(in, line);
  if (line != "id,psnr_db,ssim") throw ConfigError("unexpected report header in " + path.string());
  MetricReport report;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string id, p, s;
    if (!std::getline(ss, id, ',') || !std::getline(ss, p, ',') || !std::getline(ss, s)) {
      throw ConfigError("malformed report row '" + line + "'");
    }
    report.per_image.push_back({id, parse_metric(p), parse_metric(s)});
  }
  report.recompute_means();
  return report;
}

json report_summary(const MetricReport& report, const std::string& config_hash) {
  json failures = json::array();
  for (const auto& f : report.failures) failures.push_back({{"id", f.id}, {"reason", f.reason}});
  return {{"mean_psnr_db", metric_json(report.mean_psnr_db)},
          {"mean_ssim", metric_json(report.mean_ssim)},
          {"n", report.per_image.size()},
          {"config_hash", config_hash},
          {"infinite_psnr", report.infinite_psnr},
          {"failures", failures}};
}

void write_report_summary(const MetricReport& report, const std::string& config_hash,
                          const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write summary " + path.string());
  out << report_summary(report, config_hash).dump(2) << '\n';
}

}  // namespace cloudgan::metrics
