#include "cloudgan/train/plots.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace cloudgan::train {
namespace fs = std::filesystem;

namespace {

struct Series {
  std::string name;
  std::vector<double> values;
};

cv::Mat to_bgr8(const data::Raster& r) {
  cv::Mat out(r.height(), r.width(), CV_8UC3);
  for (int y = 0; y < r.height(); ++y) {
    auto* row = out.ptr<cv::Vec3b>(y);
    for (int x = 0; x < r.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        const float v = r.at(y, x, r.channels() == 1 ? 0 : c);
        row[x][2 - c] = static_cast<std::uint8_t>(std::lround(v * 255.0f));
      }
    }
  }
  return out;
}

data::Raster from_bgr8(const cv::Mat& m) {
  data::Raster r(m.rows, m.cols, 3);
  for (int y = 0; y < m.rows; ++y) {
    const auto* row = m.ptr<cv::Vec3b>(y);
    for (int x = 0; x < m.cols; ++x) {
      for (int c = 0; c < 3; ++c) r.at(y, x, c) = row[x][2 - c] / 255.0f;
    }
  }
  return r;
}

void write_png(const cv::Mat& img, const fs::path& path) {
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img);
  } catch (const cv::Exception&) {
    ok = false;
  }
  if (!ok) throw IoError("cannot write plot " + path.string());
}

std::string label_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

// One line chart per series, stacked vertically.
cv::Mat chart(const std::vector<int>& epochs, const std::vector<Series>& series) {
  constexpr int kWidth = 640;
  constexpr int kPanel = 200;
  constexpr int kLeft = 70;
  constexpr int kRight = 20;
  constexpr int kTop = 28;
  constexpr int kBottom = 30;
  cv::Mat img(kPanel * static_cast<int>(series.size()), kWidth, CV_8UC3, cv::Scalar(255, 255, 255));
  const cv::Scalar axis(60, 60, 60);
  const cv::Scalar line(180, 90, 20);

  const int first = epochs.front();
  const int last = epochs.back();
  for (std::size_t s = 0; s < series.size(); ++s) {
    const int y0 = static_cast<int>(s) * kPanel;
    const cv::Rect area(kLeft, y0 + kTop, kWidth - kLeft - kRight, kPanel - kTop - kBottom);
    std::vector<double> finite;
    for (double v : series[s].values) {
      if (std::isfinite(v)) finite.push_back(v);
    }
    double lo = finite.empty() ? 0.0 : *std::min_element(finite.begin(), finite.end());
    double hi = finite.empty() ? 1.0 : *std::max_element(finite.begin(), finite.end());
    if (hi - lo < 1e-12) {
      lo -= 0.5;
      hi += 0.5;
    }

    cv::rectangle(img, area, axis, 1);
    cv::putText(img, series[s].name, {kLeft, y0 + 20}, cv::FONT_HERSHEY_SIMPLEX, 0.55, axis, 1, cv::LINE_AA);
    cv::putText(img, label_number(hi), {4, area.y + 10}, cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1, cv::LINE_AA);
    cv::putText(img, label_number(lo), {4, area.y + area.height}, cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1,
                cv::LINE_AA);
    cv::putText(img, "epoch " + std::to_string(first), {area.x, area.y + area.height + 20},
                cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1, cv::LINE_AA);
    cv::putText(img, std::to_string(last), {area.x + area.width - 30, area.y + area.height + 20},
                cv::FONT_HERSHEY_SIMPLEX, 0.4, axis, 1, cv::LINE_AA);

    std::vector<cv::Point> points;
    for (std::size_t i = 0; i < epochs.size(); ++i) {
      const double v = series[s].values[i];
      if (!std::isfinite(v)) continue;
      const double tx = last == first ? 0.5 : static_cast<double>(epochs[i] - first) / (last - first);
      const double ty = (v - lo) / (hi - lo);
      points.emplace_back(area.x + static_cast<int>(tx * area.width),
                          area.y + area.height - static_cast<int>(ty * area.height));
    }
    if (points.size() > 1) cv::polylines(img, points, false, line, 2, cv::LINE_AA);
    for (const auto& p : points) cv::circle(img, p, 3, line, cv::FILLED, cv::LINE_AA);
  }
  return img;
}

}  // namespace

data::Raster make_triptych(const data::Raster& cloudy, const data::Raster& generated, const data::Raster& clean) {
  if (cloudy.shape() != generated.shape() || cloudy.shape() != clean.shape()) {
    throw ShapeError("triptych panels must share one shape");
  }
  const int w = cloudy.width();
  data::Raster out(cloudy.height(), 3 * w, cloudy.channels());
  const data::Raster* panels[] = {&cloudy, &generated, &clean};
  for (int p = 0; p < 3; ++p) {
    for (int c = 0; c < cloudy.channels(); ++c) {
      for (int y = 0; y < cloudy.height(); ++y) {
        for (int x = 0; x < w; ++x) out.at(y, p * w + x, c) = panels[p]->at(y, x, c);
      }
    }
  }
  return out;
}

data::Raster attention_overlay(const data::Raster& image, const data::Raster& attention) {
  if (attention.channels() != 1 || attention.height() != image.height() || attention.width() != image.width()) {
    throw ShapeError("attention overlay: map " + attention.shape().str() + " vs image " + image.shape().str());
  }
  cv::Mat gray(attention.height(), attention.width(), CV_8UC1);
  for (int y = 0; y < attention.height(); ++y) {
    for (int x = 0; x < attention.width(); ++x) {
      gray.at<std::uint8_t>(y, x) = static_cast<std::uint8_t>(std::lround(attention.at(y, x, 0) * 255.0f));
    }
  }
  cv::Mat heat;
  cv::applyColorMap(gray, heat, cv::COLORMAP_JET);
  cv::Mat blended;
  cv::addWeighted(to_bgr8(image), 0.5, heat, 0.5, 0.0, blended);
  return from_bgr8(blended);
}

std::vector<fs::path> emit_plots(const TrainLog& log, std::span<const PlotSample> samples, const fs::path& out_dir,
                                 const std::string& tag) {
  if (log.empty()) throw ConfigError("cannot plot an empty training log");
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) throw IoError("cannot create plot directory " + out_dir.string());

  std::vector<int> epochs;
  std::vector<Series> losses{{"generator adversarial", {}}, {"discriminator adversarial", {}},
                             {"L1 (model range)", {}},      {"attention", {}}};
  std::vector<Series> quality{{"validation PSNR (dB)", {}}, {"validation SSIM", {}}};
  for (const auto& row : log) {
    epochs.push_back(row.epoch);
    losses[0].values.push_back(row.g_adv);
    losses[1].values.push_back(row.d_adv);
    losses[2].values.push_back(row.l1);
    losses[3].values.push_back(row.att);
    quality[0].values.push_back(row.val_psnr);
    quality[1].values.push_back(row.val_ssim);
  }

  std::vector<fs::path> files;
  files.push_back(out_dir / ("loss_curves_" + tag + ".png"));
  write_png(chart(epochs, losses), files.back());
  files.push_back(out_dir / ("val_metrics_" + tag + ".png"));
  write_png(chart(epochs, quality), files.back());

  for (const auto& s : samples) {
    files.push_back(out_dir / ("triptych_" + s.id + "_" + tag + ".png"));
    data::save_raster(make_triptych(s.cloudy, s.generated, s.clean), files.back());
    for (std::size_t k = 0; k < s.attention_maps.size(); ++k) {
      files.push_back(out_dir / ("attention_" + s.id + "_" + std::to_string(k) + "_" + tag + ".png"));
      data::save_raster(attention_overlay(s.cloudy, s.attention_maps[k]), files.back());
    }
  }
  return files;
}

}  // namespace cloudgan::train
