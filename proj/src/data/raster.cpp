#include "cloudgan/data/raster.hpp"

#include <algorithm>
#include <cmath>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>

namespace cloudgan::data {
namespace {

// Channel index in OpenCV order for raster channel c (RGB(A) <-> BGR(A)).
int cv_channel(int c, int channels) {
  if ((channels == 3 || channels == 4) && c < 3) return 2 - c;
  return c;
}

}  // namespace

Raster::Raster(int height, int width, int channels, float fill) : pixels_(channels, height, width, fill) {
  validate();
}

Raster Raster::from_tensor(Tensor<float> t) {
  Raster r;
  r.pixels_ = std::move(t);
  r.validate();
  return r;
}

Raster Raster::clamped(Tensor<float> t) {
  for (auto& v : t.storage()) {
    if (!std::isfinite(v)) throw NumericError("raster contains a non-finite value");
    v = std::clamp(v, 0.0f, 1.0f);
  }
  return from_tensor(std::move(t));
}

void Raster::validate() const {
  if (height() < 1 || width() < 1 || channels() < 1) {
    throw ShapeError("raster must be at least 1x1x1, got " + shape().str());
  }
  for (float v : pixels_.storage()) {
    if (!std::isfinite(v)) throw NumericError("raster contains a non-finite value");
    if (v < 0.0f || v > 1.0f) throw NumericError("raster value " + std::to_string(v) + " outside [0, 1]");
  }
}

Raster load_raster(const std::filesystem::path& path) {
  std::error_code ec;
  if (!std::filesystem::is_regular_file(path, ec)) throw DataError("missing raster file: " + path.string());

  cv::Mat img;
  try {
    img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  } catch (const cv::Exception& e) {
    throw DataError("unreadable raster " + path.string() + ": " + e.what());
  }
  if (img.empty()) throw DataError("unreadable or corrupt raster: " + path.string());

  double scale = 0.0;
  switch (img.depth()) {
    case CV_8U:
      scale = 255.0;
      break;
    case CV_16U:
      scale = 65535.0;
      break;
    default:
      throw DataError("unsupported bit depth in " + path.string() + " (expected 8 or 16 bit unsigned)");
  }

  const int channels = img.channels();
  Tensor<float> t(channels, img.rows, img.cols);
  for (int y = 0; y < img.rows; ++y) {
    for (int x = 0; x < img.cols; ++x) {
      for (int c = 0; c < channels; ++c) {
        const int k = cv_channel(c, channels);
        const double raw = img.depth() == CV_8U ? img.ptr<std::uint8_t>(y)[x * channels + k]
                                                : img.ptr<std::uint16_t>(y)[x * channels + k];
        t(c, y, x) = static_cast<float>(raw / scale);
      }
    }
  }
  return Raster::from_tensor(std::move(t));
}

void save_raster(const Raster& r, const std::filesystem::path& path, int bit_depth) {
  if (bit_depth != 8 && bit_depth != 16) throw ConfigError("bit depth must be 8 or 16");
  r.validate();
  const int channels = r.channels();
  const double max_value = bit_depth == 8 ? 255.0 : 65535.0;
  cv::Mat img(r.height(), r.width(), CV_MAKETYPE(bit_depth == 8 ? CV_8U : CV_16U, channels));
  for (int y = 0; y < r.height(); ++y) {
    for (int x = 0; x < r.width(); ++x) {
      for (int c = 0; c < channels; ++c) {
        const int k = cv_channel(c, channels);
        const double q = std::round(static_cast<double>(r.at(y, x, c)) * max_value);
        if (bit_depth == 8) {
          img.ptr<std::uint8_t>(y)[x * channels + k] = static_cast<std::uint8_t>(q);
        } else {
          img.ptr<std::uint16_t>(y)[x * channels + k] = static_cast<std::uint16_t>(q);
        }
      }
    }
  }
  bool ok = false;
  try {
    ok = cv::imwrite(path.string(), img);
  } catch (const cv::Exception& e) {
    throw IoError("cannot write " + path.string() + ": " + e.what());
  }
  if (!ok) throw IoError("cannot write " + path.string());
}

Raster resize_raster(const Raster& r, int height, int width) {
  if (height < 1 || width < 1) throw ShapeError("resize target must be at least 1x1");
  const bool shrinking = height <= r.height() && width <= r.width();
  Tensor<float> out(r.channels(), height, width);
  for (int c = 0; c < r.channels(); ++c) {
    const cv::Mat src(r.height(), r.width(), CV_32F, const_cast<float*>(r.tensor().channel(c).data()));
    cv::Mat dst(height, width, CV_32F, out.channel(c).data());
    cv::resize(src, dst, dst.size(), 0, 0, shrinking ? cv::INTER_AREA : cv::INTER_LINEAR);
  }
  return Raster::clamped(std::move(out));
}

Tensor<float> to_model_range(const Raster& r) {
  Tensor<float> t = r.tensor();
  for (auto& v : t.storage()) v = 2.0f * v - 1.0f;
  return t;
}

Raster from_model_range(const Tensor<float>& t) {
  Tensor<float> out = t;
  for (auto& v : out.storage()) {
    if (!std::isfinite(v)) throw NumericError("model output contains a non-finite value");
    v = std::clamp((v + 1.0f) * 0.5f, 0.0f, 1.0f);
  }
  return Raster::from_tensor(std::move(out));
}

}  // namespace cloudgan::data
