#pragma once

#include <filesystem>
#include <string>

#include "cloudgan/core/tensor.hpp"

namespace cloudgan::data {

/// H x W x C image with every intensity in [0, 1].
///
/// Stored channel-major so it converts to model tensors without reshuffling.
/// Channels follow file order after converting OpenCV's BGR(A) to RGB(A).
class Raster {
 public:
  Raster() = default;
  Raster(int height, int width, int channels, float fill = 0.0f);

  /// Throws ShapeError/NumericError if t violates the raster invariants.
  static Raster from_tensor(Tensor<float> t);
  /// Clamps every element into [0, 1]; non-finite values are rejected.
  static Raster clamped(Tensor<float> t);

  int height() const { return pixels_.height(); }
  int width() const { return pixels_.width(); }
  int channels() const { return pixels_.channels(); }
  Shape shape() const { return pixels_.shape(); }

  float& at(int y, int x, int c) { return pixels_(c, y, x); }
  float at(int y, int x, int c) const { return pixels_(c, y, x); }

  const Tensor<float>& tensor() const { return pixels_; }
  Tensor<float>& mutable_tensor() { return pixels_; }

  /// Re-checks the invariants (useful after mutating through at()).
  void validate() const;

  bool operator==(const Raster& other) const { return pixels_.storage() == other.pixels_.storage() && shape() == other.shape(); }

 private:
  Tensor<float> pixels_;
};

/// Reads an 8- or 16-bit raster (PNG, TIFF, ...), scaling by the bit-depth maximum.
Raster load_raster(const std::filesystem::path& path);

/// Writes r quantised to bit_depth (8 or 16) bits; format follows the extension.
void save_raster(const Raster& r, const std::filesystem::path& path, int bit_depth = 8);

/// Area-averaged resize (downsampling) or bilinear (upsampling).
Raster resize_raster(const Raster& r, int height, int width);

/// Affine [0, 1] -> [-1, 1].
Tensor<float> to_model_range(const Raster& r);
/// Affine [-1, 1] -> [0, 1], then clamped to [0, 1].
Raster from_model_range(const Tensor<float>& t);

}  // namespace cloudgan::data
