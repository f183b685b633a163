#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "cloudgan/core/buffer.hpp"
#include "cloudgan/core/error.hpp"

namespace cloudgan {

struct Shape {
  int channels = 0;
  int height = 0;
  int width = 0;

  std::size_t plane() const { return static_cast<std::size_t>(height) * width; }
  std::size_t size() const { return plane() * channels; }
  bool operator==(const Shape&) const = default;
  std::string str() const {
    return std::to_string(height) + "x" + std::to_string(width) + "x" + std::to_string(channels);
  }
};

/// Dense single-image tensor stored channel-major (C, H, W).
///
/// Channel planes are contiguous so that a tensor can be viewed as a
/// C x (H*W) row-major matrix for 1x1 convolutions and im2col GEMMs.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() = default;
  Tensor(int channels, int height, int width, T fill = T(0))
      : shape_{channels, height, width}, data_(shape_.size(), fill) {
    if (channels < 0 || height < 0 || width < 0) {
      throw ShapeError("negative tensor dimension");
    }
  }
  explicit Tensor(Shape shape, T fill = T(0)) : Tensor(shape.channels, shape.height, shape.width, fill) {}

  const Shape& shape() const { return shape_; }
  int channels() const { return shape_.channels; }
  int height() const { return shape_.height; }
  int width() const { return shape_.width; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  T* data() { return data_.data(); }
  const T* data() const { return data_.data(); }
  Buffer<T>& storage() { return data_; }
  const Buffer<T>& storage() const { return data_; }

  T& operator()(int c, int y, int x) { return data_[index(c, y, x)]; }
  const T& operator()(int c, int y, int x) const { return data_[index(c, y, x)]; }

  std::span<T> channel(int c) { return {data_.data() + c * shape_.plane(), shape_.plane()}; }
  std::span<const T> channel(int c) const { return {data_.data() + c * shape_.plane(), shape_.plane()}; }

  void fill(T value) { std::fill(data_.begin(), data_.end(), value); }

  /// Copy of channels [first, first + count).
  Tensor slice_channels(int first, int count) const {
    if (first < 0 || count < 0 || first + count > channels()) throw ShapeError("channel slice out of range");
    Tensor out(count, height(), width());
    std::copy_n(data_.begin() + first * shape_.plane(), count * shape_.plane(), out.data_.begin());
    return out;
  }

  Tensor& operator+=(const Tensor& other) {
    require_same_shape(*this, other, "tensor +=");
    for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += other.data_[i];
    return *this;
  }

  bool all_finite() const {
    return std::all_of(data_.begin(), data_.end(), [](T v) { return std::isfinite(v); });
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape_);
    std::transform(data_.begin(), data_.end(), out.storage().begin(), [](T v) { return static_cast<U>(v); });
    return out;
  }

  friend void require_same_shape(const Tensor& a, const Tensor& b, const char* what) {
    if (a.shape() != b.shape()) {
      throw ShapeError(std::string(what) + ": shape mismatch " + a.shape().str() + " vs " + b.shape().str());
    }
  }

 private:
  std::size_t index(int c, int y, int x) const {
    return (static_cast<std::size_t>(c) * shape_.height + y) * shape_.width + x;
  }

  Shape shape_{};
  Buffer<T> data_;
};

/// Channel-wise concatenation.
template <typename T>
Tensor<T> concat_channels(std::span<const Tensor<T>> parts) {
  if (parts.empty()) return {};
  int total = 0;
  for (const auto& p : parts) {
    if (p.height() != parts[0].height() || p.width() != parts[0].width()) {
      throw ShapeError("concat_channels: spatial mismatch");
    }
    total += p.channels();
  }
  Tensor<T> out(total, parts[0].height(), parts[0].width());
  auto it = out.storage().begin();
  for (const auto& p : parts) it = std::copy(p.storage().begin(), p.storage().end(), it);
  return out;
}

}  // namespace cloudgan
