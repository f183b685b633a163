#pragma once

#include <string>

#include "cloudgan/core/param.hpp"
#include "cloudgan/core/rng.hpp"
#include "cloudgan/core/tensor.hpp"

namespace cloudgan {

struct ConvSpec {
  int in_channels = 1;
  int out_channels = 1;
  int kernel = 3;
  int stride = 1;
  int pad_begin = 1;  // top/left
  int pad_end = 1;    // bottom/right

  static ConvSpec same(int in, int out, int kernel) {
    return {in, out, kernel, 1, (kernel - 1) / 2, kernel / 2};
  }
  static ConvSpec pointwise(int in, int out) { return {in, out, 1, 1, 0, 0}; }

  int out_extent(int extent) const { return (extent + pad_begin + pad_end - kernel) / stride + 1; }
  std::size_t weight_count() const {
    return static_cast<std::size_t>(out_channels) * in_channels * kernel * kernel;
  }
};

/// 2-D convolution with bias, weights laid out [out][in][ky][kx].
///
/// forward() is const and reentrant. backward() accumulates into the
/// parameter gradients and returns the gradient with respect to the input.
template <typename T>
class Conv2d {
 public:
  Conv2d() = default;
  Conv2d(const ConvSpec& spec, const std::string& name);

  const ConvSpec& spec() const { return spec_; }

  Tensor<T> forward(const Tensor<T>& x) const;

  /// x is the tensor passed to forward(). Returns an empty tensor when
  /// need_input_grad is false.
  Tensor<T> backward(const Tensor<T>& x, const Tensor<T>& grad_out, bool need_input_grad = true);

  /// Uniform(-1/sqrt(fan_in), 1/sqrt(fan_in)) weights, zero bias.
  void init(Rng& rng);

  Param<T>& weight() { return weight_; }
  Param<T>& bias() { return bias_; }
  const Param<T>& weight() const { return weight_; }
  const Param<T>& bias() const { return bias_; }

  void collect(ParamRefs<T>& out) {
    out.push_back(&weight_);
    out.push_back(&bias_);
  }

 private:
  int chunk_rows(int out_width) const;

  ConvSpec spec_;
  Param<T> weight_;
  Param<T> bias_;
};

extern template class Conv2d<float>;
extern template class Conv2d<double>;

}  // namespace cloudgan
