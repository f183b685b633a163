#pragma once

#include <vector>

#include "cloudgan/core/conv2d.hpp"

namespace cloudgan::networks {

struct DiscriminatorConfig {
  int layers = 4;
  int base_channels = 64;

  static constexpr double kLeakySlope = 0.2;

  void validate() const;
  /// Channels of stride-2 layer i: base * 2^i, capped at base * 8.
  int channels_at(int layer) const;
  bool operator==(const DiscriminatorConfig&) const = default;
};

/// Patch discriminator: `layers` stride-2 4x4 convolutions with leaky ReLU,
/// then a 3x3 projection to one channel. Scores are unbounded (least squares).
/// Padding is (1, 2) so each stride-2 layer maps an extent n to ceil(n / 2).
template <typename T>
class Discriminator {
 public:
  struct Trace {
    std::vector<Tensor<T>> inputs;  // input of every convolution
  };

  explicit Discriminator(const DiscriminatorConfig& config, int in_channels = 3);

  const DiscriminatorConfig& config() const { return config_; }

  Tensor<T> forward(const Tensor<T>& x, Trace* trace = nullptr) const;

  /// Accumulates parameter gradients; returns d/dx when need_input_grad.
  Tensor<T> backward(const Trace& trace, const Tensor<T>& grad_scores, bool need_input_grad = true);

  void init(Rng& rng);
  ParamRefs<T> params();
  std::vector<Conv2d<T>>& layers() { return convs_; }

 private:
  DiscriminatorConfig config_;
  std::vector<Conv2d<T>> convs_;  // stride-2 layers followed by the projection
};

extern template class Discriminator<float>;
extern template class Discriminator<double>;

}  // namespace cloudgan::networks
