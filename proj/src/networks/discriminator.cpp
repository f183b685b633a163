#include "cloudgan/networks/discriminator.hpp"

#include <algorithm>
#include <string>

namespace cloudgan::networks {

void DiscriminatorConfig::validate() const {
  if (layers < 1 || base_channels < 1) throw ConfigError("discriminator: layers and base_channels must be >= 1");
}

int DiscriminatorConfig::channels_at(int layer) const {
  return base_channels * (1 << std::min(layer, 3));
}

template <typename T>
Discriminator<T>::Discriminator(const DiscriminatorConfig& config, int in_channels) : config_(config) {
  config_.validate();
  int channels = in_channels;
  for (int i = 0; i < config_.layers; ++i) {
    const int out = config_.channels_at(i);
    convs_.emplace_back(ConvSpec{channels, out, 4, 2, 1, 2}, "disc.layer" + std::to_string(i));
    channels = out;
  }
  convs_.emplace_back(ConvSpec::same(channels, 1, 3), "disc.score");
}

template <typename T>
void Discriminator<T>::init(Rng& rng) {
  for (auto& conv : convs_) conv.init(rng);
}

template <typename T>
ParamRefs<T> Discriminator<T>::params() {
  ParamRefs<T> out;
  for (auto& conv : convs_) conv.collect(out);
  return out;
}

template <typename T>
Tensor<T> Discriminator<T>::forward(const Tensor<T>& x, Trace* trace) const {
  const int footprint = 1 << config_.layers;
  if (x.height() < footprint || x.width() < footprint) {
    throw ShapeError("discriminator input " + x.shape().str() + " is smaller than its " +
                     std::to_string(footprint) + " px footprint");
  }
  if (trace) trace->inputs.clear();
  Tensor<T> h = x;
  for (std::size_t i = 0; i < convs_.size(); ++i) {
    Tensor<T> next = convs_[i].forward(h);
    if (trace) trace->inputs.push_back(std::move(h));
    if (i + 1 < convs_.size()) {
      for (auto& v : next.storage()) v = v > T(0) ? v : static_cast<T>(DiscriminatorConfig::kLeakySlope) * v;
    }
    h = std::move(next);
  }
  return h;
}

template <typename T>
Tensor<T> Discriminator<T>::backward(const Trace& trace, const Tensor<T>& grad_scores, bool need_input_grad) {
  if (trace.inputs.size() != convs_.size()) throw ShapeError("discriminator backward: trace does not match");
  Tensor<T> grad = grad_scores;
  for (std::size_t i = convs_.size(); i-- > 0;) {
    const bool want = i > 0 || need_input_grad;
    grad = convs_[i].backward(trace.inputs[i], grad, want);
    if (i > 0) {
      // inputs[i] is the leaky-ReLU output of layer i - 1; its sign matches the pre-activation.
      const auto& act = trace.inputs[i].storage();
      for (std::size_t k = 0; k < grad.size(); ++k) {
        if (!(act[k] > T(0))) grad.storage()[k] *= static_cast<T>(DiscriminatorConfig::kLeakySlope);
      }
    }
  }
  return grad;
}

template class Discriminator<float>;
template class Discriminator<double>;

}  // namespace cloudgan::networks
