#include "cloudgan/attention/sab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace cloudgan::attention {
namespace {

template <typename T>
T open_unit_sigmoid(T logit) {
  const T s = logit >= T(0) ? T(1) / (T(1) + std::exp(-logit)) : std::exp(logit) / (T(1) + std::exp(logit));
  // Keeps the map strictly inside (0,1) even where the sigmoid saturates.
  return std::clamp(s, std::numeric_limits<T>::min(), T(1) - std::numeric_limits<T>::epsilon() / 2);
}

}  // namespace

template <typename T>
Sab<T>::Sab(int features, NeighborhoodMode mode, const std::string& name, int rounds)
    : features_(features), mode_(mode), output_(ConvSpec::pointwise(features, 1), name + ".out") {
  if (features < 1 || rounds < 1) throw ConfigError(name + ": features and rounds must be >= 1");
  const int dirs = direction_count(mode);
  for (int r = 0; r < rounds; ++r) {
    const std::string prefix = name + ".round" + std::to_string(r);
    rounds_.push_back(Round{Conv2d<T>(ConvSpec::pointwise(features, features), prefix + ".proj"),
                            Param<T>(prefix + ".gains", {dirs, features}),
                            Conv2d<T>(ConvSpec::pointwise(dirs * features, features), prefix + ".fuse")});
  }
}

template <typename T>
void Sab<T>::init(Rng& rng) {
  const T gain = mode_ == NeighborhoodMode::Four ? T(0.25) : T(0.125);
  for (auto& round : rounds_) {
    round.projection.init(rng);
    std::fill(round.gains.value.begin(), round.gains.value.end(), gain);
    round.fusion.init(rng);
  }
  output_.init(rng);
}

template <typename T>
void Sab<T>::collect(ParamRefs<T>& out) {
  for (auto& round : rounds_) {
    round.projection.collect(out);
    out.push_back(&round.gains);
    round.fusion.collect(out);
  }
  output_.collect(out);
}

template <typename T>
Tensor<T> Sab<T>::forward(const Tensor<T>& x, Trace* trace) const {
  if (x.channels() != features_) {
    throw ShapeError("SAB expects " + std::to_string(features_) + " channels, got " + std::to_string(x.channels()));
  }
  const auto dirs = directions(mode_);
  if (trace) trace->rounds.clear();

  Tensor<T> features = x;
  for (const auto& round : rounds_) {
    if (round.gains.shape.front() != static_cast<int>(dirs.size())) {
      throw ConfigError("SAB gains do not match neighbourhood mode");
    }
    Tensor<T> projected = round.projection.forward(features);
    std::vector<Tensor<T>> parts;
    parts.reserve(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      std::span<const T> gains(round.gains.value.data() + d * features_, features_);
      parts.push_back(directional_pass(projected, dirs[d], gains));
    }
    Tensor<T> propagated = concat_channels<T>(parts);
    Tensor<T> fused = round.fusion.forward(propagated);
    if (trace) {
      trace->rounds.push_back({std::move(features), std::move(projected), std::move(propagated)});
    }
    features = std::move(fused);
  }

  Tensor<T> attention = output_.forward(features);
  for (auto& v : attention.storage()) v = open_unit_sigmoid(v);
  if (trace) {
    trace->fused = std::move(features);
    trace->attention = attention;
  }
  return attention;
}

template <typename T>
Tensor<T> Sab<T>::backward(const Trace& trace, const Tensor<T>& grad_attention) {
  require_same_shape(trace.attention, grad_attention, "SAB backward");
  const auto dirs = directions(mode_);

  Tensor<T> grad_logit(grad_attention.shape());
  for (std::size_t i = 0; i < grad_logit.size(); ++i) {
    const T a = trace.attention.storage()[i];
    grad_logit.storage()[i] = grad_attention.storage()[i] * a * (T(1) - a);
  }
  Tensor<T> grad = output_.backward(trace.fused, grad_logit);

  for (std::size_t r = rounds_.size(); r-- > 0;) {
    auto& round = rounds_[r];
    const auto& rt = trace.rounds[r];
    const Tensor<T> grad_propagated = round.fusion.backward(rt.propagated, grad);
    Tensor<T> grad_projected(rt.projected.shape());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
      const int first = static_cast<int>(d) * features_;
      std::span<const T> gains(round.gains.value.data() + first, features_);
      std::span<T> grad_gains(round.gains.grad.data() + first, features_);
      grad_projected += directional_pass_backward(rt.propagated.slice_channels(first, features_), dirs[d], gains,
                                                  grad_propagated.slice_channels(first, features_), grad_gains);
    }
    grad = round.projection.backward(rt.input, grad_projected);
  }
  return grad;
}

template class Sab<float>;
template class Sab<double>;

}  // namespace cloudgan::attention
