#include "cloudgan/networks/generator.hpp"

#include <algorithm>
#include <cmath>

namespace cloudgan::networks {

std::string to_string(GeneratorVariant variant) {
  return variant == GeneratorVariant::Baseline ? "BASELINE" : "DUAL";
}

GeneratorVariant parse_generator_variant(std::string_view text) {
  if (text == "BASELINE" || text == "baseline") return GeneratorVariant::Baseline;
  if (text == "DUAL" || text == "dual") return GeneratorVariant::Dual;
  throw ConfigError("unknown generator variant '" + std::string(text) + "' (expected BASELINE or DUAL)");
}

void GeneratorConfig::validate() const {
  if (base_channels < 1 || sarbs_per_stage < 1 || stages < 1) {
    throw ConfigError("generator: base_channels, sarbs_per_stage and stages must be >= 1");
  }
}

std::string GeneratorConfig::label() const {
  return to_string(variant) + "-" + attention::to_string(mode);
}

template <typename T>
Generator<T>::Generator(const GeneratorConfig& config)
    : config_(config),
      head_(ConvSpec::same(3, config.base_channels, 3), "head"),
      tail_(ConvSpec::same(config.base_channels, 3, 3), "tail") {
  config_.validate();
  const int features = config_.base_channels;
  for (int s = 0; s < config_.stage_count(); ++s) {
    const std::string prefix = "stage" + std::to_string(s);
    Stage stage{attention::Sab<T>(features, config_.mode, prefix + ".sab"), {}};
    for (int b = 0; b < config_.sarbs_per_stage; ++b) {
      stage.sarbs.emplace_back(features, prefix + ".sarb" + std::to_string(b));
    }
    stages_.push_back(std::move(stage));
  }
}

template <typename T>
void Generator<T>::init(Rng& rng) {
  head_.init(rng);
  for (auto& stage : stages_) {
    stage.sab.init(rng);
    for (auto& sarb : stage.sarbs) sarb.init(rng);
  }
  tail_.init(rng);
}

template <typename T>
void Generator<T>::zero_tail() {
  std::fill(tail_.weight().value.begin(), tail_.weight().value.end(), T(0));
  std::fill(tail_.bias().value.begin(), tail_.bias().value.end(), T(0));
}

template <typename T>
ParamRefs<T> Generator<T>::params() {
  ParamRefs<T> out;
  head_.collect(out);
  for (auto& stage : stages_) {
    stage.sab.collect(out);
    for (auto& sarb : stage.sarbs) sarb.collect(out);
  }
  tail_.collect(out);
  return out;
}

template <typename T>
std::size_t Generator<T>::param_count() {
  return total_size(params());
}

template <typename T>
GeneratorOutput<T> Generator<T>::forward(const Tensor<T>& x, Trace* trace) const {
  if (x.channels() != 3) throw ShapeError("generator expects a 3-channel image, got " + x.shape().str());

  GeneratorOutput<T> out;
  if (trace) {
    trace->input = x;
    trace->stages.assign(stages_.size(), {});
  }
  Tensor<T> features = head_.forward(x);
  for (std::size_t s = 0; s < stages_.size(); ++s) {
    const auto& stage = stages_[s];
    StageTrace* st = trace ? &trace->stages[s] : nullptr;
    Tensor<T> attention = stage.sab.forward(features, st ? &st->sab : nullptr);
    if (st) st->sarbs.resize(stage.sarbs.size());
    for (std::size_t b = 0; b < stage.sarbs.size(); ++b) {
      features = stage.sarbs[b].forward(features, attention, st ? &st->sarbs[b] : nullptr);
    }
    out.attention_maps.push_back(std::move(attention));
  }

  Tensor<T> activation = tail_.forward(features);
  for (auto& v : activation.storage()) v = std::tanh(v);
  Tensor<T> combined = activation;
  combined += x;
  out.image = combined;
  for (auto& v : out.image.storage()) v = std::clamp(v, T(-1), T(1));

  if (trace) {
    trace->tail_input = std::move(features);
    trace->activation = std::move(activation);
    trace->combined = std::move(combined);
    trace->attention_maps = out.attention_maps;
  }
  return out;
}

template <typename T>
void Generator<T>::backward(const Trace& trace, const Tensor<T>& grad_image,
                            std::span<const Tensor<T>> grad_attention) {
  require_same_shape(trace.combined, grad_image, "generator backward");
  if (!grad_attention.empty() && grad_attention.size() != stages_.size()) {
    throw ShapeError("generator backward: expected one attention gradient per stage");
  }

  // Clamp passes gradients that would move a saturated value back inside [-1, 1].
  Tensor<T> grad_tail(grad_image.shape());
  for (std::size_t i = 0; i < grad_tail.size(); ++i) {
    const T v = trace.combined.storage()[i];
    const T g = grad_image.storage()[i];
    const bool passes = (v >= T(-1) && v <= T(1)) || (v > T(1) && g > T(0)) || (v < T(-1) && g < T(0));
    const T a = trace.activation.storage()[i];
    grad_tail.storage()[i] = passes ? g * (T(1) - a * a) : T(0);
  }

  Tensor<T> grad = tail_.backward(trace.tail_input, grad_tail);
  for (std::size_t s = stages_.size(); s-- > 0;) {
    auto& stage = stages_[s];
    const auto& st = trace.stages[s];
    const Tensor<T>& attention = trace.attention_maps[s];
    Tensor<T> grad_map(attention.shape());
    for (std::size_t b = stage.sarbs.size(); b-- > 0;) {
      auto grads = stage.sarbs[b].backward(st.sarbs[b], attention, grad);
      grad = std::move(grads.input);
      grad_map += grads.attention;
    }
    if (!grad_attention.empty() && !grad_attention[s].empty()) grad_map += grad_attention[s];
    grad += stage.sab.backward(st.sab, grad_map);
  }
  head_.backward(trace.input, grad, false);
}

template class Generator<float>;
template class Generator<double>;

}  // namespace cloudgan::networks
