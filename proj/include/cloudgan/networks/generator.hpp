#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cloudgan/attention/sab.hpp"
#include "cloudgan/attention/sarb.hpp"

namespace cloudgan::networks {

using attention::NeighborhoodMode;

enum class GeneratorVariant { Baseline, Dual };

std::string to_string(GeneratorVariant variant);
GeneratorVariant parse_generator_variant(std::string_view text);

struct GeneratorConfig {
  GeneratorVariant variant = GeneratorVariant::Baseline;
  NeighborhoodMode mode = NeighborhoodMode::Four;
  int base_channels = 32;
  int sarbs_per_stage = 2;
  int stages = 3;  // BASELINE only; DUAL always has two attention stages

  static constexpr int kDualStages = 2;
  static constexpr int kDualSarbsPerStage = 3;

  static GeneratorConfig baseline(NeighborhoodMode mode = NeighborhoodMode::Four) {
    return {GeneratorVariant::Baseline, mode, 32, 2, 3};
  }
  static GeneratorConfig dual(NeighborhoodMode mode = NeighborhoodMode::Four) {
    return {GeneratorVariant::Dual, mode, 32, kDualSarbsPerStage, kDualStages};
  }

  int stage_count() const { return variant == GeneratorVariant::Dual ? kDualStages : stages; }
  void validate() const;
  std::string label() const;  // e.g. "BASELINE-FOUR"
  bool operator==(const GeneratorConfig&) const = default;
};

template <typename T>
struct GeneratorOutput {
  Tensor<T> image;                       // model range [-1, 1]
  std::vector<Tensor<T>> attention_maps; // one per attention stage
};

/// Attention-gated residual generator.
///
/// head 3x3 (3 -> F), then per stage a SAB producing a map that gates the
/// stage's SARB stack, then tail 3x3 (F -> 3). The image is
/// clamp(tanh(tail) + x, -1, 1), so a zero tail is the identity.
template <typename T>
class Generator {
 public:
  struct Stage {
    attention::Sab<T> sab;
    std::vector<attention::Sarb<T>> sarbs;
  };

  struct StageTrace {
    typename attention::Sab<T>::Trace sab;
    std::vector<typename attention::Sarb<T>::Trace> sarbs;
  };

  struct Trace {
    Tensor<T> input;
    std::vector<StageTrace> stages;
    Tensor<T> tail_input;
    Tensor<T> activation;  // tanh(tail)
    Tensor<T> combined;    // activation + input, before clamping
    std::vector<Tensor<T>> attention_maps;
  };

  explicit Generator(const GeneratorConfig& config);

  const GeneratorConfig& config() const { return config_; }

  GeneratorOutput<T> forward(const Tensor<T>& x, Trace* trace = nullptr) const;

  /// grad_attention may be empty or hold one (possibly empty) tensor per map.
  void backward(const Trace& trace, const Tensor<T>& grad_image, std::span<const Tensor<T>> grad_attention = {});

  void init(Rng& rng);
  void zero_tail();

  ParamRefs<T> params();
  std::size_t param_count();

  std::vector<Stage>& stages() { return stages_; }

 private:
  GeneratorConfig config_;
  Conv2d<T> head_;
  std::vector<Stage> stages_;
  Conv2d<T> tail_;
};

extern template class Generator<float>;
extern template class Generator<double>;

}  // namespace cloudgan::networks
