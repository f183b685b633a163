#pragma once

#include <string>
#include <vector>

#include "cloudgan/attention/directional.hpp"
#include "cloudgan/core/conv2d.hpp"

namespace cloudgan::attention {

/// Spatial Attentive Block: F feature channels in, a single-channel map in (0,1) out.
///
/// Each round projects the features (1x1), propagates them along every
/// direction of the neighbourhood mode with per-channel recurrent gains, and
/// fuses the concatenated direction outputs back to F channels (1x1). After
/// the last round a 1x1 projection and a sigmoid give the attention map.
template <typename T>
class Sab {
 public:
  static constexpr int kDefaultRounds = 2;

  struct Round {
    Conv2d<T> projection;  // F -> F
    Param<T> gains;        // [directions, F]
    Conv2d<T> fusion;      // directions * F -> F
  };

  struct RoundTrace {
    Tensor<T> input;
    Tensor<T> projected;
    Tensor<T> propagated;  // direction outputs, concatenated in direction order
  };

  struct Trace {
    std::vector<RoundTrace> rounds;
    Tensor<T> fused;
    Tensor<T> attention;
  };

  Sab() = default;
  Sab(int features, NeighborhoodMode mode, const std::string& name, int rounds = kDefaultRounds);

  int features() const { return features_; }
  NeighborhoodMode mode() const { return mode_; }

  Tensor<T> forward(const Tensor<T>& x, Trace* trace = nullptr) const;

  /// Accumulates parameter gradients and returns d/dx.
  Tensor<T> backward(const Trace& trace, const Tensor<T>& grad_attention);

  /// Gains start at 0.25 (FOUR) or 0.125 (EIGHT); convolutions use fan-in init.
  void init(Rng& rng);
  void collect(ParamRefs<T>& out);

  std::vector<Round>& rounds() { return rounds_; }
  const std::vector<Round>& rounds() const { return rounds_; }
  Conv2d<T>& output_projection() { return output_; }
  const Conv2d<T>& output_projection() const { return output_; }

 private:
  int features_ = 0;
  NeighborhoodMode mode_ = NeighborhoodMode::Four;
  std::vector<Round> rounds_;
  Conv2d<T> output_;  // F -> 1
};

extern template class Sab<float>;
extern template class Sab<double>;

}  // namespace cloudgan::attention
