#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "cloudgan/core/param.hpp"
#include "cloudgan/train/checkpoint.hpp"

namespace cloudgan::train {

struct AdamOptions {
  double lr = 2e-4;
  double beta1 = 0.5;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double grad_clip = 0.0;  // global L2 norm; 0 disables
};

/// Adam with bias correction over a fixed parameter list.
class Adam {
 public:
  Adam(ParamRefs<float> params, const AdamOptions& options);

  /// Applies one update from the accumulated gradients. Returns the
  /// pre-clipping global gradient norm.
  double step();

  std::int64_t steps() const { return steps_; }

  /// Moments stored as "<prefix>m/<name>" and "<prefix>v/<name>".
  void save(Checkpoint& ckpt, const std::string& prefix) const;
  void load(const Checkpoint& ckpt, const std::string& prefix, std::int64_t steps);

 private:
  ParamRefs<float> params_;
  AdamOptions options_;
  std::vector<std::vector<float>> m_;
  std::vector<std::vector<float>> v_;
  std::int64_t steps_ = 0;
};

}  // namespace cloudgan::train
