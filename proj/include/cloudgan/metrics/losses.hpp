#pragma once

#include <span>
#include <vector>

#include "cloudgan/core/tensor.hpp"
#include "cloudgan/data/dataset.hpp"

namespace cloudgan::metrics {

struct LossWeights {
  double lambda_l1 = 100.0;
  double lambda_att = 10.0;
  double attention_tau = 30.0 / 255.0;

  void validate() const;
  bool operator==(const LossWeights&) const = default;
};

/// Mean absolute difference.
double l1_loss(const Tensor<float>& a, const Tensor<float>& b);
/// d l1_loss / d a, using sign(0) = 0.
Tensor<float> l1_loss_grad(const Tensor<float>& a, const Tensor<float>& b);

struct GanLosses {
  double g_adv = 0.0;  // mean((d_fake - 1)^2)
  double d_adv = 0.0;  // 0.5 mean((d_real - 1)^2) + 0.5 mean(d_fake^2)
};

/// Least-squares adversarial losses.
GanLosses gan_losses(const Tensor<float>& d_real, const Tensor<float>& d_fake);
Tensor<float> generator_adv_grad(const Tensor<float>& d_fake);
Tensor<float> discriminator_real_grad(const Tensor<float>& d_real);
Tensor<float> discriminator_fake_grad(const Tensor<float>& d_fake);

/// 1 where the channel-mean |cloudy - clean| exceeds tau, else 0 (1 x H x W).
Tensor<float> attention_target(const data::ImagePair& pair, double tau = 30.0 / 255.0);

/// Mean over maps of the mean squared error between each map and target.
double attention_loss(std::span<const Tensor<float>> maps, const Tensor<float>& target);
std::vector<Tensor<float>> attention_loss_grads(std::span<const Tensor<float>> maps, const Tensor<float>& target);

}  // namespace cloudgan::metrics
