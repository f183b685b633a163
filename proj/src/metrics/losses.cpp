#include "cloudgan/metrics/losses.hpp"

#include <cmath>

namespace cloudgan::metrics {
namespace {

double mean_of(const Tensor<float>& t, auto&& fn) {
  double s = 0.0;
  for (float v : t.storage()) s += fn(static_cast<double>(v));
  return s / static_cast<double>(t.size());
}

Tensor<float> map_grad(const Tensor<float>& t, auto&& fn) {
  Tensor<float> g(t.shape());
  const double n = static_cast<double>(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) g.storage()[i] = static_cast<float>(fn(t.storage()[i]) / n);
  return g;
}

void require_nonempty(const Tensor<float>& t, const char* what) {
  if (t.empty()) throw ShapeError(std::string(what) + ": empty tensor");
}

}  // namespace

void LossWeights::validate() const {
  if (!(lambda_l1 >= 0.0) || !(lambda_att >= 0.0)) throw ConfigError("loss weights must be non-negative");
  if (!(attention_tau >= 0.0)) throw ConfigError("attention_tau must be non-negative");
}

double l1_loss(const Tensor<float>& a, const Tensor<float>& b) {
  require_same_shape(a, b, "l1_loss");
  require_nonempty(a, "l1_loss");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(static_cast<double>(a.storage()[i]) - b.storage()[i]);
  return s / static_cast<double>(a.size());
}

Tensor<float> l1_loss_grad(const Tensor<float>& a, const Tensor<float>& b) {
  require_same_shape(a, b, "l1_loss_grad");
  Tensor<float> g(a.shape());
  const float inv = 1.0f / static_cast<float>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const float d = a.storage()[i] - b.storage()[i];
    g.storage()[i] = d > 0.0f ? inv : (d < 0.0f ? -inv : 0.0f);
  }
  return g;
}

GanLosses gan_losses(const Tensor<float>& d_real, const Tensor<float>& d_fake) {
  require_nonempty(d_real, "gan_losses");
  require_nonempty(d_fake, "gan_losses");
  GanLosses out;
  out.g_adv = mean_of(d_fake, [](double v) { return (v - 1.0) * (v - 1.0); });
  out.d_adv = 0.5 * mean_of(d_real, [](double v) { return (v - 1.0) * (v - 1.0); }) +
              0.5 * mean_of(d_fake, [](double v) { return v * v; });
  return out;
}

Tensor<float> generator_adv_grad(const Tensor<float>& d_fake) {
  return map_grad(d_fake, [](double v) { return 2.0 * (v - 1.0); });
}

Tensor<float> discriminator_real_grad(const Tensor<float>& d_real) {
  return map_grad(d_real, [](double v) { return v - 1.0; });
}

Tensor<float> discriminator_fake_grad(const Tensor<float>& d_fake) {
  return map_grad(d_fake, [](double v) { return v; });
}

Tensor<float> attention_target(const data::ImagePair& pair, double tau) {
  pair.validate();
  const auto& a = pair.cloudy.tensor();
  const auto& b = pair.clean.tensor();
  Tensor<float> mask(1, a.height(), a.width());
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      double diff = 0.0;
      for (int c = 0; c < a.channels(); ++c) diff += std::abs(static_cast<double>(a(c, y, x)) - b(c, y, x));
      mask(0, y, x) = diff / a.channels() > tau ? 1.0f : 0.0f;
    }
  }
  return mask;
}

double attention_loss(std::span<const Tensor<float>> maps, const Tensor<float>& target) {
  if (maps.empty()) throw ConfigError("attention_loss: no attention maps");
  double total = 0.0;
  for (const auto& m : maps) {
    require_same_shape(m, target, "attention_loss");
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double d = static_cast<double>(m.storage()[i]) - target.storage()[i];
      s += d * d;
    }
    total += s / static_cast<double>(m.size());
  }
  return total / static_cast<double>(maps.size());
}

std::vector<Tensor<float>> attention_loss_grads(std::span<const Tensor<float>> maps, const Tensor<float>& target) {
  if (maps.empty()) throw ConfigError("attention_loss: no attention maps");
  std::vector<Tensor<float>> grads;
  const double scale = 2.0 / (static_cast<double>(target.size()) * static_cast<double>(maps.size()));
  for (const auto& m : maps) {
    require_same_shape(m, target, "attention_loss_grads");
    Tensor<float> g(m.shape());
    for (std::size_t i = 0; i < m.size(); ++i) {
      g.storage()[i] = static_cast<float>(scale * (static_cast<double>(m.storage()[i]) - target.storage()[i]));
    }
    grads.push_back(std::move(g));
  }
  return grads;
}

}  // namespace cloudgan::metrics
