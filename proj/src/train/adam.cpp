#include "cloudgan/train/adam.hpp"

#include <cmath>

#include "cloudgan/core/error.hpp"

namespace cloudgan::train {

Adam::Adam(ParamRefs<float> params, const AdamOptions& options) : params_(std::move(params)), options_(options) {
  for (const auto* p : params_) {
    m_.emplace_back(p->size(), 0.0f);
    v_.emplace_back(p->size(), 0.0f);
  }
}

double Adam::step() {
  double norm_sq = 0.0;
  for (const auto* p : params_) {
    for (float g : p->grad) norm_sq += static_cast<double>(g) * g;
  }
  const double norm = std::sqrt(norm_sq);
  const double clip_scale =
      (options_.grad_clip > 0.0 && norm > options_.grad_clip) ? options_.grad_clip / norm : 1.0;

  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double correction1 = 1.0 - std::pow(b1, static_cast<double>(steps_));
  const double correction2 = 1.0 - std::pow(b2, static_cast<double>(steps_));
  const double step_size = options_.lr / correction1;
  const double sqrt_c2 = std::sqrt(correction2);

  for (std::size_t k = 0; k < params_.size(); ++k) {
    auto& p = *params_[k];
    auto& m = m_[k];
    auto& v = v_[k];
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double g = clip_scale * p.grad[i];
      m[i] = static_cast<float>(b1 * m[i] + (1.0 - b1) * g);
      v[i] = static_cast<float>(b2 * v[i] + (1.0 - b2) * g * g);
      const double denom = std::sqrt(static_cast<double>(v[i])) / sqrt_c2 + options_.epsilon;
      p.value[i] = static_cast<float>(p.value[i] - step_size * m[i] / denom);
    }
  }
  return norm;
}

void Adam::save(Checkpoint& ckpt, const std::string& prefix) const {
  for (std::size_t k = 0; k < params_.size(); ++k) {
    ckpt.tensors.push_back({prefix + "m/" + params_[k]->name, params_[k]->shape, m_[k]});
    ckpt.tensors.push_back({prefix + "v/" + params_[k]->name, params_[k]->shape, v_[k]});
  }
}

void Adam::load(const Checkpoint& ckpt, const std::string& prefix, std::int64_t steps) {
  for (std::size_t k = 0; k < params_.size(); ++k) {
    const auto* m = ckpt.find(prefix + "m/" + params_[k]->name);
    const auto* v = ckpt.find(prefix + "v/" + params_[k]->name);
    if (!m || !v || m->values.size() != m_[k].size() || v->values.size() != v_[k].size()) {
      throw DataError("checkpoint lacks optimizer state for " + params_[k]->name);
    }
    m_[k] = m->values;
    v_[k] = v->values;
  }
  steps_ = steps;
}

}  // namespace cloudgan::train
