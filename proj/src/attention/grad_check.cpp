#include "cloudgan/attention/grad_check.hpp"

#include <algorithm>
#include <cmath>

#include "cloudgan/attention/sab.hpp"
#include "cloudgan/attention/sarb.hpp"
#include "cloudgan/core/rng.hpp"

namespace cloudgan::attention {
namespace {

double sum(const Tensor<double>& t) {
  double s = 0.0;
  for (double v : t.storage()) s += v;
  return s;
}

Tensor<double> random_tensor(Rng& rng, int c, int h, int w, double lo = -1.0, double hi = 1.0) {
  Tensor<double> t(c, h, w);
  for (auto& v : t.storage()) v = rng.uniform(lo, hi);
  return t;
}

void randomize(ParamRefs<double>& params, Rng& rng, double scale) {
  for (auto* p : params) {
    for (auto& v : p->value) v = rng.uniform(-scale, scale);
  }
}

}  // namespace

GradCheckResult compare_with_finite_differences(const std::function<double()>& loss,
                                                std::span<const GradProbe> probes, double step) {
  GradCheckResult result;
  for (const auto& probe : probes) {
    for (std::size_t i = 0; i < probe.values.size(); ++i) {
      const double saved = probe.values[i];
      probe.values[i] = saved + step;
      const double up = loss();
      probe.values[i] = saved - step;
      const double down = loss();
      probe.values[i] = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = probe.analytic[i];
      const double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-6});
      result.max_relative_error = std::max(result.max_relative_error, std::abs(analytic - numeric) / scale);
      ++result.coordinates;
    }
  }
  return result;
}

GradCheckResult grad_check_directional(Direction step, std::uint64_t seed, int height, int width, int channels) {
  Rng rng(seed);
  Tensor<double> x = random_tensor(rng, channels, height, width);
  std::vector<double> gains(channels);
  for (auto& g : gains) g = rng.uniform(0.2, 0.9);

  const Tensor<double> h = directional_pass<double>(x, step, gains);
  std::vector<double> grad_gains(channels, 0.0);
  const Tensor<double> grad_x =
      directional_pass_backward<double>(h, step, gains, Tensor<double>(h.shape(), 1.0), grad_gains);

  const auto loss = [&] { return sum(directional_pass<double>(x, step, gains)); };
  const GradProbe probes[] = {{x.storage(), grad_x.storage()}, {gains, grad_gains}};
  return compare_with_finite_differences(loss, probes);
}

GradCheckResult grad_check_sab(NeighborhoodMode mode, std::uint64_t seed) {
  Rng rng(seed);
  Sab<double> sab(2, mode, "sab");
  sab.init(rng);
  ParamRefs<double> params;
  sab.collect(params);
  randomize(params, rng, 0.8);
  for (auto& round : sab.rounds()) {
    for (auto& g : round.gains.value) g = rng.uniform(0.2, 0.9);
  }
  Tensor<double> x = random_tensor(rng, 2, 4, 4);

  typename Sab<double>::Trace trace;
  const Tensor<double> attention = sab.forward(x, &trace);
  zero_grads(params);
  const Tensor<double> grad_x = sab.backward(trace, Tensor<double>(attention.shape(), 1.0));

  std::vector<GradProbe> probes{{x.storage(), grad_x.storage()}};
  for (auto* p : params) probes.push_back({p->value, p->grad});
  return compare_with_finite_differences([&] { return sum(sab.forward(x)); }, probes);
}

GradCheckResult grad_check_sarb(std::uint64_t seed) {
  Rng rng(seed);
  Sarb<double> sarb(2, "sarb");
  sarb.init(rng);
  ParamRefs<double> params;
  sarb.collect(params);
  randomize(params, rng, 0.8);
  Tensor<double> x = random_tensor(rng, 2, 4, 4);
  Tensor<double> attention = random_tensor(rng, 1, 4, 4, 0.05, 0.95);

  typename Sarb<double>::Trace trace;
  const Tensor<double> out = sarb.forward(x, attention, &trace);
  zero_grads(params);
  const auto grads = sarb.backward(trace, attention, Tensor<double>(out.shape(), 1.0));

  std::vector<GradProbe> probes{{x.storage(), grads.input.storage()},
                                {attention.storage(), grads.attention.storage()}};
  for (auto* p : params) probes.push_back({p->value, p->grad});
  return compare_with_finite_differences([&] { return sum(sarb.forward(x, attention)); }, probes);
}

std::vector<double> sarb_conv_a_gradient_with_closed_gate(std::uint64_t seed) {
  Rng rng(seed);
  Sarb<double> sarb(2, "sarb");
  sarb.init(rng);
  const Tensor<double> x = random_tensor(rng, 2, 4, 4);
  const Tensor<double> closed(1, 4, 4, 0.0);

  typename Sarb<double>::Trace trace;
  const Tensor<double> out = sarb.forward(x, closed, &trace);
  sarb.conv_a().weight().zero_grad();
  sarb.conv_a().bias().zero_grad();
  sarb.backward(trace, closed, Tensor<double>(out.shape(), 1.0));

  const auto& wg = sarb.conv_a().weight().grad;
  std::vector<double> grad(wg.begin(), wg.end());
  grad.insert(grad.end(), sarb.conv_a().bias().grad.begin(), sarb.conv_a().bias().grad.end());
  return grad;
}

}  // namespace cloudgan::attention
