#include <doctest.h>

#include "cloudgan/attention/grad_check.hpp"
#include "cloudgan/networks/discriminator.hpp"
#include "cloudgan/networks/generator.hpp"
#include "cloudgan/networks/param_count.hpp"
#include "oracles.hpp"

using namespace cloudgan;
using namespace cloudgan::networks;
using attention::NeighborhoodMode;

namespace {

GeneratorConfig small(GeneratorVariant v, NeighborhoodMode m, int f = 8) {
  GeneratorConfig c = v == GeneratorVariant::Dual ? GeneratorConfig::dual(m) : GeneratorConfig::baseline(m);
  c.base_channels = f;
  return c;
}

const std::vector<GeneratorConfig> kGrid{
    GeneratorConfig::baseline(NeighborhoodMode::Four), GeneratorConfig::baseline(NeighborhoodMode::Eight),
    GeneratorConfig::dual(NeighborhoodMode::Four), GeneratorConfig::dual(NeighborhoodMode::Eight)};

}  // namespace

TEST_CASE("parameter count of the default BASELINE matches the layer ledger") {
  // head 3x3 3->32: 864 + 32                                      =    896
  // SAB round: proj 32*32+32, gains 4*32, fusion 128*32+32        =   5312
  // SAB: 2 rounds + output 32+1                                   =  10657
  // SARB: two 3x3 32->32 convs, 2 * (9216 + 32)                   =  18496
  // stage: SAB + 2 SARBs                                          =  47649
  // tail 3x3 32->3: 864 + 3                                       =    867
  // total: 896 + 3 * 47649 + 867                                  = 144710
  CHECK(count_params(GeneratorConfig::baseline()) == 144710);
  Generator<float> g(GeneratorConfig::baseline());
  CHECK(g.param_count() == 144710);
}

TEST_CASE("count_params agrees with the built networks") {
  for (const auto& cfg : kGrid) {
    Generator<float> g(cfg);
    CHECK(count_params(cfg) == g.param_count());
  }
  for (int layers = 1; layers <= 5; ++layers) {
    DiscriminatorConfig d{layers, 16};
    Discriminator<float> disc(d);
    CHECK(count_params(d) == total_size(disc.params()));
  }
  // 3->64, 64->128, 128->256, 256->512 (4x4) then 512->1 (3x3)
  CHECK(count_params(DiscriminatorConfig{}) == 3136 + 131200 + 524544 + 2097664 + 4609);
}

TEST_CASE("count_params ordering properties") {
  for (auto v : {GeneratorVariant::Baseline, GeneratorVariant::Dual}) {
    for (int f : {4, 16, 32}) {
      const auto four = small(v, NeighborhoodMode::Four, f);
      const auto eight = small(v, NeighborhoodMode::Eight, f);
      CHECK(count_params(eight) > count_params(four));
      CHECK(count_params(small(v, NeighborhoodMode::Four, 2 * f)) > count_params(four));
    }
  }
}

TEST_CASE("generator config validation and labels") {
  GeneratorConfig c = GeneratorConfig::baseline();
  c.stages = 0;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = GeneratorConfig::dual(NeighborhoodMode::Eight);
  CHECK(c.label() == "DUAL-EIGHT");
  CHECK(c.sarbs_per_stage == 3);
  CHECK(c.stage_count() == 2);
  CHECK(parse_generator_variant("BASELINE") == GeneratorVariant::Baseline);
  CHECK_THROWS_AS(parse_generator_variant("unet"), ConfigError);
}

TEST_CASE("default BASELINE on 256x256 gives an image and three maps") {
  Generator<float> g(GeneratorConfig::baseline());
  Rng rng(1);
  g.init(rng);
  oracle::Random rnd(1);
  const auto out = g.forward(rnd.tensor<float>(3, 256, 256));
  CHECK(out.image.shape() == Shape{3, 256, 256});
  CHECK(out.attention_maps.size() == 3);
}

TEST_CASE("all variants: shapes, ranges, determinism, map count") {
  oracle::Random rnd(2);
  for (auto v : {GeneratorVariant::Baseline, GeneratorVariant::Dual}) {
    for (auto m : {NeighborhoodMode::Four, NeighborhoodMode::Eight}) {
      Generator<float> g(small(v, m));
      Rng rng(2);
      g.init(rng);
      const auto x = rnd.tensor<float>(3, 12, 10);
      const auto a = g.forward(x);
      const auto b = g.forward(x);
      CHECK(a.image.shape() == x.shape());
      CHECK(a.image.storage() == b.image.storage());
      CHECK(a.attention_maps.size() == (v == GeneratorVariant::Dual ? 2u : 3u));
      for (float p : a.image.storage()) {
        CHECK(p >= -1.0f);
        CHECK(p <= 1.0f);
      }
      for (const auto& map : a.attention_maps) {
        CHECK(map.shape() == Shape{1, 12, 10});
        for (float p : map.storage()) {
          CHECK(p > 0.0f);
          CHECK(p < 1.0f);
        }
      }
    }
  }
}

TEST_CASE("zero tail makes every variant the identity") {
  oracle::Random rnd(3);
  for (const auto& cfg : kGrid) {
    GeneratorConfig c = cfg;
    c.base_channels = 8;
    Generator<float> g(c);
    Rng rng(3);
    g.init(rng);
    g.zero_tail();
    const auto x = rnd.tensor<float>(3, 9, 11);
    CHECK(g.forward(x).image.storage() == x.storage());
  }
}

TEST_CASE("generator gradients agree with finite differences") {
  oracle::Random rnd(4);
  for (auto v : {GeneratorVariant::Baseline, GeneratorVariant::Dual}) {
    GeneratorConfig c = small(v, NeighborhoodMode::Eight, 2);
    c.stages = 2;
    c.sarbs_per_stage = 1;
    Generator<double> g(c);
    Rng rng(4);
    g.init(rng);
    // zero biases put exact zeros on relu kinks where finite differences mislead
    for (auto* p : g.params())
      if (p->name.ends_with("bias")) rnd.fill(p->value, -0.2, 0.2);
    auto x = rnd.tensor<double>(3, 4, 4, -0.3, 0.3);
    typename Generator<double>::Trace trace;
    const auto out = g.forward(x, &trace);
    const Tensor<double> ones(out.image.shape(), 1.0);
    std::vector<Tensor<double>> att_grads;
    for (const auto& m : out.attention_maps) att_grads.emplace_back(m.shape(), 1.0);
    auto params = g.params();
    zero_grads(params);
    g.backward(trace, ones, att_grads);
    auto loss = [&] {
      const auto o = g.forward(x);
      double t = 0.0;
      for (double e : o.image.storage()) t += e;
      for (const auto& m : o.attention_maps)
        for (double e : m.storage()) t += e;
      return t;
    };
    std::vector<attention::GradProbe> probes;
    for (auto* p : params) probes.push_back({p->value, p->grad});
    CHECK(attention::compare_with_finite_differences(loss, probes).max_relative_error < 1e-3);
  }
}

TEST_CASE("discriminator output extent") {
  Discriminator<float> d(DiscriminatorConfig{});
  Rng rng(5);
  d.init(rng);
  oracle::Random rnd(5);
  CHECK(d.forward(rnd.tensor<float>(3, 256, 256)).shape() == Shape{1, 16, 16});
  CHECK(d.forward(rnd.tensor<float>(3, 17, 40)).shape() == Shape{1, 2, 3});
  CHECK_THROWS_AS(d.forward(rnd.tensor<float>(3, 15, 64)), ShapeError);
  CHECK(DiscriminatorConfig{}.channels_at(3) == 512);
  CHECK(DiscriminatorConfig{6, 64}.channels_at(5) == 512);
}

TEST_CASE("discriminator with zero weights scores zero") {
  Discriminator<float> d(DiscriminatorConfig{3, 8});
  for (auto* p : d.params()) std::fill(p->value.begin(), p->value.end(), 0.0f);
  oracle::Random rnd(6);
  for (const auto held = d.forward(rnd.tensor<float>(3, 32, 32)); float s : held.storage()) CHECK(s == 0.0f);
}

TEST_CASE("discriminator is translation equivariant on interior cells") {
  Discriminator<double> d(DiscriminatorConfig{4, 8});
  Rng rng(7);
  d.init(rng);
  oracle::Random rnd(7);
  const auto texture = rnd.tensor<double>(3, 160, 176);
  Tensor<double> a(3, 160, 160), b(3, 160, 160);
  for (int c = 0; c < 3; ++c)
    for (int y = 0; y < 160; ++y)
      for (int x = 0; x < 160; ++x) {
        a(c, y, x) = texture(c, y, x);
        b(c, y, x) = texture(c, y, x + 16);
      }
  const auto sa = d.forward(a);
  const auto sb = d.forward(b);
  for (int i = 2; i <= 6; ++i)
    for (int j = 2; j <= 5; ++j) CHECK(sb(0, i, j) == doctest::Approx(sa(0, i, j + 1)).epsilon(1e-10));
}

TEST_CASE("discriminator gradients agree with finite differences") {
  Discriminator<double> d(DiscriminatorConfig{2, 2});
  Rng rng(8);
  d.init(rng);
  oracle::Random rnd(8);
  auto x = rnd.tensor<double>(3, 4, 4);
  typename Discriminator<double>::Trace trace;
  const auto s = d.forward(x, &trace);
  auto params = d.params();
  zero_grads(params);
  const auto gx = d.backward(trace, Tensor<double>(s.shape(), 1.0));
  auto loss = [&] {
    double t = 0.0;
    for (const auto held = d.forward(x); double e : held.storage()) t += e;
    return t;
  };
  std::vector<attention::GradProbe> probes{{x.storage(), gx.storage()}};
  for (auto* p : params) probes.push_back({p->value, p->grad});
  CHECK(attention::compare_with_finite_differences(loss, probes).max_relative_error < 1e-3);
}
