#include <doctest.h>

#include "cloudgan/attention/directional.hpp"
#include "cloudgan/attention/grad_check.hpp"
#include "cloudgan/attention/sab.hpp"
#include "cloudgan/attention/sarb.hpp"
#include "oracles.hpp"
#include "sab_reduction.hpp"

using namespace cloudgan;
using namespace cloudgan::attention;

namespace {

Tensor<double> row(std::initializer_list<double> values) {
  Tensor<double> t(1, 1, static_cast<int>(values.size()));
  std::copy(values.begin(), values.end(), t.storage().begin());
  return t;
}

}  // namespace

TEST_CASE("direction sets") {
  CHECK(direction_count(NeighborhoodMode::Four) == 4);
  CHECK(direction_count(NeighborhoodMode::Eight) == 8);
  const auto four = directions(NeighborhoodMode::Four);
  const auto eight = directions(NeighborhoodMode::Eight);
  for (int i = 0; i < 4; ++i) {
    CHECK(four[i] == eight[i]);
    CHECK_FALSE(four[i].diagonal());
    CHECK(eight[i + 4].diagonal());
  }
  CHECK(parse_neighborhood_mode("EIGHT") == NeighborhoodMode::Eight);
  CHECK(to_string(NeighborhoodMode::Four) == "FOUR");
  CHECK_THROWS_AS(parse_neighborhood_mode("SIX"), ConfigError);
}

TEST_CASE("directional pass: zero gains give relu") {
  oracle::Random rnd(1);
  const auto x = rnd.tensor<double>(2, 3, 5);
  const std::vector<double> gains(2, 0.0);
  const auto h = directional_pass<double>(x, kDownLeft, gains);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(h.storage()[i] == std::max(0.0, x.storage()[i]));
}

TEST_CASE("directional pass: hand-evaluated row") {
  const std::vector<double> gains{0.5};
  const auto h = directional_pass<double>(row({0, 1, 0, 0}), kLeftToRight, gains);
  CHECK(h.storage() == Buffer<double>{0, 1, 0.5, 0.25});
  const auto back = directional_pass<double>(row({0, 1, 0, 0}), kRightToLeft, gains);
  CHECK(back.storage() == Buffer<double>{0.5, 1, 0, 0});
}

TEST_CASE("directional pass: diagonal one-hot") {
  Tensor<double> x(1, 3, 3);
  x(0, 1, 1) = 1.0;
  const std::vector<double> gains{1.0};
  const auto h = directional_pass<double>(x, kDownRight, gains);
  for (int y = 0; y < 3; ++y) {
    for (int xx = 0; xx < 3; ++xx) {
      const bool expect = (y == 1 && xx == 1) || (y == 2 && xx == 2);
      CHECK((h(0, y, xx) != 0.0) == expect);
    }
  }
  CHECK(h(0, 2, 2) == 1.0);
}

TEST_CASE("directional pass matches the per-pixel recurrence in every direction") {
  oracle::Random rnd(2);
  for (auto mode : {NeighborhoodMode::Eight}) {
    for (const Direction d : directions(mode)) {
      for (int trial = 0; trial < 5; ++trial) {
        const int h = rnd.integer(1, 7), w = rnd.integer(1, 7), c = rnd.integer(1, 3);
        const auto x = rnd.tensor<double>(c, h, w);
        std::vector<double> gains(c);
        rnd.fill(gains, -1.0, 1.5);
        const auto got = directional_pass<double>(x, d, gains);
        const auto want = oracle::directional(x, d.dy, d.dx, gains);
        for (std::size_t i = 0; i < got.size(); ++i) CHECK(got.storage()[i] == doctest::Approx(want.storage()[i]).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("directional pass is causal") {
  oracle::Random rnd(3);
  Tensor<double> x = rnd.tensor<double>(1, 4, 6, -1.0, 0.0);  // relu -> 0
  const int col = 3;
  for (int y = 0; y < 4; ++y) x(0, y, col) = 1.0 + y;
  const std::vector<double> gains{0.7};
  const auto h = directional_pass<double>(x, kLeftToRight, gains);
  for (int y = 0; y < 4; ++y) {
    for (int xx = 0; xx < col; ++xx) CHECK(h(0, y, xx) == std::max(0.0, x(0, y, xx)));
    CHECK(h(0, y, col) == 1.0 + y);
  }
  CHECK(h.shape() == x.shape());
}

TEST_CASE("directional gradients agree with finite differences") {
  for (const Direction d : directions(NeighborhoodMode::Eight)) {
    CHECK(grad_check_directional(d, 1).max_relative_error < 1e-3);
    CHECK(grad_check_directional(d, 2, 4, 4, 2).max_relative_error < 1e-3);
  }
}

TEST_CASE("SAB: zero input and zero biases give 0.5") {
  for (auto mode : {NeighborhoodMode::Four, NeighborhoodMode::Eight}) {
    Sab<double> sab(4, mode, "sab");
    Rng rng(1);
    sab.init(rng);
    const auto a = sab.forward(Tensor<double>(4, 5, 6));
    CHECK(a.shape() == Shape{1, 5, 6});
    for (double v : a.storage()) CHECK(v == 0.5);
  }
}

TEST_CASE("SAB output lies strictly inside (0, 1)") {
  oracle::Random rnd(4);
  for (auto mode : {NeighborhoodMode::Four, NeighborhoodMode::Eight}) {
    Sab<float> sab(4, mode, "sab");
    Rng rng(2);
    sab.init(rng);
    for (int trial = 0; trial < 10; ++trial) {
      const auto x = rnd.tensor<float>(4, 8, 8, -20.0, 20.0);
      for (const auto held = sab.forward(x); float v : held.storage()) {
        CHECK(v > 0.0f);
        CHECK(v < 1.0f);
      }
    }
    // saturating inputs still stay inside the open interval
    sab.output_projection().bias().value[0] = 1e4f;
    for (const auto held = sab.forward(rnd.tensor<float>(4, 3, 3)); float v : held.storage()) CHECK(v < 1.0f);
    sab.output_projection().bias().value[0] = -1e4f;
    for (const auto held = sab.forward(rnd.tensor<float>(4, 3, 3)); float v : held.storage()) CHECK(v > 0.0f);
  }
}

TEST_CASE("SAB initial gains") {
  Sab<float> four(3, NeighborhoodMode::Four, "a");
  Sab<float> eight(3, NeighborhoodMode::Eight, "b");
  Rng rng(3);
  four.init(rng);
  eight.init(rng);
  CHECK(four.rounds().size() == 2);
  CHECK(four.rounds()[0].gains.value.size() == 12);
  CHECK(eight.rounds()[1].gains.value.size() == 24);
  for (float g : four.rounds()[0].gains.value) CHECK(g == 0.25f);
  for (float g : eight.rounds()[1].gains.value) CHECK(g == 0.125f);
}

TEST_CASE("EIGHT with silenced diagonals reduces to FOUR") {
  oracle::Random rnd(5);
  Sab<double> four(3, NeighborhoodMode::Four, "f");
  Sab<double> eight(3, NeighborhoodMode::Eight, "e");
  Rng rng(4);
  four.init(rng);
  eight.init(rng);
  copy_four_into_eight(four, eight);
  for (int trial = 0; trial < 5; ++trial) {
    const auto x = rnd.tensor<double>(3, 6, 5);
    const auto a = four.forward(x);
    const auto b = eight.forward(x);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::fabs(a.storage()[i] - b.storage()[i]) <= 1e-12 * std::fabs(a.storage()[i]));
  }
}

TEST_CASE("SAB gradients agree with finite differences") {
  CHECK(grad_check_sab(NeighborhoodMode::Four, 1).max_relative_error < 1e-3);
  CHECK(grad_check_sab(NeighborhoodMode::Eight, 1).max_relative_error < 1e-3);
}

TEST_CASE("SARB identities") {
  oracle::Random rnd(6);
  Sarb<float> sarb(4, "s");
  Rng rng(5);
  sarb.init(rng);
  const auto x = rnd.tensor<float>(4, 5, 5);
  const auto closed = sarb.forward(x, Tensor<float>(1, 5, 5, 0.0f));
  CHECK(closed.storage() == x.storage());

  std::fill(sarb.conv_b().weight().value.begin(), sarb.conv_b().weight().value.end(), 0.0f);
  const auto zero_b = sarb.forward(x, Tensor<float>(1, 5, 5, 0.7f));
  CHECK(zero_b.storage() == x.storage());
  CHECK_THROWS_AS(sarb.forward(x, Tensor<float>(1, 4, 5, 0.5f)), ShapeError);
}

TEST_CASE("SARB with an open gate equals an unattended residual block") {
  oracle::Random rnd(7);
  Sarb<double> sarb(2, "s");
  Rng rng(6);
  sarb.init(rng);
  rnd.fill(sarb.conv_a().bias().value);
  rnd.fill(sarb.conv_b().bias().value);
  const auto x = rnd.tensor<double>(2, 4, 4);
  const auto out = sarb.forward(x, Tensor<double>(1, 4, 4, 1.0));
  auto hidden = oracle::conv(x, sarb.conv_a().spec(), sarb.conv_a().weight().value, sarb.conv_a().bias().value);
  for (auto& v : hidden.storage()) v = std::max(0.0, v);
  const auto res = oracle::conv(hidden, sarb.conv_b().spec(), sarb.conv_b().weight().value, sarb.conv_b().bias().value);
  for (std::size_t i = 0; i < x.size(); ++i) CHECK(out.storage()[i] == doctest::Approx(x.storage()[i] + res.storage()[i]).epsilon(1e-12));
}

TEST_CASE("SARB gradients") {
  CHECK(grad_check_sarb(1).max_relative_error < 1e-3);
  CHECK(grad_check_sarb(2).max_relative_error < 1e-3);
  for (double g : sarb_conv_a_gradient_with_closed_gate(3)) CHECK(g == 0.0);
}
