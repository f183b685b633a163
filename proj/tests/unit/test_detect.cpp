#include <doctest.h>

#include <fstream>

#include "cloudgan/detect/detector.hpp"
#include "cloudgan/detect/tile_source.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace cloudgan;
using namespace cloudgan::detect;
using data::Raster;
namespace fs = std::filesystem;

namespace {

BandStack uniform_rgb(float r, float g, float b, int h = 4, int w = 4) {
  Raster img(h, w, 3);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) {
      img.at(y, x, 0) = r;
      img.at(y, x, 1) = g;
      img.at(y, x, 2) = b;
    }
  return stack_from_rgb(img);
}

BandStack with_band(BandStack s, const std::string& name, float value) {
  Tensor<float> extra(1, s.height(), s.width(), value);
  const std::vector<Tensor<float>> parts{s.data, extra};
  s.data = concat_channels<float>(parts);
  s.band_names.push_back(name);
  return s;
}

}  // namespace

TEST_CASE("rgb detector corner cases") {
  const CloudMask black = detect_rgb(uniform_rgb(0, 0, 0));
  for (float p : black.prob.storage()) CHECK(p == 0.0f);
  CHECK(mask_stats(black).fraction == 0.0);

  const CloudMask white = detect_rgb(uniform_rgb(1, 1, 1));
  for (float p : white.prob.storage()) CHECK(p == 1.0f);
  CHECK(mask_stats(white).fraction == 1.0);

  const CloudMask gray = detect_rgb(uniform_rgb(0.8f, 0.8f, 0.8f));
  CHECK(gray.prob.storage()[0] == doctest::Approx(0.8));
  CHECK(mask_stats(gray).fraction == 1.0);
  CHECK(gray.threshold == kDefaultThreshold);
}

TEST_CASE("rgb probability matches the scalar formula and is permutation invariant") {
  oracle::Random rnd(1);
  const Raster img = rnd.raster(9, 7, 3);
  const CloudMask m = detect_rgb(stack_from_rgb(img), 0.4);
  Raster swapped(9, 7, 3);
  for (int y = 0; y < 9; ++y) {
    for (int x = 0; x < 7; ++x) {
      const double r = img.at(y, x, 0), g = img.at(y, x, 1), b = img.at(y, x, 2);
      const double bright = (r + g + b) / 3.0;
      const double white = 1.0 - (std::max({r, g, b}) - std::min({r, g, b}));
      CHECK(m.prob(0, y, x) == doctest::Approx(std::clamp(bright * white, 0.0, 1.0)).epsilon(1e-6));
      CHECK(m.mask(0, y, x) == (m.prob(0, y, x) >= 0.4 ? 1 : 0));
      swapped.at(y, x, 0) = img.at(y, x, 2);
      swapped.at(y, x, 1) = img.at(y, x, 0);
      swapped.at(y, x, 2) = img.at(y, x, 1);
    }
  }
  CHECK(detect_rgb(stack_from_rgb(swapped), 0.4).prob.storage() == m.prob.storage());
}

TEST_CASE("rgb bands are found under common aliases") {
  BandStack s = uniform_rgb(0.9f, 0.9f, 0.9f);
  s.band_names = {"B04", "B03", "B02"};
  CHECK(mask_stats(detect_rgb(s)).fraction == 1.0);
  s.band_names = {"B04", "B03", "B08"};
  CHECK_THROWS_AS(detect_rgb(s), ConfigError);
}

TEST_CASE("multiband rules") {
  const BandStack base = uniform_rgb(0.5f, 0.5f, 0.5f);  // prob 0.5
  CHECK(detect_multiband(base, {}).prob.storage() == detect_rgb(base).prob.storage());
  CHECK(detect_multiband(base, {}).mask.storage() == detect_rgb(base).mask.storage());

  const BandStack cirrus = with_band(base, "B10", 0.05f);
  const std::vector<BandRule> boost{{"B10", 0.01, 0.3, BandRule::Kind::Boost}};
  const CloudMask m = detect_multiband(cirrus, boost);
  CHECK(m.prob.storage()[0] == doctest::Approx(0.8));
  CHECK(m.mask.storage()[0] == 1);

  const BandStack water = with_band(base, "B08", 0.01f);
  const std::vector<BandRule> penalty{{"B08", 0.05, 0.3, BandRule::Kind::Penalty}};
  CHECK(detect_multiband(water, penalty).prob.storage()[0] == doctest::Approx(0.2));
  CHECK(detect_multiband(with_band(base, "B08", 0.5f), penalty).prob.storage()[0] == doctest::Approx(0.5));

  CHECK_THROWS_AS(detect_multiband(base, boost), ConfigError);
  const auto strong = std::vector<BandRule>{{"B10", 0.0, 5.0, BandRule::Kind::Boost}};
  CHECK(detect_multiband(cirrus, strong).prob.storage()[0] == 1.0f);
}

TEST_CASE("rules JSON round trip and defaults") {
  const auto rules = default_rules();
  REQUIRE(rules.size() == 2);
  CHECK(rules[0].band == "B10");
  const auto back = rules_from_json(rules_to_json(rules));
  REQUIRE(back.size() == 2);
  CHECK(back[1].band == rules[1].band);
  CHECK(back[1].kind == BandRule::Kind::Penalty);
  CHECK(back[1].threshold == rules[1].threshold);
  CHECK_THROWS_AS(rules_from_json(nlohmann::json::parse(R"([{"band": "B1", "min": 2}])")), ConfigError);
  CHECK_THROWS_AS(rules_from_json(nlohmann::json::parse(R"([{"band": "B1", "kind": "shadow"}])")), ConfigError);
}

TEST_CASE("series filter suppresses static brightness and keeps transients") {
  std::vector<BandStack> frames;
  for (int t = 0; t < 5; ++t) {
    Raster img(12, 12, 3, 0.3f);
    for (int y = 2; y < 5; ++y)
      for (int x = 2; x < 6; ++x)
        for (int c = 0; c < 3; ++c) img.at(y, x, c) = 0.9f;  // roof in every frame
    if (t == 3) {
      for (int y = 7; y < 11; ++y)
        for (int x = 7; x < 11; ++x)
          for (int c = 0; c < 3; ++c) img.at(y, x, c) = 0.95f;  // passing cloud
    }
    frames.push_back(stack_from_rgb(img, "2024-01-0" + std::to_string(t + 1)));
  }
  const auto masks = detect_series(frames);
  REQUIRE(masks.size() == 5);
  for (int t = 0; t < 5; ++t) {
    const CloudMask single = detect_rgb(frames[t]);
    CHECK(single.mask(0, 3, 3) == 1);        // the roof fools the single-frame detector
    CHECK(masks[t].mask(0, 3, 3) == 0);      // but not the series filter
    CHECK(masks[t].mask(0, 8, 8) == (t == 3 ? 1 : 0));
    for (std::size_t i = 0; i < single.mask.size(); ++i) CHECK(masks[t].mask.storage()[i] <= single.mask.storage()[i]);
  }
  CHECK_THROWS_AS(detect_series(std::vector<BandStack>{frames[0]}), ConfigError);
  std::vector<BandStack> mismatched{frames[0], uniform_rgb(0.5f, 0.5f, 0.5f)};
  CHECK_THROWS_AS(detect_series(mismatched), ShapeError);
}

TEST_CASE("overlay") {
  oracle::Random rnd(2);
  const Raster img = rnd.raster(6, 6, 3);
  CloudMask empty = detect_rgb(uniform_rgb(0, 0, 0, 6, 6));
  CHECK(overlay(img, empty) == img);
  CHECK(overlay(overlay(img, empty), empty) == img);

  CloudMask full = detect_rgb(uniform_rgb(1, 1, 1, 6, 6));
  const Raster tinted = overlay(img, full, Tint{0.2f, 0.4f, 0.6f}, 1.0);
  for (int y = 0; y < 6; ++y)
    for (int x = 0; x < 6; ++x) {
      CHECK(tinted.at(y, x, 0) == doctest::Approx(0.2f));
      CHECK(tinted.at(y, x, 2) == doctest::Approx(0.6f));
    }

  CloudMask half = full;
  for (int y = 0; y < 6; ++y)
    for (int x = 3; x < 6; ++x) half.mask(0, y, x) = 0;
  const Raster o = overlay(img, half);
  for (int y = 0; y < 6; ++y)
    for (int x = 3; x < 6; ++x)
      for (int c = 0; c < 3; ++c) CHECK(o.at(y, x, c) == img.at(y, x, c));
  CHECK(o.at(0, 0, 0) == doctest::Approx(0.5 * img.at(0, 0, 0) + 0.5));
  CHECK_THROWS_AS(overlay(rnd.raster(5, 6, 3), half), ShapeError);
}

TEST_CASE("mask statistics and IoU") {
  CloudMask m = detect_rgb(uniform_rgb(0, 0, 0, 4, 4));
  CHECK(mask_stats(m).fraction == 0.0);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) m.mask(0, y, x) = (x + y) % 2;
  CHECK(mask_stats(m).fraction == 0.5);
  Tensor<std::uint8_t> a(1, 2, 2), b(1, 2, 2);
  CHECK(mask_iou(a, b) == 1.0);
  a.storage() = {1, 1, 0, 0};
  b.storage() = {1, 0, 1, 0};
  CHECK(mask_iou(a, b) == doctest::Approx(1.0 / 3.0));
  const Raster r = mask_raster(m);
  CHECK(r.at(0, 1, 0) == 1.0f);
  CHECK(r.at(0, 0, 0) == 0.0f);
}

TEST_CASE("band stack files and the filesystem tile source") {
  const fs::path root = scratch_dir("detect_tiles");
  oracle::Random rnd(3);
  for (const char* stamp : {"2024-03-01T10:00:00Z", "2024-01-01T10:00:00Z", "2024-02-01T10:00:00Z"}) {
    BandStack s{rnd.tensor<float>(4, 6, 8, 0.0, 1.0), {"B02", "B03", "B04", "B10"}, std::string(stamp)};
    save_band_stack(s, root / std::string(stamp).substr(0, 10));
  }
  const BandStack one = load_band_stack(root / "2024-02-01");
  CHECK(one.band_names.size() == 4);
  CHECK(one.timestamp.value() == "2024-02-01T10:00:00Z");

  FilesystemTileSource source(root);
  const auto all = source.fetch({});
  REQUIRE(all.size() == 3);
  CHECK(*all[0].timestamp < *all[1].timestamp);
  CHECK(*all[1].timestamp < *all[2].timestamp);

  TileRequest req;
  req.time_from = "2024-01-15";
  req.bands = {"B04", "B10"};
  req.bbox = PixelBox{1, 2, 5, 6};
  const auto some = source.fetch(req);
  REQUIRE(some.size() == 2);
  CHECK(some[0].band_names == std::vector<std::string>{"B04", "B10"});
  CHECK(some[0].height() == 4);
  CHECK(some[0].width() == 4);
  CHECK(some[0].data(0, 0, 0) == one.data(2, 2, 1));

  req.bands = {"B12"};
  CHECK_THROWS_AS(source.fetch(req), ConfigError);
  req.bands = {};
  req.bbox = PixelBox{0, 0, 9, 9};
  CHECK_THROWS_AS(source.fetch(req), ConfigError);
  CHECK_THROWS_AS(FilesystemTileSource(root / "nope"), DataError);

  std::ofstream(root / "2024-02-01" / "B10.f32", std::ios::trunc) << "xx";
  CHECK_THROWS_AS(load_band_stack(root / "2024-02-01"), DataError);
}
