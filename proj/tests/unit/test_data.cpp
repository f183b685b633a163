#include <doctest.h>

#include <fstream>
#include <set>

#include <opencv2/imgcodecs.hpp>

#include "cloudgan/data/dataset.hpp"
#include "cloudgan/data/synthetic.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

using namespace cloudgan;
using namespace cloudgan::data;
namespace fs = std::filesystem;

namespace {

void touch_image(const fs::path& path, int size = 4) {
  fs::create_directories(path.parent_path());
  save_raster(Raster(size, size, 3, 0.25f), path);
}

double max_error(const Raster& a, const Raster& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.tensor().size(); ++i) {
    m = std::max(m, std::fabs(static_cast<double>(a.tensor().storage()[i]) - b.tensor().storage()[i]));
  }
  return m;
}

}  // namespace

TEST_CASE("raster invariants") {
  CHECK_THROWS_AS(Raster::from_tensor(Tensor<float>(3, 2, 2, 1.5f)), NumericError);
  CHECK_THROWS_AS(Raster::from_tensor(Tensor<float>(3, 0, 2)), ShapeError);
  CHECK_THROWS_AS(Raster::from_tensor(Tensor<float>(1, 1, 1, std::nanf(""))), NumericError);
  const Raster c = Raster::clamped(Tensor<float>(1, 2, 2, 1.2f));
  CHECK(c.at(0, 0, 0) == 1.0f);
}

TEST_CASE("8-bit 512x512 RGB loads at full size within [0, 1]") {
  const fs::path dir = scratch_dir("data_load512");
  oracle::Random rnd(1);
  save_raster(rnd.raster(512, 512, 3), dir / "a.png");
  const Raster r = load_raster(dir / "a.png");
  CHECK(r.height() == 512);
  CHECK(r.width() == 512);
  CHECK(r.channels() == 3);
  CHECK(*std::max_element(r.tensor().storage().begin(), r.tensor().storage().end()) <= 1.0f);
}

TEST_CASE("1x1 black pixel loads as a single zero") {
  const fs::path dir = scratch_dir("data_black");
  cv::imwrite((dir / "k.png").string(), cv::Mat(1, 1, CV_8UC1, cv::Scalar(0)));
  const Raster r = load_raster(dir / "k.png");
  CHECK(r.tensor().size() == 1);
  CHECK(r.at(0, 0, 0) == 0.0f);
}

TEST_CASE("16-bit values scale by 65535") {
  const fs::path dir = scratch_dir("data_16");
  cv::imwrite((dir / "h.png").string(), cv::Mat(2, 2, CV_16UC1, cv::Scalar(32768)));
  const Raster r = load_raster(dir / "h.png");
  CHECK(static_cast<double>(r.at(1, 1, 0)) == doctest::Approx(32768.0 / 65535.0).epsilon(1e-7));
}

TEST_CASE("channel order follows the file (RGB)") {
  const fs::path dir = scratch_dir("data_rgb");
  Raster red(2, 2, 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 2; ++x) red.at(y, x, 0) = 1.0f;
  save_raster(red, dir / "r.png");
  const cv::Mat m = cv::imread((dir / "r.png").string(), cv::IMREAD_UNCHANGED);
  CHECK(m.at<cv::Vec3b>(0, 0)[2] == 255);  // OpenCV stores BGR
  CHECK(load_raster(dir / "r.png") == red);
}

TEST_CASE("save/load round trips respect quantisation bounds") {
  const fs::path dir = scratch_dir("data_roundtrip");
  oracle::Random rnd(2);
  const Raster r = rnd.raster(16, 16, 3);
  save_raster(r, dir / "a8.png", 8);
  CHECK(max_error(load_raster(dir / "a8.png"), r) <= 1.0 / 255.0);
  save_raster(r, dir / "a16.png", 16);
  CHECK(max_error(load_raster(dir / "a16.png"), r) <= 1.0 / 65535.0);
  save_raster(r, dir / "a16.tif", 16);
  CHECK(max_error(load_raster(dir / "a16.tif"), r) <= 1.0 / 65535.0);
  const Raster zeros(5, 7, 3);
  save_raster(zeros, dir / "z.png");
  CHECK(load_raster(dir / "z.png") == zeros);
}

TEST_CASE("raster I/O errors") {
  const fs::path dir = scratch_dir("data_errors");
  CHECK_THROWS_AS(load_raster(dir / "missing.png"), DataError);
  std::ofstream(dir / "corrupt.png") << "definitely not a png";
  CHECK_THROWS_AS(load_raster(dir / "corrupt.png"), DataError);
  cv::imwrite((dir / "float.tif").string(), cv::Mat(2, 2, CV_32FC1, cv::Scalar(0.5)));
  CHECK_THROWS_AS(load_raster(dir / "float.tif"), DataError);
  CHECK_THROWS_AS(save_raster(Raster(2, 2, 3), dir / "no" / "such" / "dir.png"), IoError);
  CHECK_THROWS_AS(save_raster(Raster(2, 2, 3), dir / "x.png", 12), ConfigError);
}

TEST_CASE("manifest pairs matching stems and reports strays") {
  const fs::path root = scratch_dir("data_manifest");
  for (const char* id : {"b", "a", "c"}) {
    touch_image(root / kCloudDir / (std::string(id) + ".png"));
    touch_image(root / kLabelDir / (std::string(id) + ".png"));
  }
  touch_image(root / kCloudDir / "orphan.png");
  const DatasetManifest m = build_manifest(root);
  CHECK(m.pair_ids == std::vector<std::string>{"a", "b", "c"});
  REQUIRE(m.warnings.size() == 1);
  CHECK(m.warnings[0].id == "orphan");
  CHECK(m.split.empty());
}

TEST_CASE("manifest of empty directories and missing directories") {
  const fs::path root = scratch_dir("data_manifest_empty");
  fs::create_directories(root / kCloudDir);
  fs::create_directories(root / kLabelDir);
  CHECK(build_manifest(root).pair_ids.empty());
  fs::remove_all(root / kLabelDir);
  CHECK_THROWS_AS(build_manifest(root), DataError);
}

namespace {

DatasetManifest fake_manifest(int n) {
  DatasetManifest m;
  m.root = "/nowhere";
  for (int i = 0; i < n; ++i) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%05d", i);
    m.pair_ids.push_back(buf);
  }
  return m;
}

}  // namespace

TEST_CASE("split 320/80 out of a 400 pool is disjoint and sized") {
  const DatasetManifest m = fake_manifest(500);
  const DatasetManifest s = split_manifest(m, SplitSpec{320, 80, 11, 400});
  const auto train = s.ids(SplitRole::Train);
  const auto val = s.ids(SplitRole::Val);
  CHECK(train.size() == 320);
  CHECK(val.size() == 80);
  std::set<std::string> all(train.begin(), train.end());
  for (const auto& id : val) CHECK(all.insert(id).second);
  for (const auto& id : all) CHECK(id < "00400");  // drawn from the first 400 sorted stems
}

TEST_CASE("split property: counts and disjointness for random specs") {
  oracle::Random rnd(3);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = rnd.integer(0, 60);
    const int pool = rnd.integer(0, n);
    const int avail = pool == 0 ? n : pool;
    const int t = rnd.integer(0, avail);
    const int v = rnd.integer(0, avail - t);
    const DatasetManifest s = split_manifest(fake_manifest(n), SplitSpec{t, v, static_cast<std::uint64_t>(trial), pool});
    const auto train = s.ids(SplitRole::Train);
    const auto val = s.ids(SplitRole::Val);
    CHECK(static_cast<int>(train.size()) == t);
    CHECK(static_cast<int>(val.size()) == v);
    std::set<std::string> both(train.begin(), train.end());
    both.insert(val.begin(), val.end());
    CHECK(static_cast<int>(both.size()) == t + v);
    CHECK(s.split.size() == both.size());
  }
}

TEST_CASE("split determinism and edge cases") {
  const DatasetManifest m = fake_manifest(30);
  const auto a = manifest_to_json(split_manifest(m, SplitSpec{20, 5, 9, 0})).dump();
  const auto b = manifest_to_json(split_manifest(m, SplitSpec{20, 5, 9, 0})).dump();
  CHECK(a == b);
  CHECK(a != manifest_to_json(split_manifest(m, SplitSpec{20, 5, 10, 0})).dump());
  const DatasetManifest all = split_manifest(m, SplitSpec{30, 0, 1, 0});
  CHECK(all.ids(SplitRole::Train).size() == 30);
  CHECK(all.ids(SplitRole::Val).empty());
  CHECK_THROWS_AS(split_manifest(m, SplitSpec{25, 10, 1, 0}), ConfigError);
}

TEST_CASE("split follows the documented Fisher-Yates walk") {
  const DatasetManifest m = fake_manifest(10);
  std::vector<std::string> ids = m.pair_ids;
  Rng rng(5);
  for (std::size_t i = ids.size() - 1; i >= 1; --i) std::swap(ids[i], ids[rng.bounded(i + 1)]);
  const DatasetManifest s = split_manifest(m, SplitSpec{6, 4, 5, 0});
  for (int i = 0; i < 6; ++i) CHECK(s.split.at(ids[i]) == SplitRole::Train);
  for (int i = 6; i < 10; ++i) CHECK(s.split.at(ids[i]) == SplitRole::Val);
}

TEST_CASE("manifest JSON round trip") {
  const fs::path dir = scratch_dir("data_manifest_json");
  const DatasetManifest s = split_manifest(fake_manifest(12), SplitSpec{6, 3, 2, 0});
  save_manifest(s, dir / "m.json");
  const DatasetManifest back = load_manifest(dir / "m.json");
  CHECK(back.pair_ids == s.pair_ids);
  CHECK(back.split == s.split);
  CHECK(back.root == s.root);
  CHECK_THROWS_AS(load_manifest(dir / "none.json"), DataError);
}

TEST_CASE("augment: identity, alignment, determinism, errors") {
  oracle::Random rnd(4);
  const ImagePair p{"x", rnd.raster(32, 32, 3), rnd.raster(32, 32, 3)};
  const ImagePair same = augment(p, 32, 1, false);
  CHECK(same.cloudy == p.cloudy);
  CHECK(same.clean == p.clean);

  const ImagePair twin{"t", p.cloudy, p.cloudy};
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ImagePair a = augment(twin, 16, seed);
    CHECK(a.cloudy == a.clean);
    CHECK(a.cloudy.height() == 16);
  }
  CHECK(augment(p, 12, 5).cloudy == augment(p, 12, 5).cloudy);
  CHECK_THROWS_AS(augment(p, 33, 1), ConfigError);
}

TEST_CASE("augment crops both images at the same window") {
  // Marked fixture: a bright square at a known spot in the clean image; the
  // cloudy image carries the same square shifted to a dark background.
  Raster cloudy(512, 512, 3, 0.2f);
  Raster clean(512, 512, 3, 0.6f);
  for (int y = 200; y < 240; ++y)
    for (int x = 300; x < 340; ++x)
      for (int c = 0; c < 3; ++c) {
        cloudy.at(y, x, c) = 1.0f;
        clean.at(y, x, c) = 1.0f;
      }
  const ImagePair p{"m", cloudy, clean};
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const ImagePair a = augment(p, 256, seed);
    CHECK(a.cloudy.height() == 256);
    CHECK(a.clean.width() == 256);
    for (int y = 0; y < 256; ++y)
      for (int x = 0; x < 256; ++x) CHECK_EQ(a.cloudy.at(y, x, 0) == 1.0f, a.clean.at(y, x, 0) == 1.0f);
  }
}

TEST_CASE("model range mapping") {
  Raster r(1, 3, 1);
  r.at(0, 0, 0) = 0.5f;
  r.at(0, 1, 0) = 0.0f;
  r.at(0, 2, 0) = 1.0f;
  const Tensor<float> t = to_model_range(r);
  CHECK(t(0, 0, 0) == 0.0f);
  CHECK(t(0, 0, 1) == -1.0f);
  CHECK(t(0, 0, 2) == 1.0f);
  CHECK(from_model_range(t) == r);
  Tensor<float> out(1, 1, 2);
  out(0, 0, 0) = 1.4f;  // maps to 1.2 before the clamp
  out(0, 0, 1) = -3.0f;
  const Raster back = from_model_range(out);
  CHECK(back.at(0, 0, 0) == 1.0f);
  CHECK(back.at(0, 1, 0) == 0.0f);
  oracle::Random rnd(5);
  const Raster x = rnd.raster(8, 8, 3);
  CHECK(max_error(from_model_range(to_model_range(x)), x) < 1e-7);
}

TEST_CASE("synthetic scenes are deterministic and cloudy where alpha is high") {
  SyntheticOptions opts;
  opts.size = 64;
  const SyntheticScene a = synthesize_scene(3, opts);
  const SyntheticScene b = synthesize_scene(3, opts);
  CHECK(a.pair.cloudy == b.pair.cloudy);
  CHECK(a.pair.clean == b.pair.clean);
  CHECK_FALSE(a.pair.cloudy == synthesize_scene(4, opts).pair.cloudy);
  double alpha_max = 0.0;
  for (float v : a.cloud_alpha.storage()) alpha_max = std::max(alpha_max, static_cast<double>(v));
  CHECK(alpha_max > 0.1);
  CHECK(alpha_max <= opts.max_opacity + 1e-6);

  const fs::path root = scratch_dir("data_synth");
  write_synthetic_dataset(root, 3, 1, opts);
  const DatasetManifest m = build_manifest(root);
  CHECK(m.pair_ids == std::vector<std::string>{"00000", "00001", "00002"});
  const ImagePair p = load_pair(m, "00001");
  CHECK(p.cloudy.height() == 64);
}
