#include "cloudgan/detect/tile_source.hpp"

#include <algorithm>

namespace cloudgan::detect {
namespace fs = std::filesystem;

FilesystemTileSource::FilesystemTileSource(fs::path root) : root_(std::move(root)) {
  if (!fs::is_directory(root_)) throw DataError("tile root " + root_.string() + " does not exist");
}

std::vector<BandStack> FilesystemTileSource::fetch(const TileRequest& request) const {
  std::vector<BandStack> out;
  for (const auto& entry : fs::directory_iterator(root_)) {
    if (!entry.is_directory() || !fs::exists(entry.path() / "meta.json")) continue;
    BandStack stack = load_band_stack(entry.path());
    const std::string stamp = stack.timestamp.value_or(entry.path().filename().string());
    if (!request.time_from.empty() && stamp < request.time_from) continue;
    if (!request.time_to.empty() && stamp > request.time_to) continue;
    stack.timestamp = stamp;
    out.push_back(crop_stack(stack, request));
  }
  std::sort(out.begin(), out.end(), [](const BandStack& a, const BandStack& b) { return *a.timestamp < *b.timestamp; });
  return out;
}

BandStack crop_stack(const BandStack& stack, const TileRequest& request) {
  PixelBox box = request.bbox.value_or(PixelBox{0, 0, stack.width(), stack.height()});
  if (box.x0 < 0 || box.y0 < 0 || box.x1 > stack.width() || box.y1 > stack.height() || box.x0 >= box.x1 ||
      box.y0 >= box.y1) {
    throw ConfigError("tile request window lies outside the stack");
  }
  const std::vector<std::string> bands = request.bands.empty() ? stack.band_names : request.bands;
  BandStack out;
  out.band_names = bands;
  out.timestamp = stack.timestamp;
  out.data = Tensor<float>(static_cast<int>(bands.size()), box.y1 - box.y0, box.x1 - box.x0);
  for (std::size_t b = 0; b < bands.size(); ++b) {
    const auto plane = stack.band(bands[b]);
    for (int y = box.y0; y < box.y1; ++y) {
      for (int x = box.x0; x < box.x1; ++x) {
        out.data(static_cast<int>(b), y - box.y0, x - box.x0) = plane[static_cast<std::size_t>(y) * stack.width() + x];
      }
    }
  }
  out.validate();
  return out;
}

}  // namespace cloudgan::detect
