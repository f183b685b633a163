#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cloudgan/detect/band_stack.hpp"

namespace cloudgan::detect {

/// Pixel window [x0, x1) x [y0, y1).
struct PixelBox {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;
};

struct TileRequest {
  std::optional<PixelBox> bbox;   // whole tile when absent
  std::string time_from;          // inclusive ISO-8601 bound; empty = open
  std::string time_to;            // inclusive ISO-8601 bound; empty = open
  std::vector<std::string> bands; // all bands when empty
};

/// Supplier of band stacks for an area and time range.
class TileSource {
 public:
  virtual ~TileSource() = default;
  /// Stacks sorted by timestamp.
  virtual std::vector<BandStack> fetch(const TileRequest& request) const = 0;
};

/// Reads `<root>/<timestamp>/<band>.f32` + `meta.json` directories.
///
/// Timestamps compare lexicographically, which orders ISO-8601 strings of
/// one format chronologically.
class FilesystemTileSource final : public TileSource {
 public:
  explicit FilesystemTileSource(std::filesystem::path root);
  std::vector<BandStack> fetch(const TileRequest& request) const override;

 private:
  std::filesystem::path root_;
};

/// Band subset and pixel window of one stack.
BandStack crop_stack(const BandStack& stack, const TileRequest& request);

}  // namespace cloudgan::detect
