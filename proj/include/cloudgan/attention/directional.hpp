#pragma once

#include <span>
#include <string>
#include <string_view>

#include "cloudgan/core/tensor.hpp"

namespace cloudgan::attention {

enum class NeighborhoodMode { Four, Eight };

std::string to_string(NeighborhoodMode mode);
NeighborhoodMode parse_neighborhood_mode(std::string_view text);

/// Unit propagation step. The recurrence reads the neighbour at p - step,
/// so {0, +1} carries information left to right.
struct Direction {
  int dy = 0;
  int dx = 0;
  bool operator==(const Direction&) const = default;
  bool diagonal() const { return dy != 0 && dx != 0; }
};

inline constexpr Direction kLeftToRight{0, 1};
inline constexpr Direction kRightToLeft{0, -1};
inline constexpr Direction kTopToBottom{1, 0};
inline constexpr Direction kBottomToTop{-1, 0};
inline constexpr Direction kDownRight{1, 1};
inline constexpr Direction kDownLeft{1, -1};
inline constexpr Direction kUpRight{-1, 1};
inline constexpr Direction kUpLeft{-1, -1};

/// Axis-aligned directions first, then diagonals (EIGHT only). Fusion weights
/// are grouped in this order, F channels per direction.
std::span<const Direction> directions(NeighborhoodMode mode);
int direction_count(NeighborhoodMode mode);

/// h[p] = max(0, x[p] + gain[c] * h[p - step]) with h = 0 outside the image.
///
/// Rows are scanned in the direction of dy (columns in the direction of dx when
/// dy == 0); every pixel's predecessor is final before the pixel is visited, so
/// the result equals the naive per-pixel recurrence, diagonals included.
template <typename T>
Tensor<T> directional_pass(const Tensor<T>& x, Direction step, std::span<const T> gains);

/// Backward of directional_pass given its output h. Accumulates into grad_gains
/// and returns the gradient with respect to x.
template <typename T>
Tensor<T> directional_pass_backward(const Tensor<T>& h, Direction step, std::span<const T> gains,
                                    const Tensor<T>& grad_h, std::span<T> grad_gains);

}  // namespace cloudgan::attention
