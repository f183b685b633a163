#include "cloudgan/attention/directional.hpp"

#include <array>
#include <string>

namespace cloudgan::attention {
namespace {

constexpr std::array<Direction, 8> kAllDirections{kLeftToRight, kRightToLeft, kTopToBottom, kBottomToTop,
                                                  kDownRight,   kDownLeft,    kUpRight,    kUpLeft};

void validate(Direction step, int channels, std::size_t gain_count) {
  if (step.dy < -1 || step.dy > 1 || step.dx < -1 || step.dx > 1 || (step.dy == 0 && step.dx == 0)) {
    throw ConfigError("directional pass: step must be a unit neighbour offset");
  }
  if (gain_count != static_cast<std::size_t>(channels)) {
    throw ShapeError("directional pass: " + std::to_string(gain_count) + " gains for " + std::to_string(channels) +
                     " channels");
  }
}

// Visits every pixel of an h x w plane so that p - step is visited before p.
template <typename Fn>
void scan(int height, int width, Direction step, bool reverse, Fn&& visit) {
  if (step.dy != 0) {
    for (int i = 0; i < height; ++i) {
      const int k = reverse ? height - 1 - i : i;
      const int y = step.dy > 0 ? k : height - 1 - k;
      for (int x = 0; x < width; ++x) visit(y, x);
    }
  } else {
    for (int j = 0; j < width; ++j) {
      const int k = reverse ? width - 1 - j : j;
      const int x = step.dx > 0 ? k : width - 1 - k;
      for (int y = 0; y < height; ++y) visit(y, x);
    }
  }
}

}  // namespace

std::string to_string(NeighborhoodMode mode) { return mode == NeighborhoodMode::Four ? "FOUR" : "EIGHT"; }

NeighborhoodMode parse_neighborhood_mode(std::string_view text) {
  if (text == "FOUR" || text == "four" || text == "4") return NeighborhoodMode::Four;
  if (text == "EIGHT" || text == "eight" || text == "8") return NeighborhoodMode::Eight;
  throw ConfigError("unknown neighbourhood mode '" + std::string(text) + "' (expected FOUR or EIGHT)");
}

std::span<const Direction> directions(NeighborhoodMode mode) {
  return {kAllDirections.data(), static_cast<std::size_t>(direction_count(mode))};
}

int direction_count(NeighborhoodMode mode) { return mode == NeighborhoodMode::Four ? 4 : 8; }

template <typename T>
Tensor<T> directional_pass(const Tensor<T>& x, Direction step, std::span<const T> gains) {
  validate(step, x.channels(), gains.size());
  const int height = x.height();
  const int width = x.width();
  Tensor<T> h(x.shape());
  for (int c = 0; c < x.channels(); ++c) {
    const T gain = gains[c];
    const T* in = x.channel(c).data();
    T* out = h.channel(c).data();
    scan(height, width, step, false, [&](int y, int xx) {
      const int py = y - step.dy;
      const int px = xx - step.dx;
      const T prev = (py >= 0 && py < height && px >= 0 && px < width) ? out[py * width + px] : T(0);
      const T pre = in[y * width + xx] + gain * prev;
      out[y * width + xx] = pre > T(0) ? pre : T(0);
    });
  }
  return h;
}

template <typename T>
Tensor<T> directional_pass_backward(const Tensor<T>& h, Direction step, std::span<const T> gains,
                                    const Tensor<T>& grad_h, std::span<T> grad_gains) {
  validate(step, h.channels(), gains.size());
  require_same_shape(h, grad_h, "directional pass backward");
  if (grad_gains.size() != gains.size()) throw ShapeError("directional pass backward: gain gradient size");
  const int height = h.height();
  const int width = h.width();
  // Holds the running upstream gradient; finalised to d/dx in reverse scan order.
  Tensor<T> grad_x = grad_h;
  for (int c = 0; c < h.channels(); ++c) {
    const T gain = gains[c];
    const T* out = h.channel(c).data();
    T* g = grad_x.channel(c).data();
    T grad_gain = T(0);
    scan(height, width, step, true, [&](int y, int xx) {
      const int idx = y * width + xx;
      const T grad_pre = out[idx] > T(0) ? g[idx] : T(0);
      g[idx] = grad_pre;
      const int py = y - step.dy;
      const int px = xx - step.dx;
      if (py >= 0 && py < height && px >= 0 && px < width) {
        g[py * width + px] += gain * grad_pre;
        grad_gain += grad_pre * out[py * width + px];
      }
    });
    grad_gains[c] += grad_gain;
  }
  return grad_x;
}

template Tensor<float> directional_pass(const Tensor<float>&, Direction, std::span<const float>);
template Tensor<double> directional_pass(const Tensor<double>&, Direction, std::span<const double>);
template Tensor<float> directional_pass_backward(const Tensor<float>&, Direction, std::span<const float>,
                                                 const Tensor<float>&, std::span<float>);
template Tensor<double> directional_pass_backward(const Tensor<double>&, Direction, std::span<const double>,
                                                  const Tensor<double>&, std::span<double>);

}  // namespace cloudgan::attention
