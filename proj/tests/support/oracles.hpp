#pragma once

// Test-only reference implementations. They are written as plain loops that
// follow the textbook definitions and share no code with the library.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <span>
#include <type_traits>
#include <vector>

#include "cloudgan/core/conv2d.hpp"
#include "cloudgan/core/tensor.hpp"
#include "cloudgan/data/raster.hpp"

namespace oracle {

using cloudgan::Tensor;
using cloudgan::data::Raster;

inline double psnr(const Raster& a, const Raster& b) {
  double sum = 0.0;
  int n = 0;
  for (int y = 0; y < a.height(); ++y) {
    for (int x = 0; x < a.width(); ++x) {
      for (int c = 0; c < a.channels(); ++c) {
        const double d = static_cast<double>(a.at(y, x, c)) - static_cast<double>(b.at(y, x, c));
        sum += d * d;
        ++n;
      }
    }
  }
  const double mse = sum / n;
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

/// Direct sliding-window SSIM: 2-D Gaussian weights, centred second moments.
inline double ssim(const Raster& a, const Raster& b, int win = 11, double sigma = 1.5) {
  const double c1 = 0.01 * 0.01;
  const double c2 = 0.03 * 0.03;
  std::vector<double> w(static_cast<std::size_t>(win) * win);
  double total = 0.0;
  const int r = win / 2;
  for (int i = 0; i < win; ++i) {
    for (int j = 0; j < win; ++j) {
      const double dy = i - r;
      const double dx = j - r;
      w[i * win + j] = std::exp(-(dy * dy + dx * dx) / (2.0 * sigma * sigma));
      total += w[i * win + j];
    }
  }
  for (auto& v : w) v /= total;

  double channel_sum = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    double acc = 0.0;
    int windows = 0;
    for (int y0 = 0; y0 + win <= a.height(); ++y0) {
      for (int x0 = 0; x0 + win <= a.width(); ++x0) {
        double ma = 0.0, mb = 0.0;
        for (int i = 0; i < win; ++i) {
          for (int j = 0; j < win; ++j) {
            ma += w[i * win + j] * a.at(y0 + i, x0 + j, c);
            mb += w[i * win + j] * b.at(y0 + i, x0 + j, c);
          }
        }
        double va = 0.0, vb = 0.0, cov = 0.0;
        for (int i = 0; i < win; ++i) {
          for (int j = 0; j < win; ++j) {
            const double da = a.at(y0 + i, x0 + j, c) - ma;
            const double db = b.at(y0 + i, x0 + j, c) - mb;
            va += w[i * win + j] * da * da;
            vb += w[i * win + j] * db * db;
            cov += w[i * win + j] * da * db;
          }
        }
        acc += ((2 * ma * mb + c1) * (2 * cov + c2)) / ((ma * ma + mb * mb + c1) * (va + vb + c2));
        ++windows;
      }
    }
    channel_sum += acc / windows;
  }
  return channel_sum / a.channels();
}

/// Per-pixel recurrence h[p] = relu(x[p] + g * h[p - d]), evaluated by walking
/// each pixel's chain of predecessors back to the border.
template <typename T>
Tensor<T> directional(const Tensor<T>& x, int dy, int dx, const std::vector<T>& gains) {
  Tensor<T> h(x.shape());
  for (int c = 0; c < x.channels(); ++c) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        std::vector<std::pair<int, int>> chain;
        int py = y, px = xx;
        while (py >= 0 && px >= 0 && py < x.height() && px < x.width()) {
          chain.emplace_back(py, px);
          py -= dy;
          px -= dx;
        }
        T value = 0;
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
          value = std::max(T(0), x(c, it->first, it->second) + gains[c] * value);
        }
        h(c, y, xx) = value;
      }
    }
  }
  return h;
}

/// Direct convolution with zero padding, weights [out][in][ky][kx].
template <typename T>
Tensor<T> conv(const Tensor<T>& x, const cloudgan::ConvSpec& s, std::type_identity_t<std::span<const T>> weight,
               std::type_identity_t<std::span<const T>> bias) {
  const int oh = (x.height() + s.pad_begin + s.pad_end - s.kernel) / s.stride + 1;
  const int ow = (x.width() + s.pad_begin + s.pad_end - s.kernel) / s.stride + 1;
  Tensor<T> out(s.out_channels, oh, ow);
  for (int o = 0; o < s.out_channels; ++o) {
    for (int y = 0; y < oh; ++y) {
      for (int xx = 0; xx < ow; ++xx) {
        T acc = bias[o];
        for (int i = 0; i < s.in_channels; ++i) {
          for (int ky = 0; ky < s.kernel; ++ky) {
            for (int kx = 0; kx < s.kernel; ++kx) {
              const int iy = y * s.stride + ky - s.pad_begin;
              const int ix = xx * s.stride + kx - s.pad_begin;
              if (iy < 0 || ix < 0 || iy >= x.height() || ix >= x.width()) continue;
              acc += weight[((o * s.in_channels + i) * s.kernel + ky) * s.kernel + kx] * x(i, iy, ix);
            }
          }
        }
        out(o, y, xx) = acc;
      }
    }
  }
  return out;
}

inline double l1(const Tensor<float>& a, const Tensor<float>& b) {
  double sum = 0.0;
  for (int c = 0; c < a.channels(); ++c)
    for (int y = 0; y < a.height(); ++y)
      for (int x = 0; x < a.width(); ++x) sum += std::fabs(static_cast<double>(a(c, y, x)) - b(c, y, x));
  return sum / static_cast<double>(a.size());
}

inline double attention_loss(const std::vector<Tensor<float>>& maps, const Tensor<float>& m) {
  double total = 0.0;
  for (const auto& a : maps) {
    double s = 0.0;
    for (int y = 0; y < m.height(); ++y)
      for (int x = 0; x < m.width(); ++x) {
        const double d = static_cast<double>(a(0, y, x)) - m(0, y, x);
        s += d * d;
      }
    total += s / static_cast<double>(m.size());
  }
  return total / static_cast<double>(maps.size());
}

/// Test-side randomness (independent of the library generator).
struct Random {
  explicit Random(std::uint64_t seed) : engine(seed) {}
  std::mt19937_64 engine;

  double uniform(double lo = 0.0, double hi = 1.0) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }

  Raster raster(int h, int w, int c) {
    Raster r(h, w, c);
    for (int y = 0; y < h; ++y)
      for (int x = 0; x < w; ++x)
        for (int k = 0; k < c; ++k) r.at(y, x, k) = static_cast<float>(uniform());
    return r;
  }
  template <typename T>
  Tensor<T> tensor(int c, int h, int w, double lo = -1.0, double hi = 1.0) {
    Tensor<T> t(c, h, w);
    for (auto& v : t.storage()) v = static_cast<T>(uniform(lo, hi));
    return t;
  }
  template <typename C>
  void fill(C& v, double lo = -1.0, double hi = 1.0) {
    for (auto& e : v) e = static_cast<typename C::value_type>(uniform(lo, hi));
  }
};

template <typename A, typename B>
double max_abs_diff(const A& a, const B& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(static_cast<double>(a[i]) - b[i]));
  return m;
}

}  // namespace oracle
