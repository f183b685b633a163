#include "cloudgan/core/conv2d.hpp"

#include <Eigen/Core>
#include <cmath>

namespace cloudgan {
namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using ColVec = Eigen::Matrix<T, Eigen::Dynamic, 1>;

// Bounds the im2col buffer to ~16 MB of floats.
constexpr std::size_t kMaxColumnElements = std::size_t{1} << 22;

bool is_pointwise(const ConvSpec& s) {
  return s.kernel == 1 && s.stride == 1 && s.pad_begin == 0 && s.pad_end == 0;
}

template <typename T>
void im2col(const Tensor<T>& x, const ConvSpec& s, int out_w, int y0, int y1, RowMat<T>& cols) {
  const int k = s.kernel;
  const int n = (y1 - y0) * out_w;
  cols.resize(static_cast<Eigen::Index>(s.in_channels) * k * k, n);
  for (int c = 0; c < s.in_channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        T* row = cols.row((c * k + ky) * k + kx).data();
        for (int oy = y0; oy < y1; ++oy) {
          T* dst = row + (oy - y0) * out_w;
          const int iy = oy * s.stride - s.pad_begin + ky;
          if (iy < 0 || iy >= x.height()) {
            std::fill(dst, dst + out_w, T(0));
            continue;
          }
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * s.stride - s.pad_begin + kx;
            dst[ox] = (ix >= 0 && ix < x.width()) ? x(c, iy, ix) : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im_add(const RowMat<T>& cols, const ConvSpec& s, int out_w, int y0, int y1, Tensor<T>& dx) {
  const int k = s.kernel;
  for (int c = 0; c < s.in_channels; ++c) {
    for (int ky = 0; ky < k; ++ky) {
      for (int kx = 0; kx < k; ++kx) {
        const T* row = cols.row((c * k + ky) * k + kx).data();
        for (int oy = y0; oy < y1; ++oy) {
          const int iy = oy * s.stride - s.pad_begin + ky;
          if (iy < 0 || iy >= dx.height()) continue;
          const T* src = row + (oy - y0) * out_w;
          for (int ox = 0; ox < out_w; ++ox) {
            const int ix = ox * s.stride - s.pad_begin + kx;
            if (ix >= 0 && ix < dx.width()) dx(c, iy, ix) += src[ox];
          }
        }
      }
    }
  }
}

}  // namespace

template <typename T>
Conv2d<T>::Conv2d(const ConvSpec& spec, const std::string& name)
    : spec_(spec),
      weight_(name + ".weight", {spec.out_channels, spec.in_channels, spec.kernel, spec.kernel}),
      bias_(name + ".bias", {spec.out_channels}) {
  if (spec.in_channels < 1 || spec.out_channels < 1 || spec.kernel < 1 || spec.stride < 1 ||
      spec.pad_begin < 0 || spec.pad_end < 0) {
    throw ConfigError("invalid convolution spec for " + name);
  }
}

template <typename T>
void Conv2d<T>::init(Rng& rng) {
  const double fan_in = static_cast<double>(spec_.in_channels) * spec_.kernel * spec_.kernel;
  const double bound = 1.0 / std::sqrt(fan_in);
  for (auto& w : weight_.value) w = static_cast<T>(rng.uniform(-bound, bound));
  std::fill(bias_.value.begin(), bias_.value.end(), T(0));
}

template <typename T>
int Conv2d<T>::chunk_rows(int out_width) const {
  const std::size_t k = static_cast<std::size_t>(spec_.in_channels) * spec_.kernel * spec_.kernel;
  const std::size_t per_row = k * static_cast<std::size_t>(std::max(out_width, 1));
  return static_cast<int>(std::max<std::size_t>(1, kMaxColumnElements / per_row));
}

template <typename T>
Tensor<T> Conv2d<T>::forward(const Tensor<T>& x) const {
  if (x.channels() != spec_.in_channels) {
    throw ShapeError(weight_.name + ": expected " + std::to_string(spec_.in_channels) + " input channels, got " +
                     std::to_string(x.channels()));
  }
  const int out_h = spec_.out_extent(x.height());
  const int out_w = spec_.out_extent(x.width());
  if (out_h < 1 || out_w < 1) throw ShapeError(weight_.name + ": input " + x.shape().str() + " too small");

  Tensor<T> out(spec_.out_channels, out_h, out_w);
  const Eigen::Index k = static_cast<Eigen::Index>(spec_.in_channels) * spec_.kernel * spec_.kernel;
  Eigen::Map<const RowMat<T>> w(weight_.value.data(), spec_.out_channels, k);
  Eigen::Map<RowMat<T>> o(out.data(), spec_.out_channels, static_cast<Eigen::Index>(out_h) * out_w);

  if (is_pointwise(spec_)) {
    Eigen::Map<const RowMat<T>> xm(x.data(), spec_.in_channels, static_cast<Eigen::Index>(x.shape().plane()));
    o.noalias() = w * xm;
  } else {
    RowMat<T> cols;
    const int step = chunk_rows(out_w);
    for (int y0 = 0; y0 < out_h; y0 += step) {
      const int y1 = std::min(out_h, y0 + step);
      im2col(x, spec_, out_w, y0, y1, cols);
      o.middleCols(static_cast<Eigen::Index>(y0) * out_w, cols.cols()).noalias() = w * cols;
    }
  }
  o.colwise() += Eigen::Map<const ColVec<T>>(bias_.value.data(), spec_.out_channels);
  return out;
}

template <typename T>
Tensor<T> Conv2d<T>::backward(const Tensor<T>& x, const Tensor<T>& grad_out, bool need_input_grad) {
  const int out_h = grad_out.height();
  const int out_w = grad_out.width();
  if (grad_out.channels() != spec_.out_channels || out_h != spec_.out_extent(x.height()) ||
      out_w != spec_.out_extent(x.width())) {
    throw ShapeError(weight_.name + ": gradient shape " + grad_out.shape().str() + " does not match forward");
  }
  const Eigen::Index k = static_cast<Eigen::Index>(spec_.in_channels) * spec_.kernel * spec_.kernel;
  Eigen::Map<const RowMat<T>> w(weight_.value.data(), spec_.out_channels, k);
  Eigen::Map<RowMat<T>> dw(weight_.grad.data(), spec_.out_channels, k);
  Eigen::Map<const RowMat<T>> g(grad_out.data(), spec_.out_channels, static_cast<Eigen::Index>(out_h) * out_w);
  Eigen::Map<ColVec<T>>(bias_.grad.data(), spec_.out_channels) += g.rowwise().sum();

  Tensor<T> dx;
  if (need_input_grad) dx = Tensor<T>(x.shape());

  if (is_pointwise(spec_)) {
    Eigen::Map<const RowMat<T>> xm(x.data(), spec_.in_channels, static_cast<Eigen::Index>(x.shape().plane()));
    dw.noalias() += g * xm.transpose();
    if (need_input_grad) {
      Eigen::Map<RowMat<T>>(dx.data(), spec_.in_channels, static_cast<Eigen::Index>(x.shape().plane())).noalias() =
          w.transpose() * g;
    }
    return dx;
  }

  RowMat<T> cols;
  RowMat<T> dcols;
  const int step = chunk_rows(out_w);
  for (int y0 = 0; y0 < out_h; y0 += step) {
    const int y1 = std::min(out_h, y0 + step);
    im2col(x, spec_, out_w, y0, y1, cols);
    const auto g_chunk = g.middleCols(static_cast<Eigen::Index>(y0) * out_w, cols.cols());
    dw.noalias() += g_chunk * cols.transpose();
    if (need_input_grad) {
      dcols.noalias() = w.transpose() * g_chunk;
      col2im_add(dcols, spec_, out_w, y0, y1, dx);
    }
  }
  return dx;
}

template class Conv2d<float>;
template class Conv2d<double>;

}  // namespace cloudgan
