#include "cloudgan/metrics/quality.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace cloudgan::metrics {
namespace {

void require_comparable(const data::Raster& a, const data::Raster& b, const char* what) {
  if (a.shape() != b.shape()) {
    throw ShapeError(std::string(what) + ": shape mismatch " + a.shape().str() + " vs " + b.shape().str());
  }
}

// Separable 'valid' Gaussian filter of an h x w plane.
std::vector<double> filter_valid(const std::vector<double>& src, int h, int w, const std::vector<double>& kernel) {
  const int k = static_cast<int>(kernel.size());
  const int ow = w - k + 1;
  const int oh = h - k + 1;
  std::vector<double> rows(static_cast<std::size_t>(h) * ow, 0.0);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < ow; ++x) {
      double s = 0.0;
      for (int i = 0; i < k; ++i) s += kernel[i] * src[static_cast<std::size_t>(y) * w + x + i];
      rows[static_cast<std::size_t>(y) * ow + x] = s;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(oh) * ow, 0.0);
  for (int y = 0; y < oh; ++y) {
    for (int i = 0; i < k; ++i) {
      const double wgt = kernel[i];
      const double* row = rows.data() + static_cast<std::size_t>(y + i) * ow;
      double* dst = out.data() + static_cast<std::size_t>(y) * ow;
      for (int x = 0; x < ow; ++x) dst[x] += wgt * row[x];
    }
  }
  return out;
}

}  // namespace

double psnr(const data::Raster& a, const data::Raster& b) {
  require_comparable(a, b, "psnr");
  const auto& x = a.tensor().storage();
  const auto& y = b.tensor().storage();
  double sse = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = static_cast<double>(x[i]) - y[i];
    sse += d * d;
  }
  const double mse = sse / static_cast<double>(x.size());
  if (mse == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(1.0 / mse);
}

double ssim(const data::Raster& a, const data::Raster& b, const SsimParams& params) {
  require_comparable(a, b, "ssim");
  const int h = a.height();
  const int w = a.width();
  if (std::min(h, w) < params.window) {
    throw ShapeError("ssim needs images of at least " + std::to_string(params.window) + "x" +
                     std::to_string(params.window) + ", got " + a.shape().str());
  }

  std::vector<double> kernel(params.window);
  double norm = 0.0;
  const double centre = (params.window - 1) / 2.0;
  for (int i = 0; i < params.window; ++i) {
    kernel[i] = std::exp(-(i - centre) * (i - centre) / (2.0 * params.sigma * params.sigma));
    norm += kernel[i];
  }
  for (auto& v : kernel) v /= norm;

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  const std::size_t plane = static_cast<std::size_t>(h) * w;

  double total = 0.0;
  for (int c = 0; c < a.channels(); ++c) {
    std::vector<double> pa(plane), pb(plane), aa(plane), bb(plane), ab(plane);
    const auto ca = a.tensor().channel(c);
    const auto cb = b.tensor().channel(c);
    for (std::size_t i = 0; i < plane; ++i) {
      pa[i] = ca[i];
      pb[i] = cb[i];
      aa[i] = pa[i] * pa[i];
      bb[i] = pb[i] * pb[i];
      ab[i] = pa[i] * pb[i];
    }
    const auto mu_a = filter_valid(pa, h, w, kernel);
    const auto mu_b = filter_valid(pb, h, w, kernel);
    const auto e_aa = filter_valid(aa, h, w, kernel);
    const auto e_bb = filter_valid(bb, h, w, kernel);
    const auto e_ab = filter_valid(ab, h, w, kernel);

    double sum = 0.0;
    for (std::size_t i = 0; i < mu_a.size(); ++i) {
      const double va = e_aa[i] - mu_a[i] * mu_a[i];
      const double vb = e_bb[i] - mu_b[i] * mu_b[i];
      const double cov = e_ab[i] - mu_a[i] * mu_b[i];
      sum += ((2 * mu_a[i] * mu_b[i] + c1) * (2 * cov + c2)) /
             ((mu_a[i] * mu_a[i] + mu_b[i] * mu_b[i] + c1) * (va + vb + c2));
    }
    total += sum / static_cast<double>(mu_a.size());
  }
  return total / a.channels();
}

}  // namespace cloudgan::metrics
