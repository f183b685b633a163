#pragma once

#include "cloudgan/data/raster.hpp"

namespace cloudgan::metrics {

/// 10 log10(1 / MSE) with peak 1.0; +infinity when the images are identical.
double psnr(const data::Raster& a, const data::Raster& b);

struct SsimParams {
  int window = 11;
  double sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 1.0;
};

/// Single-scale SSIM (Wang et al. 2004).
///
/// For every channel and every window position fully inside the image
/// ("valid" placement, no padding) with normalised Gaussian weights w:
///   mu_a = sum w a,  sigma_a^2 = sum w (a - mu_a)^2,  sigma_ab = sum w (a - mu_a)(b - mu_b)
///   SSIM = (2 mu_a mu_b + C1)(2 sigma_ab + C2) / ((mu_a^2 + mu_b^2 + C1)(sigma_a^2 + sigma_b^2 + C2))
/// with C1 = (k1 L)^2 and C2 = (k2 L)^2. The result is the mean over window
/// positions, averaged over channels. Requires min(H, W) >= window.
double ssim(const data::Raster& a, const data::Raster& b, const SsimParams& params = {});

}  // namespace cloudgan::metrics
