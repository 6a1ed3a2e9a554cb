#pragma once

// Full-reference quality metrics: PSNR over all channels jointly and mean
// SSIM over luma (11x11 Gaussian window, sigma 1.5, K1 0.01, K2 0.03,
// L 255 — the canonical parameterization, fixed for reproducibility).

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

#include "inpaint/core.hpp"

namespace inpaint {

struct MetricReport {
  double psnr_db = 0.0;  // +infinity when the images are identical
  double ssim = 0.0;
  int width = 0;
  int height = 0;
};

/// Peak signal-to-noise ratio in dB; MSE is taken over every pixel and all
/// three channels jointly. Identical images report +infinity.
inline double psnr(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("psnr: image dimensions differ");
  std::int64_t sum = 0;
  const auto& pa = a.pixels();
  const auto& pb = b.pixels();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    const std::int64_t dr = static_cast<int>(pa[i].r) - static_cast<int>(pb[i].r);
    const std::int64_t dg = static_cast<int>(pa[i].g) - static_cast<int>(pb[i].g);
    const std::int64_t db = static_cast<int>(pa[i].b) - static_cast<int>(pb[i].b);
    sum += dr * dr + dg * dg + db * db;
  }
  if (sum == 0) return std::numeric_limits<double>::infinity();
  const double mse = static_cast<double>(sum) / (static_cast<double>(pa.size()) * 3.0);
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

namespace detail {

inline constexpr int kSsimWindow = 11;

inline const std::array<double, kSsimWindow>& ssim_kernel() {
  static const std::array<double, kSsimWindow> kernel = [] {
    std::array<double, kSsimWindow> k{};
    const double sigma = 1.5;
    double total = 0.0;
    for (int i = 0; i < kSsimWindow; ++i) {
      const double d = i - kSsimWindow / 2;
      k[i] = std::exp(-(d * d) / (2.0 * sigma * sigma));
      total += k[i];
    }
    for (double& v : k) v /= total;
    return k;
  }();
  return kernel;
}

// Separable Gaussian filter, valid region only (output is
// (w - 10) x (h - 10)).
inline std::vector<double> gaussian_valid(const std::vector<double>& plane, int w, int h) {
  const auto& k = ssim_kernel();
  const int ow = w - kSsimWindow + 1;
  const int oh = h - kSsimWindow + 1;
  std::vector<double> horiz(static_cast<std::size_t>(ow) * h);
  for (int row = 0; row < h; ++row) {
    for (int col = 0; col < ow; ++col) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i)
        acc += k[i] * plane[static_cast<std::size_t>(row) * w + col + i];
      horiz[static_cast<std::size_t>(row) * ow + col] = acc;
    }
  }
  std::vector<double> out(static_cast<std::size_t>(ow) * oh);
  for (int row = 0; row < oh; ++row) {
    for (int col = 0; col < ow; ++col) {
      double acc = 0.0;
      for (int i = 0; i < kSsimWindow; ++i)
        acc += k[i] * horiz[static_cast<std::size_t>(row + i) * ow + col];
      out[static_cast<std::size_t>(row) * ow + col] = acc;
    }
  }
  return out;
}

inline std::vector<double> luma_plane(const Image& img) {
  std::vector<double> plane(img.pixels().size());
  for (std::size_t i = 0; i < plane.size(); ++i) plane[i] = luma(img.pixels()[i]);
  return plane;
}

}  // namespace detail

/// Mean SSIM over luma. Requires both dimensions >= 11 (the window size).
inline double ssim(const Image& a, const Image& b) {
  if (a.width() != b.width() || a.height() != b.height())
    throw std::invalid_argument("ssim: image dimensions differ");
  const int w = a.width();
  const int h = a.height();
  if (w < detail::kSsimWindow || h < detail::kSsimWindow)
    throw std::invalid_argument("ssim: image smaller than the 11x11 window");

  const std::vector<double> x = detail::luma_plane(a);
  const std::vector<double> y = detail::luma_plane(b);
  const std::size_t n = x.size();
  std::vector<double> xx(n), yy(n), xy(n);
  for (std::size_t i = 0; i < n; ++i) {
    xx[i] = x[i] * x[i];
    yy[i] = y[i] * y[i];
    xy[i] = x[i] * y[i];
  }

  const std::vector<double> mu_x = detail::gaussian_valid(x, w, h);
  const std::vector<double> mu_y = detail::gaussian_valid(y, w, h);
  const std::vector<double> m_xx = detail::gaussian_valid(xx, w, h);
  const std::vector<double> m_yy = detail::gaussian_valid(yy, w, h);
  const std::vector<double> m_xy = detail::gaussian_valid(xy, w, h);

  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double c2 = (0.03 * 255.0) * (0.03 * 255.0);
  double total = 0.0;
  for (std::size_t i = 0; i < mu_x.size(); ++i) {
    const double sigma_x = m_xx[i] - mu_x[i] * mu_x[i];
    const double sigma_y = m_yy[i] - mu_y[i] * mu_y[i];
    const double sigma_xy = m_xy[i] - mu_x[i] * mu_y[i];
    const double num = (2.0 * mu_x[i] * mu_y[i] + c1) * (2.0 * sigma_xy + c2);
    const double den =
        (mu_x[i] * mu_x[i] + mu_y[i] * mu_y[i] + c1) * (sigma_x + sigma_y + c2);
    total += num / den;
  }
  return total / static_cast<double>(mu_x.size());
}

inline MetricReport measure(const Image& a, const Image& b) {
  return {psnr(a, b), ssim(a, b), a.width(), a.height()};
}

}  // namespace inpaint
