#pragma once

#include "holo/field.hpp"

namespace holo {

struct SsimParams {
  int window_size = 11;
  double gaussian_sigma = 1.5;
  double k1 = 0.01;
  double k2 = 0.03;
  double dynamic_range = 255.0;
};

struct MetricsReport {
  double psnr_db = 0.0;
  double ssim = 0.0;
  SsimParams params;
};

/// 10 log10(255^2 / MSE); +infinity for identical images.
double psnr(const GrayImage& reference, const GrayImage& test);

/// Mean single-scale SSIM over all window positions that fit entirely inside
/// the image (no border padding), Gaussian-weighted.
double ssim(const GrayImage& reference, const GrayImage& test, const SsimParams& params = {});

MetricsReport evaluate(const GrayImage& reference, const GrayImage& test, const SsimParams& params = {});

}  // namespace holo
