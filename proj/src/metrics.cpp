#include "holo/metrics.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "holo/error.hpp"

namespace holo {

namespace {

void require_same_shape(const GrayImage& a, const GrayImage& b) {
  if (a.shape() != b.shape()) {
    throw Error(ErrorCode::ShapeMismatch, std::to_string(a.rows) + "x" + std::to_string(a.cols) + " vs " +
                                              std::to_string(b.rows) + "x" + std::to_string(b.cols));
  }
}

std::vector<double> gaussian_taps(int size, double sigma) {
  std::vector<double> w(static_cast<std::size_t>(size));
  const double center = (size - 1) / 2.0;
  double sum = 0.0;
  for (int i = 0; i < size; ++i) {
    const double d = i - center;
    w[static_cast<std::size_t>(i)] = std::exp(-d * d / (2.0 * sigma * sigma));
    sum += w[static_cast<std::size_t>(i)];
  }
  for (double& v : w) v /= sum;
  return w;
}

// Separable "valid" filtering: output is (rows - n + 1) x (cols - n + 1).
RealArray filter_valid(const RealArray& in, const std::vector<double>& taps) {
  const std::size_t n = taps.size();
  const std::size_t out_cols = in.cols - n + 1;
  const std::size_t out_rows = in.rows - n + 1;
  RealArray horiz(in.rows, out_cols);
  for (std::size_t r = 0; r < in.rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * in(r, c + k);
      horiz(r, c) = acc;
    }
  }
  RealArray out(out_rows, out_cols);
  for (std::size_t r = 0; r < out_rows; ++r) {
    for (std::size_t c = 0; c < out_cols; ++c) {
      double acc = 0.0;
      for (std::size_t k = 0; k < n; ++k) acc += taps[k] * horiz(r + k, c);
      out(r, c) = acc;
    }
  }
  return out;
}

}  // namespace

double psnr(const GrayImage& reference, const GrayImage& test) {
  require_same_shape(reference, test);
  double sum = 0.0;
  for (std::size_t k = 0; k < reference.data.size(); ++k) {
    const double d = static_cast<double>(reference.data[k]) - static_cast<double>(test.data[k]);
    sum += d * d;
  }
  if (sum == 0.0) return std::numeric_limits<double>::infinity();
  const double mse = sum / static_cast<double>(reference.data.size());
  return 10.0 * std::log10(255.0 * 255.0 / mse);
}

double ssim(const GrayImage& reference, const GrayImage& test, const SsimParams& params) {
  require_same_shape(reference, test);
  if (params.window_size < 3 || params.window_size % 2 == 0 || !(params.gaussian_sigma > 0.0) ||
      !(params.k1 > 0.0) || !(params.k2 > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "invalid SSIM parameters");
  }
  const auto win = static_cast<std::size_t>(params.window_size);
  if (reference.rows < win || reference.cols < win) {
    throw Error(ErrorCode::ImageTooSmall, "image smaller than the SSIM window");
  }

  const std::size_t rows = reference.rows;
  const std::size_t cols = reference.cols;
  RealArray x(rows, cols), y(rows, cols), xx(rows, cols), yy(rows, cols), xy(rows, cols);
  for (std::size_t k = 0; k < rows * cols; ++k) {
    const double a = reference.data[k];
    const double b = test.data[k];
    x.data[k] = a;
    y.data[k] = b;
    xx.data[k] = a * a;
    yy.data[k] = b * b;
    xy.data[k] = a * b;
  }
  const auto taps = gaussian_taps(params.window_size, params.gaussian_sigma);
  const RealArray mx = filter_valid(x, taps);
  const RealArray my = filter_valid(y, taps);
  const RealArray sxx = filter_valid(xx, taps);
  const RealArray syy = filter_valid(yy, taps);
  const RealArray sxy = filter_valid(xy, taps);

  const double c1 = std::pow(params.k1 * params.dynamic_range, 2);
  const double c2 = std::pow(params.k2 * params.dynamic_range, 2);
  double total = 0.0;
  for (std::size_t k = 0; k < mx.data.size(); ++k) {
    const double ux = mx.data[k];
    const double uy = my.data[k];
    const double vx = sxx.data[k] - ux * ux;
    const double vy = syy.data[k] - uy * uy;
    const double cov = sxy.data[k] - ux * uy;
    total += ((2.0 * ux * uy + c1) * (2.0 * cov + c2)) / ((ux * ux + uy * uy + c1) * (vx + vy + c2));
  }
  return total / static_cast<double>(mx.data.size());
}

MetricsReport evaluate(const GrayImage& reference, const GrayImage& test, const SsimParams& params) {
  return {psnr(reference, test), ssim(reference, test, params), params};
}

}  // namespace holo
