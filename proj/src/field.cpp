#include "holo/field.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "holo/error.hpp"

namespace holo {

namespace {

void require_size(std::size_t rows, std::size_t cols, std::size_t n, const char* what) {
  if (rows == 0 || cols == 0) throw Error(ErrorCode::InvalidArgument, std::string(what) + " must be non-empty");
  if (rows * cols != n) {
    throw Error(ErrorCode::ShapeMismatch, std::string(what) + ": " + std::to_string(n) +
                                              " samples for a " + std::to_string(rows) + "x" +
                                              std::to_string(cols) + " grid");
  }
}

}  // namespace

RealImage::RealImage(std::size_t rows, std::size_t cols, std::vector<double> pixels)
    : RealImage(RealArray(rows, cols, std::move(pixels))) {}

RealImage::RealImage(RealArray pixels) : pixels_(std::move(pixels)) {
  require_size(pixels_.rows, pixels_.cols, pixels_.data.size(), "image");
  for (double v : pixels_.data) {
    if (!(v >= 0.0 && v <= 1.0)) throw Error(ErrorCode::InvalidArgument, "image pixel outside [0, 1]");
  }
}

ComplexField::ComplexField(std::size_t rows, std::size_t cols, Pitch pitch, double wavelength,
                           std::vector<Complex> samples)
    : rows_(rows), cols_(cols), pitch_(pitch), wavelength_(wavelength), samples_(std::move(samples)) {
  require_size(rows_, cols_, samples_.size(), "field");
  if (!(pitch_.x > 0.0 && pitch_.y > 0.0) || !std::isfinite(pitch_.x) || !std::isfinite(pitch_.y)) {
    throw Error(ErrorCode::InvalidGeometry, "field pitch must be positive");
  }
  if (!(wavelength_ > 0.0) || !std::isfinite(wavelength_)) {
    throw Error(ErrorCode::InvalidGeometry, "field wavelength must be positive");
  }
  for (const Complex& z : samples_) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
      throw Error(ErrorCode::InvalidArgument, "field sample is not finite");
    }
  }
}

ComplexField::ComplexField(std::size_t rows, std::size_t cols, Pitch pitch, double wavelength)
    : ComplexField(rows, cols, pitch, wavelength, std::vector<Complex>(rows * cols)) {}

ComplexField ComplexField::with_samples(std::vector<Complex> samples) const {
  return ComplexField(rows_, cols_, pitch_, wavelength_, std::move(samples));
}

ComplexField field_from_amplitude_and_phase(const RealImage& amp, const RealArray& phase,
                                            Pitch pitch, double wavelength) {
  if (amp.shape() != phase.shape()) throw Error(ErrorCode::ShapeMismatch, "amplitude and phase differ in shape");
  std::vector<Complex> samples(amp.shape().size());
  const auto a = amp.pixels();
  for (std::size_t k = 0; k < samples.size(); ++k) {
    samples[k] = a[k] * Complex(std::cos(phase.data[k]), std::sin(phase.data[k]));
  }
  return ComplexField(amp.rows(), amp.cols(), pitch, wavelength, std::move(samples));
}

RealArray amplitude(const ComplexField& field) {
  RealArray out(field.rows(), field.cols());
  std::ranges::transform(field.samples(), out.data.begin(), [](Complex z) { return std::abs(z); });
  return out;
}

RealArray intensity(const ComplexField& field) {
  RealArray out(field.rows(), field.cols());
  std::ranges::transform(field.samples(), out.data.begin(), [](Complex z) { return std::norm(z); });
  return out;
}

RealArray render(const ComplexField& field, Rendering mode) {
  return mode == Rendering::Amplitude ? amplitude(field) : intensity(field);
}

double principal_arg(Complex z) noexcept {
  if (z.real() == 0.0 && z.imag() == 0.0) return 0.0;
  const double a = std::atan2(z.imag(), z.real());
  return a <= -std::numbers::pi ? std::numbers::pi : a;
}

RealArray phase_of(const ComplexField& field) {
  RealArray out(field.rows(), field.cols());
  std::ranges::transform(field.samples(), out.data.begin(), principal_arg);
  return out;
}

GrayImage normalize_to_u8(const RealArray& values) {
  GrayImage out(values.rows, values.cols);
  double peak = 0.0;
  for (double v : values.data) peak = std::max(peak, v);
  if (peak <= 0.0) return out;
  for (std::size_t k = 0; k < values.data.size(); ++k) {
    const double scaled = std::clamp(values.data[k] / peak, 0.0, 1.0) * 255.0;
    out.data[k] = static_cast<std::uint8_t>(std::floor(scaled + 0.5));
  }
  return out;
}

GrayImage to_u8(const RealImage& image) {
  GrayImage out(image.rows(), image.cols());
  const auto px = image.pixels();
  for (std::size_t k = 0; k < px.size(); ++k) {
    out.data[k] = static_cast<std::uint8_t>(std::floor(px[k] * 255.0 + 0.5));
  }
  return out;
}

}  // namespace holo
