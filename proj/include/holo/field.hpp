#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace holo {

using Complex = std::complex<double>;

/// Sampling interval in meters along x (columns) and y (rows).
struct Pitch {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Pitch&, const Pitch&) = default;
};

struct Shape {
  std::size_t rows = 0;
  std::size_t cols = 0;

  std::size_t size() const noexcept { return rows * cols; }
  friend bool operator==(const Shape&, const Shape&) = default;
};

/// Dense row-major 2-D array.
template <class T>
struct Array2D {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<T> data;

  Array2D() = default;
  Array2D(std::size_t r, std::size_t c, T fill = T{}) : rows(r), cols(c), data(r * c, fill) {}
  Array2D(std::size_t r, std::size_t c, std::vector<T> values)
      : rows(r), cols(c), data(std::move(values)) {}

  Shape shape() const noexcept { return {rows, cols}; }
  std::size_t size() const noexcept { return data.size(); }
  T& operator()(std::size_t r, std::size_t c) { return data[r * cols + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

  friend bool operator==(const Array2D&, const Array2D&) = default;
};

using RealArray = Array2D<double>;
using GrayImage = Array2D<std::uint8_t>;

/// Real image with every pixel in [0, 1]; used for target amplitudes.
class RealImage {
 public:
  RealImage() = default;
  /// Throws InvalidArgument when a pixel falls outside [0, 1] or the size is wrong.
  RealImage(std::size_t rows, std::size_t cols, std::vector<double> pixels);
  explicit RealImage(RealArray pixels);

  std::size_t rows() const noexcept { return pixels_.rows; }
  std::size_t cols() const noexcept { return pixels_.cols; }
  Shape shape() const noexcept { return pixels_.shape(); }
  std::span<const double> pixels() const noexcept { return pixels_.data; }
  const RealArray& array() const noexcept { return pixels_; }
  double operator()(std::size_t r, std::size_t c) const { return pixels_(r, c); }

 private:
  RealArray pixels_;
};

/// Sampled complex wavefront with physical pitch and wavelength.
///
/// Values are validated once at construction (positive pitch and wavelength,
/// finite samples) and never mutated afterwards.
class ComplexField {
 public:
  ComplexField(std::size_t rows, std::size_t cols, Pitch pitch, double wavelength,
               std::vector<Complex> samples);
  /// Zero-valued field.
  ComplexField(std::size_t rows, std::size_t cols, Pitch pitch, double wavelength);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  Shape shape() const noexcept { return {rows_, cols_}; }
  Pitch pitch() const noexcept { return pitch_; }
  double wavelength() const noexcept { return wavelength_; }
  std::span<const Complex> samples() const noexcept { return samples_; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return samples_[r * cols_ + c]; }

  /// Same geometry, new samples.
  ComplexField with_samples(std::vector<Complex> samples) const;

  friend bool operator==(const ComplexField&, const ComplexField&) = default;

 private:
  std::size_t rows_;
  std::size_t cols_;
  Pitch pitch_;
  double wavelength_;
  std::vector<Complex> samples_;
};

enum class Rendering { Amplitude, Intensity };

ComplexField field_from_amplitude_and_phase(const RealImage& amp, const RealArray& phase,
                                            Pitch pitch, double wavelength);

RealArray amplitude(const ComplexField& field);
RealArray intensity(const ComplexField& field);
RealArray render(const ComplexField& field, Rendering mode);

/// Principal argument in (-pi, pi]; arg(0) is 0.
double principal_arg(Complex z) noexcept;
RealArray phase_of(const ComplexField& field);

/// Linear map [0, max] -> [0, 255] with round-half-up; an all-zero input stays zero.
GrayImage normalize_to_u8(const RealArray& values);

/// Quantizes a [0, 1] image to 8 bits (round-half-up of 255 * v).
GrayImage to_u8(const RealImage& image);

}  // namespace holo
