#include "holo/phase_init.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "holo/error.hpp"

namespace holo {

double focal_length(double z, double image_side, double holo_side) {
  if (!(z > 0.0) || !(holo_side > 0.0)) {
    throw Error(ErrorCode::InvalidGeometry, "focal length needs z > 0 and a positive hologram side");
  }
  const double half = kHologramSideFactor * holo_side;
  if (!(image_side > half)) {
    throw Error(ErrorCode::InvalidGeometry, "image side must exceed half the hologram side");
  }
  return z * image_side / (image_side - half);
}

RealArray convergent_phase(const ConvergentPhaseSpec& spec) {
  if (!(spec.focal_length > 0.0) || !(spec.wavelength > 0.0) || !(spec.image_pitch.x > 0.0) ||
      !(spec.image_pitch.y > 0.0)) {
    throw Error(ErrorCode::InvalidGeometry, "convergent phase needs positive focal length, wavelength and pitch");
  }
  const std::size_t rows = spec.grid.rows;
  const std::size_t cols = spec.grid.cols;
  RealArray phi(rows, cols);
  const double k = std::numbers::pi / (spec.wavelength * spec.focal_length);
  for (std::size_t r = 0; r < rows; ++r) {
    const double y = (static_cast<double>(r) - static_cast<double>(rows / 2)) * spec.image_pitch.y + spec.offset.y;
    for (std::size_t c = 0; c < cols; ++c) {
      const double x = (static_cast<double>(c) - static_cast<double>(cols / 2)) * spec.image_pitch.x + spec.offset.x;
      phi(r, c) = -k * (x * x + y * y);
    }
  }
  return phi;
}

RealArray random_phase(Shape grid, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  RealArray phi(grid.rows, grid.cols);
  // Top 53 bits -> [0, 1); fixed so that values do not depend on the
  // standard library's distribution implementation.
  for (double& v : phi.data) {
    const double unit = static_cast<double>(gen() >> 11) * 0x1.0p-53;
    v = 2.0 * std::numbers::pi * unit;
  }
  return phi;
}

Offset hologram_shift(const ConvergentPhaseSpec& spec, double z) {
  const double f = spec.focal_length;
  return {-spec.offset.x * z / f, -spec.offset.y * z / f};
}

}  // namespace holo
