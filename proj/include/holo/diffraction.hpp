#pragma once

// Band-limited scaled and shifted Fresnel propagation.
//
// The destination grid has the same sample count as the source but a
// different pitch (scale s = dest_pitch / source_pitch per axis) and may be
// laterally shifted. The Fresnel sum is rewritten as
//
//   u_d[m] = C * D[m] * sum_n (u_s[n] * S[n]) * h[m - n] * W[m - n]
//
// per axis, with chirps S, h, D and a rectangular window W that drops kernel
// taps whose local frequency would exceed the source Nyquist rate. The
// convolution runs as zero-padded FFTs of length 2N.

#include <cstddef>
#include <memory>

#include "holo/field.hpp"

namespace holo {

/// Lateral offset in meters.
struct Offset {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Offset&, const Offset&) = default;
  Offset operator-() const { return {-x, -y}; }
};

namespace detail {
struct PropagationOperator;
}

/// Immutable scaled-Fresnel operator. Chirp tables and kernel spectra for both
/// directions are built once in make_plan and shared between copies.
class PropagationPlan {
 public:
  double distance() const noexcept;
  Pitch source_pitch() const noexcept;
  Pitch dest_pitch() const noexcept;
  double wavelength() const noexcept;
  Offset dest_shift() const noexcept;
  Shape shape() const noexcept;
  /// dest_pitch / source_pitch per axis.
  Pitch scale() const noexcept;
  /// Kernel half-width (in samples) kept by the band-limit window, x then y.
  std::size_t band_limit_x() const noexcept;
  std::size_t band_limit_y() const noexcept;

 private:
  friend PropagationPlan make_plan(double, Pitch, Pitch, double, Shape, Offset);
  friend ComplexField propagate(const PropagationPlan&, const ComplexField&);
  friend ComplexField propagate_inverse(const PropagationPlan&, const ComplexField&);

  std::shared_ptr<const detail::PropagationOperator> forward_;
  std::shared_ptr<const detail::PropagationOperator> inverse_;
};

/// Throws InvalidGeometry for z == 0, non-positive pitch or wavelength, odd or
/// < 2 grid sides; DegeneratePlan when the band-limit window holds no taps.
PropagationPlan make_plan(double z, Pitch source_pitch, Pitch dest_pitch, double wavelength,
                          Shape shape, Offset shift = {});

/// Source plane -> destination plane. Throws PlanMismatch if the field's
/// shape, pitch or wavelength differ from the plan's source side.
ComplexField propagate(const PropagationPlan& plan, const ComplexField& field);

/// Destination plane -> source plane: the same operator with -z, swapped
/// pitches and negated shift.
ComplexField propagate_inverse(const PropagationPlan& plan, const ComplexField& field);

struct DirectDftOptions {
  std::size_t max_side = 128;
  bool allow_large = false;
};

/// Brute-force evaluation of the discrete Fresnel sum with no window and no
/// FFT. O(N^4); grids larger than `max_side` per side are refused unless
/// `allow_large` is set.
ComplexField propagate_direct_dft(double z, Pitch source_pitch, Pitch dest_pitch, double wavelength,
                                  Offset shift, const ComplexField& field,
                                  DirectDftOptions options = {});

/// Half-width K = floor(lambda |z| / (2 s p^2)) of the band-limit window.
double band_limit_half_width(double wavelength, double z, double source_pitch, double scale);

}  // namespace holo
