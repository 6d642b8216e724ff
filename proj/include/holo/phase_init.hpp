#pragma once

#include <cstdint>

#include "holo/diffraction.hpp"
#include "holo/field.hpp"

namespace holo {

/// Ratio factor applied to the hologram side length when solving for the
/// virtual focal length.
inline constexpr double kHologramSideFactor = 0.5;

/// Parameters of the virtual convergent (spherical) illumination.
struct ConvergentPhaseSpec {
  double focal_length = 0.0;  ///< meters, > 0
  Offset offset;              ///< vertex at (-offset.x, -offset.y)
  double wavelength = 0.0;
  Pitch image_pitch;
  Shape grid;
};

/// Solves f / (f - z) = S_i / (0.5 S_h) for f, where S_i and S_h are the side
/// lengths of the reconstructed image and of the hologram.
/// Throws InvalidGeometry unless z > 0 and S_i > 0.5 S_h > 0.
double focal_length(double z, double image_side, double holo_side);

/// phi = -pi ((x + ox)^2 + (y + oy)^2) / (lambda f) on the centered grid,
/// unwrapped.
RealArray convergent_phase(const ConvergentPhaseSpec& spec);

/// Uniform phase on [0, 2 pi), i.i.d. from a seeded std::mt19937_64.
RealArray random_phase(Shape grid, std::uint64_t seed);

/// Destination shift that centers the hologram on the convergent beam's chief
/// ray: the beam converges toward (-offset) at distance f and crosses the
/// hologram plane (at z) around -offset * z / f in object-plane coordinates.
Offset hologram_shift(const ConvergentPhaseSpec& spec, double z);

}  // namespace holo
