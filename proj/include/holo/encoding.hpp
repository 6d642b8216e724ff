#pragma once

#include <numbers>
#include <string_view>

#include "holo/field.hpp"

namespace holo {

enum class Encoding { PhaseOnly, Bleached };

std::string_view to_string(Encoding e);
/// Accepts "phase-only" and "bleached"; throws InvalidArgument otherwise.
Encoding parse_encoding(std::string_view text);

/// Displayable phase-only hologram.
struct PhaseHologram {
  std::size_t rows = 0;
  std::size_t cols = 0;
  Pitch pitch;
  double wavelength = 0.0;
  std::vector<double> phase;  ///< radians, row-major
  Encoding encoding = Encoding::PhaseOnly;
  /// Bleached holograms: the factor alpha in phase = alpha * Re(U). 1 otherwise.
  double scale = 1.0;

  Shape shape() const noexcept { return {rows, cols}; }
};

/// phase = arg(U), in (-pi, pi].
PhaseHologram encode_phase_only(const ComplexField& field);

/// phase = alpha * Re(U) with alpha = pi / max|Re(U)|, so the phase spans at
/// most [-pi, pi]. An all-zero real part yields an all-zero phase.
/// `peak_phase` replaces pi as the phase assigned to max|Re(U)|.
PhaseHologram encode_bleached(const ComplexField& field, double peak_phase = std::numbers::pi);

PhaseHologram encode(const ComplexField& field, Encoding encoding);

/// Unit-amplitude field exp(i phase) on the hologram's grid.
ComplexField lift(const PhaseHologram& holo);

}  // namespace holo
