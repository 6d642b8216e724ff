#pragma once

#include <cstdint>
#include <optional>

#include "holo/diffraction.hpp"
#include "holo/encoding.hpp"
#include "holo/gs.hpp"
#include "holo/metrics.hpp"
#include "holo/phase_init.hpp"

namespace holo {

enum class InitKind { Random, Convergent };

/// Geometry and run parameters; the defaults are the 1024 x 1024, 532 nm,
/// 3.74 um / 18.7 um, z = 0.5 m projection setup.
struct RunConfig {
  double wavelength = 532e-9;
  double holo_pitch = 3.74e-6;
  double image_pitch = 18.7e-6;
  double distance = 0.5;
  Offset offset{20.48e-3, 20.48e-3};
  std::size_t grid = 1024;
  Encoding encoding = Encoding::PhaseOnly;
  int iterations = 10;
  std::uint64_t seed = 0;
  InitKind init = InitKind::Convergent;
  Rendering rendering = Rendering::Amplitude;
};

/// The default geometry shrunk to `grid` samples with distance and offsets
/// scaled by grid / 1024, which keeps the Fresnel number, the diffraction
/// limited spot size in pixels and the relative offset unchanged.
RunConfig scaled_config(std::size_t grid);

/// Focal length from the image and hologram side lengths, plus the offsets.
ConvergentPhaseSpec convergent_spec(const RunConfig& cfg);

/// Object plane (image pitch) -> hologram plane (hologram pitch), shifted so
/// that the hologram sits on the convergent beam.
PropagationPlan make_run_plan(const RunConfig& cfg);

InitialPhase initial_phase(const RunConfig& cfg);

/// Single forward pass of the configured initial phase, encoded.
PhaseHologram generate(const RealImage& target, const RunConfig& cfg, const PropagationPlan& plan);
PhaseHologram generate(const RealImage& target, const RunConfig& cfg);

GsResult optimize(const RealImage& target, const RunConfig& cfg, const PropagationPlan& plan);

/// lift -> inverse propagation -> amplitude (or intensity) -> 8-bit.
GrayImage reconstruct(const PhaseHologram& holo, const RunConfig& cfg, const PropagationPlan& plan);
GrayImage reconstruct(const PhaseHologram& holo, const RunConfig& cfg);

/// Side length (meters) of the bright region along x and y: the span of the
/// column/row mean profile above `threshold` times its maximum.
struct Extent {
  double x = 0.0;
  double y = 0.0;
};
Extent bright_extent(const GrayImage& image, Pitch pitch, double threshold = 0.5);

}  // namespace holo
