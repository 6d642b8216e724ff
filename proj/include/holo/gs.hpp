#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "holo/diffraction.hpp"
#include "holo/encoding.hpp"
#include "holo/phase_init.hpp"

namespace holo {

struct RandomInit {
  std::uint64_t seed = 0;
};

using InitialPhase = std::variant<RandomInit, ConvergentPhaseSpec>;

struct GsConfig {
  int iterations = 10;
  Encoding encoding = Encoding::PhaseOnly;
  InitialPhase initial_phase = RandomInit{};
  bool record_trace = true;
};

struct GsTrace {
  /// Object-plane RMS amplitude error, one entry per iteration.
  std::vector<double> residual;
};

struct GsResult {
  PhaseHologram hologram;
  GsTrace trace;
};

RealArray initial_phase_array(const InitialPhase& init, Shape grid);

/// Object field (target amplitude x initial phase) propagated once and encoded.
PhaseHologram generate_hologram(const RealImage& target, const PropagationPlan& plan, Encoding encoding,
                                const RealArray& initial_phase);

/// Error-reduction Gerchberg-Saxton between the object plane (plan source) and
/// the hologram plane (plan destination).
///
/// Each iteration imposes the target amplitude in the object plane, propagates
/// to the hologram plane, encodes and lifts to unit amplitude, then propagates
/// back and keeps only the phase. `iterations == 0` is the single forward pass.
GsResult gs_optimize(const RealImage& target, const PropagationPlan& plan, const GsConfig& cfg);

/// RMS of (a * |back| - target) with the least-squares gain a, so the metric
/// tracks shape rather than the arbitrary overall energy of the back-propagated field.
double amplitude_residual(const ComplexField& back, const RealImage& target);

}  // namespace holo
