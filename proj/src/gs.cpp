#include "holo/gs.hpp"

#include <cmath>

#include "holo/error.hpp"

namespace holo {

RealArray initial_phase_array(const InitialPhase& init, Shape grid) {
  if (const auto* r = std::get_if<RandomInit>(&init)) return random_phase(grid, r->seed);
  auto spec = std::get<ConvergentPhaseSpec>(init);
  spec.grid = grid;
  return convergent_phase(spec);
}

PhaseHologram generate_hologram(const RealImage& target, const PropagationPlan& plan, Encoding encoding,
                                const RealArray& initial_phase) {
  if (target.shape() != plan.shape()) throw Error(ErrorCode::PlanMismatch, "target shape differs from the plan grid");
  const ComplexField object = field_from_amplitude_and_phase(target, initial_phase, plan.source_pitch(), plan.wavelength());
  return encode(propagate(plan, object), encoding);
}

double amplitude_residual(const ComplexField& back, const RealImage& target) {
  const auto s = back.samples();
  const auto t = target.pixels();
  double bt = 0.0;
  double bb = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double b = std::abs(s[k]);
    bt += b * t[k];
    bb += b * b;
  }
  const double gain = bb > 0.0 ? bt / bb : 0.0;
  double sum = 0.0;
  for (std::size_t k = 0; k < s.size(); ++k) {
    const double d = gain * std::abs(s[k]) - t[k];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(s.size()));
}

GsResult gs_optimize(const RealImage& target, const PropagationPlan& plan, const GsConfig& cfg) {
  if (cfg.iterations < 0) throw Error(ErrorCode::InvalidArgument, "iterations must be >= 0");
  if (target.shape() != plan.shape()) throw Error(ErrorCode::PlanMismatch, "target shape differs from the plan grid");

  GsResult result;
  RealArray phase = initial_phase_array(cfg.initial_phase, plan.shape());
  for (int it = 0;; ++it) {
    result.hologram = generate_hologram(target, plan, cfg.encoding, phase);
    if (it == cfg.iterations) break;
    const ComplexField back = propagate_inverse(plan, lift(result.hologram));
    if (cfg.record_trace) result.trace.residual.push_back(amplitude_residual(back, target));
    phase = phase_of(back);
  }
  return result;
}

}  // namespace holo
