#include "holo/pipeline.hpp"

#include <algorithm>

#include "holo/error.hpp"

namespace holo {

RunConfig scaled_config(std::size_t grid) {
  RunConfig cfg;
  const double f = static_cast<double>(grid) / 1024.0;
  cfg.grid = grid;
  cfg.distance *= f;
  cfg.offset = {cfg.offset.x * f, cfg.offset.y * f};
  return cfg;
}

ConvergentPhaseSpec convergent_spec(const RunConfig& cfg) {
  const double n = static_cast<double>(cfg.grid);
  ConvergentPhaseSpec spec;
  spec.focal_length = focal_length(cfg.distance, n * cfg.image_pitch, n * cfg.holo_pitch);
  spec.offset = cfg.offset;
  spec.wavelength = cfg.wavelength;
  spec.image_pitch = {cfg.image_pitch, cfg.image_pitch};
  spec.grid = {cfg.grid, cfg.grid};
  return spec;
}

PropagationPlan make_run_plan(const RunConfig& cfg) {
  const ConvergentPhaseSpec spec = convergent_spec(cfg);
  return make_plan(cfg.distance, {cfg.image_pitch, cfg.image_pitch}, {cfg.holo_pitch, cfg.holo_pitch}, cfg.wavelength,
                   {cfg.grid, cfg.grid}, hologram_shift(spec, cfg.distance));
}

InitialPhase initial_phase(const RunConfig& cfg) {
  if (cfg.init == InitKind::Random) return RandomInit{cfg.seed};
  return convergent_spec(cfg);
}

PhaseHologram generate(const RealImage& target, const RunConfig& cfg, const PropagationPlan& plan) {
  return generate_hologram(target, plan, cfg.encoding, initial_phase_array(initial_phase(cfg), plan.shape()));
}

PhaseHologram generate(const RealImage& target, const RunConfig& cfg) {
  return generate(target, cfg, make_run_plan(cfg));
}

GsResult optimize(const RealImage& target, const RunConfig& cfg, const PropagationPlan& plan) {
  GsConfig gs;
  gs.iterations = cfg.iterations;
  gs.encoding = cfg.encoding;
  gs.initial_phase = initial_phase(cfg);
  return gs_optimize(target, plan, gs);
}

GrayImage reconstruct(const PhaseHologram& holo, const RunConfig& cfg, const PropagationPlan& plan) {
  return normalize_to_u8(render(propagate_inverse(plan, lift(holo)), cfg.rendering));
}

GrayImage reconstruct(const PhaseHologram& holo, const RunConfig& cfg) {
  return reconstruct(holo, cfg, make_run_plan(cfg));
}

Extent bright_extent(const GrayImage& image, Pitch pitch, double threshold) {
  if (image.rows == 0 || image.cols == 0) throw Error(ErrorCode::InvalidArgument, "empty image");
  auto span = [threshold](const std::vector<double>& profile) {
    const double peak = *std::ranges::max_element(profile);
    if (peak <= 0.0) return std::size_t{0};
    std::size_t first = profile.size();
    std::size_t last = 0;
    for (std::size_t i = 0; i < profile.size(); ++i) {
      if (profile[i] >= threshold * peak) {
        first = std::min(first, i);
        last = i;
      }
    }
    return last - first + 1;
  };
  std::vector<double> cols(image.cols, 0.0);
  std::vector<double> rows(image.rows, 0.0);
  for (std::size_t r = 0; r < image.rows; ++r) {
    for (std::size_t c = 0; c < image.cols; ++c) {
      cols[c] += image(r, c);
      rows[r] += image(r, c);
    }
  }
  return {static_cast<double>(span(cols)) * pitch.x, static_cast<double>(span(rows)) * pitch.y};
}

}  // namespace holo
