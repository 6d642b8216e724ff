#pragma once

// Desk-scale quality runs shared by the regression and acceptance suites.

#include <numbers>
#include <string>
#include <vector>

#include "holo/metrics.hpp"
#include "holo/pipeline.hpp"
#include "support/desk_images.hpp"

namespace holo::testing {

inline constexpr std::size_t kDeskGrid = 256;
inline constexpr std::uint64_t kDeskSeed = 1;

struct DeskScores {
  std::string name;
  double random_nonopt = 0.0;      ///< phase-only, random initial phase, no iterations
  double random_gs10 = 0.0;        ///< phase-only, random initial phase, 10 GS iterations
  double convergent_nonopt = 0.0;  ///< phase-only, convergent initial phase, no iterations
  double bleached_nonopt = 0.0;    ///< bleached, convergent initial phase, no iterations
  double bleached_half_nonopt = 0.0;  ///< as above with the bleach range halved
  std::vector<double> gs_residual;
};

inline double reconstruction_psnr(const RealImage& target, const PhaseHologram& holo, const RunConfig& cfg,
                                  const PropagationPlan& plan) {
  return psnr(to_u8(target), reconstruct(holo, cfg, plan));
}

inline std::vector<DeskScores> evaluate_desk(std::size_t n = kDeskGrid) {
  RunConfig cfg = scaled_config(n);
  cfg.seed = kDeskSeed;
  const PropagationPlan plan = make_run_plan(cfg);
  std::vector<DeskScores> out;
  for (const auto& [name, image] : desk_set(n)) {
    DeskScores s;
    s.name = name;

    RunConfig random = cfg;
    random.init = InitKind::Random;
    random.encoding = Encoding::PhaseOnly;
    random.iterations = 0;
    s.random_nonopt = reconstruction_psnr(image, generate(image, random, plan), random, plan);
    random.iterations = 10;
    const GsResult gs = optimize(image, random, plan);
    s.random_gs10 = reconstruction_psnr(image, gs.hologram, random, plan);
    s.gs_residual = gs.trace.residual;

    RunConfig conv = cfg;
    conv.init = InitKind::Convergent;
    conv.encoding = Encoding::PhaseOnly;
    s.convergent_nonopt = reconstruction_psnr(image, generate(image, conv, plan), conv, plan);
    conv.encoding = Encoding::Bleached;
    s.bleached_nonopt = reconstruction_psnr(image, generate(image, conv, plan), conv, plan);

    const ComplexField object = field_from_amplitude_and_phase(
        image, initial_phase_array(initial_phase(conv), plan.shape()), plan.source_pitch(), conv.wavelength);
    const PhaseHologram half = encode_bleached(propagate(plan, object), std::numbers::pi / 2);
    s.bleached_half_nonopt = reconstruction_psnr(image, half, conv, plan);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace holo::testing
