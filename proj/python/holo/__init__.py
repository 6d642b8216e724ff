"""Scaled-diffraction phase hologram toolkit.

The compiled core lives in ``holo._holo``; ``holo.formats`` and
``holo.oracle`` are numpy-only helpers for the file formats and golden files.
"""

from ._holo import (  # noqa: F401
    Field,
    HoloError,
    PhaseHologram,
    PropagationPlan,
    RunConfig,
    band_limit_half_width,
    convergent_phase,
    emit_goldens,
    encode_bleached,
    encode_phase_only,
    focal_length,
    generate,
    lift,
    load_image,
    make_plan,
    make_run_plan,
    optimize,
    propagate_direct_dft,
    psnr,
    random_phase,
    read_field,
    read_hologram_png,
    reconstruct,
    replay_goldens,
    save_image,
    scaled_config,
    ssim,
    write_field,
    write_hologram_png,
)
from . import formats, oracle  # noqa: F401
