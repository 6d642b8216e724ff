"""Numpy reference evaluations used to cross-check golden files."""

from __future__ import annotations

import math

import numpy as np

from .formats import Manifest, ManifestCase, read_cfld


def _centered(n: int) -> np.ndarray:
    return np.arange(n, dtype=np.float64) - n // 2


def direct_fresnel(u: np.ndarray, z: float, source_pitch, dest_pitch, wavelength: float, shift=(0.0, 0.0)):
    """Discrete Fresnel sum, evaluated separably as two dense matrix products."""
    rows, cols = u.shape
    lz = wavelength * z

    def kernel(n, ps, pd, off):
        xd = _centered(n) * pd + off
        xs = _centered(n) * ps
        return np.exp(1j * math.pi * (xd[:, None] - xs[None, :]) ** 2 / lz)

    kx = kernel(cols, source_pitch[0], dest_pitch[0], shift[0])
    ky = kernel(rows, source_pitch[1], dest_pitch[1], shift[1])
    cycles = z / wavelength
    carrier = np.exp(2j * math.pi * (cycles - math.floor(cycles)))
    constant = source_pitch[0] * source_pitch[1] * carrier / (1j * lz)
    return constant * (ky @ u @ kx.T)


def convergent_phase(focal_length, offset, wavelength, pitch, shape) -> np.ndarray:
    rows, cols = shape
    x = _centered(cols) * pitch[0] + offset[0]
    y = _centered(rows) * pitch[1] + offset[1]
    return -math.pi * (y[:, None] ** 2 + x[None, :] ** 2) / (wavelength * focal_length)


def _plan(case: ManifestCase):
    n = case.number
    return (n("z"), (n("source_pitch_x"), n("source_pitch_y")), (n("dest_pitch_x"), n("dest_pitch_y")),
            n("wavelength"), (n("shift_x"), n("shift_y")))


def compute(case: ManifestCase, samples: np.ndarray, pitch, wavelength) -> np.ndarray | None:
    """Expected output for `case`, or None for ops without a numpy reference."""
    if case.op == "propagate":
        z, src, dst, lam, shift = _plan(case)
        return direct_fresnel(samples, z, src, dst, lam, shift)
    if case.op == "propagate_inverse":
        z, src, dst, lam, shift = _plan(case)
        return direct_fresnel(samples, -z, dst, src, lam, (-shift[0], -shift[1]))
    if case.op == "convergent_phase":
        return convergent_phase(case.number("focal_length"), (case.number("offset_x"), case.number("offset_y")),
                                wavelength, pitch, samples.shape).astype(np.complex128)
    if case.op == "encode_phase_only":
        return np.angle(samples).astype(np.complex128)
    if case.op == "encode_bleached":
        re = samples.real
        peak = np.max(np.abs(re))
        return (re * (math.pi / peak) if peak > 0 else np.zeros_like(re)).astype(np.complex128)
    return None


def compare(metric: str, got: np.ndarray, want: np.ndarray) -> float:
    if metric == "rel_l2":
        den = np.sum(np.abs(want) ** 2)
        num = np.sum(np.abs(got - want) ** 2)
        return float(math.sqrt(num / den) if den > 0 else math.sqrt(num))
    if metric == "phase_rms":
        d = np.remainder(got.real - want.real + math.pi, 2 * math.pi) - math.pi
        return float(math.sqrt(np.mean(d * d)))
    raise ValueError(f"unknown metric {metric}")


def replay(manifest: Manifest) -> list[dict]:
    """Replays every case that has a numpy reference; others are reported as skipped."""
    out = []
    for case in manifest.cases:
        inp = read_cfld(manifest.directory / case.input)
        want = read_cfld(manifest.directory / case.expected)
        got = compute(case, inp.samples, inp.pitch, inp.wavelength)
        if got is None:
            out.append({"id": case.id, "skipped": True})
            continue
        err = compare(case.metric, got, want.samples)
        out.append({"id": case.id, "error": err, "tolerance": case.tolerance, "pass": err <= case.tolerance,
                    "skipped": False})
    return out
