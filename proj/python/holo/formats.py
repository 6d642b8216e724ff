"""Pure-Python readers/writers for the on-disk interchange formats.

These do not touch the extension module, so other tools (and the tests) can
check files written by the C++ side independently.
"""

from __future__ import annotations

import math
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

CFLD_MAGIC = b"CFLD"
CFLD_VERSION = 1
_CFLD_HEADER = struct.Struct("<4sIIIddd")  # 40 bytes


@dataclass
class CfldField:
    samples: np.ndarray  # complex128, (rows, cols)
    pitch: tuple[float, float]  # (x, y) meters
    wavelength: float


def read_cfld(path) -> CfldField:
    data = Path(path).read_bytes()
    if len(data) < _CFLD_HEADER.size:
        raise ValueError(f"{path}: truncated header")
    magic, version, rows, cols, pitch_y, pitch_x, wavelength = _CFLD_HEADER.unpack_from(data)
    if magic != CFLD_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}")
    if version != CFLD_VERSION:
        raise ValueError(f"{path}: unsupported version {version}")
    payload = np.frombuffer(data, dtype="<f8", offset=_CFLD_HEADER.size)
    if payload.size != 2 * rows * cols:
        raise ValueError(f"{path}: payload holds {payload.size} doubles, expected {2 * rows * cols}")
    samples = (payload[0::2] + 1j * payload[1::2]).reshape(rows, cols)
    return CfldField(samples, (pitch_x, pitch_y), wavelength)


def write_cfld(path, samples: np.ndarray, pitch: tuple[float, float], wavelength: float) -> None:
    samples = np.ascontiguousarray(samples, dtype=np.complex128)
    rows, cols = samples.shape
    header = _CFLD_HEADER.pack(CFLD_MAGIC, CFLD_VERSION, rows, cols, pitch[1], pitch[0], wavelength)
    inter = np.empty(2 * samples.size, dtype="<f8")
    inter[0::2] = samples.real.ravel()
    inter[1::2] = samples.imag.ravel()
    Path(path).write_bytes(header + inter.tobytes())


def sidecar_path(png) -> Path:
    return Path(str(png) + ".meta")


def read_sidecar(png) -> dict[str, str]:
    meta = {}
    for line in sidecar_path(png).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        key, _, value = line.partition("=")
        meta[key.strip()] = value.strip()
    return meta


def read_hologram_png(path) -> tuple[np.ndarray, dict[str, str]]:
    """Phase in (-pi, pi] plus the sidecar entries."""
    from PIL import Image

    with Image.open(path) as im:
        if im.mode not in ("I;16", "I;16B", "I"):
            raise ValueError(f"{path}: expected a 16-bit grayscale PNG, got mode {im.mode}")
        pixels = np.asarray(im, dtype=np.float64)
    phase = pixels / 65535.0 * 2.0 * math.pi
    phase = np.where(phase > math.pi, phase - 2.0 * math.pi, phase)
    return phase, read_sidecar(path)


def phase_to_u16(phase: np.ndarray) -> np.ndarray:
    wrapped = np.mod(phase, 2.0 * math.pi)
    return np.minimum(np.floor(wrapped / (2.0 * math.pi) * 65535.0 + 0.5), 65535).astype(np.uint16)


@dataclass
class ManifestCase:
    id: str
    op: str = ""
    input: str = ""
    expected: str = ""
    metric: str = ""
    tolerance: float = 0.0
    params: dict[str, str] = field(default_factory=dict)

    def number(self, key: str) -> float:
        return float(self.params[key])


@dataclass
class Manifest:
    version: int
    seed: int
    directory: Path
    cases: list[ManifestCase]


def parse_manifest(path) -> Manifest:
    path = Path(path)
    if path.is_dir():
        path = path / "manifest.txt"
    version = None
    seed = 0
    cases: list[ManifestCase] = []
    current = None
    for number, raw in enumerate(path.read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        rest = rest.strip()
        if version is None:
            if head != "holo-golden-manifest":
                raise ValueError(f"{path}:{number}: missing header")
            version = int(rest)
            continue
        if current is None:
            if head == "seed":
                seed = int(rest)
            elif head == "case":
                current = ManifestCase(rest)
            else:
                raise ValueError(f"{path}:{number}: unexpected '{head}' outside a case")
            continue
        if head == "end":
            cases.append(current)
            current = None
        elif head == "param":
            key, _, value = rest.partition(" ")
            current.params[key] = value.strip()
        elif head == "tolerance":
            current.tolerance = float(rest)
        elif head in ("op", "input", "expected", "metric"):
            setattr(current, head, rest)
        else:
            raise ValueError(f"{path}:{number}: unknown key '{head}'")
    if version is None or current is not None:
        raise ValueError(f"{path}: incomplete manifest")
    return Manifest(version, seed, path.parent, cases)
