"""Feature carriers (per-layer stacks, fused matrices) and the SSLF binary container.

SSLF layout, little-endian throughout:

    bytes 0-3    magic "SSLF"
    bytes 4-7    uint32 version (1)
    bytes 8-11   uint32 n_layers
    bytes 12-15  uint32 n_frames
    bytes 16-19  uint32 dim
    bytes 20-23  float32 frame_rate (Hz)
    bytes 24-    float32 payload, layer-major then frame-major (C order)
"""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SSLF_MAGIC = b"SSLF"
SSLF_VERSION = 1
_HEADER = struct.Struct("<4sIIIIf")


@dataclass(frozen=True)
class FeatureStack:
    """Per-layer, per-frame features: float32 array of shape (n_layers, n_frames, dim)."""

    data: np.ndarray
    frame_rate: float = 50.0

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float32)
        if data.ndim != 3 or min(data.shape) < 1:
            raise ValueError(f"stack data must be (n_layers, n_frames, dim) with positive sizes, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("stack data must be finite")
        rate = float(self.frame_rate)
        if not np.isfinite(rate) or rate <= 0:
            raise ValueError(f"frame_rate must be positive, got {self.frame_rate}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "frame_rate", rate)

    @property
    def n_layers(self) -> int:
        return self.data.shape[0]

    @property
    def n_frames(self) -> int:
        return self.data.shape[1]

    @property
    def dim(self) -> int:
        return self.data.shape[2]


@dataclass(frozen=True)
class FeatureMatrix:
    """A per-frame feature matrix: float32 array of shape (n_frames, dim).

    dim may be zero so that degenerate concatenations stay expressible.
    """

    data: np.ndarray
    frame_rate: float

    def __post_init__(self):
        data = np.asarray(self.data, dtype=np.float32)
        if data.ndim != 2 or data.shape[0] < 1:
            raise ValueError(f"matrix data must be (n_frames, dim) with n_frames >= 1, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise ValueError("matrix data must be finite")
        rate = float(self.frame_rate)
        if not np.isfinite(rate) or rate <= 0:
            raise ValueError(f"frame_rate must be positive, got {self.frame_rate}")
        object.__setattr__(self, "data", data)
        object.__setattr__(self, "frame_rate", rate)

    @property
    def n_frames(self) -> int:
        return self.data.shape[0]

    @property
    def dim(self) -> int:
        return self.data.shape[1]


def write_feature_stack(stack: FeatureStack, path: str | Path) -> None:
    """Write a FeatureStack as an SSLF file (bit-exact round trip with read)."""
    header = _HEADER.pack(
        SSLF_MAGIC,
        SSLF_VERSION,
        stack.n_layers,
        stack.n_frames,
        stack.dim,
        stack.frame_rate,
    )
    payload = np.ascontiguousarray(stack.data, dtype="<f4").tobytes()
    Path(path).write_bytes(header + payload)


def read_feature_stack(path: str | Path) -> FeatureStack:
    """Read an SSLF file, validating magic, version, declared sizes and finiteness."""
    raw = Path(path).read_bytes()
    if len(raw) < _HEADER.size:
        raise ValueError(f"{path}: truncated SSLF header")
    magic, version, n_layers, n_frames, dim, frame_rate = _HEADER.unpack_from(raw)
    if magic != SSLF_MAGIC:
        raise ValueError(f"{path}: bad magic {magic!r}, expected {SSLF_MAGIC!r}")
    if version != SSLF_VERSION:
        raise ValueError(f"{path}: unsupported SSLF version {version}")
    if min(n_layers, n_frames, dim) < 1:
        raise ValueError(f"{path}: sizes must be positive, got {n_layers}x{n_frames}x{dim}")
    expected = n_layers * n_frames * dim * 4
    actual = len(raw) - _HEADER.size
    if actual != expected:
        raise ValueError(
            f"{path}: size mismatch, header declares {expected} payload bytes but file has {actual}"
        )
    data = np.frombuffer(raw, dtype="<f4", offset=_HEADER.size).reshape(n_layers, n_frames, dim)
    if not np.all(np.isfinite(data)):
        raise ValueError(f"{path}: non-finite payload")
    return FeatureStack(data.copy(), float(frame_rate))
