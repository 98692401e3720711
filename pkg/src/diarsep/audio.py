"""Mono waveform buffer and 16-bit PCM WAV file I/O."""

import struct
from dataclasses import dataclass
from pathlib import Path

import numpy as np


@dataclass(frozen=True)
class AudioBuffer:
    """Mono waveform: float32 samples (nominally in [-1, 1]) plus a sample rate in Hz."""

    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float32).reshape(-1)
        if not np.all(np.isfinite(samples)):
            raise ValueError("audio samples must be finite")
        rate = int(self.sample_rate)
        if rate <= 0:
            raise ValueError(f"sample_rate must be positive, got {self.sample_rate}")
        object.__setattr__(self, "samples", samples)
        object.__setattr__(self, "sample_rate", rate)

    def __len__(self) -> int:
        return self.samples.size

    @property
    def duration(self) -> float:
        """Length in seconds."""
        return self.samples.size / self.sample_rate


def read_wav(path: str | Path) -> AudioBuffer:
    """Read a mono 16-bit PCM RIFF/WAVE file.

    Samples are scaled by 1/32768, so the int16 range maps into [-1, 1).
    Raises ValueError with a distinct message for malformed headers,
    multichannel audio, and non-PCM16 encodings.
    """
    raw = Path(path).read_bytes()
    if len(raw) < 12 or raw[:4] != b"RIFF" or raw[8:12] != b"WAVE":
        raise ValueError(f"{path}: not a RIFF/WAVE file")

    fmt = None
    data = None
    pos = 12
    while pos + 8 <= len(raw):
        chunk_id = raw[pos : pos + 4]
        (size,) = struct.unpack_from("<I", raw, pos + 4)
        body = raw[pos + 8 : pos + 8 + size]
        if len(body) < size:
            raise ValueError(f"{path}: malformed WAV, truncated {chunk_id!r} chunk")
        if chunk_id == b"fmt ":
            if size < 16:
                raise ValueError(f"{path}: malformed WAV, fmt chunk too short")
            fmt = struct.unpack_from("<HHIIHH", body)
        elif chunk_id == b"data":
            data = body
        pos += 8 + size + (size & 1)  # chunks are word-aligned

    if fmt is None or data is None:
        raise ValueError(f"{path}: malformed WAV, missing fmt or data chunk")
    audio_format, n_channels, sample_rate, _, _, bits = fmt
    if n_channels != 1:
        raise ValueError(f"{path}: expected mono audio, got {n_channels} channels")
    if audio_format != 1 or bits != 16:
        raise ValueError(
            f"{path}: expected 16-bit PCM encoding, got format {audio_format} "
            f"with {bits}-bit samples"
        )

    pcm = np.frombuffer(data[: len(data) - (len(data) % 2)], dtype="<i2")
    return AudioBuffer(pcm.astype(np.float32) / 32768.0, sample_rate)


def write_wav(buffer: AudioBuffer, path: str | Path) -> None:
    """Write a mono 16-bit PCM WAV file.

    Samples are clipped to [-1, 1] and quantized as round(sample * 32767),
    clamped to the int16 range.
    """
    x = np.clip(buffer.samples.astype(np.float64), -1.0, 1.0)
    pcm = np.clip(np.round(x * 32767.0), -32768, 32767).astype("<i2")
    data = pcm.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(data),
        b"WAVE",
        b"fmt ",
        16,
        1,  # PCM
        1,  # mono
        buffer.sample_rate,
        buffer.sample_rate * 2,
        2,
        16,
        b"data",
        len(data),
    )
    Path(path).write_bytes(header + data)
