"""Labeled speech intervals and the RTTM / UEM text formats."""

from dataclasses import dataclass, field
from typing import NamedTuple

import math


class Segment(NamedTuple):
    onset: float
    duration: float
    speaker: str


@dataclass(frozen=True)
class Annotation:
    """A set of labeled speech intervals for one recording.

    Onsets are non-negative, durations strictly positive, speaker labels
    non-empty and whitespace-free (they travel through whitespace-delimited
    RTTM).
    """

    uri: str
    segments: tuple[Segment, ...] = field(default_factory=tuple)

    def __post_init__(self):
        segments = tuple(Segment(float(o), float(d), str(s)) for o, d, s in self.segments)
        for seg in segments:
            if not math.isfinite(seg.onset) or seg.onset < 0:
                raise ValueError(f"segment onset must be finite and >= 0, got {seg.onset}")
            if not math.isfinite(seg.duration) or seg.duration <= 0:
                raise ValueError(f"segment duration must be finite and > 0, got {seg.duration}")
            if not seg.speaker or any(c.isspace() for c in seg.speaker):
                raise ValueError(f"speaker label must be non-empty without whitespace, got {seg.speaker!r}")
        object.__setattr__(self, "segments", segments)

    def speakers(self) -> list[str]:
        """Distinct speaker labels, sorted."""
        return sorted({seg.speaker for seg in self.segments})

    def total_speech(self) -> float:
        """Sum of segment durations in seconds (overlaps counted per speaker)."""
        return sum(seg.duration for seg in self.segments)


def parse_rttm(text: str) -> dict[str, Annotation]:
    """Parse RTTM text into one Annotation per recording URI.

    Every non-empty line must be a SPEAKER record with at least 9
    whitespace-separated fields; fields 2, 4, 5 and 8 carry the URI, onset,
    duration and speaker label. Errors report the offending line number.
    """
    segments: dict[str, list[Segment]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if fields[0] != "SPEAKER":
            raise ValueError(f"RTTM line {lineno}: expected a SPEAKER record, got {fields[0]!r}")
        if len(fields) < 9:
            raise ValueError(f"RTTM line {lineno}: expected at least 9 fields, got {len(fields)}")
        uri = fields[1]
        try:
            onset = float(fields[3])
            duration = float(fields[4])
        except ValueError:
            raise ValueError(f"RTTM line {lineno}: non-numeric onset or duration") from None
        if not (math.isfinite(onset) and math.isfinite(duration)):
            raise ValueError(f"RTTM line {lineno}: non-finite onset or duration")
        if duration <= 0:
            raise ValueError(f"RTTM line {lineno}: duration must be positive, got {duration}")
        if onset < 0:
            raise ValueError(f"RTTM line {lineno}: onset must be >= 0, got {onset}")
        segments.setdefault(uri, []).append(Segment(onset, duration, fields[7]))
    return {uri: Annotation(uri, tuple(segs)) for uri, segs in segments.items()}


def emit_rttm(annotation: Annotation) -> str:
    """Serialize an Annotation as RTTM text.

    One SPEAKER line per segment, sorted by onset then label, times at
    millisecond precision. An empty annotation yields empty text.
    """
    ordered = sorted(annotation.segments, key=lambda s: (s.onset, s.speaker, s.duration))
    lines = [
        f"SPEAKER {annotation.uri} 1 {seg.onset:.3f} {seg.duration:.3f} "
        f"<NA> <NA> {seg.speaker} <NA> <NA>"
        for seg in ordered
    ]
    return "\n".join(lines) + ("\n" if lines else "")


def parse_uem(text: str) -> dict[str, list[tuple[float, float]]]:
    """Parse UEM-style evaluation regions: lines of "uri channel onset offset".

    Returns a map from URI to a list of (onset, offset) intervals.
    """
    regions: dict[str, list[tuple[float, float]]] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        if not line.strip():
            continue
        fields = line.split()
        if len(fields) < 4:
            raise ValueError(f"UEM line {lineno}: expected 4 fields, got {len(fields)}")
        try:
            onset = float(fields[2])
            offset = float(fields[3])
        except ValueError:
            raise ValueError(f"UEM line {lineno}: non-numeric onset or offset") from None
        if not (math.isfinite(onset) and math.isfinite(offset)) or offset <= onset or onset < 0:
            raise ValueError(f"UEM line {lineno}: invalid interval [{onset}, {offset})")
        regions.setdefault(fields[0], []).append((onset, offset))
    return regions
