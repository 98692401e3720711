"""Diarization error rate: interval-sweep scoring under an optimal speaker mapping."""

import bisect
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .annotation import Annotation

Interval = tuple[float, float]


@dataclass(frozen=True)
class DerReport:
    """Scored DER components in seconds and percentage points.

    der_pct is the literal sum fa_pct + md_pct + sc_pct, so the decomposition
    identity holds exactly. Percentages are relative to total_speech; a report
    with zero scored speech carries all-zero percentages.
    """

    false_alarm: float
    missed: float
    confusion: float
    total_speech: float
    fa_pct: float
    md_pct: float
    sc_pct: float
    der_pct: float
    mapping: dict[str, str]


def _merged_timelines(annotation: Annotation) -> dict[str, list[Interval]]:
    """Per-speaker union of segments as sorted disjoint [start, end) intervals."""
    per_speaker: dict[str, list[Interval]] = {}
    for seg in annotation.segments:
        per_speaker.setdefault(seg.speaker, []).append((seg.onset, seg.onset + seg.duration))
    merged = {}
    for speaker, intervals in per_speaker.items():
        intervals.sort()
        out = [intervals[0]]
        for start, end in intervals[1:]:
            if start <= out[-1][1]:
                out[-1] = (out[-1][0], max(out[-1][1], end))
            else:
                out.append((start, end))
        merged[speaker] = out
    return merged


def _crop(intervals: list[Interval], regions: list[Interval] | None) -> list[Interval]:
    if regions is None:
        return intervals
    out = []
    for start, end in intervals:
        for r_start, r_end in regions:
            lo, hi = max(start, r_start), min(end, r_end)
            if hi > lo:
                out.append((lo, hi))
    out.sort()
    return out


def _overlap_seconds(a: list[Interval], b: list[Interval]) -> float:
    total = 0.0
    i = j = 0
    while i < len(a) and j < len(b):
        lo = max(a[i][0], b[j][0])
        hi = min(a[i][1], b[j][1])
        if hi > lo:
            total += hi - lo
        if a[i][1] <= b[j][1]:
            i += 1
        else:
            j += 1
    return total


def _merge_regions(regions: list[Interval]) -> list[Interval]:
    regions = sorted(regions)
    out = [regions[0]]
    for start, end in regions[1:]:
        if start <= out[-1][1]:
            out[-1] = (out[-1][0], max(out[-1][1], end))
        else:
            out.append((start, end))
    return out


def co_activity_matrix(
    ref: Annotation,
    hyp: Annotation,
    eval_regions: list[Interval] | None = None,
) -> tuple[list[str], list[str], np.ndarray]:
    """Ref x hyp matrix of co-active seconds, speakers sorted by label."""
    if eval_regions:
        eval_regions = _merge_regions(list(eval_regions))
    ref_tl = _merged_timelines(ref)
    hyp_tl = _merged_timelines(hyp)
    ref_speakers = sorted(ref_tl)
    hyp_speakers = sorted(hyp_tl)
    matrix = np.zeros((len(ref_speakers), len(hyp_speakers)))
    for i, r in enumerate(ref_speakers):
        r_ints = _crop(ref_tl[r], eval_regions)
        for j, h in enumerate(hyp_speakers):
            matrix[i, j] = _overlap_seconds(r_ints, _crop(hyp_tl[h], eval_regions))
    return ref_speakers, hyp_speakers, matrix


def optimal_mapping(
    ref: Annotation,
    hyp: Annotation,
    eval_regions: list[Interval] | None = None,
) -> dict[str, str]:
    """One-to-one ref -> hyp speaker map maximizing total co-active time.

    Solved as an optimal assignment on the co-activity matrix; pairs with zero
    matched time are dropped, so the map is partial.
    """
    ref_speakers, hyp_speakers, matrix = co_activity_matrix(ref, hyp, eval_regions)
    if not ref_speakers or not hyp_speakers:
        return {}
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    return {
        ref_speakers[i]: hyp_speakers[j]
        for i, j in zip(rows, cols)
        if matrix[i, j] > 0.0
    }


def _covers(timeline: list[Interval], starts: list[float], point: float) -> bool:
    idx = bisect.bisect_right(starts, point) - 1
    return idx >= 0 and point < timeline[idx][1]


def compute_der(
    ref: Annotation,
    hyp: Annotation,
    collar: float = 0.0,
    eval_regions: list[Interval] | None = None,
) -> DerReport:
    """Score false alarm, missed detection and speaker confusion time.

    The sweep walks elementary intervals between the sorted boundaries of all
    activity, collar exclusion zones (+- collar around every reference segment
    boundary) and evaluation regions. Per interval of length d with N_ref /
    N_hyp active speakers and N_correct optimally mapped co-active pairs:

        missed      += d * max(0, N_ref - N_hyp)
        false_alarm += d * max(0, N_hyp - N_ref)
        confusion   += d * (min(N_ref, N_hyp) - N_correct)
        speech      += d * N_ref

    Raises ValueError when no reference speech is scored but hypothesis
    activity is; two empty annotations score 0.
    """
    if collar < 0:
        raise ValueError(f"collar must be >= 0, got {collar}")
    if eval_regions is not None:
        eval_regions = _merge_regions(list(eval_regions)) if eval_regions else []

    mapping = optimal_mapping(ref, hyp, eval_regions)
    ref_tl = _merged_timelines(ref)
    hyp_tl = _merged_timelines(hyp)
    ref_starts = {s: [iv[0] for iv in tl] for s, tl in ref_tl.items()}
    hyp_starts = {s: [iv[0] for iv in tl] for s, tl in hyp_tl.items()}

    exclusions: list[Interval] = []
    if collar > 0:
        for seg in ref.segments:
            exclusions.append((seg.onset - collar, seg.onset + collar))
            end = seg.onset + seg.duration
            exclusions.append((end - collar, end + collar))
        exclusions = _merge_regions(exclusions)
    excl_starts = [iv[0] for iv in exclusions]

    boundaries: set[float] = set()
    for tl in list(ref_tl.values()) + list(hyp_tl.values()):
        for start, end in tl:
            boundaries.update((start, end))
    for start, end in exclusions:
        boundaries.update((start, end))
    if eval_regions is not None:
        for start, end in eval_regions:
            boundaries.update((start, end))
    edges = sorted(boundaries)

    eval_starts = [iv[0] for iv in eval_regions] if eval_regions is not None else None

    false_alarm = missed = confusion = total_speech = 0.0
    for a, b in zip(edges, edges[1:]):
        mid = 0.5 * (a + b)
        if eval_regions is not None and not _covers(eval_regions, eval_starts, mid):
            continue
        if exclusions and _covers(exclusions, excl_starts, mid):
            continue
        d = b - a
        active_ref = {s for s, tl in ref_tl.items() if _covers(tl, ref_starts[s], mid)}
        active_hyp = {s for s, tl in hyp_tl.items() if _covers(tl, hyp_starts[s], mid)}
        n_ref, n_hyp = len(active_ref), len(active_hyp)
        n_correct = sum(1 for r in active_ref if mapping.get(r) in active_hyp)
        missed += d * max(0, n_ref - n_hyp)
        false_alarm += d * max(0, n_hyp - n_ref)
        confusion += d * (min(n_ref, n_hyp) - n_correct)
        total_speech += d * n_ref

    if total_speech == 0.0:
        if false_alarm > 0.0:
            raise ValueError(
                "no scored reference speech but hypothesis speech present; rates undefined"
            )
        return DerReport(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, mapping)

    fa_pct = 100.0 * false_alarm / total_speech
    md_pct = 100.0 * missed / total_speech
    sc_pct = 100.0 * confusion / total_speech
    return DerReport(
        false_alarm,
        missed,
        confusion,
        total_speech,
        fa_pct,
        md_pct,
        sc_pct,
        fa_pct + md_pct + sc_pct,
        mapping,
    )
