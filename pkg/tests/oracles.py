"""Independent brute-force oracles shared by the DER and acceptance tests."""

import itertools

import numpy as np

from diarsep import Annotation


def random_annotation(rng, uri="u", max_speakers=5, max_segments=20, max_time=60.0):
    """Random annotation with millisecond-aligned boundaries."""
    n_speakers = int(rng.integers(1, max_speakers + 1))
    n_segments = int(rng.integers(1, max_segments + 1))
    segments = []
    for _ in range(n_segments):
        onset = round(float(rng.uniform(0.0, max_time - 0.5)), 3)
        duration = round(float(rng.uniform(0.1, 8.0)), 3)
        speaker = f"spk{int(rng.integers(0, n_speakers))}"
        segments.append((onset, duration, speaker))
    return Annotation(uri, tuple(segments))


def perturbed_hypothesis(rng, ref: Annotation, max_speakers=5):
    """Hypothesis derived from a reference by dropping, jittering and relabeling."""
    n_labels = int(rng.integers(1, max_speakers + 1))
    relabel = {s: f"hyp{int(rng.integers(0, n_labels))}" for s in ref.speakers()}
    segments = []
    for seg in ref.segments:
        if rng.uniform() < 0.2:
            continue
        onset = max(0.0, round(seg.onset + float(rng.uniform(-0.3, 0.3)), 3))
        duration = max(0.05, round(seg.duration + float(rng.uniform(-0.3, 0.3)), 3))
        segments.append((onset, duration, relabel[seg.speaker]))
    if not segments:
        segments.append((0.0, 1.0, "hyp0"))
    return Annotation(ref.uri, tuple(segments))


def _grid_masks(annotation: Annotation, speakers, n, step):
    masks = np.zeros((len(speakers), n), dtype=bool)
    index = {s: i for i, s in enumerate(speakers)}
    for seg in annotation.segments:
        a = int(round(seg.onset / step))
        b = int(round((seg.onset + seg.duration) / step))
        masks[index[seg.speaker], a:b] = True
    return masks


def _best_matching(overlap: np.ndarray):
    """Exhaustive injective matching maximizing total overlap; returns (pairs, value)."""
    n_ref, n_hyp = overlap.shape
    best_pairs, best_value = [], 0.0
    if n_ref <= n_hyp:
        for cols in itertools.permutations(range(n_hyp), n_ref):
            value = sum(overlap[i, c] for i, c in enumerate(cols))
            if value > best_value:
                best_value = value
                best_pairs = list(enumerate(cols))
    else:
        for rows in itertools.permutations(range(n_ref), n_hyp):
            value = sum(overlap[r, j] for j, r in enumerate(rows))
            if value > best_value:
                best_value = value
                best_pairs = [(r, j) for j, r in enumerate(rows)]
    return best_pairs, float(best_value)


def grid_der(ref: Annotation, hyp: Annotation, collar=0.0, regions=None, step=0.001):
    """1 ms frame-grid DER scorer with exhaustive-search speaker matching.

    Returns (false_alarm_s, missed_s, confusion_s, total_speech_s, der_pct,
    matched_seconds). The matching is computed on region-cropped but
    non-collared counts, mirroring the scorer's mapping convention.
    """
    ends = [s.onset + s.duration for s in ref.segments + hyp.segments]
    if regions:
        ends.extend(e for _, e in regions)
    horizon = max(ends, default=0.0) + collar + step
    n = int(round(horizon / step)) + 1

    ref_speakers = ref.speakers()
    hyp_speakers = hyp.speakers()
    ref_masks = _grid_masks(ref, ref_speakers, n, step)
    hyp_masks = _grid_masks(hyp, hyp_speakers, n, step)

    region_mask = np.ones(n, dtype=bool)
    if regions is not None:
        region_mask = np.zeros(n, dtype=bool)
        for a, b in regions:
            region_mask[int(round(a / step)) : int(round(b / step))] = True

    # matching from region-cropped, non-collared co-activity
    overlap = (ref_masks[:, None, :] & hyp_masks[None, :, :] & region_mask).sum(axis=2).astype(float)
    pairs, matched_frames = _best_matching(overlap)

    scored = region_mask.copy()
    if collar > 0:
        for seg in ref.segments:
            for boundary in (seg.onset, seg.onset + seg.duration):
                a = max(0, int(round((boundary - collar) / step)))
                b = int(round((boundary + collar) / step))
                scored[a:b] = False

    ref_scored = ref_masks & scored
    hyp_scored = hyp_masks & scored
    n_ref = ref_scored.sum(axis=0)
    n_hyp = hyp_scored.sum(axis=0)
    n_correct = np.zeros(n, dtype=np.int64)
    for i, j in pairs:
        n_correct += ref_scored[i] & hyp_scored[j]

    missed = float(np.maximum(n_ref - n_hyp, 0).sum()) * step
    false_alarm = float(np.maximum(n_hyp - n_ref, 0).sum()) * step
    confusion = float((np.minimum(n_ref, n_hyp) - n_correct).sum()) * step
    speech = float(n_ref.sum()) * step
    der_pct = 100.0 * (false_alarm + missed + confusion) / speech if speech else 0.0
    return false_alarm, missed, confusion, speech, der_pct, matched_frames * step
