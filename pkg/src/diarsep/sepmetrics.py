"""Separation scoring: SDR, SI-SDR, SDR improvement, permutation-invariant matching."""

import itertools
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment

from .audio import AudioBuffer

INF_SUBSTITUTE_DB = 300.0
EXHAUSTIVE_MAX_SOURCES = 6

_METRIC_ALIASES = {"sdr": "sdr", "si_sdr": "si_sdr", "si-sdr": "si_sdr"}


@dataclass(frozen=True)
class SepReport:
    per_source_sdr: tuple[float, ...]
    mean_sdr: float
    per_source_sdri: tuple[float, ...]
    mean_sdri: float
    permutation: tuple[int, ...]


def _signal(x) -> np.ndarray:
    if isinstance(x, AudioBuffer):
        return x.samples.astype(np.float64)
    return np.asarray(x, dtype=np.float64).reshape(-1)


def _check_pair(ref: np.ndarray, est: np.ndarray) -> None:
    if ref.size != est.size:
        raise ValueError(f"length mismatch: {ref.size} vs {est.size}")
    if ref.size == 0:
        raise ValueError("signals must be non-empty")


def sdr(ref, est) -> float:
    """Source-to-distortion ratio: 10*log10(sum(s^2) / sum((s - s_hat)^2)) dB.

    A zero residual yields +inf; an all-zero reference is an error.
    """
    s = _signal(ref)
    s_hat = _signal(est)
    _check_pair(s, s_hat)
    ref_energy = float(np.dot(s, s))
    if ref_energy == 0.0:
        raise ValueError("reference signal is all zeros")
    residual = s - s_hat
    res_energy = float(np.dot(residual, residual))
    if res_energy == 0.0:
        return float("inf")
    return 10.0 * np.log10(ref_energy / res_energy)


def si_sdr(ref, est) -> float:
    """Scale-invariant SDR: the reference is rescaled to the least-squares projection.

    s_t = (<s_hat, s> / ||s||^2) * s; returns 10*log10(||s_t||^2 / ||s_hat - s_t||^2).
    An estimate orthogonal to the reference yields -inf, a zero residual +inf.
    """
    s = _signal(ref)
    s_hat = _signal(est)
    _check_pair(s, s_hat)
    ref_energy = float(np.dot(s, s))
    if ref_energy == 0.0:
        raise ValueError("reference signal is all zeros")
    projection = float(np.dot(s_hat, s))
    if projection == 0.0:
        return float("-inf")
    target = (projection / ref_energy) * s
    residual = s_hat - target
    target_energy = float(np.dot(target, target))
    res_energy = float(np.dot(residual, residual))
    if res_energy == 0.0:
        return float("inf")
    return 10.0 * np.log10(target_energy / res_energy)


_METRIC_FNS = {"sdr": sdr, "si_sdr": si_sdr}


def _metric_fn(metric: str):
    try:
        return _METRIC_FNS[_METRIC_ALIASES[metric]]
    except KeyError:
        raise ValueError(f"unknown metric {metric!r}; expected 'sdr' or 'si_sdr'") from None


def _finite(matrix: np.ndarray) -> np.ndarray:
    return np.clip(matrix, -INF_SUBSTITUTE_DB, INF_SUBSTITUTE_DB)


def _mean_db(values) -> float:
    values = list(values)
    if any(v == float("inf") for v in values):
        return float("inf")
    if any(v == float("-inf") for v in values):
        return float("-inf")
    return float(np.mean(values))


def pit(refs, ests, metric: str = "si_sdr", method: str = "auto") -> tuple[tuple[int, ...], float]:
    """Best reference<->estimate matching: the permutation maximizing the mean metric.

    Exhaustive search for up to 6 sources, optimal assignment above that
    (method="exhaustive" / "hungarian" forces one). Infinite pairwise scores
    are substituted by +-300 dB during selection; exhaustive ties resolve to
    the lexicographically smallest permutation (the assignment path is
    deterministic but unspecified among equal optima). Returns
    (permutation, mean score) where ests[permutation[i]] matches refs[i].
    """
    if len(refs) != len(ests):
        raise ValueError(f"count mismatch: {len(refs)} references vs {len(ests)} estimates")
    if not refs:
        raise ValueError("need at least one source")
    fn = _metric_fn(metric)
    n = len(refs)
    matrix = np.array([[fn(r, e) for e in ests] for r in refs])
    selectable = _finite(matrix)

    if method == "auto":
        method = "exhaustive" if n <= EXHAUSTIVE_MAX_SOURCES else "hungarian"
    if method == "exhaustive":
        best_perm = None
        best_score = -np.inf
        for perm in itertools.permutations(range(n)):
            score = selectable[np.arange(n), perm].mean()
            if score > best_score:
                best_score = score
                best_perm = perm
    elif method == "hungarian":
        rows, cols = linear_sum_assignment(selectable, maximize=True)
        best_perm = tuple(int(c) for c in cols[np.argsort(rows)])
    else:
        raise ValueError(f"unknown method {method!r}")

    return tuple(best_perm), _mean_db(matrix[np.arange(n), best_perm])


def sdr_improvement(refs, ests, mixture, metric: str = "sdr", permute: bool = True) -> SepReport:
    """Per-source metric and its improvement over scoring the raw mixture.

    The best permutation (under the same metric) is applied first unless
    ``permute`` is False. Improvement per source i is
    metric(ref_i, est_perm(i)) - metric(ref_i, mixture); matching infinities
    cancel to 0.
    """
    if len(refs) != len(ests):
        raise ValueError(f"count mismatch: {len(refs)} references vs {len(ests)} estimates")
    if not refs:
        raise ValueError("need at least one source")
    fn = _metric_fn(metric)
    n = len(refs)
    perm = pit(refs, ests, metric)[0] if permute else tuple(range(n))

    per_sdr = [fn(refs[i], ests[perm[i]]) for i in range(n)]
    baseline = [fn(refs[i], mixture) for i in range(n)]
    per_sdri = [0.0 if a == b and np.isinf(a) else a - b for a, b in zip(per_sdr, baseline)]
    return SepReport(
        tuple(per_sdr),
        _mean_db(per_sdr),
        tuple(per_sdri),
        _mean_db(per_sdri),
        perm,
    )
