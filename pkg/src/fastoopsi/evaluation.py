"""Scores comparing an inferred spike train with the true one."""
from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class EvalReport:
    """Agreement between inferred and true spike trains.

    Event counts are numbers of bins at or above the detection threshold.
    ``degenerate`` is set when a correlation was undefined (zero variance)
    and reported as 0.
    """

    pearson_r: float
    pearson_r_smoothed: float
    detection_f1: float
    spike_count_true: int
    spike_count_inferred: int
    degenerate: bool = False

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, bool):
                value = "true" if value else "false"
            elif isinstance(value, float):
                value = f"{value:.12g}"
            lines.append(f"{key}={value}")
        return "\n".join(lines) + "\n"


def boxcar(x, w: int):
    """Centred moving average of width ``w`` with zero padding."""
    if w < 1:
        raise DomainError(f"smoothing width must be at least 1, got {w}")
    return np.convolve(np.asarray(x, dtype=np.float64), np.ones(w) / w, mode="same")


def pearson(x, y):
    """Pearson correlation; ``(0.0, True)`` when either input is constant."""
    x = np.asarray(x, dtype=np.float64) - np.mean(x)
    y = np.asarray(y, dtype=np.float64) - np.mean(y)
    denom = np.sqrt(np.dot(x, x) * np.dot(y, y))
    if not denom > 0:
        return 0.0, True
    return float(np.clip(np.dot(x, y) / denom, -1.0, 1.0)), False


def match_events(true_idx, inferred_idx, k: int) -> int:
    """Greedy one-to-one matching in time order.

    Each true event, earliest first, takes the earliest unused inferred event
    within ``k`` bins. Returns the number of matches.
    """
    inferred_idx = np.sort(np.asarray(inferred_idx))
    used = np.zeros(len(inferred_idx), dtype=bool)
    start = 0
    hits = 0
    for t in np.sort(np.asarray(true_idx)):
        while start < len(inferred_idx) and inferred_idx[start] < t - k:
            start += 1
        j = start
        while j < len(inferred_idx) and inferred_idx[j] <= t + k:
            if not used[j]:
                used[j] = True
                hits += 1
                break
            j += 1
    return hits


def evaluate(inferred, truth, w: int = 5, k: int = 2, theta_det: float = 0.1) -> EvalReport:
    """Compare spike trains.

    Parameters
    ----------
    inferred, truth : SpikeTrain or array_like
        Equal-length trains.
    w : int
        Boxcar width in bins for the smoothed correlation.
    k : int
        Matching tolerance in bins.
    theta_det : float
        Bins with values ``>= theta_det`` count as events, in both trains.
    """
    a = np.asarray(getattr(inferred, "values", inferred), dtype=np.float64)
    b = np.asarray(getattr(truth, "values", truth), dtype=np.float64)
    if a.shape != b.shape or a.ndim != 1:
        raise DomainError(f"trains must be 1-D and of equal length, got {a.shape} and {b.shape}")
    if k < 0:
        raise DomainError(f"match tolerance must be nonnegative, got {k}")
    r, deg1 = pearson(a, b)
    rs, deg2 = pearson(boxcar(a, w), boxcar(b, w))
    inf_idx = np.flatnonzero(a >= theta_det)
    true_idx = np.flatnonzero(b >= theta_det)
    total = len(inf_idx) + len(true_idx)
    f1 = 1.0 if total == 0 else 2.0 * match_events(true_idx, inf_idx, k) / total
    return EvalReport(
        pearson_r=r, pearson_r_smoothed=rs, detection_f1=f1,
        spike_count_true=int(len(true_idx)), spike_count_inferred=int(len(inf_idx)),
        degenerate=deg1 or deg2,
    )
