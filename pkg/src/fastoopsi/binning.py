"""Crude discretization baseline.

This is a stand-in method, not a competitive estimator: decay-compensated
first differences of the [0, 1]-scaled trace, keeping only the values at or
above a quantile.
"""
from __future__ import annotations

import numpy as np

from .errors import DomainError
from .linalg import DiffOperator, apply_M
from .model import FluorescenceTrace, SpikeTrain, filter_calcium
from .oopsi import InferenceResult
from .preprocess import ModelParams, init_params, normalize

DEFAULT_QUANTILE = 0.95
ROUNDING_FLOOR = 1e-9


def discretize_binning(F: FluorescenceTrace, gamma: float,
                       threshold_quantile: float = DEFAULT_QUANTILE) -> SpikeTrain:
    """Threshold the compensated differences ``F[t] - gamma * F[t-1]``.

    Values below the ``threshold_quantile`` quantile of the differences, and
    all values at or below ``ROUNDING_FLOOR`` times the largest magnitude
    (negatives included), are set to zero; the survivors are scaled to a
    maximum of 1. The first bin is always zero. A constant trace maps to an
    all-zero train.
    """
    if not 0 < threshold_quantile < 1:
        raise DomainError(f"threshold_quantile must lie in (0, 1), got {threshold_quantile}")
    if not 0 <= gamma <= 1:
        raise DomainError(f"gamma must lie in [0, 1], got {gamma}")
    if F.T < 2:
        raise DomainError(f"need at least 2 frames, got {F.T}")
    f = F.values
    if not f.max() > f.min():
        return SpikeTrain(np.zeros(F.T), F.dt)
    f = normalize(F).values
    d = apply_M(DiffOperator(gamma, F.T), f)
    d[0] = 0.0
    cut = np.quantile(d, threshold_quantile)
    d[d < cut] = 0.0
    # differences at rounding level are not events
    d[d <= ROUNDING_FLOOR * np.abs(d).max()] = 0.0
    peak = d.max()
    if peak > 0:
        d /= peak
    return SpikeTrain(d, F.dt)


def binning_infer(F_raw: FluorescenceTrace,
                  threshold_quantile: float = DEFAULT_QUANTILE) -> InferenceResult:
    """Run :func:`discretize_binning` with ``gamma = 1 - dt`` and package the result.

    ``C`` is the calcium implied by the thresholded train.
    """
    f = F_raw.values
    if F_raw.T >= 2 and f.max() > f.min():
        F = normalize(F_raw)
        P = init_params(F)
    else:
        F = F_raw
        P = ModelParams(1.0, float(np.median(f)), 1.0, 1.0 - F_raw.dt, 1.0, F_raw.dt)
    n = discretize_binning(F_raw, P.gamma, threshold_quantile)
    C = filter_calcium(n, P.gamma)
    return InferenceResult(n=n, C=C, params=P, F=F, objective_trajectory=[],
                           converged=True, iterations=0, method="binning")
