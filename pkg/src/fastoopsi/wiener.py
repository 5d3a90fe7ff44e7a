"""Wiener-filter baseline: Gaussian spike prior, quadratic objective.

With a Gaussian prior of mean and variance ``lam_dt`` on each ``n[t]`` the
negative log posterior is quadratic in ``C``; a single Newton step lands on
its minimizer. The loop below re-estimates the noise scale between steps.
Scale and offset are fixed to 1 and 0, the rate to 1 Hz and the decay time
constant to 1 s.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateInputError, DomainError, NumericalError
from .linalg import DiffOperator, apply_M, apply_Mt, assemble_hessian, solve_tridiagonal
from .model import CalciumTrace, FluorescenceTrace, SpikeTrain, filter_calcium
from .oopsi import InferenceResult
from .preprocess import SIGMA_FLOOR, ModelParams


@dataclass(frozen=True)
class WienerOptions:
    iter_max: int = 25
    gtol: float = 1e-7

    def __post_init__(self):
        if int(self.iter_max) != self.iter_max or self.iter_max < 1:
            raise DomainError(f"iter_max must be a positive integer, got {self.iter_max}")
        if not self.gtol > 0:
            raise DomainError(f"gtol must be positive, got {self.gtol}")


def _arr(x):
    return np.asarray(getattr(x, "values", x), dtype=np.float64)


def wiener_objective(C, F, P: ModelParams) -> float:
    """``(1/2 sigma^2)|F - C|^2 + (1/2 lam_dt)|M C - lam_dt|^2``."""
    c, f = _arr(C), _arr(F)
    if c.shape != f.shape:
        raise DomainError(f"C and F lengths differ: {c.shape} vs {f.shape}")
    lam = P.lam_dt
    r = f - c
    q = apply_M(DiffOperator(P.gamma, c.shape[0]), c) - lam
    return float(0.5 * np.dot(r, r) / P.sigma ** 2 + 0.5 * np.dot(q, q) / lam)


def wiener_gradient(C, F, P: ModelParams):
    """``-(F - C)/sigma^2 + M^T(M C)/lam_dt - M^T 1``."""
    c, f = _arr(C), _arr(F)
    op = DiffOperator(P.gamma, c.shape[0])
    return -(f - c) / P.sigma ** 2 + apply_Mt(op, apply_M(op, c) / P.lam_dt - 1.0)


def wiener_hessian(T: int, P: ModelParams):
    """Constant Hessian ``I/sigma^2 + M^T M / lam_dt`` as a :class:`Tridiag`."""
    op = DiffOperator(P.gamma, T)
    return assemble_hessian(op, np.full(T, 1.0 / P.lam_dt), 1.0 / P.sigma ** 2)


def wiener_newton_step(C, F, P: ModelParams):
    """One full Newton step; returns the minimizer of the objective for ``P``."""
    c = _arr(C)
    d = solve_tridiagonal(wiener_hessian(c.shape[0], P), wiener_gradient(c, F, P))
    return c - d


def wiener_filter(F_raw: FluorescenceTrace, dt: Optional[float] = None,
                  opts: Optional[WienerOptions] = None) -> InferenceResult:
    """Wiener-filter spike estimate.

    The trace is centred and scaled to unit max-abs, the noise scale starts at
    ``0.1 * |F|_2``. Each round takes a Newton step and, if the objective fell
    more than ``gtol`` below the last recorded value, keeps it and
    re-estimates sigma from the residual; otherwise the loop stops.
    The returned spikes are clipped at zero and scaled to a maximum of 1.
    """
    opts = opts or WienerOptions()
    dt = F_raw.dt if dt is None else float(dt)
    f = np.asarray(F_raw.values, dtype=np.float64)
    T = f.shape[0]
    if T < 2:
        raise DomainError(f"need at least 2 frames, got {T}")
    if not dt < 1.0:
        raise DomainError(f"frame interval must be below 1 s, got {dt}")
    f = f - f.mean()
    scale = np.abs(f).max()
    if not scale > 0:
        raise DegenerateInputError("cannot run the Wiener filter on a constant trace")
    f = f / scale
    F = FluorescenceTrace(f, dt)

    P = ModelParams(alpha=1.0, beta=0.0, sigma=max(0.1 * float(np.linalg.norm(f)), SIGMA_FLOOR),
                    gamma=1.0 - dt, lambda_rate=1.0, dt=dt)
    op = DiffOperator(P.gamma, T)
    c = filter_calcium(SpikeTrain(np.full(T, P.lam_dt), dt), P.gamma).values.copy()
    n = apply_M(op, c)
    # each new objective is compared with the last recorded one, which was
    # scored under the sigma in force at the time
    trajectory = [wiener_objective(c, f, P)]
    converged = False
    rounds = 0
    for _ in range(opts.iter_max):
        c1 = wiener_newton_step(c, f, P)
        after = wiener_objective(c1, f, P)
        if not math.isfinite(after):
            raise NumericalError(f"Wiener objective became {after}")
        rounds += 1
        if not after < trajectory[-1] - opts.gtol:
            converged = True
            break
        c = c1
        n = apply_M(op, c)
        trajectory.append(after)
        r = f - c
        P = P.replace(sigma=max(math.sqrt(float(np.dot(r, r)) / T), SIGMA_FLOOR))

    n = np.maximum(n, 0.0)
    peak = n.max()
    if peak > 0:
        n = n / peak
    return InferenceResult(
        n=SpikeTrain(n, dt), C=CalciumTrace(c, dt), params=P, F=F,
        objective_trajectory=trajectory, converged=converged, iterations=rounds,
        method="wiener",
    )
