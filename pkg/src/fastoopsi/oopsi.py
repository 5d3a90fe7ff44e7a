"""Fast nonnegative spike inference by a log-barrier Newton method.

The Poisson spike prior is replaced by an exponential one of the same mean,
which makes the negative log posterior convex in the calcium trace ``C``.
Nonnegativity of the spikes ``n = M C`` is enforced with a log barrier whose
weight ``z`` is driven towards zero. Each barrier subproblem is solved with
damped Newton steps; the Hessian is tridiagonal, so a step costs O(T).

Parameters can optionally be refined by alternating MAP estimation with the
closed-form updates in :func:`update_params` (pseudo-EM).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DegenerateInputError, DegenerateUpdateError, DomainError, NumericalError
from .linalg import DiffOperator, apply_M, apply_Mt, assemble_hessian, solve_tridiagonal
from .model import CalciumTrace, FluorescenceTrace, SpikeTrain, filter_calcium
from .preprocess import SIGMA_FLOOR, ModelParams, preprocess

#: Value written into the first spike bin after convergence. ``n[0] = C[0]``
#: absorbs the unknown initial calcium, so it is not a spike estimate.
N0_EPS = 1e-10
#: Starting spike intensity for every frame.
N_INIT = 0.01


@dataclass(frozen=True)
class SolverOptions:
    """Stopping rules and step controls.

    ``iter_max`` counts pseudo-EM rounds after the initial MAP solve; 0 gives
    the one-shot estimate with the initial parameters. ``newton_max`` caps
    the Newton iterations per barrier weight.
    """

    iter_max: int = 1
    ltol: float = 1e-4
    gtol: float = 1e-4
    z_init: float = 1.0
    z_min: float = 1e-13
    z_factor: float = 10.0
    linesearch_shrink: float = 5.0
    s_min: float = 1e-20
    d_norm_tol: float = 5e-2
    s_tol: float = 1e-3
    armijo_slack: float = 1e-7
    newton_max: int = 500

    def __post_init__(self):
        if int(self.iter_max) != self.iter_max or self.iter_max < 0:
            raise DomainError(f"iter_max must be a nonnegative integer, got {self.iter_max}")
        for name in ("ltol", "gtol", "z_init", "z_min", "s_min", "d_norm_tol", "s_tol",
                     "armijo_slack"):
            if not getattr(self, name) > 0:
                raise DomainError(f"{name} must be positive, got {getattr(self, name)}")
        if not self.z_min < self.z_init:
            raise DomainError("z_min must be below z_init")
        if not self.z_factor > 1 or not self.linesearch_shrink > 1:
            raise DomainError("z_factor and linesearch_shrink must exceed 1")
        if self.newton_max < 1:
            raise DomainError("newton_max must be at least 1")

    def barrier_weights(self):
        """The decreasing sequence of barrier weights ``z``."""
        zs = []
        k = 0
        while True:
            z = self.z_init / self.z_factor ** k
            # relative slack so that 1/10**13 does not sneak past z_min=1e-13
            if z <= self.z_min * (1 + 1e-9):
                return zs
            zs.append(z)
            k += 1


@dataclass(frozen=True)
class InferenceResult:
    """Output of an inference method.

    Attributes
    ----------
    n : SpikeTrain
        Inferred spikes scaled so the maximum is 1.
    C : CalciumTrace
        Inferred calcium, in the units of the preprocessed trace.
    params : ModelParams
        Parameters in force at the final solve.
    F : FluorescenceTrace
        Preprocessed trace the solver saw.
    objective_trajectory : list of float
        Final objective of each solve (one per pseudo-EM round).
    converged : bool
    iterations : int
        Parameter-update rounds performed.
    method : str
    """

    n: SpikeTrain
    C: CalciumTrace
    params: ModelParams
    F: FluorescenceTrace
    objective_trajectory: list = field(default_factory=list)
    converged: bool = True
    iterations: int = 0
    method: str = "oopsi"


class MapEstimate(NamedTuple):
    n: SpikeTrain
    C: CalciumTrace
    objective: float
    converged: bool
    newton_steps: int


def _operator(P: ModelParams, T: int) -> DiffOperator:
    return DiffOperator(P.gamma, T)


def _objective(c, n, f, P, z):
    if not np.all(n > 0):
        return math.inf
    r = f - P.alpha * c - P.beta
    return (0.5 * np.dot(r, r) / P.sigma ** 2
            + P.lam_dt * n.sum()
            - z * np.log(n).sum())


def posterior_value(C, F, P: ModelParams, z: float) -> float:
    """Negative log posterior plus barrier for calcium ``C``.

    ``(1/2 sigma^2) |F - alpha C - beta|^2 + lam_dt * sum(M C) - z * sum(log(M C))``

    Returns ``inf`` when some ``(M C)[t] <= 0``.
    """
    c = np.asarray(getattr(C, "values", C), dtype=np.float64)
    f = np.asarray(getattr(F, "values", F), dtype=np.float64)
    if c.shape != f.shape:
        raise DomainError(f"C and F lengths differ: {c.shape} vs {f.shape}")
    n = apply_M(_operator(P, c.shape[0]), c)
    return float(_objective(c, n, f, P, z))


def gradient(C, F, P: ModelParams, z: float):
    """Gradient of :func:`posterior_value` with respect to ``C``."""
    c = np.asarray(getattr(C, "values", C), dtype=np.float64)
    f = np.asarray(getattr(F, "values", F), dtype=np.float64)
    op = _operator(P, c.shape[0])
    n = apply_M(op, c)
    return _gradient(op, c, n, f, P, z)


def _gradient(op, c, n, f, P, z):
    return (-(P.alpha / P.sigma ** 2) * (f - P.alpha * c - P.beta)
            + apply_Mt(op, P.lam_dt - z / n))


def hessian(C, P: ModelParams, z: float):
    """Tridiagonal Hessian of :func:`posterior_value` at ``C``."""
    c = np.asarray(getattr(C, "values", C), dtype=np.float64)
    op = _operator(P, c.shape[0])
    n = apply_M(op, c)
    return assemble_hessian(op, z / n ** 2, P.alpha ** 2 / P.sigma ** 2)


StepCallback = Callable[[float, np.ndarray, np.ndarray, float, float, float], None]


def _estimate(F: FluorescenceTrace, P: ModelParams, opts: SolverOptions,
              callback: Optional[StepCallback] = None) -> MapEstimate:
    f = np.asarray(F.values, dtype=np.float64)
    T = f.shape[0]
    if T < 2:
        raise DomainError(f"need at least 2 frames, got {T}")
    op = _operator(P, T)
    n = np.full(T, N_INIT)
    c = filter_calcium(SpikeTrain(n, F.dt), P.gamma).values.copy()
    n = apply_M(op, c)
    H0 = P.alpha ** 2 / P.sigma ** 2

    any_accepted = False
    total_steps = 0
    post = math.nan
    for z in opts.barrier_weights():
        post = _objective(c, n, f, P, z)
        if not np.isfinite(post):
            raise NumericalError(f"objective is {post} at barrier weight z={z:g}")
        s = 1.0
        d_norm = math.inf
        steps = 0
        while s > opts.s_tol and d_norm > opts.d_norm_tol and steps < opts.newton_max:
            g = _gradient(op, c, n, f, P, z)
            H = assemble_hessian(op, z / n ** 2, H0)
            d = solve_tridiagonal(H, g)
            if not np.all(np.isfinite(d)):
                raise NumericalError(f"non-finite Newton direction at z={z:g}")
            d_norm = float(np.linalg.norm(d))

            # largest step keeping n - s*Md strictly positive
            Md = apply_M(op, d)
            grows = Md > 0
            s = min(1.0, 0.99 * float(np.min(n[grows] / Md[grows]))) if grows.any() else 1.0

            accepted = False
            while s >= opts.s_min:
                c1 = c - s * d
                n1 = apply_M(op, c1)
                post1 = _objective(c1, n1, f, P, z)
                if math.isnan(post1):
                    raise NumericalError(f"objective is NaN at z={z:g}")
                if post1 < post + opts.armijo_slack:
                    accepted = True
                    break
                s /= opts.linesearch_shrink
            if not accepted:
                break
            if callback is not None:
                callback(z, c1, n1, post, post1, s)
            c, n, post = c1, n1, post1
            any_accepted = True
            steps += 1
        total_steps += steps

    n = n.copy()
    n[0] = N0_EPS
    return MapEstimate(SpikeTrain(np.maximum(n, 0.0), F.dt), CalciumTrace(c, F.dt),
                       float(post), any_accepted, total_steps)


def map_estimate(F: FluorescenceTrace, P: ModelParams, opts: Optional[SolverOptions] = None,
                 callback: Optional[StepCallback] = None):
    """MAP spike train for fixed parameters.

    Starts from ``n = 0.01`` everywhere and follows the barrier weights
    ``opts.barrier_weights()``, taking damped Newton steps for each. The spikes
    are *not* rescaled.

    Parameters
    ----------
    F : FluorescenceTrace
        Preprocessed trace.
    P : ModelParams
    opts : SolverOptions, optional
    callback : callable, optional
        Called after every accepted step as
        ``callback(z, C, n, objective_before, objective_after, step)``.

    Returns
    -------
    n : SpikeTrain
        ``M C`` with the first bin overwritten by a negligible positive value.
    C : CalciumTrace
    objective : float
        Objective at the last barrier weight.
    """
    est = _estimate(F, P, opts or SolverOptions(), callback)
    return est.n, est.C, est.objective


def _noise_update(C, F, P: ModelParams) -> ModelParams:
    c = np.asarray(getattr(C, "values", C), dtype=np.float64)
    f = np.asarray(getattr(F, "values", F), dtype=np.float64)
    T = f.shape[0]
    beta = float(np.sum(f - c) / T)
    r = f - c - beta
    sigma = math.sqrt(float(np.dot(r, r)) / T)
    return P.replace(alpha=1.0, beta=beta, sigma=max(sigma, SIGMA_FLOOR))


def update_params(n: SpikeTrain, C: CalciumTrace, F: FluorescenceTrace,
                  P: ModelParams) -> ModelParams:
    """Closed-form parameter refresh given the current estimate.

    ``alpha = 1``, ``beta`` is the mean residual ``F - C``, ``sigma`` its RMS
    after removing ``beta`` (floored at ``SIGMA_FLOOR``), and
    ``lambda = T / (dt * sum(n))``. ``gamma`` and ``dt`` are kept.

    Raises
    ------
    DegenerateUpdateError
        If ``sum(n) == 0``.
    """
    total = float(np.sum(n.values))
    if not total > 0:
        raise DegenerateUpdateError("spike train sums to zero; rate update undefined")
    T = len(n.values)
    return _noise_update(C, F, P).replace(lambda_rate=T / (P.dt * total))


def _scaled(n: SpikeTrain) -> SpikeTrain:
    peak = n.values.max()
    if not peak > 0:
        return n
    return SpikeTrain(n.values / peak, n.dt)


def run(F_raw: FluorescenceTrace, opts: Optional[SolverOptions] = None,
        callback: Optional[StepCallback] = None) -> InferenceResult:
    """Infer spikes from a raw fluorescence trace.

    Preprocesses the trace, solves once with the initial parameters, then runs
    up to ``opts.iter_max`` rounds of :func:`update_params` followed by a new
    solve. Rounds stop early when the relative change of the objective drops
    below ``ltol`` or the objective repeats an earlier value within ``gtol``.
    """
    opts = opts or SolverOptions()
    if F_raw.T < 2:
        raise DomainError(f"need at least 2 frames, got {F_raw.T}")
    F, P = preprocess(F_raw)
    est = _estimate(F, P, opts, callback)
    trajectory = [est.objective]
    converged = est.converged
    rounds = 0
    for _ in range(opts.iter_max):
        try:
            P = update_params(est.n, est.C, F, P)
        except DegenerateInputError:
            P = _noise_update(est.C, F, P)
        est = _estimate(F, P, opts, callback)
        rounds += 1
        prev, cur = trajectory[-1], est.objective
        history = np.asarray(trajectory)
        trajectory.append(cur)
        if not np.isfinite(cur):
            raise NumericalError(f"objective became {cur} in round {rounds}")
        rel = abs((cur - prev) / cur) if cur != 0 else abs(cur - prev)
        if rel < opts.ltol or np.any(np.abs(history - cur) < opts.gtol):
            converged = est.converged
            break
    else:
        converged = est.converged and opts.iter_max == 0
    return InferenceResult(
        n=_scaled(est.n), C=est.C, params=P, F=F,
        objective_trajectory=[float(v) for v in trajectory],
        converged=bool(converged), iterations=rounds, method="oopsi",
    )
