"""Trace conditioning and initial parameter guesses."""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
import scipy.signal

from .errors import DegenerateInputError, DomainError
from .model import FluorescenceTrace

#: Consistency factor turning a MAD into a Gaussian standard deviation.
MAD_K = 1.4826
#: Lower bound on the noise scale; a zero sigma makes the likelihood singular.
SIGMA_FLOOR = 1e-6


@dataclass(frozen=True)
class ModelParams:
    """Model parameters for one trace.

    ``lambda_rate`` is the firing rate in Hz; the per-frame rate used by the
    solvers is :attr:`lam_dt`.
    """

    alpha: float
    beta: float
    sigma: float
    gamma: float
    lambda_rate: float
    dt: float

    def __post_init__(self):
        for name in ("alpha", "beta", "sigma", "gamma", "lambda_rate", "dt"):
            v = getattr(self, name)
            if not np.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, float(v))
        if not self.sigma > 0:
            raise DomainError(f"sigma must be positive, got {self.sigma}")
        if not 0 <= self.gamma < 1:
            raise DomainError(f"gamma must lie in [0, 1), got {self.gamma}")
        if not self.lambda_rate > 0:
            raise DomainError(f"lambda_rate must be positive, got {self.lambda_rate}")
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")

    @property
    def lam_dt(self) -> float:
        """Expected spikes per frame."""
        return self.lambda_rate * self.dt

    @property
    def tau(self) -> float:
        """Decay time constant in seconds implied by ``gamma``."""
        return self.dt / (1.0 - self.gamma)

    def replace(self, **changes) -> "ModelParams":
        return replace(self, **changes)


def detrend(F: FluorescenceTrace) -> FluorescenceTrace:
    """Subtract the least-squares straight line over frame index."""
    if F.T < 2:
        raise DomainError(f"detrend needs at least 2 samples, got {F.T}")
    return FluorescenceTrace(scipy.signal.detrend(F.values, type="linear"), F.dt)


def normalize(F: FluorescenceTrace) -> FluorescenceTrace:
    """Affinely map the trace onto [0, 1]."""
    lo = F.values.min()
    hi = F.values.max()
    if not hi > lo:
        raise DegenerateInputError("cannot normalize a constant trace")
    out = (F.values - lo) / (hi - lo)
    # pin the extremes; the affine map can land one ulp off
    out[F.values == lo] = 0.0
    out[F.values == hi] = 1.0
    return FluorescenceTrace(out, F.dt)


def mad_sigma(F) -> float:
    """Robust noise scale ``MAD_K * median(|F - median(F)|)``.

    Accepts a :class:`FluorescenceTrace` or any 1-D array.
    """
    x = np.asarray(getattr(F, "values", F), dtype=np.float64)
    if x.size == 0:
        raise DomainError("mad_sigma of an empty trace")
    return float(np.median(np.abs(x - np.median(x))) * MAD_K)


def init_params(F: FluorescenceTrace) -> ModelParams:
    """Initial parameters for a detrended, normalized trace.

    The decay time constant is taken as 1 s and the firing rate as 1 Hz.
    """
    if not F.dt < 1.0:
        raise DomainError(f"frame interval must be below 1 s to set gamma = 1 - dt, got {F.dt}")
    return ModelParams(
        alpha=1.0,
        beta=float(np.median(F.values)),
        sigma=max(mad_sigma(F), SIGMA_FLOOR),
        gamma=1.0 - F.dt,
        lambda_rate=1.0,
        dt=F.dt,
    )


def preprocess(F: FluorescenceTrace):
    """Detrend, normalize and initialize. Returns ``(F_clean, params)``.

    Raises
    ------
    DegenerateInputError
        If the trace is a straight line (constant included) up to rounding.
    """
    D = detrend(F)
    scale = np.abs(F.values).max()
    if not np.ptp(D.values) > 1e-12 * scale:
        raise DegenerateInputError("trace is a straight line; nothing left after detrending")
    Fc = normalize(D)
    return Fc, init_params(Fc)
