"""Generative model: Poisson spikes -> AR(1) calcium -> linear-Gaussian fluorescence.

The calcium jump per spike is fixed to 1 and the calcium baseline to 0; both
are absorbed into the fluorescence scale and offset.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import ConfigError, DomainError


def _frozen_array(values):
    arr = np.array(values, dtype=np.float64)
    if arr.ndim != 1:
        raise DomainError(f"expected a 1-D vector, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class _Series:
    values: np.ndarray
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "values", _frozen_array(self.values))
        object.__setattr__(self, "dt", float(self.dt))
        if not self.dt > 0:
            raise DomainError(f"dt must be positive, got {self.dt}")

    def __len__(self):
        return self.values.shape[0]

    @property
    def T(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class SpikeTrain(_Series):
    """Nonnegative spike counts (simulated) or intensities (inferred)."""

    def __post_init__(self):
        super().__post_init__()
        if np.any(~(self.values >= 0)):
            raise DomainError("spike train entries must be finite and nonnegative")


@dataclass(frozen=True)
class CalciumTrace(_Series):
    """Relative calcium concentration, one value per frame."""

    def __post_init__(self):
        super().__post_init__()
        if not np.all(np.isfinite(self.values)):
            raise DomainError("calcium trace contains non-finite values")


@dataclass(frozen=True)
class FluorescenceTrace(_Series):
    """Observed fluorescence, one value per frame."""

    def __post_init__(self):
        super().__post_init__()
        if not np.all(np.isfinite(self.values)):
            raise DomainError("fluorescence trace contains non-finite values")


@dataclass(frozen=True)
class SimConfig:
    """Parameters of a synthetic recording.

    Attributes
    ----------
    T : int
        Number of frames.
    dt : float
        Frame interval in seconds.
    rate : float
        Expected firing rate in Hz.
    tau : float
        Calcium decay time constant in seconds; must exceed ``dt``.
    alpha, beta : float
        Fluorescence scale and offset.
    sigma : float
        Observation noise standard deviation.
    seed : int
        Seed for all randomness in the simulation.
    """

    T: int = 2000
    dt: float = 0.02
    rate: float = 0.1
    tau: float = 1.5
    alpha: float = 1.0
    beta: float = 0.0
    sigma: float = 0.2
    seed: int = 0

    def __post_init__(self):
        if int(self.T) != self.T or self.T < 2:
            raise ConfigError("T", f"must be an integer >= 2, got {self.T}")
        if not self.dt > 0:
            raise ConfigError("dt", f"must be positive, got {self.dt}")
        if not self.rate >= 0:
            raise ConfigError("rate", f"must be nonnegative, got {self.rate}")
        if not self.tau > self.dt:
            raise ConfigError("tau", f"must exceed dt={self.dt}, got {self.tau}")
        if not self.sigma >= 0:
            raise ConfigError("sigma", f"must be nonnegative, got {self.sigma}")
        if not (np.isfinite(self.alpha) and np.isfinite(self.beta)):
            raise ConfigError("alpha" if not np.isfinite(self.alpha) else "beta", "must be finite")
        if int(self.seed) != self.seed or self.seed < 0:
            raise ConfigError("seed", f"must be an unsigned integer, got {self.seed}")
        object.__setattr__(self, "T", int(self.T))
        object.__setattr__(self, "seed", int(self.seed))

    @property
    def gamma(self) -> float:
        """Per-frame calcium decay factor ``1 - dt / tau``."""
        return 1.0 - self.dt / self.tau

    def seeds(self):
        """Independent child seeds for the spike and noise streams."""
        return np.random.SeedSequence(self.seed).spawn(2)


def sample_spikes(cfg: SimConfig) -> SpikeTrain:
    """Draw i.i.d. Poisson(rate * dt) counts for each of the ``cfg.T`` frames."""
    rng = np.random.default_rng(cfg.seeds()[0])
    counts = rng.poisson(cfg.rate * cfg.dt, size=cfg.T)
    return SpikeTrain(counts.astype(np.float64), cfg.dt)


def filter_calcium(n: SpikeTrain, gamma: float) -> CalciumTrace:
    """Run spikes through the AR(1) calcium kinetics with zero initial state.

    ``C[0] = n[0]`` and ``C[t] = gamma * C[t-1] + n[t]``.
    """
    if not 0 <= gamma < 1:
        raise DomainError(f"gamma must lie in [0, 1), got {gamma}")
    values = np.asarray(n.values, dtype=np.float64)
    if not np.all(np.isfinite(values)):
        raise DomainError("spike train contains non-finite values")
    return CalciumTrace(kernels.ar1_filter(values, gamma), n.dt)


def observe_fluorescence(C: CalciumTrace, alpha: float, beta: float, sigma: float,
                         seed=0) -> FluorescenceTrace:
    """Observe calcium through ``F = alpha * C + beta + noise``.

    ``seed`` may be an int or a :class:`numpy.random.SeedSequence`.
    """
    if not sigma >= 0:
        raise DomainError(f"sigma must be nonnegative, got {sigma}")
    F = alpha * C.values + beta
    if sigma > 0:
        rng = np.random.default_rng(seed)
        F = F + rng.normal(0.0, sigma, size=F.shape[0])
    return FluorescenceTrace(F, C.dt)


def simulate(cfg: SimConfig):
    """Simulate one recording.

    Returns
    -------
    (SpikeTrain, CalciumTrace, FluorescenceTrace)
    """
    n = sample_spikes(cfg)
    C = filter_calcium(n, cfg.gamma)
    F = observe_fluorescence(C, cfg.alpha, cfg.beta, cfg.sigma, seed=cfg.seeds()[1])
    return n, C, F
