"""Bidiagonal difference operator and tridiagonal solves.

The operator ``M`` is the T x T lower-bidiagonal matrix with ones on the
diagonal and ``-gamma`` on the subdiagonal, so ``(M C)[0] = C[0]`` and
``(M C)[t] = C[t] - gamma * C[t-1]``. It inverts the AR(1) calcium filter.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import DomainError, InfeasibleError, SingularMatrixError


@dataclass(frozen=True)
class DiffOperator:
    gamma: float
    T: int

    def __post_init__(self):
        if self.T < 1:
            raise DomainError(f"operator size must be positive, got {self.T}")
        object.__setattr__(self, "gamma", float(self.gamma))
        object.__setattr__(self, "T", int(self.T))

    def dense(self):
        """Dense matrix form; for tests and small problems only."""
        M = np.eye(self.T)
        M[np.arange(1, self.T), np.arange(self.T - 1)] = -self.gamma
        return M


@dataclass(frozen=True)
class Tridiag:
    """Square tridiagonal matrix stored by bands."""

    lower: np.ndarray
    diag: np.ndarray
    upper: np.ndarray

    def __post_init__(self):
        T = len(self.diag)
        if len(self.lower) != T - 1 or len(self.upper) != T - 1:
            raise DomainError(
                f"band lengths {len(self.lower)}, {T}, {len(self.upper)} do not form a tridiagonal matrix")

    @property
    def T(self) -> int:
        return len(self.diag)

    def matvec(self, x):
        x = np.asarray(x, dtype=np.float64)
        out = self.diag * x
        out[1:] += self.lower * x[:-1]
        out[:-1] += self.upper * x[1:]
        return out

    def dense(self):
        return np.diag(self.diag) + np.diag(self.lower, -1) + np.diag(self.upper, 1)


def _vec(x):
    return np.asarray(getattr(x, "values", x), dtype=np.float64)


def _check_len(op, v):
    if v.shape != (op.T,):
        raise DomainError(f"vector of shape {v.shape} does not match operator size {op.T}")


def apply_M(op: DiffOperator, C):
    """``n = M C``. Accepts a :class:`CalciumTrace` or a plain vector; returns an array.

    Nonnegativity of the result is not checked here.
    """
    c = _vec(C)
    _check_len(op, c)
    n = c.copy()
    n[1:] -= op.gamma * c[:-1]
    return n


def apply_Mt(op: DiffOperator, v):
    """Transpose action: ``out[t] = v[t] - gamma * v[t+1]``, last entry unchanged."""
    v = _vec(v)
    _check_len(op, v)
    out = v.copy()
    out[:-1] -= op.gamma * v[1:]
    return out


def assemble_hessian(op: DiffOperator, weights, diag_add: float) -> Tridiag:
    """Bands of ``diag_add * I + M^T diag(weights) M``.

    Raises
    ------
    InfeasibleError
        If any weight is not strictly positive and finite.
    """
    w = _vec(weights)
    _check_len(op, w)
    if not np.all(w > 0) or not np.all(np.isfinite(w)):
        raise InfeasibleError("Hessian weights must be strictly positive; iterate left the interior")
    g = op.gamma
    diag = w + diag_add
    diag[:-1] += g * g * w[1:]
    off = -g * w[1:]
    return Tridiag(off, diag, off.copy())


def solve_tridiagonal(H: Tridiag, g):
    """Solve ``H d = g`` by Thomas elimination in O(T).

    No pivoting is done; H is expected to be symmetric positive definite.

    Raises
    ------
    SingularMatrixError
        If a zero pivot is met.
    """
    g = _vec(g)
    if g.shape != (H.T,):
        raise DomainError(f"rhs of shape {g.shape} does not match matrix size {H.T}")
    try:
        return kernels.tridiag_solve(H.lower, H.diag, H.upper, g)
    except ZeroDivisionError as exc:
        raise SingularMatrixError(str(exc)) from None
