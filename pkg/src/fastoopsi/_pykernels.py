"""Pure-Python versions of the sequential kernels.

These are the reference implementations used when the compiled extension is
unavailable. Both loops are inherently sequential, so they are written over
plain Python floats rather than numpy element access, which is several times
faster in CPython.
"""
import numpy as np


def ar1_filter(n, gamma):
    """Causal AR(1) recursion ``c[0] = n[0]``, ``c[t] = gamma * c[t-1] + n[t]``."""
    vals = np.asarray(n, dtype=np.float64).tolist()
    out = [0.0] * len(vals)
    acc = 0.0
    g = float(gamma)
    for t, v in enumerate(vals):
        acc = g * acc + v
        out[t] = acc
    return np.array(out, dtype=np.float64)


def tridiag_solve(lower, diag, upper, rhs):
    """Thomas elimination without pivoting.

    Parameters
    ----------
    lower, upper : ndarray
        Sub- and super-diagonal, length ``T - 1``.
    diag : ndarray
        Main diagonal, length ``T``.
    rhs : ndarray
        Right-hand side, length ``T``.

    Raises
    ------
    ZeroDivisionError
        If a pivot is exactly zero.
    """
    a = np.asarray(lower, dtype=np.float64).tolist()
    b = np.asarray(diag, dtype=np.float64).tolist()
    c = np.asarray(upper, dtype=np.float64).tolist()
    d = np.asarray(rhs, dtype=np.float64).tolist()
    T = len(b)
    if T == 0:
        return np.empty(0)
    cp = [0.0] * T
    x = [0.0] * T
    pivot = b[0]
    if pivot == 0.0:
        raise ZeroDivisionError("zero pivot at row 0")
    if T > 1:
        cp[0] = c[0] / pivot
    x[0] = d[0] / pivot
    for i in range(1, T):
        pivot = b[i] - a[i - 1] * cp[i - 1]
        if pivot == 0.0:
            raise ZeroDivisionError(f"zero pivot at row {i}")
        if i < T - 1:
            cp[i] = c[i] / pivot
        x[i] = (d[i] - a[i - 1] * x[i - 1]) / pivot
    for i in range(T - 2, -1, -1):
        x[i] -= cp[i] * x[i + 1]
    return np.array(x, dtype=np.float64)
