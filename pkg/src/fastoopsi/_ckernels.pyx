# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled sequential kernels.

Same contract as :mod:`fastoopsi._pykernels`; see there for documentation.
"""
import numpy as np


def ar1_filter(const double[::1] n, double gamma):
    cdef Py_ssize_t T = n.shape[0]
    cdef Py_ssize_t t
    out = np.empty(T, dtype=np.float64)
    cdef double[::1] c = out
    if T == 0:
        return out
    with nogil:
        c[0] = n[0]
        for t in range(1, T):
            c[t] = gamma * c[t - 1] + n[t]
    return out


def tridiag_solve(const double[::1] lower, const double[::1] diag,
                  const double[::1] upper, const double[::1] rhs):
    cdef Py_ssize_t T = diag.shape[0]
    cdef Py_ssize_t i
    cdef Py_ssize_t bad = -1
    cdef double pivot
    out = np.empty(T, dtype=np.float64)
    if T == 0:
        return out
    cdef double[::1] x = out
    cdef double[::1] cp = np.empty(T, dtype=np.float64)
    with nogil:
        pivot = diag[0]
        if pivot == 0.0:
            bad = 0
        else:
            cp[0] = upper[0] / pivot if T > 1 else 0.0
            x[0] = rhs[0] / pivot
            for i in range(1, T):
                pivot = diag[i] - lower[i - 1] * cp[i - 1]
                if pivot == 0.0:
                    bad = i
                    break
                if i < T - 1:
                    cp[i] = upper[i] / pivot
                x[i] = (rhs[i] - lower[i - 1] * x[i - 1]) / pivot
            if bad < 0:
                for i in range(T - 2, -1, -1):
                    x[i] -= cp[i] * x[i + 1]
    if bad >= 0:
        raise ZeroDivisionError(f"zero pivot at row {bad}")
    return out
