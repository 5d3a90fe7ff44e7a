"""Backend selection for the sequential kernels.

The compiled Cython module is used when it imports; otherwise the pure-Python
module is. :func:`set_backend` switches explicitly (used by the tests and the
benchmark to exercise both).
"""
import numpy as np

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

BACKEND = "cython" if _ckernels is not None else "python"
_impl = _BACKENDS[BACKEND]


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    """Select the kernel backend by name (``"cython"`` or ``"python"``)."""
    global BACKEND, _impl
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available; have {available_backends()}")
    BACKEND = name
    _impl = _BACKENDS[name]


def get_backend():
    return BACKEND


def _f64(x):
    return np.ascontiguousarray(x, dtype=np.float64)


def ar1_filter(n, gamma):
    return _impl.ar1_filter(_f64(n), float(gamma))


def tridiag_solve(lower, diag, upper, rhs):
    return _impl.tridiag_solve(_f64(lower), _f64(diag), _f64(upper), _f64(rhs))
