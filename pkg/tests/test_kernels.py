import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from fastoopsi import kernels

from .oracles.dense import ar1_loop, gauss_solve, tridiag_dense


def test_cython_backend_is_built():
    # the extension is optional at install time but expected in this build
    assert "cython" in kernels.available_backends()


def test_unknown_backend_rejected():
    with pytest.raises(ValueError):
        kernels.set_backend("fortran")


def test_ar1_filter_matches_loop(backend, rng):
    n = rng.random(500)
    np.testing.assert_allclose(kernels.ar1_filter(n, 0.93), ar1_loop(n, 0.93), rtol=0, atol=1e-12)


def test_ar1_filter_empty(backend):
    assert kernels.ar1_filter(np.empty(0), 0.5).shape == (0,)


@pytest.mark.parametrize("T", [1, 2, 3, 17, 200])
def test_tridiag_solve_vs_dense(backend, rng, T):
    lower = rng.normal(size=T - 1)
    upper = rng.normal(size=T - 1)
    diag = 4.0 + rng.random(T)
    rhs = rng.normal(size=T)
    x = kernels.tridiag_solve(lower, diag, upper, rhs)
    ref = gauss_solve(tridiag_dense(lower, diag, upper), rhs)
    np.testing.assert_allclose(x, ref, rtol=1e-9, atol=1e-12)


def test_tridiag_zero_pivot(backend):
    with pytest.raises(ZeroDivisionError, match="row 1"):
        kernels.tridiag_solve(np.array([1.0]), np.array([1.0, 1.0]), np.array([1.0]), np.ones(2))
    with pytest.raises(ZeroDivisionError, match="row 0"):
        kernels.tridiag_solve(np.array([1.0]), np.array([0.0, 1.0]), np.array([1.0]), np.ones(2))


def test_backends_agree_bitwise(rng):
    if len(kernels.available_backends()) < 2:
        pytest.skip("only one backend")
    n = rng.random(1000)
    lo, up = rng.normal(size=999), rng.normal(size=999)
    dg = 5 + rng.random(1000)
    out = {}
    prev = kernels.get_backend()
    try:
        for b in kernels.available_backends():
            kernels.set_backend(b)
            out[b] = (kernels.ar1_filter(n, 0.9), kernels.tridiag_solve(lo, dg, up, n))
    finally:
        kernels.set_backend(prev)
    a, b = out.values()
    np.testing.assert_array_equal(a[0], b[0])
    np.testing.assert_array_equal(a[1], b[1])


@settings(max_examples=60, deadline=None)
@given(
    w=arrays(np.float64, st.integers(2, 60), elements=st.floats(0.01, 100.0)),
    gamma=st.floats(0.0, 1.0),
    shift=st.floats(0.0, 10.0),
)
def test_tridiag_spd_property(w, gamma, shift):
    # M^T diag(w) M + shift*I is SPD for any positive weights
    T = len(w)
    diag = w + shift
    diag[:-1] += gamma ** 2 * w[1:]
    off = -gamma * w[1:]
    rhs = np.linspace(-1, 1, T)
    x = kernels.tridiag_solve(off, diag, off, rhs)
    A = tridiag_dense(off, diag, off)
    assert np.max(np.abs(A @ x - rhs)) <= 1e-8 * (1 + np.max(np.abs(rhs))) * np.linalg.cond(A) ** 0.5
