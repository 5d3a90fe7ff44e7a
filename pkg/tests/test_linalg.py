import numpy as np
import pytest

from fastoopsi.errors import DomainError, InfeasibleError, SingularMatrixError
from fastoopsi.linalg import (DiffOperator, Tridiag, apply_M, apply_Mt, assemble_hessian,
                              solve_tridiagonal)
from fastoopsi.model import SpikeTrain, filter_calcium

from .oracles.dense import diff_matrix, gauss_solve, tridiag_dense


def test_pure_differencing():
    np.testing.assert_array_equal(apply_M(DiffOperator(1.0, 3), np.ones(3)), [1, 0, 0])


def test_inverse_of_filter():
    g = 0.8
    C = g ** np.arange(20)
    out = apply_M(DiffOperator(g, 20), C)
    np.testing.assert_allclose(out, np.eye(1, 20, 0).ravel(), atol=1e-15)


def test_apply_M_vs_dense(rng):
    C = rng.normal(size=100)
    op = DiffOperator(0.95, 100)
    assert np.max(np.abs(apply_M(op, C) - diff_matrix(0.95, 100) @ C)) < 1e-13


def test_apply_Mt_closed_form():
    out = apply_Mt(DiffOperator(0.9, 6), np.ones(6))
    np.testing.assert_allclose(out, [0.1] * 5 + [1.0], rtol=1e-14)


def test_apply_Mt_identity_at_zero(rng):
    v = rng.normal(size=9)
    np.testing.assert_array_equal(apply_Mt(DiffOperator(0.0, 9), v), v)


def test_adjoint_identity(rng):
    for _ in range(100):
        T = int(rng.integers(1, 60))
        op = DiffOperator(rng.random(), T)
        u, v = rng.normal(size=T), rng.normal(size=T)
        lhs = sum(a * b for a, b in zip(apply_M(op, u), v))
        rhs = sum(a * b for a, b in zip(u, apply_Mt(op, v)))
        assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs))


def test_size_mismatch():
    op = DiffOperator(0.5, 4)
    with pytest.raises(DomainError):
        apply_M(op, np.ones(3))
    with pytest.raises(DomainError):
        apply_Mt(op, np.ones(5))
    with pytest.raises(DomainError):
        assemble_hessian(op, np.ones(3), 0.0)


class TestHessian:
    def test_diagonal_when_gamma_zero(self, rng):
        w = rng.random(7) + 0.1
        H = assemble_hessian(DiffOperator(0.0, 7), w, 2.0)
        np.testing.assert_allclose(H.diag, w + 2.0)
        assert not H.lower.any() and not H.upper.any()

    def test_dense_triple_product(self, rng):
        op = DiffOperator(0.7, 4)
        w = rng.random(4) + 0.5
        H = assemble_hessian(op, w, 0.3)
        M = diff_matrix(0.7, 4)
        ref = 0.3 * np.eye(4) + M.T @ np.diag(w) @ M
        assert np.max(np.abs(H.dense() - ref)) < 1e-12

    def test_laplacian_stencil(self):
        H = assemble_hessian(DiffOperator(1.0, 6), np.full(6, 2.0), 0.5)
        np.testing.assert_allclose(H.diag[:-1], 0.5 + 4.0)
        np.testing.assert_allclose(H.lower, -2.0)
        np.testing.assert_allclose(H.upper, -2.0)

    @pytest.mark.parametrize("bad", [0.0, -1.0, np.inf, np.nan])
    def test_nonpositive_weight(self, bad):
        w = np.ones(5)
        w[2] = bad
        with pytest.raises(InfeasibleError):
            assemble_hessian(DiffOperator(0.5, 5), w, 1.0)


class TestSolve:
    def test_identity(self, rng):
        g = rng.normal(size=10)
        H = Tridiag(np.zeros(9), np.ones(10), np.zeros(9))
        np.testing.assert_array_equal(solve_tridiagonal(H, g), g)

    def test_dense_oracle(self, rng, backend):
        T = 200
        lo, up = rng.normal(size=T - 1), rng.normal(size=T - 1)
        dg = np.abs(lo).max() + np.abs(up).max() + 1 + rng.random(T)
        g = rng.normal(size=T)
        d = solve_tridiagonal(Tridiag(lo, dg, up), g)
        ref = gauss_solve(tridiag_dense(lo, dg, up), g)
        assert np.max(np.abs(d - ref)) < 1e-9

    def test_residual_on_solver_hessian(self, rng, backend):
        T = 500
        op = DiffOperator(0.98, T)
        n = rng.random(T) * 0.1 + 1e-4
        H = assemble_hessian(op, 1e-3 / n ** 2, 25.0)
        g = rng.normal(size=T) * 100
        d = solve_tridiagonal(H, g)
        assert np.max(np.abs(H.matvec(d) - g)) < 1e-10 * (1 + np.max(np.abs(g)))

    def test_spd_systems_relative_error(self, rng):
        for T in (2, 5, 50, 200):
            op = DiffOperator(rng.random(), T)
            H = assemble_hessian(op, rng.random(T) + 0.01, rng.random())
            g = rng.normal(size=T)
            d = solve_tridiagonal(H, g)
            ref = gauss_solve(H.dense(), g)
            assert np.linalg.norm(d - ref) <= 1e-9 * np.linalg.norm(ref)

    def test_singular(self):
        H = Tridiag(np.array([1.0]), np.array([1.0, 1.0]), np.array([1.0]))
        with pytest.raises(SingularMatrixError):
            solve_tridiagonal(H, np.ones(2))

    def test_bad_bands(self):
        with pytest.raises(DomainError):
            Tridiag(np.ones(2), np.ones(2), np.ones(1))


def test_round_trip_random_pairs(rng):
    for _ in range(100):
        T = int(rng.integers(2, 300))
        g = float(rng.random() * 0.999)
        n = rng.poisson(rng.random() * 2, T).astype(float)
        back = apply_M(DiffOperator(g, T), filter_calcium(SpikeTrain(n, 0.02), g))
        assert np.max(np.abs(back[1:] - n[1:])) < 1e-12
        assert back[0] == n[0]
