import numpy as np
import pytest

from fastoopsi.errors import DegenerateInputError, DomainError
from fastoopsi.linalg import DiffOperator, apply_M, apply_Mt
from fastoopsi.model import FluorescenceTrace, SimConfig, SpikeTrain, filter_calcium, simulate
from fastoopsi.preprocess import ModelParams
from fastoopsi.wiener import (WienerOptions, wiener_filter, wiener_gradient, wiener_hessian,
                              wiener_newton_step, wiener_objective)

from .oracles.dense import central_diff, diff_matrix


def P_(sigma=0.7, gamma=0.95, lam=1.0, dt=0.02):
    return ModelParams(1.0, 0.0, sigma, gamma, lam, dt)


def printed_sign_gradient(C, F, P):
    """Gradient with the bracket sign as typeset, ``+ lam_dt M^T 1``."""
    op = DiffOperator(P.gamma, len(C))
    return -(F - C) / P.sigma ** 2 + (apply_Mt(op, apply_M(op, C)) + P.lam_dt * apply_Mt(op, np.ones(len(C)))) / P.lam_dt


def test_zero_at_prior_mean():
    P = P_()
    C = filter_calcium(SpikeTrain(np.full(20, P.lam_dt), P.dt), P.gamma).values
    assert wiener_objective(C, C, P) == pytest.approx(0.0, abs=1e-25)


def test_hand_case():
    P = ModelParams(1.0, 0.0, 1.0, 0.0, 2.0, 0.5)  # lam_dt = 1
    assert wiener_objective(np.ones(3), np.zeros(3), P) == 1.5


def test_likelihood_term_homogeneous(rng):
    C, F = rng.normal(size=30), rng.normal(size=30)
    P1, P2 = P_(sigma=0.4), P_(sigma=0.8)

    def prior(c, P):
        q = diff_matrix(P.gamma, len(c)) @ c - P.lam_dt
        return 0.5 * q @ q / P.lam_dt

    a = wiener_objective(C, F, P1) - prior(C, P1)
    b = wiener_objective(2 * C, 2 * F, P2) - prior(2 * C, P2)
    assert b == pytest.approx(a, rel=1e-12)


def test_exactly_quadratic_along_lines(rng):
    P = P_()
    C, F, v = rng.normal(size=50), rng.normal(size=50), rng.normal(size=50)
    L = [wiener_objective(C + t * v, F, P) for t in (-1.0, 0.0, 1.0, 2.0)]
    second = [L[0] - 2 * L[1] + L[2], L[1] - 2 * L[2] + L[3]]
    assert abs(second[0] - second[1]) <= 1e-9 * abs(second[0])


def test_gradient_finite_differences(rng):
    P = P_()
    C, F = rng.normal(size=40), rng.normal(size=40)
    g = wiener_gradient(C, F, P)
    fd = central_diff(lambda c: wiener_objective(c, F, P), C, 1e-5)
    assert np.max(np.abs(g - fd) / np.abs(g)) < 1e-6


def test_printed_sign_fails_finite_differences(rng):
    P = P_()
    C, F = rng.normal(size=40), rng.normal(size=40)
    fd = central_diff(lambda c: wiener_objective(c, F, P), C, 1e-5)
    wrong = printed_sign_gradient(C, F, P)
    assert np.max(np.abs(wrong - fd) / np.abs(fd)) > 1e-2


@pytest.mark.parametrize("T", [10, 100, 1000])
def test_one_newton_step_is_exact(rng, T):
    P = P_()
    F = rng.normal(size=T)
    C0 = rng.normal(size=T) * 5
    g0 = wiener_gradient(C0, F, P)
    g1 = wiener_gradient(wiener_newton_step(C0, F, P), F, P)
    assert np.max(np.abs(g1)) < 1e-8 * (1 + np.max(np.abs(g0)))


def test_stationary_point_normal_equations(rng):
    T = 100
    P = P_()
    F = rng.normal(size=T)
    M = diff_matrix(P.gamma, T)
    A = np.eye(T) / P.sigma ** 2 + M.T @ M / P.lam_dt
    ref = np.linalg.solve(A, F / P.sigma ** 2 + M.T @ np.ones(T))
    C = wiener_newton_step(np.zeros(T), F, P)
    assert np.max(np.abs(C - ref)) < 1e-8


def test_hessian_is_constant_band(rng):
    P = P_()
    H = wiener_hessian(6, P)
    M = diff_matrix(P.gamma, 6)
    np.testing.assert_allclose(H.dense(), np.eye(6) / P.sigma ** 2 + M.T @ M / P.lam_dt)


class TestFilter:
    def test_output_contract(self):
        n, _, F = simulate(SimConfig(T=1000, rate=0.5, seed=4))
        res = wiener_filter(F)
        assert res.n.values.max() == 1.0
        assert res.n.values.min() >= 0
        assert res.method == "wiener"
        assert abs(res.F.values.mean()) < 1e-12
        assert np.abs(res.F.values).max() == pytest.approx(1.0)
        assert np.corrcoef(res.n.values, n.values)[0, 1] > 0.2

    def test_objective_decreases(self):
        _, _, F = simulate(SimConfig(T=500, rate=0.5, seed=5))
        traj = wiener_filter(F).objective_trajectory
        assert all(b < a for a, b in zip(traj, traj[1:]))

    def test_constant_trace(self):
        with pytest.raises(DegenerateInputError):
            wiener_filter(FluorescenceTrace(np.ones(20), 0.02))

    def test_options_validated(self):
        with pytest.raises(DomainError):
            WienerOptions(iter_max=0)
