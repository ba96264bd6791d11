from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.integrate import solve_ivp

from harmonia import jacobi
from harmonia.catalog import make_space


@pytest.fixture(scope="module")
def traj_ch():
    return jacobi.integrate(np.diag([-4.0, -1.0, -1.0]), 5.0, 1e-3)


def test_scalar_closed_forms():
    traj = jacobi.integrate([[-1.0]], 3.0, 1e-3)
    A, Ap, B, Bp = traj.state_at(2.0)
    assert float(A[0, 0]) == pytest.approx(math.sinh(2.0), rel=1e-11)
    assert float(B[0, 0]) == pytest.approx(math.cosh(2.0), rel=1e-11)
    assert float(Ap[0, 0]) == pytest.approx(math.cosh(2.0), rel=1e-11)
    assert float(Bp[0, 0]) == pytest.approx(math.sinh(2.0), rel=1e-11)


def test_against_scipy_solve_ivp():
    R = np.array([[-2.0, 0.5], [0.5, -1.0]])
    traj = jacobi.integrate(R, 2.0, 1e-3)

    def rhs(_, y):
        Y, Yp = y[:4].reshape(2, 2), y[4:].reshape(2, 2)
        return np.concatenate([Yp.ravel(), (-R @ Y).ravel()])

    y0 = np.concatenate([np.zeros(4), np.eye(2).ravel()])
    sol = solve_ivp(rhs, (0, 2.0), y0, rtol=1e-12, atol=1e-12, method="DOP853")
    assert np.allclose(traj.state_at(2.0)[0], sol.y[:4, -1].reshape(2, 2), rtol=1e-9, atol=1e-10)


def test_det_a_equals_density(traj_ch):
    s = make_space("complex_hyperbolic", 4)
    A = traj_ch.state_at(2.0)[0]
    assert float(np.linalg.det(A)) == pytest.approx(179.487373924411835, rel=1e-9)
    assert jacobi.riccati_trace(traj_ch, 2.0) == pytest.approx(float(s.log_derivative(2.0)), rel=1e-10)


def test_det_identity_and_q_tensor(traj_ch):
    f = make_space("complex_hyperbolic", 4).f
    for s, t in ((0.5, 1.0), (1.0, 2.0), (0.5, 2.5)):
        assert jacobi.check_det_identity(traj_ch, f, s, t) <= 1e-6
    Q = jacobi.q_tensor(traj_ch, 1.0)
    assert np.allclose(Q, Q.T, atol=1e-12)


def test_wronskian_and_floor(traj_ch):
    drift = jacobi.wronskian_drift(traj_ch)
    floor = jacobi.wronskian_rounding_floor(traj_ch)
    assert drift <= 1e-7
    # the observed drift is of the size of the cancellation floor, not larger
    assert drift <= 2 * floor
    assert jacobi.symmetry_defect(traj_ch) <= 1e-7


@settings(max_examples=15, deadline=None)
@given(st.floats(-4.0, -0.25))
def test_rk4_scalar_matches_closed_form(lam):
    a = math.sqrt(-lam)
    r = np.array([0.5, 1.0, 3.0])
    log_y, ratio = jacobi.rk4_scalar_jacobi(lam, r)
    assert np.allclose(log_y, np.log(np.sinh(a * r) / a), rtol=1e-10, atol=1e-11)
    assert np.allclose(ratio, a / np.tanh(a * r), rtol=1e-10)


def test_rk4_scalar_far_radius_does_not_overflow():
    log_y, ratio = jacobi.rk4_scalar_jacobi(-1.0, np.array([800.0]))
    assert log_y[0] == pytest.approx(800.0 - math.log(2.0), rel=1e-10)
    assert ratio[0] == pytest.approx(1.0, rel=1e-10)


def test_stable_tensor_trace_is_minus_h():
    traj = jacobi.integrate(np.diag([-4.0, -1.0, -1.0]), 40.0, 1e-3)
    U = jacobi.stable_riccati(traj, 2.0, 40.0)
    assert float(-np.trace(U)) == pytest.approx(4.0, abs=1e-6)
    assert jacobi.check_jacobi_identity(traj, 1.0, 40.0) <= 1e-5


def test_errors():
    with pytest.raises(jacobi.JacobiError):
        jacobi.integrate([[1.0, 2.0], [0.0, 1.0]], 1.0)
    with pytest.raises(jacobi.JacobiError):
        jacobi.integrate([[-1.0]], 1.0, step=0.1)
    with pytest.raises(jacobi.JacobiError):
        jacobi.integrate([[-1.0]], -1.0)
