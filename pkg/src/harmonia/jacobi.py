"""Matrix Jacobi equation Y'' + R Y = 0 for constant symmetric R.

Integration is classical fixed-step RK4.  For a linear autonomous system
one RK4 step is multiplication by the degree-4 Taylor polynomial of the
step generator, so the trajectory is produced by repeated application of
that propagator; this is the same iterate as the textbook four-stage loop
up to rounding.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np


class JacobiError(ValueError):
    pass


def _rk4_propagator(generator: np.ndarray, step: float) -> np.ndarray:
    hl = step * generator
    out = np.eye(len(generator))
    term = np.eye(len(generator))
    for k in range(1, 5):
        term = term @ hl / k
        out = out + term
    return out


@dataclass(frozen=True, eq=False)
class JacobiTrajectory:
    times: np.ndarray
    A: np.ndarray
    Aprime: np.ndarray
    B: np.ndarray
    Bprime: np.ndarray
    curvature: np.ndarray
    step: float

    @property
    def dim(self) -> int:
        return self.curvature.shape[0]

    @property
    def t_max(self) -> float:
        return float(self.times[-1])

    def state_at(self, t: float):
        """(A, A', B, B') at an arbitrary t, via one partial RK4 step from the grid."""
        if t < 0 or t > self.t_max + 1e-12:
            raise JacobiError(f"t={t} outside trajectory [0, {self.t_max}]")
        k = min(int(np.floor(t / self.step + 1e-9)), len(self.times) - 1)
        delta = t - self.times[k]
        if abs(delta) < 1e-14:
            return self.A[k], self.Aprime[k], self.B[k], self.Bprime[k]
        prop = _rk4_propagator(_generator(self.curvature), delta)
        d = self.dim
        out = prop @ np.vstack([np.hstack([self.A[k], self.B[k]]),
                                np.hstack([self.Aprime[k], self.Bprime[k]])])
        return out[:d, :d], out[d:, :d], out[:d, d:], out[d:, d:]

    def wronskian(self) -> np.ndarray:
        """W(A,B)(t) = A'^T B - A^T B' at every sample."""
        return (np.swapaxes(self.Aprime, 1, 2) @ self.B
                - np.swapaxes(self.A, 1, 2) @ self.Bprime)


def _generator(R: np.ndarray) -> np.ndarray:
    d = R.shape[0]
    return np.block([[np.zeros((d, d)), np.eye(d)], [-R, np.zeros((d, d))]])


def curvature_matrix(eigen) -> np.ndarray:
    """Diagonal Jacobi operator from (eigenvalue, multiplicity) pairs."""
    return np.diag([float(lam) for lam, mult in eigen for _ in range(int(mult))])


def integrate(curvature, t_max: float, step: float = 1e-3) -> JacobiTrajectory:
    R = np.atleast_2d(np.asarray(curvature, dtype=float))
    if R.shape[0] != R.shape[1]:
        raise JacobiError("curvature operator must be square")
    if not np.allclose(R, R.T, atol=1e-12):
        raise JacobiError("curvature operator must be symmetric")
    if t_max <= 0:
        raise JacobiError("t_max must be positive")
    if step > 1e-2 * min(1.0, t_max):
        raise JacobiError(f"step {step} too large for t_max={t_max}")
    n_steps = int(round(t_max / step))
    if abs(n_steps * step - t_max) > 1e-9 * t_max:
        raise JacobiError("t_max must be an integer multiple of step")
    d = R.shape[0]
    prop = _rk4_propagator(_generator(R), step)
    states = np.empty((n_steps + 1, 2 * d, 2 * d))
    # columns [A | B], rows [Y ; Y']
    states[0] = np.block([[np.zeros((d, d)), np.eye(d)], [np.eye(d), np.zeros((d, d))]])
    for k in range(n_steps):
        states[k + 1] = prop @ states[k]
    times = step * np.arange(n_steps + 1)
    return JacobiTrajectory(
        times=times,
        A=states[:, :d, :d].copy(),
        Aprime=states[:, d:, :d].copy(),
        B=states[:, :d, d:].copy(),
        Bprime=states[:, d:, d:].copy(),
        curvature=R,
        step=step,
    )


def rk4_scalar_jacobi(lam: float, r, step: float = 1e-3):
    """RK4 iterate of y'' = -lam*y, y(0)=0, y'(0)=1, evaluated at r.

    Returns ``(log y(r), y'(r)/y(r))``.  The k-fold propagator power is
    taken through its eigen-decomposition, which keeps the computation
    overflow-free for large r; the partial step to r uses the same
    Taylor propagator.
    """
    if lam > 0:
        raise JacobiError("positive Jacobi eigenvalues give conjugate points")
    r = np.asarray(r, dtype=float)
    k = np.floor(r / step + 1e-9)
    delta = r - k * step
    if lam == 0.0:
        # RK4 is exact on y = t
        return np.log(r), 1.0 / r
    a = np.sqrt(-lam)
    ah = a * step
    alpha = 1.0 + ah**2 / 2 + ah**4 / 24
    beta_a = ah + ah**3 / 6
    grow = alpha + beta_a
    log_ratio_k = k * np.log1p(-2.0 * beta_a / grow)  # k log(shrink / grow)
    y_s = -np.expm1(log_ratio_k) / (2.0 * a)  # y / grow**k
    yp_s = (1.0 + np.exp(log_ratio_k)) / 2.0  # y' / grow**k
    ad = a * delta
    c0 = 1.0 + ad**2 / 2 + ad**4 / 24
    c1 = delta + a**2 * delta**3 / 6
    y_r = c0 * y_s + c1 * yp_s
    yp_r = c0 * yp_s + a**2 * c1 * y_s
    return k * np.log(grow) + np.log(y_r), yp_r / y_r


def _cell_integral(g0, g1, dg0, dg1, h):
    # endpoint-corrected trapezoid, exact for cubics
    return 0.5 * h * (g0 + g1) + h * h / 12.0 * (dg0 - dg1)


def _inv_gram(A, Ap):
    """(A^T A)^{-1} and its derivative for stacked samples."""
    Ainv = np.linalg.inv(A)
    G = Ainv @ np.swapaxes(Ainv, -1, -2)
    sym = np.swapaxes(Ap, -1, -2) @ A
    dG = -G @ (sym + np.swapaxes(sym, -1, -2)) @ G
    return G, dG


def gram_integral(traj: JacobiTrajectory, s: float, t: float) -> np.ndarray:
    """Integral of (A^T A)^{-1} over [s, t] on the trajectory grid."""
    if s <= 0:
        raise JacobiError("lower limit must be positive (A is singular at 0)")
    if s > t:
        raise JacobiError("require s <= t")
    if s == t:
        return np.zeros((traj.dim, traj.dim))
    i0 = int(np.ceil(s / traj.step - 1e-9))
    i1 = int(np.floor(t / traj.step + 1e-9))
    inner_t = traj.times[i0:i1 + 1]
    inner_t = inner_t[(inner_t > s + 1e-12) & (inner_t < t - 1e-12)]
    idx = np.rint(inner_t / traj.step).astype(int)
    As = [traj.state_at(s)]
    At = [traj.state_at(t)]
    A = np.concatenate([As[0][0][None], traj.A[idx], At[0][0][None]])
    Ap = np.concatenate([As[0][1][None], traj.Aprime[idx], At[0][1][None]])
    knots = np.concatenate([[s], inner_t, [t]])
    G, dG = _inv_gram(A, Ap)
    h = np.diff(knots)[:, None, None]
    return np.sum(_cell_integral(G[:-1], G[1:], dG[:-1], dG[1:], h), axis=0)


def q_difference(traj: JacobiTrajectory, s: float, t: float) -> np.ndarray:
    """Q(s) - Q(t) with Q = A^{-1} B, computed as the integral of (A^T A)^{-1}."""
    return gram_integral(traj, s, t)


def q_tensor(traj: JacobiTrajectory, t: float) -> np.ndarray:
    A, _, B, _ = traj.state_at(t)
    return np.linalg.solve(A, B)


def check_det_identity(traj: JacobiTrajectory, f, s: float, t: float) -> float:
    """|det(Q(s) - Q(t)) - f(t-s) / (f(t) f(s))| for the density evaluator f.

    ``f`` maps r to f(r) (or to an (f, f', f'') triple, whose first entry
    is used).
    """
    def val(r):
        out = f(r)
        return float(out[0] if isinstance(out, tuple) else out)

    lhs = float(np.linalg.det(q_difference(traj, s, t)))
    rhs = val(t - s) / (val(t) * val(s)) if t > s else 0.0
    return abs(lhs - rhs)


def riccati_trace(traj: JacobiTrajectory, t: float) -> float:
    """tr(A'(t) A(t)^{-1}), the mean curvature of the sphere of radius t."""
    if t <= 0:
        raise JacobiError("t must be positive")
    A, Ap, _, _ = traj.state_at(t)
    return float(np.trace(Ap @ np.linalg.inv(A)))


def _tail(traj: JacobiTrajectory, T: float) -> np.ndarray:
    lam, Q = np.linalg.eigh(traj.curvature)
    if np.any(lam >= 0):
        raise JacobiError("stable tensor needs a negative definite curvature operator")
    a = np.sqrt(-lam)
    # (A^T A)^{-1} ~ 4 a^2 e^{-2 a u} per eigendirection
    return (Q * (2.0 * a * np.exp(-2.0 * a * T))) @ Q.T


def stable_integral(traj: JacobiTrajectory, t: float, T: float = 40.0) -> np.ndarray:
    """Integral of (A^T A)^{-1} over [t, infinity): grid part to T plus closed-form tail."""
    if not 0 < t < T <= traj.t_max + 1e-12:
        raise JacobiError(f"need 0 < t < T <= t_max, got t={t}, T={T}")
    tail = _tail(traj, T)
    return gram_integral(traj, t, T) + tail


def stable_tensor(traj: JacobiTrajectory, t: float, T: float = 40.0) -> np.ndarray:
    """S(t) = A(t) times the integral of (A^T A)^{-1} over [t, infinity)."""
    A = traj.state_at(t)[0]
    return A @ stable_integral(traj, t, T)


def stable_riccati(traj: JacobiTrajectory, t: float, T: float = 40.0) -> np.ndarray:
    """U(t) = S'(t) S(t)^{-1} for the stable Jacobi tensor."""
    A, Ap, _, _ = traj.state_at(t)
    I = stable_integral(traj, t, T)
    S = A @ I
    Sp = Ap @ I - np.linalg.inv(A).T
    return Sp @ np.linalg.inv(S)


def check_jacobi_identity(traj: JacobiTrajectory, t: float, T: float = 40.0) -> float:
    """Residual of A'A^{-1} - S'S^{-1} = (A^{-1})^T (S'(0) - S_t'(0))^{-1} A^{-1}.

    The left side uses the stable tensor built from quadrature; on the right
    S'(0) - S_t'(0) is taken as Q(t) - Q(T) minus the tail, from the B tensor.
    """
    A, Ap, _, _ = traj.state_at(t)
    lhs = Ap @ np.linalg.inv(A) - stable_riccati(traj, t, T)
    diff = q_tensor(traj, t) - q_tensor(traj, T) + _tail(traj, T)
    Ainv = np.linalg.inv(A)
    rhs = Ainv.T @ np.linalg.inv(diff) @ Ainv
    return float(np.max(np.abs(lhs - rhs)))


def wronskian_drift(traj: JacobiTrajectory) -> float:
    """max over t>0 of |W(A,B)(t) - I| / t (entrywise max norm)."""
    W = traj.wronskian()
    dev = np.max(np.abs(W - np.eye(traj.dim)), axis=(1, 2))
    return float(np.max(dev[1:] / traj.times[1:]))


def wronskian_rounding_floor(traj: JacobiTrajectory) -> float:
    """max over t>0 of eps * (|A'||B| + |A||B'|) / t, the cancellation floor of W in floating point."""
    def norm(M):
        return np.max(np.abs(M), axis=(1, 2))

    scale = norm(traj.Aprime) * norm(traj.B) + norm(traj.A) * norm(traj.Bprime)
    return float(np.finfo(float).eps * traj.dim * np.max(scale[1:] / traj.times[1:]))


def symmetry_defect(traj: JacobiTrajectory) -> float:
    """max |U - U^T| for U = A' A^{-1} over t > 0."""
    U = traj.Aprime[1:] @ np.linalg.inv(traj.A[1:])
    return float(np.max(np.abs(U - np.swapaxes(U, 1, 2))))
