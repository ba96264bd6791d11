"""Poincare unit disk with metric 4|dz|^2 / (1 - |z|^2)^2 (curvature -1, n = 2, h = 1).

Directions at a point are Euclidean angles in the chart; the metric is
conformal, so these agree with hyperbolic angles.  The Mobius maps
T_p(z) = (z - p) / (1 - conj(p) z) send p to 0 with positive real
derivative, so they carry a direction at p to the same angle at 0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

BOUNDARY_MARGIN = 1e-12


class DiskError(ValueError):
    pass


@dataclass(frozen=True)
class DiskPoint:
    z: complex

    def __post_init__(self):
        z = complex(self.z)
        if not abs(z) < 1.0 - BOUNDARY_MARGIN:
            raise DiskError(f"{z} is not inside the unit disk")
        object.__setattr__(self, "z", z)


@dataclass(frozen=True)
class BoundaryAngle:
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "theta", float(self.theta) % (2 * math.pi))

    @property
    def point(self) -> complex:
        return complex(math.cos(self.theta), math.sin(self.theta))


def as_complex(p):
    if isinstance(p, DiskPoint):
        return p.z
    if isinstance(p, np.ndarray):
        return p.astype(complex)
    return complex(p)


def as_angle(xi):
    if isinstance(xi, BoundaryAngle):
        return xi.theta
    return xi if isinstance(xi, np.ndarray) else float(xi)


def mobius_to_origin(p, z):
    """T_p(z), the disk isometry sending p to 0."""
    return (z - p) / (1 - np.conj(p) * z)


def mobius_from_origin(p, w):
    """Inverse of T_p."""
    return (w + p) / (1 + np.conj(p) * w)


def _dist(z, w):
    num = np.abs(z - w)
    den = np.abs(1 - np.conj(z) * w)
    return 2.0 * np.arctanh(np.minimum(num / den, 1.0))


def distance(z, w):
    """Hyperbolic distance 2 artanh(|z - w| / |1 - conj(z) w|)."""
    d = _dist(as_complex(z), as_complex(w))
    return float(d) if np.ndim(d) == 0 else d


def _ray(p, direction, t):
    w0 = np.tanh(np.asarray(t) / 2.0) * np.exp(1j * np.asarray(direction))
    return mobius_from_origin(p, w0)


def geodesic_ray(p, direction: float, t: float) -> DiskPoint:
    """Point at arc length t on the unit-speed ray from p with tangent angle ``direction``."""
    if t < 0:
        raise DiskError("ray parameter must be nonnegative")
    return DiskPoint(complex(_ray(as_complex(p), direction, t)))


def direction_to(p, q) -> float:
    """Tangent angle at p of the geodesic from p to q."""
    return float(np.angle(mobius_to_origin(as_complex(p), as_complex(q))))


def direction_to_boundary(p, xi) -> float:
    """Tangent angle at p of the ray from p toward the boundary point xi."""
    e = np.exp(1j * as_angle(xi))
    return float(np.angle(mobius_to_origin(as_complex(p), e)))


def geodesic_point(x, y, s):
    """Point at arc length s from x on the geodesic toward y (complex, vectorized in s)."""
    x, y = as_complex(x), as_complex(y)
    return _ray(x, np.angle(mobius_to_origin(x, y)), s)


def _busemann(theta, z):
    e = np.exp(1j * theta)
    return np.log(np.abs(e - z) ** 2 / (1 - np.abs(z) ** 2))


def busemann(xi, z):
    """b_xi(z) = log(|xi - z|^2 / (1 - |z|^2)), normalized so b(0) = 0."""
    b = _busemann(as_angle(xi), as_complex(z))
    return float(b) if np.ndim(b) == 0 else b


def ray_distance(x, p, direction: float, t: float) -> float:
    """d(x, c(t)) for the ray c from p with tangent angle ``direction``.

    Works in hyperboloid coordinates so that t may be far beyond the
    range where c(t) is representable in the disk chart.
    """
    x, p = as_complex(x), as_complex(p)
    if x == p:
        return float(t)
    if t < 15.0:
        return distance(x, _ray(p, direction, t))
    y = mobius_to_origin(p, x)
    ab2 = abs(y) ** 2
    x0 = (1 + ab2) / (1 - ab2)
    proj = (2 * (y * np.exp(-1j * direction)).real) / (1 - ab2)
    u, v = x0 - proj, x0 + proj
    # cosh d = (e^t u + e^{-t} v) / 2 with e^t u dominant
    log_cosh = t + math.log(u + math.exp(-2 * t) * v) - math.log(2.0)
    return float(log_cosh + math.log1p(math.sqrt(1.0 - math.exp(-2 * log_cosh))))


def busemann_limit(xi, z, t: float = 30.0) -> float:
    """d(z, c(t)) - t for the ray c from 0 toward xi: the defining limit at finite t."""
    return ray_distance(z, 0j, as_angle(xi), t) - t


def gromov_product(x, y, p) -> float:
    x, y, p = as_complex(x), as_complex(y), as_complex(p)
    val = 0.5 * (distance(x, p) + distance(y, p) - distance(x, y))
    return max(val, 0.0)


def distance_to_geodesic(p, x, y, samples: int = 2001) -> float:
    """min over the segment [x, y] of d(p, .), by golden-section search on a sampled bracket."""
    x, y, p = as_complex(x), as_complex(y), as_complex(p)
    L = distance(x, y)
    s = np.linspace(0.0, L, samples)
    d = _dist(p, geodesic_point(x, y, s))
    i = int(np.argmin(d))
    lo, hi = s[max(i - 1, 0)], s[min(i + 1, samples - 1)]
    g = (math.sqrt(5) - 1) / 2
    for _ in range(80):
        a, b = hi - g * (hi - lo), lo + g * (hi - lo)
        if _dist(p, geodesic_point(x, y, a)) < _dist(p, geodesic_point(x, y, b)):
            hi = b
        else:
            lo = a
    return float(min(d[i], _dist(p, geodesic_point(x, y, 0.5 * (lo + hi)))))


def sphere_hit(p, q, v: float, t: float, tol: float = 1e-12):
    """First point where the ray from q with tangent angle v meets the sphere S_t(p).

    Returns ``(DiskPoint, s)`` with s the ray parameter.  The root of
    s -> d(p, c(s)) - t is bracketed by [max(0, t - d(p,q)), t + d(p,q)].
    """
    pt, s = _sphere_hit(as_complex(p), as_complex(q), np.asarray(v, dtype=float), t, tol)
    if np.ndim(s) == 0:
        return DiskPoint(complex(pt)), float(s)
    return pt, s


def _sphere_hit(p, q, v, t, tol=1e-12):
    dpq = distance(p, q)
    if not dpq < t:
        raise DiskError("q must lie inside the ball of radius t about p")
    lo = np.full(v.shape, max(0.0, t - dpq))
    hi = np.full(v.shape, t + dpq)
    g_lo = _dist(p, _ray(q, v, lo)) - t
    if np.any(g_lo > 1e-9):
        raise DiskError("sphere_hit bracket failed at the lower end")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = _dist(p, _ray(q, v, mid)) - t
        left = g > 0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        if np.max(hi - lo) < tol:
            break
    s = 0.5 * (lo + hi)
    return _ray(q, v, s), s


def unit_normal(x, y):
    """N_x(y): unit tangent at y of the geodesic from x through y (as a complex number)."""
    w = mobius_to_origin(y, x)
    return -w / np.abs(w)


def bt_map(p, q, v, t):
    """B_t(v): tangent angle at p of the point where the ray from q meets S_t(p)."""
    p, q = as_complex(p), as_complex(q)
    pt, _ = _sphere_hit(p, q, np.asarray(v, dtype=float), t)
    return np.angle(mobius_to_origin(p, pt))


def jacobian_Bt(p, q, v, t):
    """Jacobian of B_t: f(d(q, F_t v)) / f(t) / <N_p(F_t v), N_q(F_t v)> with f = sinh."""
    p, q = as_complex(p), as_complex(q)
    pt, s = _sphere_hit(p, q, np.asarray(v, dtype=float), t)
    cosang = (unit_normal(p, pt) * np.conj(unit_normal(q, pt))).real
    jac = np.sinh(s) / np.sinh(t) / cosang
    return float(jac) if np.ndim(jac) == 0 else jac


def divergence_actual(alpha, t):
    """d(c_v(t), c_w(t)) for rays from one point at angle alpha (hyperbolic law of cosines)."""
    return np.arccosh(np.cosh(t) ** 2 - np.sinh(t) ** 2 * np.cos(alpha))


def divergence_rate(t, a_const: float):
    """a(t) = min(t/pi, a_const / sqrt((f'/f)(t/2) - h)) with f = sinh, h = 1."""
    t = np.asarray(t, dtype=float)
    excess = 1.0 / np.tanh(t / 2) - 1.0
    return np.minimum(t / np.pi, a_const / np.sqrt(excess))


def calibrate_divergence_constant(t: float = 1.0, samples: int = 4000) -> float:
    """Largest a_const with a(t) alpha <= d(c_v(t), c_w(t)) for all alpha at the given t."""
    alpha = np.linspace(np.pi / samples, np.pi, samples)
    ratio = divergence_actual(alpha, t) / alpha
    return float(np.min(ratio) * math.sqrt(1.0 / math.tanh(t / 2) - 1.0))


def divergence_check(alpha: float, t: float, a_const: float):
    """(actual separation, lower bound a(t) * alpha)."""
    if not 0 < alpha <= math.pi + 1e-15:
        raise DiskError("angle must lie in (0, pi]")
    if t <= 0:
        raise DiskError("t must be positive")
    return float(divergence_actual(alpha, t)), float(divergence_rate(t, a_const) * alpha)


def hyperbolic_laplacian_fd(u, z, step: float = 1e-3) -> float:
    """(1 - |z|^2)^2 / 4 times the Euclidean 5-point Laplacian of u at z."""
    z = as_complex(z)
    h = step
    lap = (u(z + h) + u(z - h) + u(z + 1j * h) + u(z - 1j * h) - 4 * u(z)) / h**2
    return float((1 - abs(z) ** 2) ** 2 / 4 * lap)


def hyperbolic_gradient_norm(u, z, step: float = 1e-6) -> float:
    """Hyperbolic norm of grad u at z: (1 - |z|^2)/2 times the Euclidean gradient norm."""
    z = as_complex(z)
    ux = (u(z + step) - u(z - step)) / (2 * step)
    uy = (u(z + 1j * step) - u(z - 1j * step)) / (2 * step)
    return float((1 - abs(z) ** 2) / 2 * math.hypot(ux, uy))


def triangle_thinness(a, b, c, samples: int = 200) -> float:
    """Largest distance from a point of one side to the union of the other two sides."""
    verts = [as_complex(a), as_complex(b), as_complex(c)]
    sides = []
    for i in range(3):
        x, y = verts[i], verts[(i + 1) % 3]
        sides.append(geodesic_point(x, y, np.linspace(0, distance(x, y), samples)))
    worst = 0.0
    for i in range(3):
        others = np.concatenate([sides[(i + 1) % 3], sides[(i + 2) % 3]])
        d = _dist(sides[i][:, None], others[None, :])
        worst = max(worst, float(np.max(np.min(d, axis=1))))
    return worst


def change_of_variables_residual(p, q, t: float, g=np.cos, nodes: int = 1024) -> float:
    """|(1/2pi) int g(B_t(v)) Jac B_t(v) dv - (1/2pi) int g(w) dw| by two trapezoid rules."""
    v = 2 * np.pi * np.arange(nodes) / nodes
    lhs = np.mean(g(bt_map(p, q, v, t)) * jacobian_Bt(p, q, v, t))
    rhs = np.mean(g(v))
    return float(abs(lhs - rhs))
