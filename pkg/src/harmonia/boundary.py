"""Visibility measures, the Dirichlet problem at infinity and the h_v functions on the disk.

On the disk h = 1 and e^{-b_xi(z)} = (1 - |z|^2) / |xi - z|^2 is the
Poisson kernel, so the visibility measure at z is the harmonic measure.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from harmonia import disk
from harmonia.catalog import ModelSpace, make_space
from harmonia.quadrature import integrate
from harmonia.radial import mu

DEFAULT_NODES = 512
# trapezoid error for the Poisson kernel behaves like |z|^N; N >= 40/(1-|z|) keeps it below e^-40
NODES_PER_GAP = 40.0


class BoundaryError(ValueError):
    pass


def _disk_space() -> ModelSpace:
    return make_space("real_hyperbolic", 2)


@dataclass(frozen=True, eq=False)
class VisibilityMeasure:
    basepoint: disk.DiskPoint
    nodes: np.ndarray
    weights: np.ndarray

    def integrate(self, phi) -> float:
        vals = np.asarray(phi(self.nodes), dtype=float) * np.ones_like(self.nodes)
        return math.fsum(vals * self.weights) / math.fsum(self.weights)


def _raw_weights(z: complex, theta: np.ndarray) -> np.ndarray:
    return (1.0 - abs(z) ** 2) / np.abs(np.exp(1j * theta) - z) ** 2


def visibility_measure(p, node_count: int = DEFAULT_NODES) -> VisibilityMeasure:
    """Uniform boundary nodes reweighted by exp(-b_xi(p)), normalized to mass one."""
    if node_count < 8:
        raise BoundaryError("node_count must be at least 8")
    p = p if isinstance(p, disk.DiskPoint) else disk.DiskPoint(p)
    theta = 2 * np.pi * np.arange(node_count) / node_count
    w = _raw_weights(p.z, theta) / node_count
    return VisibilityMeasure(p, theta, w / math.fsum(w))


def node_count_for(z, node_count: int = DEFAULT_NODES) -> int:
    """Node count for z: at least ``node_count`` and 40/(1 - |z|), rounded up to a power of two."""
    gap = 1.0 - abs(complex(z))
    need = max(node_count, int(math.ceil(NODES_PER_GAP / gap)))
    return need if need == node_count else 1 << (need - 1).bit_length()


def _solve_block(phi, z: np.ndarray, n: int) -> np.ndarray:
    theta = 2 * np.pi * np.arange(n) / n
    vals = np.asarray(phi(theta), dtype=float) * np.ones(n)
    out = np.empty(z.shape)
    chunk = max(1, 2_000_000 // n)
    for i in range(0, len(z), chunk):
        zz = z[i:i + chunk, None]
        w = (1.0 - np.abs(zz) ** 2) / np.abs(np.exp(1j * theta)[None, :] - zz) ** 2
        out[i:i + chunk] = (w @ vals) / np.sum(w, axis=1)
    return out


def dirichlet_solve(phi, z, node_count: int = DEFAULT_NODES, adaptive: bool = True):
    """H_phi(z) = integral of phi against the visibility measure at z.

    ``phi`` maps boundary angles (a numpy array) to values.  With
    ``adaptive`` the node count grows as z nears the boundary.
    """
    arr = np.asarray(disk.as_complex(z) if not isinstance(z, np.ndarray) else z, dtype=complex)
    if np.any(np.abs(arr) >= 1.0 - disk.BOUNDARY_MARGIN):
        raise disk.DiskError("evaluation point must lie inside the unit disk")
    flat = arr.ravel()
    counts = np.array([node_count_for(x, node_count) if adaptive else node_count for x in flat])
    out = np.empty(flat.shape)
    for n in np.unique(counts):
        sel = counts == n
        out[sel] = _solve_block(phi, flat[sel], int(n))
    if arr.ndim == 0:
        # a single point keeps the exactly normalized sum
        n = int(counts[0])
        theta = 2 * np.pi * np.arange(n) / n
        w = _raw_weights(complex(flat[0]), theta)
        vals = np.asarray(phi(theta), dtype=float) * np.ones(n)
        return math.fsum(vals * w) / math.fsum(w)
    return out.reshape(arr.shape)


def radon_nikodym(p, q, theta):
    """d mu_p / d mu_q at xi = e^{i theta}: exp(-(b_xi(p) - b_xi(q)))."""
    return np.exp(-(disk.busemann(theta, p) - disk.busemann(theta, q)))


def cocycle_residual(p, q, r, node_count: int = 64) -> float:
    theta = 2 * np.pi * np.arange(node_count) / node_count
    lhs = radon_nikodym(p, q, theta) * radon_nikodym(q, r, theta)
    return float(np.max(np.abs(lhs - radon_nikodym(p, r, theta))))


def harmonic_measure_mass(p, node_count: int = DEFAULT_NODES) -> float:
    """(1/2pi) int exp(-b_xi(p)) d theta by the base trapezoid rule at the origin."""
    theta = 2 * np.pi * np.arange(node_count) / node_count
    return float(np.mean(np.exp(-disk.busemann(theta, p))))


def appl2_residual(z, node_count: int = DEFAULT_NODES, space: ModelSpace | None = None) -> float:
    """|(1/2pi) int e^{-b_w(z)} w d theta - h mu(d(0,z)) w_0(z)| for the vector identity."""
    space = space or _disk_space()
    z = disk.as_complex(z)
    theta = 2 * np.pi * np.arange(node_count) / node_count
    lhs = np.mean(_raw_weights(z, theta) * np.exp(1j * theta))
    rhs = 0j if z == 0 else space.mean_curvature_h * mu(space, disk.distance(0, z)) * z / abs(z)
    return float(abs(lhs - rhs))


def h_v(v: complex, q, space: ModelSpace | None = None):
    """mu(d(0, q)) <v, q/|q|>, zero at q = 0; vectorized over q."""
    space = space or _disk_space()
    q = np.asarray(q, dtype=complex)
    r = np.abs(q)
    d = 2.0 * np.arctanh(r)
    with np.errstate(invalid="ignore", divide="ignore"):
        direction = np.where(r > 0, (np.conj(v) * q).real / np.where(r > 0, r, 1.0), 0.0)
    out = mu(space, d) * direction
    return float(out) if np.ndim(out) == 0 else out


def ball_model_map(q, basis=(1.0, 1j), space: ModelSpace | None = None):
    """(h_{e1}(q), h_{e2}(q)) for an orthonormal frame at 0."""
    b = [complex(e) for e in basis]
    gram = np.array([[(np.conj(a) * c).real for c in b] for a in b])
    if not np.allclose(gram, np.eye(len(b)), atol=1e-12):
        raise BoundaryError("basis must be orthonormal")
    return np.stack([np.asarray(h_v(e, q, space)) for e in b], axis=-1)


def gradient_integral_check(u, p, alpha: float, r: float, nodes: int = 512,
                            fd_step: float = 1e-4, space: ModelSpace | None = None):
    """(LHS, RHS, |LHS - RHS|) for <grad u(p), v> = (1/vol B_r) int_{S_r(p)} u phi_v.

    v is the unit vector at p with tangent angle ``alpha``.  The left side
    uses central differences in the chart; the right side is the
    trapezoid rule on S_r(p) with vol B_r = omega_2 f(r) mu(r).
    """
    space = space or _disk_space()
    p = disk.as_complex(p)
    e = complex(math.cos(alpha), math.sin(alpha))

    def dd(h):
        return (u(p + h * e) - u(p - h * e)) / (2 * h)

    lhs = (1 - abs(p) ** 2) / 2 * (4 * dd(fd_step / 2) - dd(fd_step)) / 3
    theta = 2 * np.pi * np.arange(nodes) / nodes
    pts = disk._ray(p, theta, r)
    vals = np.asarray(u(pts), dtype=float)
    rhs = np.mean(vals * np.cos(theta - alpha)) / mu(space, r)
    return float(lhs), float(rhs), float(abs(lhs - rhs))


def horocycle_point(xi, x):
    """Point at signed arc length x on the horocycle through 0 centered at xi."""
    w = np.asarray(x, dtype=float) + 1j
    return np.exp(1j * disk.as_angle(xi)) * (w - 1j) / (w + 1j)


def mean_value_at_infinity(phi, xi, arc_lengths) -> np.ndarray:
    """Averages of phi over horocycle arcs of half-length L centered at 0.

    In the upper half-plane the horocycle is the line y = 1 and the
    intrinsic length element is dx, so the average is (1/2L) int phi dx.
    """
    arcs = np.asarray(arc_lengths, dtype=float)
    if np.any(arcs <= 0) or np.any(np.diff(arcs) <= 0):
        raise BoundaryError("arc lengths must be positive and increasing")
    out = []
    for L in arcs:
        breaks = tuple(np.arange(-L, L, 2.0)[1:])
        total = integrate(lambda x: phi(horocycle_point(xi, x)), -L, L, breakpoints=breaks,
                          abs_tol=1e-10, rel_tol=1e-10)
        out.append(total / (2 * L))
    return np.array(out)
