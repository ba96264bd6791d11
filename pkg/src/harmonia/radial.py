"""Radial analysis on a model space.

For a radial function F(d_p(q)) the Laplacian is F'' + (f'/f) F'.  The
function mu(r) = (integral of f over [0, r]) / f(r) solves
mu' + (f'/f) mu = 1, so mu(d_p) has Laplacian one.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from harmonia.catalog import ModelSpace, SpaceError
from harmonia.quadrature import integrate

FD_STEP = 1e-3


@dataclass(frozen=True)
class RadialFunction:
    """A radial profile F with its first derivative and value at the origin."""

    eval: Callable
    d1: Callable
    origin_value: float

    def d2(self, r, step: float = 1e-4):
        r = np.asarray(r, dtype=float)
        return _richardson_central(self.d1, r, step, order=1)


def _richardson_central(func, r, step, order):
    """Central difference of given order (1 or 2) with one Richardson pass."""
    def cd(h):
        if order == 1:
            return (func(r + h) - func(r - h)) / (2 * h)
        return (func(r + h) - 2 * func(r) + func(r - h)) / h**2
    return (4 * cd(step / 2) - cd(step)) / 3


def _integral_ratio(space: ModelSpace, r: float) -> float:
    """(integral of f over [0, r]) / f(r), integrated in log form."""
    if r == 0:
        return 0.0
    log_fr = float(space.log_density(r))

    def integrand(s):
        with np.errstate(divide="ignore"):
            return np.exp(space.log_density(s) - log_fr)

    h = space.mean_curvature_h
    lo = max(0.0, r - 50.0 / h) if h > 0 else 0.0
    breaks = np.arange(lo, r, 1.0)[1:] if r - lo > 2 else ()
    # exp(log f(s) - log f(r)) carries rounding of order eps * |log f(r)|
    rel_tol = max(1e-14, 8 * np.finfo(float).eps * (1.0 + abs(log_fr)))
    return integrate(integrand, lo, r, breakpoints=tuple(breaks), abs_tol=1e-16, rel_tol=rel_tol)


def mu(space: ModelSpace, r):
    """mu(r) = int_0^r f / f(r); vectorized over r >= 0."""
    arr = np.asarray(r, dtype=float)
    if np.any(arr < 0):
        raise SpaceError("mu is defined for r >= 0")
    out = np.array([_integral_ratio(space, float(x)) for x in arr.ravel()]).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def mu_odd(space: ModelSpace, r):
    """Odd extension of mu to the whole line (mu is odd in r)."""
    arr = np.asarray(r, dtype=float)
    return np.sign(arr) * mu(space, np.abs(arr))


def mu_prime(space: ModelSpace, r):
    """mu'(r) = 1 - (f'/f)(r) mu(r) for r > 0."""
    return 1.0 - space.log_derivative(r) * mu(space, r)


def mu_function(space: ModelSpace) -> RadialFunction:
    return RadialFunction(lambda r: mu(space, r), lambda r: mu_prime(space, r), 0.0)


def radial_laplacian(space: ModelSpace, F: RadialFunction, r):
    """F''(r) + (f'/f)(r) F'(r), with F'' from differences of F'."""
    r = np.asarray(r, dtype=float)
    if np.any(r <= 0):
        raise SpaceError("radial Laplacian needs r > 0")
    return F.d2(r) + space.log_derivative(r) * F.d1(r)


def sphere_eigenvalue(space: ModelSpace, r):
    """-(f'/f)'(r), the sphere eigenvalue of the directional functions phi_v.

    Evaluated factorwise as the sum of m_i / y_i(r)^2, which equals
    -(f'' f - f'^2) / f^2 without its cancellation at large r.
    """
    if np.any(np.asarray(r) <= 0):
        raise SpaceError("radius must be positive")
    return -space.log_derivative_prime(r)


def _need_dim3(space: ModelSpace):
    if space.dim_n < 3:
        raise SpaceError("scalar curvature of spheres/horospheres needs n >= 3")


def sphere_scalar_curvature(space: ModelSpace, r):
    """f''/f(r) + (n-1) Ric for the geodesic sphere of radius r."""
    _need_dim3(space)
    if np.any(np.asarray(r) <= 0):
        raise SpaceError("radius must be positive")
    d = space.log_derivative(r)
    return d**2 + space.log_derivative_prime(r) + (space.dim_n - 1) * space.ricci


def horosphere_scalar_curvature(space: ModelSpace) -> float:
    _need_dim3(space)
    return space.mean_curvature_h**2 + (space.dim_n - 1) * space.ricci


@dataclass
class CheckReport:
    """Named scalar outcomes of a numerical check, plus optional per-point data."""

    name: str
    values: dict = field(default_factory=dict)
    details: dict = field(default_factory=dict)
    ok: bool = True

    def __getitem__(self, key):
        return self.values[key]


def check_mu_properties(space: ModelSpace, grid, step: float = FD_STEP) -> CheckReport:
    """Violations of the mu bounds over ``grid``.

    Reported keys: ``nonneg`` (mu >= 0), ``slope`` (0 <= mu' <= 1, finite
    differences), ``concavity`` (-mu'' mu <= 1/4), ``slope_at_0``
    (|mu'(0+) - 1/n|), ``third_at_0`` (|mu'''(0+) - 2 Ric/(n(n+2))|) and
    ``limit`` (|mu(r_max) - 1/h|, only when h > 0).
    """
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise SpaceError("grid must be nonempty")
    n = space.dim_n
    m = lambda x: mu_odd(space, x)  # noqa: E731
    vals = mu(space, grid)
    d1 = _richardson_central(m, grid, step, 1)
    d2 = _richardson_central(m, grid, step, 2)
    rep = CheckReport("mu_properties")
    rep.values["nonneg"] = float(max(0.0, -np.min(vals)))
    rep.values["slope"] = float(max(0.0, -np.min(d1), np.max(d1) - 1.0))
    rep.values["concavity"] = float(max(0.0, np.max(-d2 * vals) - 0.25))

    # mu(h)/h -> 1/n and (mu(2h) - 2 mu(h))/h^3 -> mu'''(0), errors O(h^2)
    h0 = 0.01
    s1 = lambda h: m(h) / h  # noqa: E731
    s3 = lambda h: (m(2 * h) - 2 * m(h)) / h**3  # noqa: E731
    slope0 = (4 * s1(h0 / 2) - s1(h0)) / 3
    third0 = (4 * s3(h0 / 2) - s3(h0)) / 3
    rep.values["slope_at_0"] = abs(float(slope0) - 1.0 / n)
    rep.values["third_at_0"] = abs(float(third0) - 2.0 * space.ricci / (n * (n + 2)))
    rep.details.update(mu=vals, mu1=d1, mu2=d2, slope_at_0=float(slope0), third_at_0=float(third0))
    h = space.mean_curvature_h
    if h > 0:
        rep.values["limit"] = abs(float(vals[np.argmax(grid)]) - 1.0 / h)
    return rep


def check_density_inequality(space: ModelSpace, grid, eq_tol: float = 1e-9) -> CheckReport:
    """Residual of -f^{2/(n-1)} (f'/f)' - (n-1) >= 0 over the grid."""
    grid = np.asarray(grid, dtype=float)
    if grid.size == 0:
        raise SpaceError("grid must be nonempty")
    n = space.dim_n
    scale = np.exp(2.0 * space.log_density(grid) / (n - 1))
    resid = -scale * space.log_derivative_prime(grid) - (n - 1)
    rep = CheckReport("density_inequality")
    rep.values["min_residual"] = float(np.min(resid))
    rep.values["max_abs_residual"] = float(np.max(np.abs(resid)))
    rep.details["residual"] = resid
    rep.details["equality"] = np.abs(resid) <= eq_tol
    rep.ok = bool(np.min(resid) >= -eq_tol)
    return rep


def spherical_mean_check(space: ModelSpace, F: RadialFunction, grid) -> CheckReport:
    """Radial mean value inequality: a radially subharmonic F is nondecreasing."""
    grid = np.sort(np.asarray(grid, dtype=float))
    lap = radial_laplacian(space, F, grid)
    vals = np.asarray(F.eval(grid), dtype=float)
    rep = CheckReport("spherical_mean")
    scale = max(1.0, float(np.max(np.abs(vals))))
    rep.values["subharmonic_violation"] = float(max(0.0, -np.min(lap)))
    rep.values["monotone_violation"] = float(max(0.0, -np.min(np.diff(vals)) / scale)) if len(vals) > 1 else 0.0
    rep.details["laplacian"] = lap
    rep.ok = rep.values["monotone_violation"] <= 1e-12
    rep.values["subharmonic"] = float(rep.values["subharmonic_violation"] <= 1e-6)
    return rep


def mu_ode_residual(space: ModelSpace, grid) -> float:
    """max |mu' + (f'/f) mu - 1| with mu' from finite differences."""
    grid = np.asarray(grid, dtype=float)
    d1 = _richardson_central(lambda x: mu_odd(space, x), grid, FD_STEP, 1)
    return float(np.max(np.abs(d1 + space.log_derivative(grid) * mu(space, grid) - 1.0)))


def hv_radial_residual(space: ModelSpace, grid, step: float = 1e-2) -> float:
    """max |(mu' + (f'/f) mu)'| on the grid, the radial harmonicity condition for h_v.

    mu' and mu'' come from differences of the quadrature values of mu, so the
    check does not reuse the first-order identity for mu.
    """
    grid = np.asarray(grid, dtype=float)
    m = lambda x: mu_odd(space, x)  # noqa: E731
    d1 = _richardson_central(m, grid, step, 1)
    d2 = _richardson_central(m, grid, step, 2)
    g1 = d2 + space.log_derivative_prime(grid) * mu(space, grid) + space.log_derivative(grid) * d1
    return float(np.max(np.abs(g1)))


def power_function(k: float) -> RadialFunction:
    return RadialFunction(lambda r: np.asarray(r, dtype=float) ** k,
                          lambda r: k * np.asarray(r, dtype=float) ** (k - 1),
                          0.0 if k > 0 else math.nan)
