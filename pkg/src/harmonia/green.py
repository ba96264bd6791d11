"""Radial Green's kernel G(r) = (1/omega_n) * integral of dt/f(t) over [r, inf)."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from harmonia import disk
from harmonia.catalog import ModelSpace, growth_exponents, make_space
from harmonia.quadrature import geometric_breakpoints, integrate
from harmonia.radial import RadialFunction, radial_laplacian


class GreenKernelError(ValueError):
    pass


@dataclass(frozen=True)
class GreenKernel:
    space: ModelSpace
    beta: float
    tail_params: tuple[int, float, float]
    cut: float = 60.0

    def __call__(self, r):
        return green_radial(self, r)

    def derivative(self, r):
        """G'(r) = -beta / f(r)."""
        return -self.beta * np.exp(-self.space.log_density(r))

    def radial_function(self) -> RadialFunction:
        return RadialFunction(lambda r: green_radial(self, r), self.derivative, math.inf)


def green_kernel(space: ModelSpace, cut: float = 60.0) -> GreenKernel:
    m, h, c = growth_exponents(space)
    if h <= 1e-12 and m <= 1:
        raise GreenKernelError("no positive Green's kernel: integral of 1/f diverges")
    return GreenKernel(space, 1.0 / space.omega, (m, h, c), cut)


def _tail(k: GreenKernel, T: float) -> float:
    """Integral of 1/f over [T, inf) using f ~ c t^m e^{ht}."""
    m, h, c = k.tail_params
    if h <= 1e-12:
        return T ** (1 - m) / ((m - 1) * c)
    x = h * T
    series = 1.0 - m / x + m * (m + 1) / x**2
    return math.exp(-h * T) * T ** (-m) / (h * c) * series


def _green_scalar(k: GreenKernel, r: float) -> float:
    if r <= 0:
        raise GreenKernelError("Green's kernel needs r > 0")
    if r >= k.cut:
        return k.beta * _tail(k, r)
    space = k.space
    log_fr = float(space.log_density(r))

    # integrate f(r)/f(t) so the integrand is O(1) at the lower limit
    def integrand(t):
        return np.exp(log_fr - space.log_density(t))

    body = integrate(integrand, r, k.cut, breakpoints=geometric_breakpoints(r, k.cut),
                     abs_tol=1e-300, rel_tol=max(1e-14, 8 * np.finfo(float).eps * (1.0 + abs(log_fr))))
    return k.beta * (body * math.exp(-log_fr) + _tail(k, k.cut))


def green_radial(k: GreenKernel, r):
    arr = np.asarray(r, dtype=float)
    out = np.array([_green_scalar(k, float(x)) for x in arr.ravel()]).reshape(arr.shape)
    return float(out) if out.ndim == 0 else out


def bump(radius: float = 1.0) -> RadialFunction:
    """(1 - (r/R)^2)^2 on [0, R], zero outside."""
    def ev(r):
        x = np.asarray(r, dtype=float) / radius
        return np.where(x < 1, (1 - x**2) ** 2, 0.0)

    def d1(r):
        x = np.asarray(r, dtype=float) / radius
        return np.where(x < 1, -4 * x * (1 - x**2) / radius, 0.0)

    return RadialFunction(ev, d1, 1.0)


def verify_fundamental(k: GreenKernel, testfn: RadialFunction, support: float = 1.0,
                       green=None) -> float:
    """|omega_n * int_0^R G(r) (Lap phi)(r) f(r) dr + phi(0)| for a radial test function.

    ``green`` optionally replaces the kernel evaluator (used by tests to
    run the same integral with a closed-form kernel).
    """
    space = k.space
    G = green if green is not None else (lambda r: green_radial(k, r))
    probe = np.linspace(support, support * 1.5, 7)
    if np.any(np.abs(testfn.eval(probe)) > 1e-14) or np.any(np.abs(testfn.d1(probe)) > 1e-14):
        raise GreenKernelError("test function is not supported in [0, support]")

    def integrand(r):
        lap = radial_laplacian(space, testfn, r)
        return G(r) * lap * space.f(r)

    val = space.omega * integrate(integrand, 0.0, support, breakpoints=(support / 2,),
                                  abs_tol=1e-11, rel_tol=1e-12, order=16)
    return abs(val + testfn.origin_value)


def martin_limit(k: GreenKernel, a: float, s: float) -> float:
    """G(s + a) / G(s), which tends to exp(-h a) as s grows."""
    if s + a <= 0 or s <= 0:
        raise GreenKernelError("need s > 0 and s + a > 0")
    if a == 0:
        return 1.0
    return green_radial(k, s + a) / green_radial(k, s)


def martin_kernel_along_ray(x, p0, xi, t_seq) -> np.ndarray:
    """G(x, x_n) / G(p0, x_n) on the disk for x_n on the ray from p0 toward xi.

    Converges to exp(-b(x)) with the Busemann function normalized at p0.
    """
    k = green_kernel(make_space("real_hyperbolic", 2))
    x, p0 = disk.as_complex(x), disk.as_complex(p0)
    theta = disk.direction_to_boundary(p0, xi)
    out = []
    for t in np.atleast_1d(np.asarray(t_seq, dtype=float)):
        d = disk.ray_distance(x, p0, theta, t)
        out.append(1.0 if d == t else green_radial(k, d) / green_radial(k, t))
    return np.array(out)
