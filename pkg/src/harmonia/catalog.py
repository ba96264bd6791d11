"""Catalog of model harmonic spaces and their density functions.

Every model density is a product of scalar Jacobi solutions, one per
eigenvalue of the (constant) radial curvature operator:

    f(r) = prod_i y_i(r)**m_i,   y_i'' = -lam_i y_i,  y_i(0) = 0, y_i'(0) = 1.

For euclidean and hyperbolic kinds y_i is in closed form (r or
sinh(a r)/a).  ``rank1_model`` spaces take y_i from the RK4 integrator in
:mod:`harmonia.jacobi`.  All evaluators work with log f and the
logarithmic derivative f'/f so that large radii never overflow.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from harmonia import jacobi

KINDS = ("euclidean", "real_hyperbolic", "complex_hyperbolic", "rank1_model")


class SpaceError(ValueError):
    pass


class GrowthType(enum.Enum):
    POLYNOMIAL = "Polynomial"
    PURELY_EXPONENTIAL = "PurelyExponential"


def unit_sphere_volume(n: int) -> float:
    """omega_n, the volume of the unit (n-1)-sphere in R^n."""
    return 2.0 * math.pi ** (n / 2) / math.gamma(n / 2)


@dataclass(frozen=True)
class ModelSpace:
    name: str
    dim_n: int
    curvature_eigen: tuple[tuple[float, int], ...]
    closed_form: bool = True
    ode_step: float = 1e-3

    @property
    def mean_curvature_h(self) -> float:
        return float(sum(m * math.sqrt(-lam) for lam, m in self.curvature_eigen))

    @property
    def ricci(self) -> float:
        return float(sum(m * lam for lam, m in self.curvature_eigen))

    @property
    def omega(self) -> float:
        return unit_sphere_volume(self.dim_n)

    # per-factor pieces: log y, y'/y and (y'/y)' = -1/y^2
    def _factor(self, lam: float, r: np.ndarray):
        if lam == 0.0:
            return np.log(r), 1.0 / r, -1.0 / r**2
        a = math.sqrt(-lam)
        if self.closed_form:
            ar = a * r
            log_y = ar + np.log(-np.expm1(-2.0 * ar)) - math.log(2.0 * a)
            dlog = a / np.tanh(ar)
            ddlog = -(a / np.sinh(ar)) ** 2
        else:
            log_y, dlog = jacobi.rk4_scalar_jacobi(lam, r, self.ode_step)
            # y'^2 + lam y^2 is conserved and equals 1
            ddlog = -np.exp(-2.0 * log_y)
        return log_y, dlog, ddlog

    def _sums(self, r):
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise SpaceError("radius must be nonnegative")
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            logf = np.zeros_like(r)
            dlog = np.zeros_like(r)
            ddlog = np.zeros_like(r)
            for lam, m in self.curvature_eigen:
                a, b, c = self._factor(lam, r)
                logf = logf + m * a
                dlog = dlog + m * b
                ddlog = ddlog + m * c
        return r, logf, dlog, ddlog

    def log_density(self, r):
        """log f(r); -inf at r = 0."""
        return self._sums(r)[1]

    def log_derivative(self, r):
        """f'(r)/f(r), the mean curvature of the sphere of radius r > 0."""
        return self._sums(r)[2]

    def log_derivative_prime(self, r):
        """(f'/f)'(r), evaluated factorwise without cancellation."""
        return self._sums(r)[3]

    def density(self, r):
        """(f(r), f'(r), f''(r)); vectorized over r >= 0."""
        r, logf, dlog, ddlog = self._sums(r)
        with np.errstate(invalid="ignore", over="ignore"):
            f = np.exp(logf)
            f1 = f * dlog
            f2 = f * (dlog**2 + ddlog)
        at0 = r == 0
        if np.any(at0):
            n = self.dim_n
            f = np.where(at0, 0.0, f)
            f1 = np.where(at0, 1.0 if n == 2 else 0.0, f1)
            f2 = np.where(at0, 2.0 if n == 3 else 0.0, f2)
        if f.ndim == 0:
            return float(f), float(f1), float(f2)
        return f, f1, f2

    def f(self, r):
        return self.density(r)[0]


def _parse_eigen(eigen) -> tuple[tuple[float, int], ...]:
    if isinstance(eigen, str):
        eigen = parse_eigen_spec(eigen)
    pairs: dict[float, int] = {}
    for lam, mult in eigen:
        lam, mult = float(lam), int(mult)
        if mult <= 0:
            raise SpaceError("multiplicities must be positive")
        pairs[lam] = pairs.get(lam, 0) + mult
    return tuple(sorted(pairs.items()))


def parse_eigen_spec(text: str) -> list[tuple[float, int]]:
    """Parse 'lam:mult,lam:mult,...' (e.g. '-4:1,-1:2')."""
    out = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        try:
            lam, mult = chunk.rsplit(":", 1)
            out.append((float(lam), int(mult)))
        except ValueError as exc:
            raise SpaceError(f"malformed eigen entry {chunk!r}; expected lam:mult") from exc
    if not out:
        raise SpaceError("empty eigen specification")
    return out


def make_space(kind: str, dim: int, eigen=None, ode_step: float = 1e-3) -> ModelSpace:
    """Build a catalog space.

    ``eigen`` is only used (and required) for ``rank1_model``; it lists
    (eigenvalue, multiplicity) pairs of the radial curvature operator,
    with multiplicities summing to dim - 1.
    """
    if kind not in KINDS:
        raise SpaceError(f"unknown space kind {kind!r}; choose from {', '.join(KINDS)}")
    if not isinstance(dim, (int, np.integer)) or dim < 2:
        raise SpaceError("dimension must be an integer >= 2")
    dim = int(dim)
    if kind == "euclidean":
        return ModelSpace("euclidean", dim, ((0.0, dim - 1),))
    if kind == "real_hyperbolic":
        return ModelSpace("real_hyperbolic", dim, ((-1.0, dim - 1),))
    if kind == "complex_hyperbolic":
        if dim < 4 or dim % 2:
            raise SpaceError("complex hyperbolic space needs even real dimension >= 4")
        return ModelSpace("complex_hyperbolic", dim, ((-4.0, 1), (-1.0, dim - 2)))
    if eigen is None:
        raise SpaceError("rank1_model needs an eigenvalue list")
    pairs = _parse_eigen(eigen)
    if sum(m for _, m in pairs) != dim - 1:
        raise SpaceError("eigenvalue multiplicities must sum to dim - 1")
    lams = [lam for lam, _ in pairs]
    if any(lam > 0 for lam in lams):
        raise SpaceError("positive eigenvalues produce conjugate points")
    if any(lam == 0 for lam in lams) and any(lam < 0 for lam in lams):
        raise SpaceError("mixed zero and negative eigenvalues do not give a harmonic density")
    if ode_step > 1e-2:
        raise SpaceError("ODE step must be at most 1e-2")
    return ModelSpace("rank1_model", dim, pairs, closed_form=False, ode_step=ode_step)


def sphere_volume(space: ModelSpace, r: float) -> float:
    if r <= 0:
        raise SpaceError("radius must be positive")
    return space.omega * float(space.f(r))


def growth_exponents(space: ModelSpace, t_lo: float = 20.0, t_hi: float = 60.0,
                     step: float = 1.0) -> tuple[int, float, float]:
    """(m, h, c) with f(t) / (t^m e^{ht}) -> c, from a log-regression on [t_lo, t_hi]."""
    t = np.arange(t_lo, t_hi + step / 2, step)
    y = space.log_density(t)
    X = np.column_stack([np.ones_like(t), np.log(t), t])
    coef, *_ = np.linalg.lstsq(X, y, rcond=None)
    m = int(round(coef[1]))
    if abs(coef[1] - m) > 0.1 or m < 0:
        raise SpaceError(f"growth regression did not settle (polynomial exponent {coef[1]:.4f})")
    X2 = np.column_stack([np.ones_like(t), t])
    (logc, h), *_ = np.linalg.lstsq(X2, y - m * np.log(t), rcond=None)
    resid = np.max(np.abs(X2 @ np.array([logc, h]) + m * np.log(t) - y))
    if resid > 1e-6:
        raise SpaceError(f"growth regression residual {resid:.3g} beyond horizon tolerance")
    return m, float(h), float(math.exp(logc))


def classify_growth(space: ModelSpace, horizon: float = 60.0, h_tol: float = 1e-8) -> GrowthType:
    h = space.mean_curvature_h
    if abs(h) <= h_tol:
        return GrowthType.POLYNOMIAL
    t = np.linspace(1.0, horizon, 600)
    scaled = space.log_density(t) - h * t
    if not np.all(np.isfinite(scaled)):
        raise SpaceError("density evaluation failed on growth horizon")
    # bounded above and below: log(f e^{-ht}) must not drift
    tail = scaled[t >= horizon / 2]
    if np.ptp(tail) > 1e-3:
        raise SpaceError("exponential growth is not purely exponential")
    return GrowthType.PURELY_EXPONENTIAL
