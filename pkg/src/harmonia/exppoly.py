"""Exponential polynomials sum_i (q_i(t) cos(b_i t) + p_i(t) sin(b_i t)) e^{a_i t}.

Fitting follows Prony: the sample sequence of an exponential polynomial
obeys a linear recurrence whose characteristic roots are z = e^{s dt},
s = a + ib, repeated once per polynomial degree.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

MAX_TERMS = 8
MAX_DEGREE = 4


class FitError(ValueError):
    pass


@dataclass(frozen=True)
class ExpTerm:
    poly_cos: tuple = ()
    poly_sin: tuple = ()
    alpha: float = 0.0
    beta: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "poly_cos", tuple(float(c) for c in self.poly_cos))
        object.__setattr__(self, "poly_sin", tuple(float(c) for c in self.poly_sin))
        if self.beta < 0:
            raise ValueError("beta must be nonnegative")
        if self.beta == 0 and self.poly_sin:
            raise ValueError("a term with beta = 0 has no sine part")

    @property
    def degree(self) -> int:
        return max(len(self.poly_cos), len(self.poly_sin), 1) - 1

    def eval(self, t):
        t = np.asarray(t, dtype=float)
        out = np.zeros_like(t)
        if self.poly_cos:
            out = out + np.polynomial.polynomial.polyval(t, self.poly_cos) * np.cos(self.beta * t)
        if self.poly_sin:
            out = out + np.polynomial.polynomial.polyval(t, self.poly_sin) * np.sin(self.beta * t)
        return out * np.exp(self.alpha * t)


@dataclass(frozen=True)
class ExpPoly:
    terms: tuple = ()
    residual: float = field(default=0.0, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        keys = [(t.alpha, t.beta) for t in self.terms]
        if len(set(keys)) != len(keys):
            raise ValueError("(alpha, beta) pairs must be distinct")

    def __call__(self, t):
        return eval_exppoly(self, t)

    @property
    def leading_rate(self) -> float:
        """Largest alpha among terms with a nonzero coefficient."""
        live = [t.alpha for t in self.terms if any(c != 0 for c in t.poly_cos + t.poly_sin)]
        return max(live) if live else -math.inf

    def to_dict(self) -> dict:
        return {
            "terms": [
                {"alpha": t.alpha, "beta": t.beta, "poly_cos": list(t.poly_cos), "poly_sin": list(t.poly_sin)}
                for t in self.terms
            ],
            "residual": self.residual,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2)

    @classmethod
    def from_dict(cls, data: dict) -> "ExpPoly":
        terms = [ExpTerm(d.get("poly_cos", ()), d.get("poly_sin", ()), d["alpha"], d.get("beta", 0.0))
                 for d in data["terms"]]
        return cls(tuple(terms), data.get("residual", 0.0))


def eval_exppoly(p: ExpPoly, t):
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    for term in p.terms:
        out = out + term.eval(t)
    return float(out) if out.ndim == 0 else out


def translation_rank(f, t_grid, s_grid, tol: float = 1e-9) -> int:
    """Numerical rank of M[i, j] = f(t_j - s_i): singular values above tol * sigma_max."""
    t = np.asarray(t_grid, dtype=float)
    s = np.asarray(s_grid, dtype=float)
    if t.size < 2 or s.size < 2:
        raise ValueError("grids need at least two points")
    if len(np.unique(t)) != t.size or len(np.unique(s)) != s.size:
        raise ValueError("grids must not repeat points")
    M = np.asarray(f(t[None, :] - s[:, None]), dtype=float)
    if not np.all(np.isfinite(M)):
        raise ValueError("function is not finite on the translate grid")
    sv = np.linalg.svd(M, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > tol * sv[0]))


def _hankel(y: np.ndarray, rows: int) -> np.ndarray:
    cols = len(y) - rows + 1
    return np.lib.stride_tricks.sliding_window_view(y, cols)[:rows]


def _cluster(roots: np.ndarray, tol: float):
    """Group nearly equal roots; returns list of (mean root, multiplicity)."""
    remaining = list(roots)
    groups = []
    while remaining:
        z = remaining.pop(0)
        members = [z]
        keep = []
        for w in remaining:
            (members if abs(w - z) <= tol * max(1.0, abs(z)) else keep).append(w)
        remaining = keep
        groups.append((complex(np.mean(members)), len(members)))
    return groups


def _modes(y: np.ndarray, order: int, dt: float, cluster_tol: float):
    """Recurrence roots for a given order -> list of (alpha, beta, multiplicity)."""
    H = _hankel(y, len(y) - order)
    A, rhs = H[:, :order], H[:, order]
    coef, *_ = np.linalg.lstsq(A, rhs, rcond=None)
    roots = np.roots(np.concatenate([[1.0], -coef[::-1]]))
    if np.any(np.abs(roots) == 0):
        raise FitError("recurrence has a zero root")
    modes = []
    for z, mult in _cluster(roots, cluster_tol):
        s = np.log(z) / dt
        alpha, beta = s.real, abs(s.imag)
        if beta < 1e-8:
            beta = 0.0
        modes.append((alpha, beta, mult))
    # conjugate roots give the same (alpha, |beta|); keep one with the larger multiplicity
    merged: dict = {}
    for alpha, beta, mult in modes:
        key = next((k for k in merged if abs(k[0] - alpha) <= 1e-6 * max(1, abs(alpha))
                    and abs(k[1] - beta) <= 1e-6 * max(1, beta)), None)
        if key is None:
            merged[(alpha, beta)] = mult
        else:
            merged[key] = max(merged[key], mult) if beta > 0 else merged[key] + mult
    return [(a, b, m) for (a, b), m in merged.items()]


def _linear_fit(t: np.ndarray, y: np.ndarray, modes):
    cols, layout = [], []
    for alpha, beta, mult in modes:
        for k in range(mult):
            base = t**k * np.exp(alpha * t)
            cols.append(base * np.cos(beta * t))
            layout.append((alpha, beta, "cos", k))
            if beta > 0:
                cols.append(base * np.sin(beta * t))
                layout.append((alpha, beta, "sin", k))
    X = np.column_stack(cols)
    scale = np.linalg.norm(X, axis=0)
    scale[scale == 0] = 1.0
    c, *_ = np.linalg.lstsq(X / scale, y, rcond=None)
    c = c / scale
    terms = []
    for alpha, beta, mult in modes:
        pc = [0.0] * mult
        ps = [0.0] * mult
        for (a, b, kind, k), val in zip(layout, c):
            if a == alpha and b == beta:
                (pc if kind == "cos" else ps)[k] = float(val)
        terms.append(ExpTerm(tuple(pc), tuple(ps) if beta > 0 else (), float(alpha), float(beta)))
    return ExpPoly(tuple(sorted(terms, key=lambda term: (-term.alpha, term.beta))))


def fit(samples, max_terms: int = MAX_TERMS, max_degree: int = MAX_DEGREE,
        residual_cap: float = 1e-6, rank_tol: float = 1e-10, cluster_tol: float = 1e-2) -> ExpPoly:
    """Prony fit of equally spaced samples [(t, value), ...].

    The recurrence order starts at the numerical rank of the sample
    Hankel matrix and grows until the relative residual
    max|fit - y| / max|y| is below ``residual_cap``.
    """
    arr = np.asarray(samples, dtype=float)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise FitError("samples must be (t, value) pairs")
    t, y = arr[:, 0], arr[:, 1]
    dts = np.diff(t)
    if len(t) < 4 or np.any(dts <= 0) or np.ptp(dts) > 1e-9 * max(1.0, abs(dts[0])):
        raise FitError("samples must be at least 4 equally spaced points")
    dt = float(np.mean(dts))
    yscale = float(np.max(np.abs(y)))
    if yscale == 0:
        return ExpPoly((), 0.0)
    max_order = max_terms * (max_degree + 1) * 2
    if len(t) < 2 * max_order + 1:
        max_order = (len(t) - 1) // 2
    sv = np.linalg.svd(_hankel(y, len(y) // 2), compute_uv=False)
    start = max(1, int(np.sum(sv > rank_tol * sv[0])))
    best = None
    for order in range(start, max_order + 1):
        try:
            modes = _modes(y, order, dt, cluster_tol)
        except (FitError, np.linalg.LinAlgError):
            continue
        if len(modes) > max_terms or any(m - 1 > max_degree for _, _, m in modes):
            continue
        p = _linear_fit(t, y, modes)
        res = float(np.max(np.abs(eval_exppoly(p, t) - y)) / yscale)
        p = ExpPoly(p.terms, res)
        if best is None or res < best.residual:
            best = p
        if res <= residual_cap:
            return p
    achieved = "none" if best is None else f"{best.residual:.3g}"
    raise FitError(f"no exponential polynomial within caps reaches residual {residual_cap:g}; best {achieved}")


def fit_function(func, start: float, stop: float, step: float, **kwargs) -> ExpPoly:
    t = np.arange(start, stop + step / 2, step)
    return fit(np.column_stack([t, func(t)]), **kwargs)
