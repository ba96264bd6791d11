"""Run configuration: tolerances, horizons and node counts.

A config file holds ``key = value`` lines; ``#`` starts a comment.  The
file named by HARMONIA_CONFIG is read when no explicit path is given, and
command-line flags override both.
"""
from __future__ import annotations

import os
from dataclasses import asdict, dataclass, fields
from pathlib import Path

ENV_VAR = "HARMONIA_CONFIG"


class ConfigError(ValueError):
    pass


@dataclass(frozen=True)
class Config:
    # radial calculus
    mu_grid: str = "0.01:40:0.05"
    box_grid: str = "0.2:5:0.05"
    fd_step: float = 1e-3
    tol_mu: float = 1e-6
    tol_mu_ode: float = 1e-8
    tol_hv: float = 1e-8
    tol_equality: float = 1e-8
    strict_margin: float = 0.0
    tol_density_fd: float = 1e-6
    # jacobi
    ode_step: float = 1e-3
    jacobi_tmax: float = 5.0
    stable_horizon: float = 40.0
    tol_wronskian: float = 1e-7
    tol_det: float = 1e-6
    tol_jacid: float = 1e-5
    # green / martin
    green_cut: float = 60.0
    martin_s: float = 40.0
    martin_a: float = 1.0
    tol_green: float = 1e-6
    tol_martin: float = 1e-4
    # disk / boundary
    a_const: float = 0.6868  # calibrate_divergence_constant() at t = 1, rounded down
    delta: float = 4.0
    nodes: int = 512
    tol_disk: float = 1e-8
    tol_jacobian: float = 1e-5
    tol_dirichlet: float = 1e-8
    tol_laplacian: float = 1e-4
    tol_gradient: float = 1e-5
    boundary_radius: float = 0.99
    tol_boundary: float = 0.02
    arcs: str = "1,5,25"
    # exponential polynomials
    max_terms: int = 8
    max_degree: int = 4
    rank_tol: float = 1e-9
    seed: int = 20240601

    def replace(self, **changes) -> "Config":
        known = {f.name for f in fields(self)}
        bad = set(changes) - known
        if bad:
            raise ConfigError(f"unknown config keys: {', '.join(sorted(bad))}")
        data = asdict(self)
        for key, value in changes.items():
            data[key] = _coerce(key, value)
        return Config(**data)

    def snapshot(self) -> dict:
        return asdict(self)


_TYPES = {f.name: f.type for f in fields(Config)}


def _coerce(key: str, value):
    kind = _TYPES[key]
    try:
        if kind in ("int", int):
            return int(value)
        if kind in ("float", float):
            return float(value)
        return str(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad value {value!r} for {key}") from exc


def parse_config_text(text: str) -> dict:
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"line {lineno}: expected 'key = value'")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _TYPES:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        out[key] = value
    return out


def load_config(path: str | os.PathLike | None = None, overrides: dict | None = None) -> Config:
    if path is None:
        path = os.environ.get(ENV_VAR) or None
    cfg = Config()
    if path is not None:
        p = Path(path)
        try:
            text = p.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {p}: {exc.strerror}") from exc
        cfg = cfg.replace(**parse_config_text(text))
    if overrides:
        cfg = cfg.replace(**{k: v for k, v in overrides.items() if v is not None})
    return cfg


def parse_grid(text: str):
    """'a:b:step' -> numpy grid including b (within rounding)."""
    import numpy as np

    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"grid {text!r} must look like a:b:step")
    try:
        a, b, step = (float(x) for x in parts)
    except ValueError as exc:
        raise ConfigError(f"grid {text!r} has non-numeric parts") from exc
    if step <= 0 or b < a:
        raise ConfigError(f"grid {text!r} needs step > 0 and b >= a")
    count = int(np.floor((b - a) / step + 1e-9)) + 1
    return a + step * np.arange(count)


def parse_list(text: str):
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise ConfigError(f"list {text!r} must be comma-separated numbers") from exc
