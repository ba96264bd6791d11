from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate as sp_integrate

from harmonia.quadrature import (QuadratureError, circle_rule, gauss_legendre_rule,
                                 geometric_breakpoints, integrate)


@pytest.mark.parametrize("func,a,b", [
    (np.exp, 0.0, 3.0),
    (lambda x: 1 / (1 + x**2), -5.0, 5.0),
    (lambda x: np.sqrt(x), 0.0, 2.0),
    (lambda x: np.sinh(x) ** 3 * np.cosh(x), 0.0, 4.0),
])
def test_matches_scipy_quad(func, a, b):
    ref, _ = sp_integrate.quad(func, a, b, epsabs=1e-13, epsrel=1e-13, limit=200)
    assert integrate(func, a, b) == pytest.approx(ref, rel=1e-11, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=20), st.floats(-3, 0), st.floats(0.1, 3))
def test_rule_exact_for_polynomials(coef, a, width):
    b = a + width
    rule = gauss_legendre_rule(20, a, b)
    got = rule.apply(np.polynomial.polynomial.polyval(rule.nodes, coef))
    anti = np.polynomial.polynomial.polyint(coef)
    ref = np.polynomial.polynomial.polyval(b, anti) - np.polynomial.polynomial.polyval(a, anti)
    assert got == pytest.approx(ref, rel=1e-11, abs=1e-10)


def test_circle_rule_integrates_trig_exactly():
    rule = circle_rule(16)
    assert rule.apply(np.cos(3 * rule.nodes) ** 2) == pytest.approx(math.pi, rel=1e-14)


def test_breakpoints_and_reversed_interval():
    assert integrate(np.cos, 0.0, 1.0, breakpoints=(0.3, 0.6)) == pytest.approx(math.sin(1.0), rel=1e-14)
    assert integrate(np.cos, 1.0, 0.0) == pytest.approx(-math.sin(1.0), rel=1e-14)
    bp = geometric_breakpoints(0.01, 10.0)
    assert all(0.01 < x < 10.0 for x in bp) and bp == sorted(bp)


def test_nonconvergence_raises():
    with pytest.raises((QuadratureError, ValueError)):
        integrate(lambda x: 1 / x, 0.0, 1.0, max_rounds=5)
