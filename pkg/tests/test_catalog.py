from __future__ import annotations

import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from harmonia import jacobi
from harmonia.catalog import (GrowthType, SpaceError, classify_growth, growth_exponents, make_space,
                              parse_eigen_spec, sphere_volume, unit_sphere_volume)


def test_unit_sphere_volume():
    assert unit_sphere_volume(2) == pytest.approx(2 * math.pi)
    assert unit_sphere_volume(3) == pytest.approx(4 * math.pi)
    assert unit_sphere_volume(4) == pytest.approx(2 * math.pi**2)


def test_closed_form_densities():
    assert make_space("euclidean", 3).f(2.0) == pytest.approx(4.0)
    assert make_space("real_hyperbolic", 3).f(1.0) == pytest.approx(math.sinh(1.0) ** 2)
    # sinh^3(2) cosh(2), frozen from mpmath
    assert make_space("complex_hyperbolic", 4).f(2.0) == pytest.approx(179.487373924411835, rel=1e-13)


def test_sphere_volume_h2():
    assert sphere_volume(make_space("real_hyperbolic", 2), 1.0) == pytest.approx(2 * math.pi * math.sinh(1.0))
    with pytest.raises(SpaceError):
        sphere_volume(make_space("euclidean", 2), 0.0)


def test_small_radius_density_is_accurate():
    # log y must not lose digits for tiny r
    s = make_space("real_hyperbolic", 2)
    r = 1e-9
    assert float(s.f(r)) == pytest.approx(float(mp.sinh(mp.mpf(r))), rel=1e-14)


@pytest.mark.parametrize("kind,n,eigen,h", [
    ("euclidean", 4, None, 0.0),
    ("real_hyperbolic", 5, None, 4.0),
    ("complex_hyperbolic", 6, None, 6.0),
    ("rank1_model", 4, "-4:1,-1:2", 4.0),
])
def test_mean_curvature_and_growth(kind, n, eigen, h):
    s = make_space(kind, n, eigen)
    assert s.mean_curvature_h == pytest.approx(h)
    expected = GrowthType.POLYNOMIAL if h == 0 else GrowthType.PURELY_EXPONENTIAL
    assert classify_growth(s) == expected


def test_growth_exponents_h3():
    m, h, c = growth_exponents(make_space("real_hyperbolic", 3))
    assert (m, h, c) == (0, pytest.approx(2.0, abs=1e-9), pytest.approx(0.25, rel=1e-8))
    m, h, c = growth_exponents(make_space("euclidean", 4))
    assert (m, h) == (3, pytest.approx(0.0, abs=1e-9))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([("euclidean", 3), ("real_hyperbolic", 4), ("complex_hyperbolic", 4)]),
       st.floats(0.05, 8.0))
def test_log_derivative_matches_mpmath(case, r):
    s = make_space(*case)
    logf = {"euclidean": lambda x: 2 * mp.log(x),
            "real_hyperbolic": lambda x: 3 * mp.log(mp.sinh(x)),
            "complex_hyperbolic": lambda x: 3 * mp.log(mp.sinh(x)) + mp.log(mp.cosh(x))}[case[0]]
    assert float(s.log_derivative(r)) == pytest.approx(float(mp.diff(logf, r)), rel=1e-12, abs=1e-13)
    assert float(s.log_derivative_prime(r)) == pytest.approx(float(mp.diff(logf, r, 2)), rel=1e-10, abs=1e-12)


@pytest.mark.parametrize("eigen,n", [("-4:1,-1:2", 4), ("-9:1,-2:4", 6), ("-1:3", 4)])
def test_rank1_density_matches_jacobi_determinant(eigen, n):
    s = make_space("rank1_model", n, eigen)
    traj = jacobi.integrate(jacobi.curvature_matrix(s.curvature_eigen), 3.0, 1e-3)
    for t in (0.5, 1.5, 3.0):
        detA = float(np.linalg.det(traj.state_at(t)[0]))
        assert float(s.f(t)) == pytest.approx(detA, rel=1e-8)


def test_parse_eigen_spec():
    assert parse_eigen_spec("-4:1, -1:2") == [(-4.0, 1), (-1.0, 2)]
    with pytest.raises(SpaceError):
        parse_eigen_spec("-4")


@pytest.mark.parametrize("args", [
    ("flat", 3, None),
    ("euclidean", 1, None),
    ("complex_hyperbolic", 5, None),
    ("rank1_model", 4, None),
    ("rank1_model", 4, "-1:2"),
    ("rank1_model", 3, "1:2"),
    ("rank1_model", 3, "0:1,-1:1"),
])
def test_invalid_spaces(args):
    with pytest.raises(SpaceError):
        make_space(*args)
