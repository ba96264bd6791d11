from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from harmonia import disk

points = st.builds(lambda r, a: r * complex(math.cos(a), math.sin(a)),
                   st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi))


def test_distance_closed_form():
    assert disk.distance(0, 0.8) == pytest.approx(2 * math.atanh(0.8))
    assert disk.distance(0, 0.8) == pytest.approx(2.1972245773362196, rel=1e-15)


@settings(max_examples=50, deadline=None)
@given(points, points, points)
def test_distance_metric_axioms(x, y, z):
    dxy = disk.distance(x, y)
    assert dxy == pytest.approx(disk.distance(y, x), abs=1e-12)
    assert dxy <= disk.distance(x, z) + disk.distance(z, y) + 1e-9


@settings(max_examples=40, deadline=None)
@given(points, points, points)
def test_mobius_is_isometry(p, x, y):
    d0 = disk.distance(x, y)
    d1 = disk.distance(disk.mobius_to_origin(p, x), disk.mobius_to_origin(p, y))
    assert d1 == pytest.approx(d0, rel=1e-8, abs=1e-9)


@settings(max_examples=40, deadline=None)
@given(points, st.floats(0, 2 * math.pi), st.floats(0.01, 6.0))
def test_rays_have_unit_speed(p, direction, t):
    q = disk.geodesic_ray(p, direction, t)
    assert disk.distance(p, q) == pytest.approx(t, rel=1e-7)
    assume(t > 0.1)
    assert math.cos(disk.direction_to(p, q) - direction) == pytest.approx(1.0, abs=1e-9)


def test_busemann_values_and_limit():
    # frozen: b = log(1.09 / 0.91) for xi = 0, z = 0.3i
    assert disk.busemann(0.0, 0.3j) == pytest.approx(0.180488375712293659, rel=1e-14)
    for z in (0.3 + 0.4j, -0.7j, 0.9):
        assert disk.busemann_limit(0.0, z, 40.0) == pytest.approx(disk.busemann(0.0, z), abs=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.floats(0, 2 * math.pi), points, points)
def test_busemann_is_one_lipschitz(theta, z, w):
    assert abs(disk.busemann(theta, z) - disk.busemann(theta, w)) <= disk.distance(z, w) + 1e-9


def test_busemann_is_harmonic_with_unit_gradient():
    for z in (0.1 + 0.2j, -0.4j, 0.5):
        b = lambda w: disk.busemann(0.3, w)  # noqa: E731
        assert disk.hyperbolic_laplacian_fd(b, z) == pytest.approx(1.0, abs=1e-5)
        assert disk.hyperbolic_gradient_norm(b, z) == pytest.approx(1.0, abs=1e-7)


def test_gromov_product():
    assert disk.gromov_product(0.9, 0.9j, 0) == pytest.approx(0.343822515323368309, rel=1e-12)
    assert disk.gromov_product(0.5, 0.5, 0) == pytest.approx(disk.distance(0, 0.5))


def test_triangles_are_thin():
    pts = np.exp(2j * np.pi * np.array([0.0, 1 / 3, 2 / 3])) * 0.999
    assert disk.triangle_thinness(*pts) <= 4.0
    assert disk.distance_to_geodesic(0, -0.9, 0.9) == pytest.approx(0.0, abs=1e-9)
    assert disk.distance_to_geodesic(0.5j, -0.9, 0.9) == pytest.approx(disk.distance(0, 0.5j), abs=1e-8)


def test_sphere_hit_and_jacobian():
    pt, s = disk.sphere_hit(0, 0.2, 0.3, 4.0)
    assert disk.distance(0, pt) == pytest.approx(4.0, abs=1e-10)
    v = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    jac = disk.jacobian_Bt(0, 0.2, v, 4.0)
    assert np.all(jac > 0)
    # the map B_t is a bijection of the circle, so its Jacobian averages to one
    assert float(np.mean(jac)) == pytest.approx(1.0, abs=1e-10)
    assert disk.change_of_variables_residual(0, 0.2, 4.0, lambda w: np.sin(w) ** 2) <= 1e-8
    with pytest.raises(disk.DiskError):
        disk.sphere_hit(0, 0.9, 0.0, 1.0)


def test_divergence_bound():
    a_const = disk.calibrate_divergence_constant(1.0)
    assert a_const == pytest.approx(0.68683, abs=1e-4)
    for t in (0.5, 1.0, 3.0, 10.0):
        for alpha in (0.01, 1.0, math.pi):
            actual, bound = disk.divergence_check(alpha, t, 0.6868)
            assert actual >= bound - 1e-12
    with pytest.raises(disk.DiskError):
        disk.divergence_check(0.0, 1.0, 0.6868)


def test_ray_distance_far_branch_matches_near_branch():
    for x in (0.3 + 0.1j, -0.5j):
        near = disk.ray_distance(x, 0.1, 0.4, 14.9)
        direct = disk.distance(x, disk._ray(0.1, 0.4, 14.9))
        assert near == pytest.approx(direct, abs=1e-8)
        far = disk.ray_distance(x, 0.1, 0.4, 15.0)
        assert far - 15.0 == pytest.approx(near - 14.9, abs=1e-6)


def test_invalid_points():
    with pytest.raises(disk.DiskError):
        disk.DiskPoint(1.0)
    with pytest.raises(disk.DiskError):
        disk.geodesic_ray(0, 0.0, -1.0)
    assert disk.BoundaryAngle(7.0).theta == pytest.approx(7.0 - 2 * math.pi)
