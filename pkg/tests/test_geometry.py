from math import pi

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.integrate import quad
from scipy.special import ellipe

from thinshield import (
    BoundaryMesh,
    CookieSpec,
    GeometryError,
    alexandrov_fenchel_check,
    circle,
    cookie_boundary,
    cookie_perimeter,
    discretize_parametric_curve,
    discretize_sphere,
    discretize_surface_of_revolution,
    ellipse,
    quermassintegral,
    solve_cookie_R,
    spheroid,
)
from thinshield.geometry import unit_ball_volume


def test_unit_ball_volumes():
    assert unit_ball_volume(1) == pytest.approx(2.0)
    assert unit_ball_volume(2) == pytest.approx(pi)
    assert unit_ball_volume(3) == pytest.approx(4 * pi / 3)


def test_circle_exact():
    m = circle(2.0, 64)
    assert m.perimeter == pytest.approx(4 * pi, rel=1e-15)
    assert np.all(m.H == 0.5)
    assert m.total_curvature == pytest.approx(2 * pi, rel=1e-15)


def test_ellipse_perimeter_matches_elliptic_integral():
    m = ellipse(2.0, 1.0, 512)
    # 4 a E(e^2) with e^2 = 1 - b^2/a^2
    assert m.perimeter == pytest.approx(4 * 2.0 * ellipe(1 - 0.25), rel=1e-13)


def test_ellipse_curvature_extremes():
    m = ellipse(2.0, 1.0, 512)
    assert m.H.max() == pytest.approx(2.0, rel=1e-12)
    assert m.H.min() == pytest.approx(0.25, rel=1e-4)


def test_fft_derivatives_match_analytic():
    a, b = 1.5, 0.7
    spectral = discretize_parametric_curve(
        lambda t: a * np.cos(t), lambda t: b * np.sin(t), 256
    )
    exact = ellipse(a, b, 256)
    np.testing.assert_allclose(spectral.H, exact.H, rtol=1e-10)
    np.testing.assert_allclose(spectral.weights, exact.weights, rtol=1e-12)


def test_clockwise_parametrization_keeps_positive_curvature():
    m = discretize_parametric_curve(lambda t: np.cos(t), lambda t: -np.sin(t), 64)
    np.testing.assert_allclose(m.H, 1.0, rtol=1e-12)


@given(
    eps1=st.floats(-0.05, 0.05),
    eps2=st.floats(-0.03, 0.03),
    phase=st.floats(0, 2 * pi),
)
def test_gauss_bonnet_on_perturbed_circles(eps1, eps2, phase):
    r = lambda t: 1.0 + eps1 * np.cos(3 * t + phase) + eps2 * np.sin(5 * t)
    m = discretize_parametric_curve(
        lambda t: r(t) * np.cos(t), lambda t: r(t) * np.sin(t), 512
    )
    assert m.total_curvature == pytest.approx(2 * pi, abs=1e-9)


def test_degenerate_curve_rejected():
    with pytest.raises(GeometryError):
        discretize_parametric_curve(lambda t: np.zeros_like(t), lambda t: np.sin(t), 64)


def test_too_few_samples_rejected():
    with pytest.raises(GeometryError):
        circle(1.0, 8)


def test_mesh_validation():
    with pytest.raises(GeometryError):
        BoundaryMesh(2, np.zeros((3, 2)), [1.0, -1.0, 1.0], [1.0, 1.0, 1.0])
    with pytest.raises(GeometryError):
        BoundaryMesh(2, np.zeros((3, 2)), [1.0, 1.0], [1.0, 1.0])
    with pytest.raises(GeometryError):
        BoundaryMesh(4, np.zeros((1, 4)), [1.0], [1.0])


def test_mesh_arrays_are_read_only():
    m = circle(1.0, 32)
    with pytest.raises(ValueError):
        m.weights[0] = 2.0


def test_scaled_mesh():
    m = ellipse(2.0, 1.0, 128)
    s = m.scaled(3.0)
    assert s.perimeter == pytest.approx(3 * m.perimeter)
    assert s.total_curvature == pytest.approx(m.total_curvature)
    s3 = discretize_sphere(1.0, 100).scaled(2.0)
    assert s3.perimeter == pytest.approx(16 * pi)


def test_sphere_mesh():
    m = discretize_sphere(1.5, 300)
    assert m.perimeter == pytest.approx(4 * pi * 1.5**2, rel=1e-14)
    assert np.allclose(np.linalg.norm(m.points, axis=1), 1.5)


def _spheroid_area(a, c):
    f = lambda z: 2 * pi * a * np.sqrt(1 - z**2 / c**2) * np.sqrt(
        1 + (a * z / c**2) ** 2 / (1 - z**2 / c**2)
    )
    return quad(f, -c, c, limit=200)[0]


@pytest.mark.parametrize("a,c", [(1.0, 2.0), (2.0, 1.0), (1.0, 1.0)])
def test_spheroid_area_against_quadrature(a, c):
    m = spheroid(a, c)
    assert m.perimeter == pytest.approx(_spheroid_area(a, c), rel=1e-10)


@pytest.mark.parametrize("a,c", [(1.0, 2.0), (2.0, 1.0)])
def test_spheroid_total_gaussian_like_checks(a, c):
    m = spheroid(a, c)
    assert np.all(m.H > 0)
    assert m.shape_tag == ("prolate" if c > a else "oblate")


def test_surface_of_revolution_open_profile_gets_flat_caps():
    m = discretize_surface_of_revolution(lambda z: np.ones_like(z), (0.0, 1.0), 20, 16)
    # cylinder of radius 1 and height 1 plus two unit disks
    assert m.perimeter == pytest.approx(2 * pi + 2 * pi, rel=1e-10)
    assert np.count_nonzero(m.H == 0) > 0
    side = m.H > 0
    np.testing.assert_allclose(m.H[side], 1.0, rtol=1e-6)


def test_cookie_perimeter_closed_forms():
    assert cookie_perimeter(CookieSpec(1.0, 1.0, 2)) == pytest.approx(4 + 2 * pi, rel=1e-14)
    # n = 3: flat disks plus half-torus
    r, R = 0.5, 2.0
    expected = 2 * pi * R**2 + 2 * pi * r * (pi * R + 2 * r)
    assert cookie_perimeter(CookieSpec(r, R, 3)) == pytest.approx(expected, rel=1e-12)
    assert cookie_perimeter(CookieSpec(1.0, 0.0, 3)) == pytest.approx(4 * pi, rel=1e-12)


def test_cookie_spec_rejects_empty():
    with pytest.raises(ValueError):
        CookieSpec(0.0, 0.0)


@given(r=st.floats(1e-3, 0.9))
def test_solve_cookie_R_roundtrip(r):
    P = 4 + 2 * pi
    R = solve_cookie_R(P, r, 2)
    assert cookie_perimeter(CookieSpec(r, R, 2)) == pytest.approx(P, rel=1e-12)


def test_solve_cookie_R_infeasible():
    with pytest.raises(GeometryError):
        solve_cookie_R(1.0, 1.0, 2)


def test_cookie_boundary():
    m = cookie_boundary(CookieSpec(0.1, 1.5, 2), 400)
    assert m.perimeter == pytest.approx(cookie_perimeter(CookieSpec(0.1, 1.5, 2)), rel=1e-12)
    assert m.total_curvature == pytest.approx(2 * pi, rel=1e-12)
    assert set(np.unique(m.H)) == {0.0, 10.0}


def test_quermassintegrals_of_sphere():
    m = discretize_sphere(2.0, 200)
    assert quermassintegral(m, 1) == pytest.approx(16 * pi / 3)
    assert quermassintegral(m, 2) == pytest.approx(4 * pi * 4 * 1.0 / 6)
    with pytest.raises(ValueError):
        quermassintegral(m, 3)


@pytest.mark.parametrize("a,c", [(1.0, 1.2), (1.0, 0.5), (2.0, 3.0), (1.0, 4.0)])
def test_alexandrov_fenchel_strict_off_sphere(a, c):
    rep = alexandrov_fenchel_check(spheroid(a, c))
    assert rep.satisfied and rep.convex
    assert rep.equality_gap > 1e-8


def test_alexandrov_fenchel_needs_surface():
    with pytest.raises(GeometryError):
        alexandrov_fenchel_check(circle(1.0, 32))
