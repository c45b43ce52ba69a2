from math import pi

import numpy as np
import pytest

from thinshield import GeometryError, PhysicsParams, RegimeError, circle, discretize_sphere, ellipse
from thinshield.experiments import (
    ball_compare,
    concentration_profile,
    cookie_sweep,
    count_monotonicity_violations,
)


def test_cookie_sweep_matches_closed_form():
    params = PhysicsParams(1.0, 1e-4, 1.0)
    sweep = cookie_sweep(4 + 2 * pi, params, [0.5, 0.1, 0.01])
    for row in sweep.rows:
        assert row.G_eps == pytest.approx(row.closed_form, rel=1e-12)
        assert row.gap > 0
    assert sweep.to_dict()["limit"] == sweep.limit


def test_cookie_sweep_rejects_unsorted_radii():
    with pytest.raises(ValueError):
        cookie_sweep(4 + 2 * pi, PhysicsParams(1.0, 1e-4, 1.0), [0.1, 0.5])


def test_cookie_sweep_records_regime():
    sweep = cookie_sweep(4 + 2 * pi, PhysicsParams(1.0, 0.05, 1.0), [0.5, 0.01])
    regimes = [row.optimizer_regime for row in sweep.rows]
    assert regimes[0] == "layer" and sweep.rows[0].optimizer_value <= sweep.rows[0].G_eps
    assert regimes[1] == "outside-theory" and sweep.rows[1].optimizer_value is None


def test_ball_compare_statuses():
    p = PhysicsParams(1.0, 0.05, 1.0)
    res = ball_compare(ellipse(2.0, 1.0, 256), p)
    assert res.hypothesis_status == "large-perimeter" and res.satisfied
    res = ball_compare(ellipse(2.0, 1.0, 256), PhysicsParams(1.0, 2.0, 1.0))
    assert res.hypothesis_status == "not met"
    assert res.G_shape is None and "skipped" in res.note


def test_ball_compare_small_bare_shapes():
    p = PhysicsParams(1.0, 0.1, 1.0)
    res = ball_compare(ellipse(0.012, 0.01, 256), p)
    assert res.hypothesis_status == "small-perimeter"
    assert res.regime_shape == res.regime_ball == "bare"
    assert res.G_shape == pytest.approx(res.G_ball, rel=1e-13)


def test_ball_compare_planar_only():
    with pytest.raises(GeometryError):
        ball_compare(discretize_sphere(1.0, 50), PhysicsParams(1.0, 0.1, 1.0))


def test_concentration_profile_on_ellipse():
    prof = concentration_profile(ellipse(3.0, 1.0, 256), PhysicsParams(1.0, 0.05, 1.0))
    assert prof.violations == 0
    assert prof.value <= prof.uniform_value
    assert np.all(np.diff(prof.H) >= 0)


def test_concentration_requires_layer_regime():
    with pytest.raises(RegimeError):
        concentration_profile(discretize_sphere(0.1, 50), PhysicsParams(1.0, 0.2, 1.0))


def test_violation_counter():
    H = np.array([1.0, 2.0, 3.0])
    assert count_monotonicity_violations(H, np.array([3.0, 2.0, 1.0])) == 0
    assert count_monotonicity_violations(H, np.array([1.0, 2.0, 3.0])) == 3
    # ties in H are not counted
    assert count_monotonicity_violations(np.ones(3), np.array([1.0, 2.0, 3.0])) == 0
    assert count_monotonicity_violations(H, np.array([2.0, 2.0, 1.0])) == 1


def test_circle_concentration_is_flat():
    prof = concentration_profile(circle(1.0, 64), PhysicsParams(1.0, 0.1, 1.0))
    assert prof.violations == 0
    assert np.ptp(prof.mu) <= 1e-12
