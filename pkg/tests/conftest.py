import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from thinshield import PhysicsParams, ellipse

settings.register_profile(
    "ci", derandomize=True, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("ci")


@pytest.fixture(scope="session")
def ellipse_2_1():
    return ellipse(2.0, 1.0, 512)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def layer_params():
    return PhysicsParams(beta=1.0, eps=0.1, mass=1.0)


def smooth_field(mesh, rng, n_modes=4, amplitude=0.5, base=0.5):
    """Positive random trigonometric field along a planar mesh."""
    t = np.arctan2(mesh.points[:, 1], mesh.points[:, 0])
    f = np.full(mesh.n_samples, 1.0)
    for k in range(1, n_modes + 1):
        c, s = rng.uniform(-1, 1, 2) * amplitude / k / n_modes
        f += c * np.cos(k * t) + s * np.sin(k * t)
    return base * f
