"""Boundary discretizations with quadrature weights and mean curvature.

A boundary is represented as a list of samples ``(position, weight, H)``.
``H`` is the *sum* of the principal curvatures with the outward normal
convention, so a circle of radius ``R`` has ``H = 1/R`` and a sphere in
three dimensions has ``H = 2/R``.
"""

from dataclasses import dataclass, field
from math import gamma, pi

import numpy as np
from scipy.optimize import brentq

from ._validation import check_positive, psum
from .exceptions import GeometryError

__all__ = [
    "BoundaryMesh",
    "CookieSpec",
    "AFReport",
    "unit_ball_volume",
    "discretize_parametric_curve",
    "circle",
    "ellipse",
    "discretize_sphere",
    "discretize_surface_of_revolution",
    "spheroid",
    "cookie_boundary",
    "cookie_perimeter",
    "solve_cookie_R",
    "quermassintegral",
    "alexandrov_fenchel_check",
]

_TANGENT_FLOOR = 1e-12


def unit_ball_volume(k):
    """Lebesgue measure of the unit ball in ``R^k``."""
    return pi ** (k / 2) / gamma(k / 2 + 1)


@dataclass(frozen=True, eq=False)
class BoundaryMesh:
    """Quadrature discretization of a closed boundary.

    Attributes
    ----------
    dimension : int
        Ambient dimension (2 or 3).
    points : ndarray of shape (n_samples, dimension)
    weights : ndarray of shape (n_samples,)
        Length (n=2) or area (n=3) carried by each sample.
    H : ndarray of shape (n_samples,)
        Mean curvature, sum of principal curvatures.
    shape_tag : str
        Label describing how the mesh was built.
    """

    dimension: int
    points: np.ndarray
    weights: np.ndarray
    H: np.ndarray
    shape_tag: str = "custom"
    params: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        pts = np.array(self.points, dtype=float)
        w = np.array(self.weights, dtype=float)
        H = np.array(self.H, dtype=float)
        if self.dimension not in (2, 3):
            raise GeometryError(f"dimension must be 2 or 3, got {self.dimension}")
        if w.ndim != 1 or w.size == 0:
            raise GeometryError("mesh needs a nonempty 1-D weight array")
        if H.shape != w.shape or pts.shape != (w.size, self.dimension):
            raise GeometryError("points, weights and H are misaligned")
        if np.any(~np.isfinite(w)) or np.any(w <= 0):
            raise GeometryError("all quadrature weights must be finite and positive")
        if np.any(~np.isfinite(H)):
            raise GeometryError("curvature contains non-finite values")
        for arr in (pts, w, H):
            arr.flags.writeable = False
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "H", H)

    def __len__(self):
        return self.weights.size

    @property
    def n_samples(self):
        return self.weights.size

    @property
    def perimeter(self):
        """Total boundary measure (length for n=2, area for n=3)."""
        return psum(self.weights)

    @property
    def total_curvature(self):
        """Quadrature of ``H`` over the boundary."""
        return psum(self.weights * self.H)

    def as_array(self):
        """Return the ``(n_samples, 2)`` array of ``[weight, H]`` rows."""
        return np.column_stack([self.weights, self.H])

    def scaled(self, factor):
        """Return the mesh of the boundary dilated by ``factor``."""
        factor = check_positive(factor, "factor")
        return BoundaryMesh(
            self.dimension,
            self.points * factor,
            self.weights * factor ** (self.dimension - 1),
            self.H / factor,
            self.shape_tag,
            dict(self.params),
        )


@dataclass(frozen=True)
class CookieSpec:
    """Flat disk of radius ``R`` thickened by a rounded rim of radius ``r``.

    Either radius may be zero when only the perimeter formula is needed
    (``R = 0`` is the ball of radius ``r``, ``r = 0`` the doubled flat disk).
    """

    r: float
    R: float
    n: int = 2

    def __post_init__(self):
        object.__setattr__(self, "r", check_positive(self.r, "r", allow_zero=True))
        object.__setattr__(self, "R", check_positive(self.R, "R", allow_zero=True))
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        if self.r == 0 and self.R == 0:
            raise ValueError("r and R cannot both be zero")


def _spectral_derivatives(f, period):
    n = f.size
    k = 2 * pi * np.fft.fftfreq(n, d=period / n)
    F = np.fft.fft(f)
    ik = 1j * k
    if n % 2 == 0:
        ik[n // 2] = 0.0
    d1 = np.fft.ifft(ik * F).real
    d2 = np.fft.ifft(-(k**2) * F).real
    return d1, d2


def discretize_parametric_curve(x, y, n_samples, *, period=2 * pi, derivatives=None,
                                shape_tag="parametric"):
    """Sample a closed planar curve ``t -> (x(t), y(t))`` at uniform parameter values.

    Weights come from the periodic trapezoid rule, which is spectrally
    accurate for smooth closed curves. Derivatives are taken from
    ``derivatives = (dx, dy, ddx, ddy)`` when given, and otherwise by FFT
    differentiation of the samples.

    The curvature sign follows the outward normal, whatever the
    orientation of the parametrization.

    Raises
    ------
    GeometryError
        If fewer than 16 samples are requested, the tangent degenerates,
        or the curve encloses no area.
    """
    if int(n_samples) != n_samples or n_samples < 16:
        raise GeometryError(f"need at least 16 samples, got {n_samples}")
    n_samples = int(n_samples)
    period = check_positive(period, "period")
    dt = period / n_samples
    t = np.arange(n_samples) * dt
    xs = np.asarray(x(t), dtype=float) * np.ones_like(t)
    ys = np.asarray(y(t), dtype=float) * np.ones_like(t)
    if derivatives is None:
        dx, ddx = _spectral_derivatives(xs, period)
        dy, ddy = _spectral_derivatives(ys, period)
    else:
        dx, dy, ddx, ddy = (np.asarray(d(t), dtype=float) * np.ones_like(t)
                            for d in derivatives)

    speed = np.hypot(dx, dy)
    bad = np.flatnonzero(speed < _TANGENT_FLOOR)
    if bad.size:
        raise GeometryError(
            f"degenerate tangent at {bad.size} sample(s), first at t={t[bad[0]]:.6g} "
            f"(|r'| = {speed[bad[0]]:.3g})"
        )
    signed_area = 0.5 * psum(xs * dy - ys * dx) * dt
    if abs(signed_area) < _TANGENT_FLOOR:
        raise GeometryError("curve encloses zero area")
    orientation = 1.0 if signed_area > 0 else -1.0
    H = orientation * (dx * ddy - dy * ddx) / speed**3
    return BoundaryMesh(2, np.column_stack([xs, ys]), speed * dt, H, shape_tag)


def circle(radius=1.0, n_samples=256):
    """Circle of the given radius with exact weights and ``H = 1/radius``."""
    radius = check_positive(radius, "radius")
    if int(n_samples) != n_samples or n_samples < 16:
        raise GeometryError(f"need at least 16 samples, got {n_samples}")
    n_samples = int(n_samples)
    t = 2 * pi * np.arange(n_samples) / n_samples
    pts = radius * np.column_stack([np.cos(t), np.sin(t)])
    return BoundaryMesh(
        2, pts, np.full(n_samples, 2 * pi * radius / n_samples),
        np.full(n_samples, 1.0 / radius), "circle", {"radius": radius},
    )


def ellipse(a, b, n_samples=512):
    """Ellipse with semi-axes ``a`` (along x) and ``b`` (along y)."""
    a = check_positive(a, "a")
    b = check_positive(b, "b")
    mesh = discretize_parametric_curve(
        lambda t: a * np.cos(t),
        lambda t: b * np.sin(t),
        n_samples,
        derivatives=(
            lambda t: -a * np.sin(t),
            lambda t: b * np.cos(t),
            lambda t: -a * np.cos(t),
            lambda t: -b * np.sin(t),
        ),
        shape_tag="ellipse",
    )
    return BoundaryMesh(2, mesh.points, mesh.weights, mesh.H, "ellipse", {"a": a, "b": b})


def discretize_sphere(radius=1.0, n_samples=400):
    """Sphere in R^3 sampled on a Fibonacci lattice with equal-area weights."""
    radius = check_positive(radius, "radius")
    if int(n_samples) != n_samples or n_samples < 1:
        raise GeometryError(f"need at least one sample, got {n_samples}")
    n_samples = int(n_samples)
    i = np.arange(n_samples) + 0.5
    z = 1.0 - 2.0 * i / n_samples
    theta = pi * (1.0 + 5.0**0.5) * i
    rho = np.sqrt(1.0 - z * z)
    pts = radius * np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z])
    return BoundaryMesh(
        3, pts, np.full(n_samples, 4 * pi * radius**2 / n_samples),
        np.full(n_samples, 2.0 / radius), "sphere", {"radius": radius},
    )


def _central_difference(f, z, step):
    f_plus, f_mid, f_minus = f(z + step), f(z), f(z - step)
    return (f_plus - f_minus) / (2 * step), (f_plus - 2 * f_mid + f_minus) / step**2


def discretize_surface_of_revolution(profile, z_range, n_z, n_theta, *, dprofile=None,
                                     ddprofile=None, shape_tag="revolution"):
    """Surface swept by rotating ``rho = profile(z)`` about the z axis.

    Gauss-Legendre nodes in ``z`` and the midpoint rule in the angle give
    the area weights. ``H`` is the meridian curvature plus the parallel
    curvature. Analytic derivatives should be passed for profiles that close
    at the poles; the finite-difference fallback loses accuracy there.

    If the profile does not vanish at an end of ``z_range``, that end is
    closed with a flat cap carried by a single sample with ``H = 0``.
    """
    z0, z1 = (float(v) for v in z_range)
    if not z1 > z0:
        raise GeometryError("z_range must be increasing")
    if n_z < 2 or n_theta < 3:
        raise GeometryError("need n_z >= 2 and n_theta >= 3")
    nodes, gl_weights = np.polynomial.legendre.leggauss(int(n_z))
    half = 0.5 * (z1 - z0)
    z = z0 + half * (nodes + 1.0)
    wz = half * gl_weights

    f = np.asarray(profile(z), dtype=float)
    if np.any(~np.isfinite(f)) or np.any(f <= 0):
        raise GeometryError("profile must be positive on the open z range")
    if dprofile is None or ddprofile is None:
        step = 1e-5 * (z1 - z0)
        df, ddf = _central_difference(lambda s: np.asarray(profile(s), dtype=float), z, step)
    else:
        df = np.asarray(dprofile(z), dtype=float)
        ddf = np.asarray(ddprofile(z), dtype=float)

    slope = np.sqrt(1.0 + df * df)
    kappa_meridian = -ddf / slope**3
    kappa_parallel = 1.0 / (f * slope)

    n_theta = int(n_theta)
    dtheta = 2 * pi / n_theta
    theta = (np.arange(n_theta) + 0.5) * dtheta
    ring_w = f * slope * wz * dtheta
    ring_H = kappa_meridian + kappa_parallel

    Z, T = np.meshgrid(z, theta, indexing="ij")
    F = np.broadcast_to(f[:, None], Z.shape)
    pts = np.column_stack([(F * np.cos(T)).ravel(), (F * np.sin(T)).ravel(), Z.ravel()])
    weights = np.repeat(ring_w, n_theta)
    H = np.repeat(ring_H, n_theta)

    scale = max(abs(z0), abs(z1), float(f.max()))
    caps_pts, caps_w = [], []
    for zc in (z0, z1):
        rc = float(np.asarray(profile(np.array([zc])), dtype=float)[0])
        if np.isfinite(rc) and rc > 1e-9 * scale:
            caps_pts.append([0.0, 0.0, zc])
            caps_w.append(pi * rc * rc)
    if caps_w:
        pts = np.vstack([pts, np.array(caps_pts)])
        weights = np.concatenate([weights, caps_w])
        H = np.concatenate([H, np.zeros(len(caps_w))])
    return BoundaryMesh(3, pts, weights, H, shape_tag)


def spheroid(a, c, n_z=200, n_theta=64):
    """Spheroid with equatorial semi-axis ``a`` and polar semi-axis ``c``.

    ``a == c`` gives a sphere and the mesh is tagged ``"sphere"``.
    """
    a = check_positive(a, "a")
    c = check_positive(c, "c")
    q = a * a / (c * c)

    def f(z):
        return a * np.sqrt(np.clip(1.0 - (z / c) ** 2, 0.0, None))

    def df(z):
        return -q * z / f(z)

    def ddf(z):
        fz = f(z)
        return -q * (fz * fz + q * z * z) / fz**3

    tag = "sphere" if a == c else ("prolate" if c > a else "oblate")
    mesh = discretize_surface_of_revolution(
        f, (-c, c), n_z, n_theta, dprofile=df, ddprofile=ddf, shape_tag=tag
    )
    return BoundaryMesh(3, mesh.points, mesh.weights, mesh.H, tag, {"a": a, "c": c})


def _allocate(lengths, n_total):
    """Split ``n_total`` samples across pieces proportionally, at least one each."""
    lengths = np.asarray(lengths, dtype=float)
    share = lengths / lengths.sum() * (n_total - lengths.size)
    counts = np.floor(share).astype(int) + 1
    leftover = n_total - counts.sum()
    order = np.argsort(-(share - np.floor(share)), kind="stable")
    counts[order[:leftover]] += 1
    return counts


def cookie_boundary(spec, n_samples=512):
    """Planar cookie boundary: two flat edges joined by semicircular caps.

    Each piece is sampled by the midpoint rule with exact per-piece weights;
    flat samples carry ``H = 0`` and cap samples ``H = 1/r``.
    """
    if spec.n != 2:
        raise GeometryError("only the planar (n=2) cookie can be meshed")
    if spec.r <= 0 or spec.R <= 0:
        raise GeometryError("cookie mesh needs r > 0 and R > 0")
    if n_samples < 4:
        raise GeometryError("need at least 4 samples")
    r, R = spec.r, spec.R
    flat, cap = 2 * R, pi * r
    counts = _allocate([flat, cap, flat, cap], int(n_samples))

    pts, w, H = [], [], []
    # counterclockwise: top edge, left cap, bottom edge, right cap
    for piece, count in enumerate(counts):
        s = (np.arange(count) + 0.5) / count
        if piece in (0, 2):
            sign = 1.0 if piece == 0 else -1.0
            xs = sign * (R - 2 * R * s)
            pts.append(np.column_stack([xs, np.full(count, sign * r)]))
            w.append(np.full(count, flat / count))
            H.append(np.zeros(count))
        else:
            cx, start = (-R, pi / 2) if piece == 1 else (R, -pi / 2)
            ang = start + pi * s
            pts.append(np.column_stack([cx + r * np.cos(ang), r * np.sin(ang)]))
            w.append(np.full(count, cap / count))
            H.append(np.full(count, 1.0 / r))
    return BoundaryMesh(
        2, np.vstack(pts), np.concatenate(w), np.concatenate(H), "cookie",
        {"r": r, "R": R},
    )


_THETA_NODES, _THETA_WEIGHTS = np.polynomial.legendre.leggauss(64)


def cookie_perimeter(spec):
    """Perimeter of the cookie shape in ``R^n``.

    The rim integral is taken in the variable ``rho = sin(theta)``, which
    removes the ``1/sqrt(1 - rho^2)`` endpoint singularity, and evaluated by
    64-point Gauss-Legendre quadrature of a smooth integrand.
    """
    n, r, R = spec.n, spec.r, spec.R
    theta = 0.25 * pi * (_THETA_NODES + 1.0)
    rim = 0.25 * pi * psum(_THETA_WEIGHTS * (r * np.sin(theta) + R) ** (n - 2))
    return 2 * unit_ball_volume(n - 1) * (R ** (n - 1) + (n - 1) * r * rim)


def solve_cookie_R(P_target, r, n=2):
    """Flat radius ``R`` such that the cookie with rim radius ``r`` has perimeter ``P_target``."""
    P_target = check_positive(P_target, "P_target")
    r = check_positive(r, "r")
    P_min = cookie_perimeter(CookieSpec(r, 0.0, n))
    if not P_target > P_min:
        raise GeometryError(
            f"perimeter {P_target:.17g} is not attainable with r={r:.6g}: "
            f"the R -> 0 limit already has perimeter {P_min:.17g}"
        )
    R_hi = (P_target / (2 * unit_ball_volume(n - 1))) ** (1.0 / (n - 1))

    def excess(R):
        return cookie_perimeter(CookieSpec(r, R, n)) - P_target

    R = brentq(excess, 0.0, R_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)
    if abs(excess(R)) > 1e-10 * P_target:
        raise GeometryError(f"cookie radius solve missed the target by {excess(R):.3g}")
    return R


def quermassintegral(mesh, j):
    """Quermassintegral ``W_1`` (perimeter / n) or ``W_2`` (integrated mean curvature)."""
    n = mesh.dimension
    if j == 1:
        return mesh.perimeter / n
    if j == 2:
        return mesh.total_curvature / (n * (n - 1))
    raise ValueError(f"only W_1 and W_2 are available from a mesh, got j={j}")


@dataclass(frozen=True)
class AFReport:
    """Outcome of the Alexandrov-Fenchel comparison between ``W_1`` and ``W_2``."""

    lhs: float
    rhs: float
    satisfied: bool | None
    equality_gap: float
    convex: bool

    def to_dict(self):
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "satisfied": self.satisfied,
            "equality_gap": self.equality_gap,
            "convex": self.convex,
        }


def alexandrov_fenchel_check(mesh, tol=1e-10):
    """Compare ``(W_1/w_3)^(1/2)`` with ``W_2/w_3`` on a convex surface in R^3.

    A sample with negative curvature marks the body as nonconvex; the
    report then has ``satisfied=None``.
    """
    if mesh.dimension != 3:
        raise GeometryError("the W_1/W_2 comparison needs a surface in R^3")
    omega = unit_ball_volume(3)
    lhs = (quermassintegral(mesh, 1) / omega) ** 0.5
    rhs = quermassintegral(mesh, 2) / omega
    convex = bool(np.all(mesh.H >= 0))
    satisfied = bool(lhs <= rhs + tol) if convex else None
    return AFReport(lhs, rhs, satisfied, rhs - lhs, convex)
