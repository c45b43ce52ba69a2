"""Mass-constrained minimization of the first-order model energy.

On the active set the optimal thickness is ``(y - 1) / beta``, where ``y``
is the root in ``(1, inf)`` of ``k y^3 - y + a`` with ``a = eps H / beta``.
The multiplier ``k`` is found by bisection on the total mass, which
decreases continuously from ``+inf`` to ``0`` on ``(0, k0)``.
"""

from dataclasses import dataclass

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from ._validation import check_boundary_samples, check_thickness, psum
from .exceptions import ConvergenceError, InactivePointError, RegimeError
from .functionals import PhysicsParams, ThicknessField, eval_Geps

__all__ = [
    "MultiplierState",
    "OptimalLayer",
    "ELDiagnostics",
    "REGIME_LAYER",
    "REGIME_BARE",
    "REGIME_OUTSIDE",
    "classify_regime",
    "cubic_root_yk",
    "root_bracket",
    "multiplier_state",
    "mu_of_k",
    "mass_of_k",
    "solve_k_m",
    "optimize",
    "el_residual",
    "InsulationOptimizer",
]

REGIME_LAYER = "layer"
REGIME_BARE = "bare"
REGIME_OUTSIDE = "outside-theory"

LAYER_LIMIT = 2.0 / 3.0
BARE_LIMIT = 2.0
_REGIME_RTOL = 1e-12

ROOT_RTOL = 1e-14
_BISECT_RTOL = 1e-6
MASS_RTOL = 1e-8
MAX_K_ITER = 200


def classify_regime(a):
    """Regime of the curvature ratios ``a = eps H / beta``.

    ``"layer"`` when ``sup a <= 2/3`` (the optimum is characterized by the
    multiplier equation), ``"bare"`` when ``inf a >= 2`` (no insulation is
    optimal), ``"outside-theory"`` otherwise.
    """
    a = np.asarray(a, dtype=float)
    if a.max() <= LAYER_LIMIT * (1.0 + _REGIME_RTOL):
        return REGIME_LAYER
    if a.min() >= BARE_LIMIT * (1.0 - _REGIME_RTOL):
        return REGIME_BARE
    return REGIME_OUTSIDE


def _cubic(k, y, a):
    return y * (k * y * y - 1.0) + a


def _explicit_upper(k, a):
    # at y = sqrt((1 + |a|)/k) >= 1 the cubic equals y|a| + a >= 0
    return np.maximum(1.0, np.sqrt((1.0 + np.abs(a)) / k))


def root_bracket(k, a, upper=None):
    """Bracket ``[max(1/sqrt(3k), 1), upper]`` containing the root for ratio ``a``."""
    lo = max(1.0 / np.sqrt(3.0 * k), 1.0)
    hi = _explicit_upper(k, a) if upper is None else upper
    return lo, hi


def _solve_cubic(k, a, lo, hi):
    """Vectorized root of ``k y^3 - y + a`` on ``[lo, hi]`` where the cubic increases.

    Bisection to a relative width of 1e-6, then safeguarded Newton polish.
    """
    a = np.asarray(a, dtype=float)
    lo = np.broadcast_to(np.asarray(lo, dtype=float), a.shape).copy()
    hi = np.broadcast_to(np.asarray(hi, dtype=float), a.shape).copy()
    for _ in range(200):
        if np.all(hi - lo <= _BISECT_RTOL * hi):
            break
        mid = 0.5 * (lo + hi)
        below = _cubic(k, mid, a) < 0
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    y = 0.5 * (lo + hi)
    done = np.zeros(a.shape, dtype=bool)
    for _ in range(60):
        p = _cubic(k, y, a)
        lo = np.where(p < 0, y, lo)
        hi = np.where(p > 0, y, hi)
        step = p / (3.0 * k * y * y - 1.0)
        y_new = y - step
        outside = (y_new < lo) | (y_new > hi) | ~np.isfinite(y_new)
        y_new = np.where(outside, 0.5 * (lo + hi), y_new)
        done |= np.abs(y_new - y) <= 2.0 * np.finfo(float).eps * y
        y = y_new
        if np.all(done):
            break
    p = _cubic(k, y, a)
    bad = np.abs(p) > ROOT_RTOL * np.maximum(1.0, k * y**3)
    if np.any(bad):
        raise ConvergenceError(
            f"cubic root did not converge at {int(bad.sum())} point(s)",
            residual=float(np.abs(p).max()),
        )
    return y


def cubic_root_yk(k, a, upper=None):
    """Root in ``(1, inf)`` of ``k y^3 - y + a`` for a point of the active set.

    Parameters
    ----------
    k : float
        Multiplier in ``(0, 1)``.
    a : float
        Curvature ratio ``eps H / beta`` at the point.
    upper : float, optional
        Upper bracket end; defaults to ``max(1, sqrt((1 + |a|) / k))``.

    Returns
    -------
    float
        The root; exactly ``1.0`` when ``a == 1 - k``.

    Raises
    ------
    InactivePointError
        If ``a > 1 - k``; the optimal thickness there is zero.
    """
    k = float(k)
    a = float(a)
    if not 0.0 < k:
        raise ValueError(f"k must be positive, got {k}")
    if a == 1.0 - k:
        return 1.0
    if a > 1.0 - k:
        raise InactivePointError(f"a={a:.17g} >= 1 - k = {1.0 - k:.17g}: point is inactive")
    lo, hi = root_bracket(k, a, upper)
    return float(_solve_cubic(k, np.array([a]), lo, hi)[0])


@dataclass(frozen=True, eq=False)
class MultiplierState:
    """Multiplier ``k`` with ``k0 = 1 - eps H0 / beta`` and the active set."""

    k: float
    k0: float
    active_set: np.ndarray


def _ratios(mesh, params):
    w, H = check_boundary_samples(mesh)
    return w, params.eps * H / params.beta


def multiplier_state(mesh, params, k):
    """Validate ``k`` against ``(0, k0)`` and return it with its active set."""
    _, a = _ratios(mesh, params)
    k0 = 1.0 - a.min()
    if not 0.0 < k < k0:
        raise ValueError(f"k={k:.17g} is outside (0, k0) = (0, {k0:.17g})")
    return MultiplierState(float(k), float(k0), np.flatnonzero(a < 1.0 - k))


def _roots_for_ratios(k, a):
    """``y`` per sample (1 off the active set) and the active mask."""
    active = a < 1.0 - k
    y = np.ones_like(a)
    if np.any(active):
        a_act = a[active]
        z_k = cubic_root_yk(k, a_act.min())
        lo, _ = root_bracket(k, 0.0)
        y[active] = _solve_cubic(k, a_act, lo, z_k)
    return y, active


def mu_of_k(mesh, params, k):
    """Thickness field ``mu_k`` for the multiplier ``k``."""
    multiplier_state(mesh, params, k)
    _, a = _ratios(mesh, params)
    y, _ = _roots_for_ratios(k, a)
    return ThicknessField.on(mesh, (y - 1.0) / params.beta)


def mass_of_k(mesh, params, k):
    """Total mass ``M(k)`` of ``mu_k``."""
    return mu_of_k(mesh, params, k).mass


def _mass(w, a, beta, k):
    y, _ = _roots_for_ratios(k, a)
    return psum(w * (y - 1.0)) / beta


def _solve_k(w, a, params):
    m = params.mass
    k0 = 1.0 - a.min()
    lo, hi = k0 * 1e-9, k0 * (1.0 - 1e-9)
    M_lo = _mass(w, a, params.beta, lo)
    while M_lo < m and lo > 1e-300:
        lo *= 1e-3
        M_lo = _mass(w, a, params.beta, lo)
    M_hi = _mass(w, a, params.beta, hi)
    for _ in range(60):
        if M_hi <= m:
            break
        hi = 0.5 * (hi + k0)
        M_hi = _mass(w, a, params.beta, hi)
    if not M_lo >= m >= M_hi:
        raise ConvergenceError(
            f"mass {m:.17g} is not bracketed by M(k) on [{lo:.3g}, {hi:.17g}]",
            bracket=(lo, hi),
        )

    k, M = lo, M_lo
    n_iter = 0
    while n_iter < MAX_K_ITER:
        n_iter += 1
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        M = _mass(w, a, params.beta, mid)
        k = mid
        if M == m:
            break
        if M > m:
            lo = mid
        else:
            hi = mid
    # pick the better endpoint once the bracket has collapsed
    for cand in (lo, hi):
        M_c = _mass(w, a, params.beta, cand)
        if abs(M_c - m) < abs(M - m):
            k, M = cand, M_c
    residual = abs(M - m)
    if residual > MASS_RTOL * m:
        raise ConvergenceError(
            f"multiplier bisection stopped with mass residual {residual:.3g}",
            bracket=(lo, hi),
            residual=residual,
        )
    return k, residual, n_iter


def _require_layer_regime(a):
    regime = classify_regime(a)
    if regime != REGIME_LAYER:
        raise RegimeError(
            f"sup eps*H/beta = {a.max():.6g} exceeds 2/3; the multiplier equation "
            "does not characterize the optimum here",
            sup_ratio=float(a.max()),
            inf_ratio=float(a.min()),
        )


def solve_k_m(mesh, params):
    """Multiplier ``k_m`` in ``(0, k0)`` whose thickness field uses exactly the budget.

    Raises
    ------
    RegimeError
        If ``sup eps H / beta > 2/3``.
    ConvergenceError
        If the bisection cannot meet ``|M(k_m) - m| <= 1e-8 m``.
    """
    w, a = _ratios(mesh, params)
    _require_layer_regime(a)
    return _solve_k(w, a, params)[0]


@dataclass(frozen=True, eq=False)
class ELDiagnostics:
    """Spread of the implied Euler-Lagrange constant over the active set."""

    c_mean: float
    c_variance: float
    max_pointwise_residual: float

    def to_dict(self):
        return {
            "c_mean": self.c_mean,
            "c_variance": self.c_variance,
            "max_pointwise_residual": self.max_pointwise_residual,
        }


def el_residual(mesh, params, mu):
    """Implied constants ``c_i = beta (1 + beta mu_i - a_i) / (1 + beta mu_i)^3`` on ``mu > 0``.

    At the optimum every ``c_i`` equals ``beta * k_m``.
    """
    w, a = _ratios(mesh, params)
    mu = check_thickness(mu, w.size)
    active = mu > 0
    if not np.any(active):
        raise ValueError("thickness field has an empty active set")
    y = 1.0 + params.beta * mu[active]
    a = a[active]
    c = params.beta * (y - a) / y**3
    c_mean = psum(c) / c.size
    c_var = psum((c - c_mean) ** 2) / c.size
    resid = np.abs((c_mean / params.beta) * y**3 - y + a)
    return ELDiagnostics(c_mean, c_var, float(resid.max()))


@dataclass(frozen=True, eq=False)
class OptimalLayer:
    """Optimizer output.

    ``k_m``, ``mass_residual`` and the EL fields are ``None`` in the
    ``"bare"`` regime, where the optimum is ``mu = 0``.
    """

    regime: str
    mu: ThicknessField
    value: float
    k_m: float | None = None
    k0: float | None = None
    mass_residual: float | None = None
    el_constant_mean: float | None = None
    el_constant_variance: float | None = None
    active: np.ndarray | None = None
    n_iter: int = 0

    def to_dict(self):
        el = None
        if self.el_constant_mean is not None:
            el = {"c_mean": self.el_constant_mean, "c_variance": self.el_constant_variance}
        return {
            "regime": self.regime,
            "k_m": self.k_m,
            "value": self.value,
            "mass": self.mu.mass,
            "mass_residual": self.mass_residual,
            "el": el,
        }


def optimize(mesh, params):
    """Minimize ``F0 + eps F1`` over nonnegative fields with mass at most ``params.mass``.

    Dispatches on ``a = eps H / beta``: for ``sup a <= 2/3`` the optimum is
    ``mu_{k_m}``; for ``inf a >= 2`` it is ``mu = 0`` with value ``beta P``.

    Raises
    ------
    RegimeError
        For ``2/3 < sup a`` together with ``inf a < 2``.
    """
    w, a = _ratios(mesh, params)
    regime = classify_regime(a)
    if regime == REGIME_BARE:
        mu = ThicknessField.on(mesh, np.zeros(w.size))
        return OptimalLayer(regime, mu, eval_Geps(mesh, mu, params),
                            active=np.zeros(w.size, dtype=bool))
    if regime == REGIME_OUTSIDE:
        raise RegimeError(
            f"eps*H/beta spans [{a.min():.6g}, {a.max():.6g}]: neither sup <= 2/3 "
            "nor inf >= 2 holds, so the optimum is not characterized",
            sup_ratio=float(a.max()),
            inf_ratio=float(a.min()),
        )
    k_m, residual, n_iter = _solve_k(w, a, params)
    y, active = _roots_for_ratios(k_m, a)
    mu = ThicknessField.on(mesh, (y - 1.0) / params.beta)
    el = el_residual(mesh, params, mu)
    return OptimalLayer(
        regime, mu, eval_Geps(mesh, mu, params), k_m=k_m, k0=float(1.0 - a.min()),
        mass_residual=residual, el_constant_mean=el.c_mean,
        el_constant_variance=el.c_variance, active=active, n_iter=n_iter,
    )


class InsulationOptimizer(BaseEstimator):
    """Estimator wrapper around :func:`optimize`.

    ``fit`` takes a :class:`~thinshield.geometry.BoundaryMesh` or an array of
    ``[weight, H]`` rows and solves for the optimal layer. ``predict`` maps
    curvature samples to thickness under the fitted multiplier, so a fitted
    model can be queried at curvatures other than the training samples.

    Parameters
    ----------
    beta : float, default=1.0
        Heat-transfer coefficient.
    eps : float, default=0.1
        Layer scale.
    mass : float, default=1.0
        Insulator budget.

    Attributes
    ----------
    layer_ : OptimalLayer
    mu_ : ndarray of shape (n_samples,)
    k_m_ : float or None
    value_ : float
    regime_ : str
    """

    def __init__(self, beta=1.0, eps=0.1, mass=1.0):
        self.beta = beta
        self.eps = eps
        self.mass = mass

    def _params(self):
        return PhysicsParams(self.beta, self.eps, self.mass)

    def fit(self, X, y=None):
        params = self._params()
        check_boundary_samples(X)
        layer = optimize(X, params)
        self.layer_ = layer
        self.mu_ = np.asarray(layer.mu.values)
        self.k_m_ = layer.k_m
        self.value_ = layer.value
        self.regime_ = layer.regime
        self.n_iter_ = layer.n_iter
        return self

    def predict(self, X):
        check_is_fitted(self, "layer_")
        w, H = check_boundary_samples(X)
        if self.regime_ == REGIME_BARE:
            return np.zeros(w.size)
        a = self.eps * H / self.beta
        y, _ = _roots_for_ratios(self.k_m_, a)
        return (y - 1.0) / self.beta

    def fit_predict(self, X, y=None):
        return self.fit(X).mu_.copy()

    def score(self, X, y=None):
        """Negative model energy of the predicted field on ``X`` (higher is better)."""
        return -eval_Geps(X, self.predict(X), self._params())
