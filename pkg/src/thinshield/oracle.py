"""Closed-form layer energies used to check the first-order expansion.

Three independent evaluations of the full layer energy are provided:

* the exact harmonic solution on an annulus or spherical shell around a
  ball with constant thickness,
* the per-fiber minimization along boundary normals with the Jacobian
  ``1 + tH`` (exact in the plane for constant thickness on a circle),
* the energy of explicit first- and second-order trial profiles.
"""

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from ._validation import check_boundary_samples, check_positive, check_thickness, psum
from .exceptions import GeometryError
from .geometry import unit_ball_volume

__all__ = [
    "RadialProblem",
    "ExpansionReport",
    "radial_exact_energy",
    "radial_first_order",
    "radial_expansion_check",
    "fiber_energy",
    "recovery_energy",
]

_SERIES_CUTOFF = 1e-6


@dataclass(frozen=True)
class RadialProblem:
    """Ball of radius ``R`` in ``R^n`` wrapped in a layer of constant thickness ``eps * h``."""

    n: int
    R: float
    beta: float
    eps: float
    h: float

    def __post_init__(self):
        if int(self.n) != self.n or self.n < 2:
            raise ValueError(f"n must be an integer >= 2, got {self.n}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("R", "beta", "eps"):
            object.__setattr__(self, name, check_positive(getattr(self, name), name))
        object.__setattr__(self, "h", check_positive(self.h, "h", allow_zero=True))

    @property
    def outer_radius(self):
        return self.R + self.eps * self.h

    @property
    def sphere_area(self):
        """Measure of the unit sphere ``S^(n-1)``."""
        return self.n * unit_ball_volume(self.n)


def _shell_log(n, R, thickness):
    """``int_R^(R+thickness) r^(1-n) dr``, accurate for thin shells."""
    x = thickness / R
    if n == 2:
        return np.log1p(x)
    return -R ** (2 - n) * np.expm1((2 - n) * np.log1p(x)) / (n - 2)


def radial_exact_energy(p):
    """Minimum layer energy for the radial problem, from its harmonic solution.

    With ``u' = c r^(1-n)`` and ``D = int_R^rho r^(1-n) dr`` the Robin
    condition gives ``c = -beta / (eps rho^(1-n) + beta D)`` and
    ``u(rho) = eps rho^(1-n) / (eps rho^(1-n) + beta D)``.
    """
    rho = p.outer_radius
    D = _shell_log(p.n, p.R, p.eps * p.h)
    s = p.eps * rho ** (1 - p.n)
    c = -p.beta / (s + p.beta * D)
    u_out = s / (s + p.beta * D)
    area = p.sphere_area
    return p.eps * c * c * D * area + p.beta * area * rho ** (p.n - 1) * u_out**2


def radial_first_order(n, R, beta, h):
    """``(F0, F1)`` of a constant thickness ``h`` on the sphere of radius ``R`` in ``R^n``."""
    P = n * unit_ball_volume(n) * R ** (n - 1)
    H = (n - 1) / R
    bh = beta * h
    return beta * P / (1.0 + bh), beta * P * H * h * (2.0 + bh) / (2.0 * (1.0 + bh) ** 2)


@dataclass(frozen=True)
class ExpansionReport:
    """Exact energies against the affine model ``F0 + eps F1``.

    ``fitted_F0`` and ``fitted_F1`` come from the two smallest ``eps`` by a
    finite difference in ``eps``. ``remainder_ratios`` are
    ``(F_eps - F0 - eps F1) / eps^2`` with the closed-form ``F0, F1``.
    """

    eps_list: tuple
    exact_energies: tuple
    fitted_F0: float
    fitted_F1: float
    F0: float
    F1: float
    remainder_ratios: tuple
    meta: dict = field(default_factory=dict)

    def model(self, eps):
        return self.F0 + eps * self.F1

    def to_dict(self):
        return {
            "eps_list": list(self.eps_list),
            "exact_energies": list(self.exact_energies),
            "fitted_F0": self.fitted_F0,
            "fitted_F1": self.fitted_F1,
            "F0": self.F0,
            "F1": self.F1,
            "remainder_ratios": list(self.remainder_ratios),
            **self.meta,
        }

    def rows(self):
        for eps, exact, ratio in zip(self.eps_list, self.exact_energies, self.remainder_ratios):
            yield {"eps": eps, "exact": exact, "model": self.model(eps), "remainder_ratio": ratio}

    def write_json(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh, indent=2)

    def write_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["eps", "exact", "model", "remainder_ratio"])
            for row in self.rows():
                writer.writerow([format(v, ".17g") for v in row.values()])


def radial_expansion_check(n, R, beta, h, eps_list):
    """Evaluate the radial energy along ``eps_list`` and fit the affine model."""
    eps_list = tuple(float(e) for e in eps_list)
    if len(eps_list) < 3:
        raise ValueError("need at least three eps values")
    if any(e2 >= e1 for e1, e2 in zip(eps_list, eps_list[1:])):
        raise ValueError("eps_list must be strictly decreasing")
    if eps_list[0] * h >= R:
        raise GeometryError(
            f"layer thickness eps*h = {eps_list[0] * h:.3g} must stay below R = {R:.3g}"
        )
    exact = tuple(radial_exact_energy(RadialProblem(n, R, beta, e, h)) for e in eps_list)
    e1, e2 = eps_list[-1], eps_list[-2]
    f1, f2 = exact[-1], exact[-2]
    slope = (f2 - f1) / (e2 - e1)
    intercept = f1 - e1 * slope
    F0, F1 = radial_first_order(n, R, beta, h)
    ratios = tuple((f - F0 - e * F1) / (e * e) for e, f in zip(eps_list, exact))
    return ExpansionReport(
        eps_list, exact, intercept, slope, F0, F1, ratios,
        meta={"n": n, "R": R, "beta": beta, "h": h},
    )


def _fiber_inputs(mesh, h, beta, eps):
    w, H = check_boundary_samples(mesh)
    h = check_thickness(h, w.size)
    beta = check_positive(beta, "beta")
    eps = check_positive(eps, "eps")
    T = eps * h
    x = T * H
    if np.any(1.0 + x <= 0):
        raise GeometryError("layer too thick for the boundary: 1 + eps h H <= 0 somewhere")
    return w, H, T, x, beta, eps


def _log_jacobian_integral(T, H, x):
    """``int_0^T dt / (1 + tH)`` with a series where ``|TH|`` is tiny."""
    small = np.abs(x) < _SERIES_CUTOFF
    safe_H = np.where(small, 1.0, H)
    series = T * (1.0 - x / 2.0 + x * x / 3.0 - x**3 / 4.0)
    return np.where(small, series, np.log1p(x) / safe_H)


def fiber_energy(mesh, h, beta, eps):
    """Layer energy from independent 1-D minimizations along each normal.

    Each sample minimizes
    ``eps int_0^T u'^2 (1 + tH) dt + beta u(T)^2 (1 + TH)`` with ``u(0) = 1``
    and ``T = eps h``; the minimizer has ``u' = c / (1 + tH)``.
    """
    w, H, T, x, beta, eps = _fiber_inputs(mesh, h, beta, eps)
    L = _log_jacobian_integral(T, H, x)
    s = eps / (1.0 + x)
    denom = s + beta * L
    c = -beta / denom
    u_out = s / denom
    per_sample = eps * c * c * L + beta * u_out**2 * (1.0 + x)
    return psum(w * per_sample)


def recovery_energy(mesh, h, beta, eps, order=2):
    """Layer energy of the explicit trial profile of the given order.

    Order 1 is ``1 - beta t / (eps (1 + beta h))``; order 2 subtracts
    ``beta t^2 H / (2 eps (1 + beta h)^2)``. The fiber integrals are exact
    polynomials in ``t`` with the same ``1 + tH`` weight as
    :func:`fiber_energy`, so the result never undercuts it.
    """
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    w, H, T, x, beta, eps = _fiber_inputs(mesh, h, beta, eps)
    g = 1.0 + beta * check_thickness(h, w.size)
    b = beta / (eps * g)
    q = beta * H / (2.0 * eps * g * g) if order == 2 else np.zeros_like(H)
    # int_0^T (b + 2qt)^2 (1 + Ht) dt
    grad = (b * b * T
            + (4 * b * q + b * b * H) * T**2 / 2.0
            + (4 * q * q + 4 * b * q * H) * T**3 / 3.0
            + q * q * H * T**4)
    u_out = 1.0 - b * T - q * T * T
    per_sample = eps * grad + beta * u_out**2 * (1.0 + x)
    return psum(w * per_sample)
