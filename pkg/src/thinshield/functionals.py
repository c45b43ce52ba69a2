"""Zero-order and first-order heat-loss functionals on a discretized boundary.

All functionals consume only ``(weight, H, h)`` triples and reduce with a
single deterministic pairwise sum.
"""

from dataclasses import dataclass

import numpy as np

from ._validation import check_boundary_samples, check_positive, check_thickness, psum

__all__ = [
    "PhysicsParams",
    "ThicknessField",
    "UniformBaseline",
    "eval_F0",
    "eval_F1",
    "eval_Geps",
    "uniform_baseline",
    "enforce_mass",
]

MASS_RTOL = 1e-10


@dataclass(frozen=True)
class PhysicsParams:
    """Heat-transfer coefficient ``beta``, layer scale ``eps`` and insulator budget ``mass``."""

    beta: float
    eps: float
    mass: float

    def __post_init__(self):
        for name in ("beta", "eps", "mass"):
            object.__setattr__(self, name, check_positive(getattr(self, name), name))

    def to_dict(self):
        return {"beta": self.beta, "eps": self.eps, "mass": self.mass}


@dataclass(frozen=True, eq=False)
class ThicknessField:
    """Nonnegative per-sample thickness aligned with a boundary mesh."""

    values: np.ndarray
    mass: float

    @classmethod
    def on(cls, mesh, values):
        w, _ = check_boundary_samples(mesh)
        h = check_thickness(values, w.size)
        h.flags.writeable = False
        return cls(h, psum(w * h))

    def __len__(self):
        return self.values.size

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)


@dataclass(frozen=True, eq=False)
class UniformBaseline:
    h0: ThicknessField
    value: float


def eval_F0(mesh, h, beta):
    """Zero-order energy ``beta * sum_i w_i / (1 + beta h_i)``."""
    w, _ = check_boundary_samples(mesh)
    h = check_thickness(h, w.size)
    beta = check_positive(beta, "beta")
    return beta * psum(w / (1.0 + beta * h))


def eval_F1(mesh, h, beta):
    """First-order correction ``beta * sum_i w_i H_i h_i (2 + beta h_i) / (2 (1 + beta h_i)^2)``."""
    w, H = check_boundary_samples(mesh)
    h = check_thickness(h, w.size)
    beta = check_positive(beta, "beta")
    bh = beta * h
    return beta * psum(w * H * h * (2.0 + bh) / (2.0 * (1.0 + bh) ** 2))


def eval_Geps(mesh, h, params=None, *, beta=None, eps=None):
    """First-order model energy ``F0(h) + eps * F1(h)``.

    Either pass ``params`` (a :class:`PhysicsParams`) or ``beta`` and ``eps``
    directly; the keyword form also accepts ``eps = 0``.
    """
    if params is not None:
        beta, eps = params.beta, params.eps
    eps = check_positive(eps, "eps", allow_zero=True)
    return eval_F0(mesh, h, beta) + eps * eval_F1(mesh, h, beta)


def uniform_baseline(mesh, params):
    """Constant thickness ``m / P``, the minimizer of ``F0`` under the mass budget."""
    w, _ = check_boundary_samples(mesh)
    P = psum(w)
    h0 = ThicknessField.on(mesh, np.full(w.size, params.mass / P))
    value = params.beta * P * P / (P + params.beta * params.mass)
    return UniformBaseline(h0, value)


def enforce_mass(mesh, h, mass, rtol=MASS_RTOL):
    """Return a feasible copy of ``h`` for the budget ``mass``.

    Fields exceeding the budget by at most ``rtol`` (relative) are rescaled
    uniformly onto it; larger violations raise ``ValueError``.
    """
    w, _ = check_boundary_samples(mesh)
    h = check_thickness(h, w.size).copy()
    total = psum(w * h)
    if total <= mass:
        return h
    if total > mass * (1.0 + rtol):
        raise ValueError(f"thickness mass {total:.17g} exceeds the budget {mass:.17g}")
    h *= mass / total
    while psum(w * h) > mass:
        h *= 1.0 - np.finfo(float).eps
    return h
