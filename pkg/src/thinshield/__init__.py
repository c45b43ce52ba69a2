"""Optimal thin insulating layers from the first-order heat-loss expansion."""

__version__ = "0.1.0"

from .exceptions import ConvergenceError, GeometryError, InactivePointError, RegimeError
from .functionals import (
    PhysicsParams,
    ThicknessField,
    eval_F0,
    eval_F1,
    eval_Geps,
    uniform_baseline,
)
from .geometry import (
    BoundaryMesh,
    CookieSpec,
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
from .optimizer import (
    InsulationOptimizer,
    OptimalLayer,
    cubic_root_yk,
    el_residual,
    mass_of_k,
    mu_of_k,
    optimize,
    solve_k_m,
)
from .oracle import (
    ExpansionReport,
    RadialProblem,
    fiber_energy,
    radial_exact_energy,
    radial_expansion_check,
    recovery_energy,
)

__all__ = [
    "BoundaryMesh",
    "ConvergenceError",
    "CookieSpec",
    "ExpansionReport",
    "GeometryError",
    "InactivePointError",
    "InsulationOptimizer",
    "OptimalLayer",
    "PhysicsParams",
    "RadialProblem",
    "RegimeError",
    "ThicknessField",
    "alexandrov_fenchel_check",
    "circle",
    "cookie_boundary",
    "cookie_perimeter",
    "cubic_root_yk",
    "discretize_parametric_curve",
    "discretize_sphere",
    "discretize_surface_of_revolution",
    "el_residual",
    "ellipse",
    "eval_F0",
    "eval_F1",
    "eval_Geps",
    "fiber_energy",
    "mass_of_k",
    "mu_of_k",
    "optimize",
    "quermassintegral",
    "radial_exact_energy",
    "radial_expansion_check",
    "recovery_energy",
    "solve_cookie_R",
    "solve_k_m",
    "spheroid",
    "uniform_baseline",
]
