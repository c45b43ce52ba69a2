"""Input validation helpers shared by the public API."""

import numbers

import numpy as np

from .exceptions import GeometryError


def check_positive(value, name, *, allow_zero=False):
    """Return ``value`` as a float after checking it is finite and positive."""
    if isinstance(value, bool) or not isinstance(value, numbers.Real):
        raise TypeError(f"{name} must be a real number, got {type(value).__name__}")
    value = float(value)
    if not np.isfinite(value):
        raise ValueError(f"{name} must be finite, got {value}")
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        raise ValueError(f"{name} must be {bound}, got {value}")
    return value


def check_boundary_samples(X):
    """Validate boundary samples and return ``(weights, H)`` as float arrays.

    ``X`` is either an object exposing ``weights`` and ``H`` (a
    :class:`~thinshield.geometry.BoundaryMesh`) or an array of shape
    ``(n_samples, 2)`` whose columns are quadrature weight and mean curvature.
    """
    if hasattr(X, "weights") and hasattr(X, "H"):
        w = np.asarray(X.weights, dtype=float)
        H = np.asarray(X.H, dtype=float)
    else:
        arr = np.asarray(X, dtype=float)
        if arr.ndim != 2 or arr.shape[1] != 2:
            raise GeometryError(
                f"boundary samples must have shape (n_samples, 2), got {arr.shape}"
            )
        w, H = arr[:, 0], arr[:, 1]
    if w.ndim != 1 or w.shape != H.shape:
        raise GeometryError("weights and curvatures must be 1-D arrays of equal length")
    if w.size == 0:
        raise GeometryError("boundary has no samples")
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(H))):
        raise GeometryError("boundary samples contain non-finite values")
    if np.any(w <= 0):
        raise GeometryError("quadrature weights must be strictly positive")
    return np.ascontiguousarray(w), np.ascontiguousarray(H)


def check_thickness(h, n_samples):
    """Return ``h`` as a contiguous nonnegative float array of length ``n_samples``.

    Scalars are broadcast to a constant field.
    """
    values = getattr(h, "values", h)
    arr = np.asarray(values, dtype=float)
    if arr.ndim == 0:
        arr = np.full(n_samples, float(arr))
    if arr.shape != (n_samples,):
        raise ValueError(
            f"thickness field has shape {arr.shape}, expected ({n_samples},)"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("thickness field contains non-finite values")
    if np.any(arr < 0):
        raise ValueError("thickness must be nonnegative")
    return np.ascontiguousarray(arr)


def psum(x):
    """Deterministic pairwise sum of a 1-D float array."""
    return float(np.add.reduce(np.ascontiguousarray(x, dtype=float)))
