"""Config parsing, shape construction and CSV/JSON writers."""

import csv
import hashlib
import json
from pathlib import Path

import numpy as np

from .exceptions import GeometryError
from .geometry import CookieSpec, circle, cookie_boundary, discretize_sphere, ellipse, spheroid

__all__ = [
    "SHAPE_FAMILIES",
    "build_shape",
    "load_config",
    "config_hash",
    "write_json",
    "write_mesh_csv",
    "read_thickness_csv",
    "fmt",
]

# family -> (builder, required params, default sample count)
SHAPE_FAMILIES = {
    "circle": (lambda p, N: circle(p["radius"], N), ("radius",), 256),
    "ellipse": (lambda p, N: ellipse(p["a"], p["b"], N), ("a", "b"), 512),
    "sphere": (lambda p, N: discretize_sphere(p["radius"], N), ("radius",), 400),
    "spheroid": (lambda p, N: spheroid(p["a"], p["c"], N, max(16, N // 2)), ("a", "c"), 200),
    "cookie": (lambda p, N: cookie_boundary(CookieSpec(p["r"], p["R"], 2), N), ("r", "R"), 512),
}


def fmt(value):
    """Format a number with 17 significant digits."""
    return format(float(value), ".17g")


def build_shape(family, params, N=None):
    """Build a :class:`~thinshield.geometry.BoundaryMesh` from a family name and parameters."""
    if family not in SHAPE_FAMILIES:
        known = ", ".join(sorted(SHAPE_FAMILIES))
        raise GeometryError(f"unknown shape family {family!r} (known: {known})")
    builder, required, default_N = SHAPE_FAMILIES[family]
    missing = [name for name in required if params.get(name) is None]
    if missing:
        raise GeometryError(f"shape {family!r} needs parameter(s): {', '.join(missing)}")
    return builder(params, int(N) if N else default_N)


def load_config(path):
    """Read a JSON config file into a dict."""
    with open(path) as fh:
        config = json.load(fh)
    if not isinstance(config, dict):
        raise ValueError("config must be a JSON object")
    return config


def config_hash(config):
    """Short stable hash of a config dict, used to name experiment outputs."""
    blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


def write_json(path, payload):
    path = Path(path)
    with path.open("w") as fh:
        json.dump(_jsonable(payload), fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def write_rows_csv(path, header, rows):
    path = Path(path)
    with path.open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        for row in rows:
            writer.writerow(["" if v is None else (v if isinstance(v, str) else fmt(v))
                             for v in row])
    return path


def write_mesh_csv(path, mesh, **fields):
    """Write ``x, y[, z], weight, H`` plus any per-sample ``fields`` as extra columns."""
    coords = ["x", "y", "z"][: mesh.dimension]
    extra = {name: np.asarray(values, dtype=float) for name, values in fields.items()}
    for name, values in extra.items():
        if values.shape != (mesh.n_samples,):
            raise ValueError(f"column {name!r} is not aligned with the mesh")
    header = coords + ["weight", "H"] + list(extra)
    columns = [mesh.points[:, i] for i in range(mesh.dimension)]
    columns += [mesh.weights, mesh.H] + list(extra.values())
    return write_rows_csv(path, header, zip(*columns))


def read_thickness_csv(path, n_samples):
    """Read a thickness column (``h`` or ``mu``, else the last column) aligned with a mesh."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames:
            raise ValueError(f"{path}: empty CSV")
        names = reader.fieldnames
        column = next((c for c in ("h", "mu") if c in names), names[-1])
        values = np.array([float(row[column]) for row in reader])
    if values.shape != (n_samples,):
        raise ValueError(f"{path}: {values.size} thickness rows for a mesh of {n_samples} samples")
    return values
