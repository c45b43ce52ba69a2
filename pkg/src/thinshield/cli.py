"""Command-line front end.

Every command accepts ``--config FILE`` (JSON) and flags; flags win over
config fields. Outputs go to ``--out`` (default: current directory) and a
one-line summary is printed. Exit status is 0 on success, 2 for invalid
input or an unsupported curvature regime, 1 for internal errors.

CSV columns
-----------
mu.csv               x, y[, z], weight, H, mu
evaluate.csv         x, y[, z], weight, H, h
verify_radial.csv    eps, exact, model, remainder_ratio
verify_fiber.csv     eps, fiber, recovery1, recovery2, first_order_rel_err
cookie_sweep-*.csv   r, R, G_eps, gap, closed_form, optimizer_value, optimizer_regime
concentration-*.csv  H, mu
"""

import argparse
import copy
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .exceptions import GeometryError, RegimeError
from .experiments import ball_compare, concentration_profile, cookie_sweep
from .functionals import PhysicsParams, eval_F0, eval_F1, eval_Geps
from .geometry import alexandrov_fenchel_check
from .io import (
    build_shape,
    config_hash,
    fmt,
    load_config,
    read_thickness_csv,
    write_json,
    write_mesh_csv,
    write_rows_csv,
)
from .optimizer import classify_regime, optimize
from .oracle import fiber_energy, radial_expansion_check, radial_first_order, recovery_energy

COMMANDS = (
    "evaluate",
    "optimize",
    "verify-radial",
    "verify-fiber",
    "cookie-sweep",
    "ball-compare",
    "af-check",
    "concentration",
)

SHAPE_FLAGS = ("radius", "a", "b", "c", "r", "R")


def _float_list(text):
    try:
        return [float(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON config file")
    common.add_argument("--out", help="output directory (default: .)")
    shape = common.add_argument_group("shape")
    shape.add_argument("--shape", help="circle, ellipse, sphere, spheroid or cookie")
    for name in SHAPE_FLAGS:
        shape.add_argument(f"--{name}", type=float, default=None)
    shape.add_argument("--N", type=int, default=None, help="sample count")
    phys = common.add_argument_group("physics")
    phys.add_argument("--beta", type=float, default=None)
    phys.add_argument("--eps", type=_float_list, default=None,
                      help="layer scale; a comma-separated list for verify-*")
    phys.add_argument("--mass", type=float, default=None)

    parser = argparse.ArgumentParser(
        prog="thinshield",
        description=__doc__.split("\n\n")[0],
        epilog=__doc__.split("\n\n", 1)[1],
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common],
                           formatter_class=argparse.RawDescriptionHelpFormatter,
                           epilog=__doc__.split("CSV columns\n-----------\n", 1)[1])
        if name in ("evaluate", "verify-fiber"):
            p.add_argument("--h-const", type=float, default=None, help="constant thickness")
            p.add_argument("--h-file", default=None, help="thickness CSV aligned with the mesh")
        if name == "verify-radial":
            p.add_argument("--n", type=int, default=None, help="ambient dimension")
            p.add_argument("--h", type=float, default=None, help="constant thickness")
        if name == "cookie-sweep":
            p.add_argument("--perimeter", type=float, default=None)
            p.add_argument("--r-list", type=_float_list, default=None)
    return parser


def resolve_config(args):
    """Merge the optional config file with command-line flags (flags win)."""
    cfg = copy.deepcopy(load_config(args.config)) if args.config else {}
    if cfg.get("command") not in (None, args.command):
        raise ValueError(f"config is for command {cfg['command']!r}, not {args.command!r}")
    cfg["command"] = args.command
    shape = cfg.setdefault("shape", {})
    shape.setdefault("params", {})
    if args.shape is not None:
        shape["family"] = args.shape
    for name in SHAPE_FLAGS:
        value = getattr(args, name)
        if value is not None:
            shape["params"][name] = value
    if args.N is not None:
        shape["N"] = args.N
    physics = cfg.setdefault("physics", {})
    sweep = cfg.setdefault("sweep", {})
    for name in ("beta", "mass"):
        if getattr(args, name) is not None:
            physics[name] = getattr(args, name)
    if args.eps is not None:
        if args.command.startswith("verify-"):
            sweep["eps_list"] = args.eps
        elif len(args.eps) != 1:
            raise ValueError("--eps takes a single value for this command")
        else:
            physics["eps"] = args.eps[0]
    for name in ("h_const", "h_file", "n", "h", "perimeter", "r_list"):
        value = getattr(args, name, None)
        if value is not None:
            sweep[name] = value
    if args.out is not None:
        cfg["out"] = args.out
    cfg.setdefault("out", ".")
    return cfg


def _threads():
    raw = os.environ.get("THINSHIELD_THREADS", "0")
    try:
        value = int(raw)
    except ValueError:
        raise ValueError(f"THINSHIELD_THREADS must be a nonnegative integer, got {raw!r}")
    if value < 0:
        raise ValueError(f"THINSHIELD_THREADS must be a nonnegative integer, got {raw!r}")
    return value


def _mesh(cfg):
    shape = cfg["shape"]
    if "family" not in shape:
        raise GeometryError("no shape given (use --shape or shape.family in the config)")
    return build_shape(shape["family"], shape["params"], shape.get("N"))


def _physics(cfg, *, need_mass=True):
    phys = cfg["physics"]
    missing = [k for k in ("beta", "eps") + (("mass",) if need_mass else ()) if k not in phys]
    if missing:
        raise ValueError(f"missing physics parameter(s): {', '.join(missing)}")
    return PhysicsParams(phys["beta"], phys["eps"], phys.get("mass", 1.0))


def _thickness(cfg, mesh):
    sweep = cfg["sweep"]
    if sweep.get("h_file") is not None:
        return read_thickness_csv(sweep["h_file"], mesh.n_samples)
    if sweep.get("h_const") is not None:
        return np.full(mesh.n_samples, float(sweep["h_const"]))
    mass = cfg["physics"].get("mass")
    if mass is not None:
        return np.full(mesh.n_samples, mass / mesh.perimeter)
    raise ValueError("no thickness given (use --h-const, --h-file or --mass)")


def cmd_evaluate(cfg, out):
    mesh = _mesh(cfg)
    phys = cfg["physics"]
    if "beta" not in phys:
        raise ValueError("missing physics parameter: beta")
    beta, eps = float(phys["beta"]), float(phys.get("eps", 0.0))
    h = _thickness(cfg, mesh)
    F0, F1 = eval_F0(mesh, h, beta), eval_F1(mesh, h, beta)
    value = eval_Geps(mesh, h, beta=beta, eps=eps)
    regime = classify_regime(eps * mesh.H / beta)
    write_mesh_csv(out / "evaluate.csv", mesh, h=h)
    write_json(out / "evaluate.json", {
        "config": cfg, "F0": F0, "F1": F1, "value": value, "regime": regime,
        "perimeter": mesh.perimeter, "mass": float(np.sum(mesh.weights * h)),
    })
    return f"value={fmt(value)} F0={fmt(F0)} F1={fmt(F1)} regime={regime}"


def cmd_optimize(cfg, out):
    mesh = _mesh(cfg)
    params = _physics(cfg)
    layer = optimize(mesh, params)
    write_mesh_csv(out / "mu.csv", mesh, mu=layer.mu.values)
    write_json(out / "optimize.json", {"config": cfg, **layer.to_dict()})
    k_m = "none" if layer.k_m is None else fmt(layer.k_m)
    return f"regime={layer.regime} value={fmt(layer.value)} k_m={k_m}"


def cmd_verify_radial(cfg, out):
    sweep = cfg["sweep"]
    phys = cfg["physics"]
    radius = cfg["shape"]["params"].get("radius", 1.0)
    n = int(sweep.get("n", 2))
    h = float(sweep.get("h", 1.0))
    eps_list = sweep.get("eps_list", [1e-1, 1e-2, 1e-3])
    report = radial_expansion_check(n, radius, float(phys.get("beta", 1.0)), h, eps_list)
    report.write_csv(out / "verify_radial.csv")
    rel = abs(report.fitted_F1 - report.F1) / abs(report.F1) if report.F1 else abs(report.fitted_F1)
    ok = rel <= 0.01
    write_json(out / "verify_radial.json", {
        "config": cfg, **report.to_dict(), "fitted_F1_rel_err": rel, "pass": ok,
    })
    return (f"{'PASS' if ok else 'FAIL'} fitted_F0={fmt(report.fitted_F0)} "
            f"fitted_F1={fmt(report.fitted_F1)} F1={fmt(report.F1)} rel_err={fmt(rel)}")


def cmd_verify_fiber(cfg, out):
    mesh = _mesh(cfg)
    phys = cfg["physics"]
    beta = float(phys.get("beta", 1.0))
    h = _thickness(cfg, mesh)
    eps_list = [float(e) for e in cfg["sweep"].get("eps_list", [1e-2, 1e-3, 1e-4])]
    F0, F1 = eval_F0(mesh, h, beta), eval_F1(mesh, h, beta)
    rows = []
    for eps in eps_list:
        fib = fiber_energy(mesh, h, beta, eps)
        rec1 = recovery_energy(mesh, h, beta, eps, 1)
        rec2 = recovery_energy(mesh, h, beta, eps, 2)
        err = abs((fib - F0) / eps - F1) / abs(F1) if F1 else abs((fib - F0) / eps)
        rows.append((eps, fib, rec1, rec2, err))
    write_rows_csv(out / "verify_fiber.csv",
                   ["eps", "fiber", "recovery1", "recovery2", "first_order_rel_err"], rows)
    ok = rows[-1][4] <= 0.05 and all(r[1] <= min(r[2], r[3]) + 1e-12 for r in rows)
    write_json(out / "verify_fiber.json", {
        "config": cfg, "F0": F0, "F1": F1, "pass": ok,
        "rows": [dict(zip(["eps", "fiber", "recovery1", "recovery2", "first_order_rel_err"], r))
                 for r in rows],
    })
    return f"{'PASS' if ok else 'FAIL'} F0={fmt(F0)} F1={fmt(F1)} rel_err={fmt(rows[-1][4])}"


def cmd_cookie_sweep(cfg, out):
    sweep = cfg["sweep"]
    params = _physics(cfg)
    P = float(sweep.get("perimeter", 4 + 2 * np.pi))
    r_list = sweep.get("r_list", [0.5, 0.1, 0.01, 0.001])
    result = cookie_sweep(P, params, r_list, int(cfg["shape"].get("N") or 512))
    gaps = result.gaps
    ok = bool(np.all(gaps > 0) and np.all(np.diff(gaps) < 0))
    stem = f"cookie_sweep-{config_hash(cfg)}"
    write_rows_csv(out / f"{stem}.csv",
                   ["r", "R", "G_eps", "gap", "closed_form", "optimizer_value", "optimizer_regime"],
                   ([row.r, row.R, row.G_eps, row.gap, row.closed_form, row.optimizer_value,
                     row.optimizer_regime] for row in result.rows))
    write_json(out / f"{stem}.json", {"config": cfg, **result.to_dict(), "pass": ok})
    return f"{'PASS' if ok else 'FAIL'} limit={fmt(result.limit)} last_gap={fmt(gaps[-1])}"


def cmd_ball_compare(cfg, out):
    mesh = _mesh(cfg)
    params = _physics(cfg)
    result = ball_compare(mesh, params)
    write_json(out / f"ball_compare-{config_hash(cfg)}.json", {"config": cfg, **result.to_dict()})
    if result.G_shape is None:
        raise RegimeError(result.note)
    return (f"satisfied={result.satisfied} hypothesis={result.hypothesis_status} "
            f"regime={result.regime_shape}/{result.regime_ball} "
            f"G_shape={fmt(result.G_shape)} G_ball={fmt(result.G_ball)}")


def cmd_af_check(cfg, out):
    mesh = _mesh(cfg)
    report = alexandrov_fenchel_check(mesh)
    write_json(out / "af_check.json", {"config": cfg, **report.to_dict()})
    return (f"satisfied={report.satisfied} lhs={fmt(report.lhs)} rhs={fmt(report.rhs)} "
            f"gap={fmt(report.equality_gap)}")


def cmd_concentration(cfg, out):
    mesh = _mesh(cfg)
    params = _physics(cfg)
    prof = concentration_profile(mesh, params)
    stem = f"concentration-{config_hash(cfg)}"
    write_rows_csv(out / f"{stem}.csv", ["H", "mu"], zip(prof.H, prof.mu))
    write_json(out / f"{stem}.json", {"config": cfg, "regime": "layer", **prof.to_dict()})
    return (f"{'PASS' if prof.violations == 0 else 'FAIL'} regime=layer "
            f"violations={prof.violations} n_active={prof.n_active} value={fmt(prof.value)}")


HANDLERS = {
    "evaluate": cmd_evaluate,
    "optimize": cmd_optimize,
    "verify-radial": cmd_verify_radial,
    "verify-fiber": cmd_verify_fiber,
    "cookie-sweep": cmd_cookie_sweep,
    "ball-compare": cmd_ball_compare,
    "af-check": cmd_af_check,
    "concentration": cmd_concentration,
}


def run(command, config):
    """Run ``command`` with a resolved config dict; return the summary line."""
    _threads()
    out = Path(config.get("out", "."))
    out.mkdir(parents=True, exist_ok=True)
    return HANDLERS[command](config, out)


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = resolve_config(args)
        summary = run(args.command, cfg)
    except RegimeError as err:
        print(f"regime error: {err}", file=sys.stderr)
        return 2
    except (GeometryError, ValueError, KeyError, TypeError, OSError) as err:
        print(f"invalid input: {err}", file=sys.stderr)
        return 2
    except Exception as err:  # noqa: BLE001
        print(f"internal error: {type(err).__name__}: {err}", file=sys.stderr)
        return 1
    print(summary)
    return 0


if __name__ == "__main__":
    sys.exit(main())
