"""Command-line front end: ``specdens <command> [flags]``.

Exit codes: 0 success, 1 usage or config error, 2 a validation check failed,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
import tempfile

import numpy as np

from .errors import DomainError, SpecdensError
from .kernel import default_grid, density_table, fmt
from .limit_density import DensityModel, verify_ode
from .moments import (
    carleman_floor, carleman_partial_sum, hankel_positive, lambda_det, lambda_det_integral,
    limit_moments, moment_convergence_report,
)
from .perturbation import PerturbationSpec, perturbation_convergence_report
from .weights import WeightSpec, recurrence, scaling_model

COMMANDS = ("density", "moments", "converge", "perturb", "validate", "ode-check")
K_MAX_CAP = 12


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _floats(text):
    try:
        return [float(t) for t in str(text).split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"expected comma-separated numbers, got {text!r}")


def _ints(text):
    vals = _floats(text)
    if any(v != int(v) for v in vals):
        raise UsageError(f"expected comma-separated integers, got {text!r}")
    return [int(v) for v in vals]


def build_parser():
    p = _Parser(prog="specdens", description="Level densities and moments of unitary ensembles.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON job file; flags override its fields")
    p.add_argument("--weight", choices=("hermite", "laguerre", "jacobi", "genhermite"))
    p.add_argument("--alpha", type=float)
    p.add_argument("--beta", type=float)
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--N-list", dest="N_list")
    p.add_argument("--kmax", type=int, dest="k_max")
    p.add_argument("--grid", type=int, dest="grid_points")
    p.add_argument("--lambda", type=float, dest="lam")
    p.add_argument("--b", type=float)
    p.add_argument("--p", dest="p_coeffs")
    p.add_argument("--out", dest="output")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--tol", type=float)
    return p


def load_config(args) -> dict:
    """Merge the optional JSON config with the command-line flags."""
    cfg = {}
    if args.config:
        try:
            with open(args.config, encoding="utf-8") as fh:
                cfg = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config {args.config}: {exc}")
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        if "command" in cfg and cfg["command"] != args.command:
            raise UsageError(f"config is for {cfg['command']!r}, not {args.command!r}")
        if "lambda" in cfg:
            cfg["lam"] = cfg.pop("lambda")
    weight = cfg.get("weight", {"family": "hermite"})
    if isinstance(weight, str):
        weight = {"family": weight}
    weight = dict(weight)
    if args.weight is not None:
        if args.weight != weight.get("family"):
            weight = {"family": args.weight}
    if args.alpha is not None:
        weight["alpha"] = args.alpha
    if args.beta is not None:
        weight["beta"] = args.beta
    cfg["weight"] = weight
    for key in ("N", "k_max", "grid_points", "lam", "b", "output", "format", "tol"):
        val = getattr(args, key)
        if val is not None:
            cfg[key] = val
    if args.N_list is not None:
        cfg["N_list"] = _ints(args.N_list)
    if args.p_coeffs is not None:
        cfg["p_coeffs"] = _floats(args.p_coeffs)
    if isinstance(cfg.get("N_list"), str):
        cfg["N_list"] = _ints(cfg["N_list"])
    if isinstance(cfg.get("p_coeffs"), str):
        cfg["p_coeffs"] = _floats(cfg["p_coeffs"])
    return cfg


def _check(cfg, command):
    for key in ("N", "k_max", "grid_points"):
        if key in cfg and (not isinstance(cfg[key], int) or isinstance(cfg[key], bool)):
            raise UsageError(f"{key} must be an integer")
    if cfg.get("N", 1) < 1:
        raise UsageError("N must be >= 1")
    if any(n < 1 for n in cfg.get("N_list", [1])):
        raise UsageError("every N in N_list must be >= 1")
    k = cfg.get("k_max", 0)
    if not 0 <= k <= K_MAX_CAP:
        raise UsageError(f"kmax must be in 0..{K_MAX_CAP}")
    if cfg.get("grid_points", 2) < 2:
        raise UsageError("grid needs at least 2 points")
    if command == "perturb" and not cfg.get("p_coeffs"):
        raise UsageError("perturb needs --p c0,c1,...")
    if cfg.get("format", "csv") not in ("csv", "json"):
        raise UsageError("format must be csv or json")


def _weight_and_scaling(cfg):
    try:
        weight = WeightSpec.from_json(cfg["weight"])
    except DomainError as exc:
        raise UsageError(str(exc))
    scaling = scaling_model(weight)
    changes = {}
    if cfg.get("lam") is not None:
        changes["lam"] = float(cfg["lam"])
    if cfg.get("b") is not None:
        changes["b_limit"] = float(cfg["b"])
    if changes:
        scaling = dataclasses.replace(scaling, **changes)
    return weight, scaling


def write_atomic(path, text):
    """Write ``text`` to ``path`` via a temporary file and rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(prefix=".specdens-", dir=directory)
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(cfg, text):
    if cfg.get("output"):
        write_atomic(cfg["output"], text)
    else:
        sys.stdout.write(text)


def _dump_json(obj):
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


# -- commands -----------------------------------------------------------------

def cmd_density(cfg):
    weight, scaling = _weight_and_scaling(cfg)
    N = cfg.get("N", 200)
    table = recurrence(weight, N)
    model = DensityModel.for_params(scaling.lam, scaling.b_limit)
    lo, hi = model.support
    grid = default_grid(lo, hi, scaling.lam, cfg.get("grid_points", 512))
    grid = grid[[x not in model.singular_points() for x in grid]]
    dens = density_table(table, weight, scaling, N, grid)
    limit = np.maximum(np.asarray(model(dens.grid), dtype=float), 0.0)
    if cfg.get("format") == "json":
        return _dump_json({"N": N, "scaling": scaling.to_json(), "limit": model.to_json(),
                           "x": [float(v) for v in dens.grid], "sigma": [float(v) for v in dens.values],
                           "sigma_limit": [float(v) for v in limit]}), 0
    rows = ["x,sigma,sigma_limit"]
    rows += [f"{fmt(x)},{fmt(s)},{fmt(l)}" for x, s, l in zip(dens.grid, dens.values, limit)]
    return "\n".join(rows) + "\n", 0


def _moment_report(cfg, N_list, default_k):
    weight, scaling = _weight_and_scaling(cfg)
    k_max = cfg.get("k_max", default_k)
    table = recurrence(weight, max(N_list) + k_max // 2)
    report = moment_convergence_report(table, scaling, N_list, k_max)
    if cfg.get("format") == "json":
        keys = ("N", "k", "finite", "limit", "abs_error")
        return _dump_json({"scaling": scaling.to_json(), "rows": [dict(zip(keys, r)) for r in report.rows],
                           "non_monotone": report.non_monotone}), report
    return report.to_csv(), report


def cmd_moments(cfg):
    Ns = [cfg["N"]] if "N" in cfg else cfg.get("N_list", [100])
    text, _ = _moment_report(cfg, Ns, 4)
    return text, 0


def cmd_converge(cfg):
    Ns = cfg.get("N_list", [25, 50, 100, 200])
    text, report = _moment_report(cfg, Ns, 8)
    if report.non_monotone:
        print(f"converge: FAIL (error grew at (k, N) = {report.non_monotone})", file=sys.stderr)
        return text, 2
    return text, 0


def cmd_perturb(cfg):
    weight, scaling = _weight_and_scaling(cfg)
    try:
        p = PerturbationSpec(tuple(cfg["p_coeffs"]))
    except DomainError as exc:
        raise UsageError(str(exc))
    Ns = cfg.get("N_list", [50, 100, 200])
    report = perturbation_convergence_report(weight, p, scaling, Ns, cfg.get("k_max", 6))
    if cfg.get("format") == "json":
        keys = ("N", "k", "M_hat", "M", "theta", "M_limit")
        text = _dump_json({"p": list(p.p_coeffs), "bound_ok": report.bound_ok,
                           "bound_constants": {str(k): v for k, v in report.bound_constants.items()},
                           "rows": [dict(zip(keys, r)) for r in report.rows]})
    else:
        text = report.to_csv()
    return text, 0 if report.bound_ok else 2


def cmd_validate(cfg):
    _, scaling = _weight_and_scaling(cfg)
    tol = cfg.get("tol", 1e-8)
    lines = []
    ok = True
    m = limit_moments(scaling, 12)
    hank = all(hankel_positive(m, n) for n in range(7))
    lines.append(f"hankel: {'PASS' if hank else 'FAIL'} (n<=6)")
    floor = carleman_floor(scaling)
    sums = [carleman_partial_sum(m, K) for K in range(1, 7)]
    carl = all(s >= K * floor for K, s in enumerate(sums, 1))
    lines.append(f"carleman: {'PASS' if carl else 'FAIL'} (K<=6, term floor {fmt(floor)})")
    if scaling.lam > 0:
        dets = [lambda_det(scaling.lam, n) for n in range(4)]
        ref = [lambda_det_integral(scaling.lam, n) for n in range(4)]
        ldet = all(d > 0 and abs(d - r) <= 1e-6 * max(1.0, abs(r)) for d, r in zip(dets, ref))
        lines.append(f"lambda_det: {'PASS' if ldet else 'FAIL'} (n<=3)")
    else:
        ldet = True
        lines.append("lambda_det: SKIP (lambda=0)")
    mass = DensityModel.for_params(scaling.lam, scaling.b_limit).mass()
    norm = abs(mass - 1) <= tol
    lines.append(f"normalization: {'PASS' if norm else 'FAIL'} (mass={fmt(mass)})")
    ok = hank and carl and ldet and norm
    text = "\n".join(lines) + "\n"
    if cfg.get("output"):
        sys.stdout.write(text)
    if cfg.get("format") == "json":
        text = _dump_json({"scaling": scaling.to_json(), "hankel": hank, "carleman": carl,
                           "lambda_det": ldet, "normalization": norm, "mass": mass})
    return text, 0 if ok else 2


def cmd_ode_check(cfg):
    _, scaling = _weight_and_scaling(cfg)
    tol = cfg.get("tol", 1e-6)
    model = DensityModel.for_params(scaling.lam, scaling.b_limit)
    lo, hi = model.support
    pts = cfg.get("grid_points", 101)
    grid = np.linspace(lo, hi, pts + 2)[1:-1]
    bad = {0.0, scaling.b_limit - 1, scaling.b_limit + 1}
    grid = grid[[min(abs(x - c) for c in bad) > 0.02 for x in grid]]
    h = 1e-5
    rows = ["x,sigma_limit,residual"]
    worst = 0.0
    for x in grid:
        res = verify_ode(model, [x], h)
        worst = max(worst, res)
        rows.append(f"{fmt(x)},{fmt(model(x))},{fmt(res)}")
    ok = worst <= tol
    print(f"ode-check: {'PASS' if ok else 'FAIL'} (max residual {worst:.3e}, tol {tol:.1e})", file=sys.stderr)
    if cfg.get("format") == "json":
        return _dump_json({"limit": model.to_json(), "max_residual": worst, "rows": rows[1:]}), 0 if ok else 2
    return "\n".join(rows) + "\n", 0 if ok else 2


HANDLERS = {
    "density": cmd_density,
    "moments": cmd_moments,
    "converge": cmd_converge,
    "perturb": cmd_perturb,
    "validate": cmd_validate,
    "ode-check": cmd_ode_check,
}


def run(cfg: dict, command: str) -> int:
    _check(cfg, command)
    text, status = HANDLERS[command](cfg)
    _emit(cfg, text)
    return status


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        cfg = load_config(args)
        return run(cfg, args.command)
    except UsageError as exc:
        print(f"specdens: error: {exc}", file=sys.stderr)
        return 1
    except (SpecdensError, FloatingPointError, ArithmeticError) as exc:
        print(f"specdens: numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
