"""Command-line front end.

Subcommands: constants, profile, functionals, heatflow, verify, suite.
JSON output uses sorted keys and 17 significant digits so that repeated
runs are byte-identical.  Exit status is 0 on success, 1 when any verdict
fails and 2 on usage or domain errors.
"""

from __future__ import annotations

import argparse
import ast
import csv
import inspect
import io
import json
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from . import densities as D
from . import functionals as F
from . import heatflow as H
from . import verify as V
from .errors import ConditionError, DivergenceError, DomainError, RegionError, RenyiFisherError
from .profiles import ode_residual, optimal_constant, solve_profile
from .reports import VerdictReport

COMMANDS = ("constants", "profile", "functionals", "heatflow", "verify", "suite")
CHECKS = ("isoperimetric", "cramer_rao_renyi", "cramer_rao_omega", "cramer_rao_weighted",
          "moment_entropy", "cramer_rao_tsallis", "cramer_rao_matrix", "cm_bound", "appendix_b",
          "epi_gaussian", "secant_witness")
SUITES = {
    "isoperimetric": ("isoperimetric", "cramer_rao_renyi", "cramer_rao_omega"),
    "weighted": ("cramer_rao_weighted", "moment_entropy"),
    "tsallis": ("cramer_rao_tsallis", "cramer_rao_matrix"),
    "cm": ("cm_bound", "appendix_b"),
    "heatflow": ("epi_gaussian",),
}
SUITES["all"] = tuple(c for name in ("isoperimetric", "weighted", "tsallis", "cm", "heatflow") for c in SUITES[name])

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    """Bad command-line input; reported with exit status 2."""


# --------------------------------------------------------------------------
# input parsing


def parse_sweep(text: str) -> list[float]:
    """``a`` or ``start:stop:count`` (inclusive, linear) or a comma list."""
    text = text.strip()
    try:
        if ":" in text:
            parts = text.split(":")
            if len(parts) != 3:
                raise ValueError
            lo, hi, count = float(parts[0]), float(parts[1]), int(parts[2])
            if count < 1 or (count > 1 and not hi > lo):
                raise ValueError
            values = [lo] if count == 1 else np.linspace(lo, hi, count).tolist()
        else:
            values = [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"cannot parse sweep {text!r}; use a value, a comma list or start:stop:count") from None
    if not values or any(not math.isfinite(v) for v in values):
        raise UsageError(f"sweep {text!r} is empty or not finite")
    if any(b <= a for a, b in zip(values, values[1:])):
        raise UsageError(f"sweep {text!r} must be strictly increasing")
    return values


def _literal(node: ast.AST):
    try:
        return ast.literal_eval(node)
    except ValueError:
        raise UsageError(f"density parameter {ast.unparse(node)!r} is not a literal") from None


def read_grid_csv(path: str) -> D.GridDensity:
    """Density from a CSV with columns ``x,p`` on a uniform grid."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"--density: cannot read {path!r}: {exc.strerror}") from None
    if rows and rows[0] and not _is_number(rows[0][0]):
        rows = rows[1:]
    try:
        data = np.array([[float(r[0]), float(r[1])] for r in rows if r], dtype=float)
    except (ValueError, IndexError):
        raise UsageError(f"--density: {path!r} is not a two-column numeric x,p table") from None
    if data.shape[0] < 3:
        raise UsageError("--density: grid CSV needs at least three rows")
    x, p = data[:, 0], data[:, 1]
    dx = np.diff(x)
    if not np.allclose(dx, dx[0], rtol=1e-9, atol=0.0) or dx[0] <= 0:
        raise UsageError("--density: grid x values must be uniformly spaced and increasing")
    return D.grid_1d(x, p)


def _is_number(s: str) -> bool:
    try:
        float(s)
        return True
    except ValueError:
        return False


def parse_density(spec: str, dim: Optional[int] = None):
    """Parse ``family:name(k=v, ...)``, ``name(k=v, ...)`` or ``grid:path.csv``.

    ``scale`` and ``shift`` keywords apply x -> scale*x + shift afterwards.
    A missing dimension parameter is taken from ``dim``.
    """
    spec = spec.strip()
    if spec.startswith("grid:"):
        return read_grid_csv(spec[5:])
    if spec.startswith("family:"):
        spec = spec[7:]
    try:
        tree = ast.parse(spec if "(" in spec else spec + "()", mode="eval").body
    except SyntaxError:
        raise UsageError(f"--density: cannot parse {spec!r}") from None
    if not isinstance(tree, ast.Call) or not isinstance(tree.func, ast.Name) or tree.args:
        raise UsageError(f"--density: expected name(key=value, ...), got {spec!r}")
    name = tree.func.id
    params = {kw.arg: _literal(kw.value) for kw in tree.keywords}
    scale = params.pop("scale", None)
    shift = params.pop("shift", None)
    if dim is not None and "n" not in params and "dim" not in params:
        ctor = D.FAMILIES.get(name)
        if name == "profile_density" or (ctor is not None and "n" in inspect.signature(ctor).parameters):
            params["n"] = dim
    d = D.make(name, params)
    if scale is not None:
        d = d.scaled(float(scale))
    if shift is not None:
        d = d.shifted(shift)
    return d


# --------------------------------------------------------------------------
# output


def _fmt_float(x: float) -> str:
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    text = format(x, ".17g")
    if "e" not in text and "." not in text and "n" not in text:
        text += ".0"
    return text


def to_json(obj, indent: int = 2) -> str:
    """Deterministic JSON: sorted keys, floats at 17 significant digits."""
    out = io.StringIO()

    def emit(v, level):
        pad = " " * (indent * (level + 1))
        end = " " * (indent * level)
        if isinstance(v, (bool, np.bool_)):
            out.write("true" if v else "false")
        elif v is None:
            out.write("null")
        elif isinstance(v, (int, np.integer)):
            out.write(str(int(v)))
        elif isinstance(v, (float, np.floating)):
            out.write(_fmt_float(float(v)))
        elif isinstance(v, str):
            out.write(json.dumps(v))
        elif isinstance(v, dict):
            if not v:
                out.write("{}")
                return
            out.write("{\n")
            items = sorted((str(k), x) for k, x in v.items())
            for i, (k, x) in enumerate(items):
                out.write(f"{pad}{json.dumps(k)}: ")
                emit(x, level + 1)
                out.write(",\n" if i < len(items) - 1 else "\n")
            out.write(end + "}")
        elif isinstance(v, (list, tuple, np.ndarray)):
            seq = list(v.tolist() if isinstance(v, np.ndarray) else v)
            if not seq:
                out.write("[]")
                return
            out.write("[\n")
            for i, x in enumerate(seq):
                out.write(pad)
                emit(x, level + 1)
                out.write(",\n" if i < len(seq) - 1 else "\n")
            out.write(end + "]")
        else:
            raise TypeError(f"cannot serialise {type(v).__name__}")

    emit(obj, 0)
    out.write("\n")
    return out.getvalue()


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return _fmt_float(float(v))
    if isinstance(v, (dict, list, tuple, np.ndarray)):
        return to_json(v, indent=0).replace("\n", "")
    return str(v)


def to_csv(rows: Sequence[dict], columns: Sequence[str], header_comment: Optional[str] = None) -> str:
    buf = io.StringIO()
    if header_comment is not None:
        buf.write("# " + header_comment + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([_cell(r.get(c, "")) for c in columns])
    return buf.getvalue()


VERDICT_COLUMNS = ("inequality_id", "pass", "lhs", "rhs", "margin", "tolerance", "equality_expected",
                   "anchor", "inputs")


def _emit(text: str, output: Optional[str]):
    if output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(output, "w", newline="") as fh:
            fh.write(text)


# --------------------------------------------------------------------------
# commands


@dataclass
class RunConfig:
    command: str
    alpha: list = field(default_factory=list)
    dim: int = 1
    density_spec: Optional[str] = None
    t_grid: list = field(default_factory=list)
    output: Optional[str] = None
    format: str = "json"
    tol_quad: Optional[float] = None
    tol_fd: Optional[float] = None
    threads: int = 0


def _pmap(fn: Callable, items: Sequence, threads: int) -> list:
    workers = threads if threads > 0 else (os.cpu_count() or 1)
    if workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=min(workers, len(items))) as pool:
        return list(pool.map(fn, items))


def _need_density(args):
    if not args.density:
        raise UsageError(f"{args.command} needs --density")
    return parse_density(args.density, args.dim)


def cmd_constants(args, cfg: RunConfig):
    def one(a):
        return optimal_constant(args.dim, a, route=args.route).to_dict()

    recs = _pmap(one, cfg.alpha, cfg.threads)
    if cfg.format == "csv":
        cols = ("alpha", "n", "value", "route", "limit_scaled")
        return to_csv(recs, cols), EXIT_OK
    return to_json(recs[0] if len(recs) == 1 else recs), EXIT_OK


def cmd_profile(args, cfg: RunConfig):
    if len(cfg.alpha) != 1:
        raise UsageError("--alpha: profile takes a single value")
    sol = solve_profile(args.dim, cfg.alpha[0])
    header = {"n": sol.n, "alpha": sol.alpha, "case": sol.case, "u0": sol.u0, "T": sol.T,
              "Ms": sol.Ms, "t_max": sol.t_max, "ode_residual": ode_residual(sol),
              "r": optimal_constant(sol.n, sol.alpha, route="ode" if sol.n == 1 else None).value}
    rows = [{"t": t, "u": u, "uprime": du} for t, u, du in sol.samples]
    if cfg.format == "csv":
        return to_csv(rows, ("t", "u", "uprime"), to_json(header, indent=0).replace("\n", "")), EXIT_OK
    return to_json({**header, "samples": rows}), EXIT_OK


def cmd_functionals(args, cfg: RunConfig):
    d = _need_density(args)

    def one(a):
        return [fv.to_dict() for fv in F.evaluate_all(d, a)]

    per_alpha = _pmap(one, cfg.alpha, cfg.threads)
    rows = [r for block in per_alpha for r in block]
    if cfg.format == "csv":
        return to_csv(rows, ("kind", "alpha_or_lambda", "value", "error_estimate")), EXIT_OK
    return to_json(rows), EXIT_OK


def cmd_heatflow(args, cfg: RunConfig):
    d = _need_density(args)
    if len(cfg.alpha) != 1:
        raise UsageError("--alpha: heatflow takes a single value")
    if not cfg.t_grid:
        raise UsageError("heatflow needs --t-grid")
    tr = H.trace(d, cfg.alpha[0], cfg.t_grid, h=args.h)
    rows = tr.rows()
    if cfg.format == "csv":
        return to_csv(rows, ("t", "h", "N", "I", "dh_dt_fd", "residual")), EXIT_OK
    return to_json({"alpha": tr.alpha, "rows": rows}), EXIT_OK


def run_check(check: str, d, alpha: float, args) -> VerdictReport:
    """One verdict by inequality id."""
    if check == "isoperimetric":
        return V.isoperimetric_check(d, alpha)
    if check == "cramer_rao_renyi":
        return V.cramer_rao_renyi(d, alpha)
    if check == "cramer_rao_omega":
        return V.cramer_rao_omega(d, alpha)
    if check == "cramer_rao_weighted":
        return V.cramer_rao_weighted(d, alpha)
    if check == "moment_entropy":
        return V.moment_entropy_check(d, alpha)
    if check == "cramer_rao_tsallis":
        return V.cramer_rao_tsallis(d, alpha)
    if check == "cramer_rao_matrix":
        return V.cramer_rao_matrix(d, alpha)
    if check == "cm_bound":
        return V.cm_bound_check(d, alpha, beta=args.beta, j=args.j, t0=args.t0, h=args.h)
    if check == "appendix_b":
        return V.appendix_b_check(d, args.t0, h=args.h)
    if check == "epi_gaussian":
        ts = args.t_grid_values or [1e-3, 1e-2, 0.1]
        return H.epi_gaussian_check(d, alpha, ts, h=args.h)
    if check == "secant_witness":
        return H.secant_witness(d, alpha, h=args.h)
    raise UsageError(f"--check: unknown inequality {check!r}; choose from {', '.join(CHECKS)}")


def _verdict_output(reports: list, skipped: list, cfg: RunConfig):
    dicts = [r.to_dict() for r in reports]
    code = EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL
    if cfg.format == "csv":
        return to_csv(dicts, VERDICT_COLUMNS), code
    body = {"verdicts": dicts, "all_pass": code == EXIT_OK}
    if skipped:
        body["skipped"] = skipped
    return to_json(body), code


def cmd_verify(args, cfg: RunConfig):
    d = _need_density(args)
    if args.check not in CHECKS:
        raise UsageError(f"--check: choose from {', '.join(CHECKS)}")
    if args.check == "appendix_b":
        reps = [run_check("appendix_b", d, 2.0, args)]
    else:
        reps = _pmap(lambda a: run_check(args.check, d, a, args), cfg.alpha, cfg.threads)
    return _verdict_output(reps, [], cfg)


_SKIPPABLE = (RegionError, DomainError, ConditionError, DivergenceError)


def cmd_suite(args, cfg: RunConfig):
    d = _need_density(args)
    if args.name not in SUITES:
        raise UsageError(f"--name: choose from {', '.join(sorted(SUITES))}")
    jobs = []
    for a in cfg.alpha:
        for check in SUITES[args.name]:
            if check == "cm_bound":
                jobs += [(check, a, j) for j in (1, 2)]
            elif check == "appendix_b":
                if a == cfg.alpha[0]:
                    jobs.append((check, 2.0, 1))
            else:
                jobs.append((check, a, args.j))

    def one(job):
        check, a, j = job
        local = argparse.Namespace(**{**vars(args), "j": j})
        try:
            return run_check(check, d, a, local)
        except _SKIPPABLE as exc:
            return {"inequality_id": check, "alpha": a, "j": j, "reason": f"{type(exc).__name__}: {exc}"}

    results = _pmap(one, jobs, cfg.threads)
    reports = [r for r in results if isinstance(r, VerdictReport)]
    skipped = [r for r in results if isinstance(r, dict)]
    return _verdict_output(reports, skipped, cfg)


HANDLERS = {
    "constants": cmd_constants,
    "profile": cmd_profile,
    "functionals": cmd_functionals,
    "heatflow": cmd_heatflow,
    "verify": cmd_verify,
    "suite": cmd_suite,
}


# --------------------------------------------------------------------------
# argument parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--alpha", default="2", help="order: value, comma list or start:stop:count")
    common.add_argument("--dim", type=int, default=1, help="dimension n")
    common.add_argument("--density", help='e.g. "family:cos_power(alpha=2,b=1,c=0)" or "grid:path.csv"')
    common.add_argument("--t-grid", dest="t_grid", help="heat-flow times: value, list or start:stop:count")
    common.add_argument("--output", help="output path (default: standard output)")
    common.add_argument("--format", choices=("json", "csv"), help="json or csv (default from --output suffix)")
    common.add_argument("--tol-quad", dest="tol_quad", type=float, help="override the quadrature tolerance")
    common.add_argument("--tol-fd", dest="tol_fd", type=float,
                        help="override the finite-difference tolerance (both derivative orders)")
    common.add_argument("--threads", type=int, default=0, help="sweep workers (0 = all cores)")
    common.add_argument("--h", type=float, help="grid spacing for heat-flow work")

    p = argparse.ArgumentParser(prog="renyifisher", description="Renyi entropy and Fisher information toolkit")
    sub = p.add_subparsers(dest="command", required=True)
    c = sub.add_parser("constants", parents=[common], help="sharp constants r_{alpha,n}")
    c.add_argument("--route", choices=("ode",), help="force the ground-state route")
    sub.add_parser("profile", parents=[common], help="ground-state profile by shooting")
    sub.add_parser("functionals", parents=[common], help="all functionals of a density")
    sub.add_parser("heatflow", parents=[common], help="functionals along the heat flow")
    v = sub.add_parser("verify", parents=[common], help="a single inequality check")
    v.add_argument("--check", required=True, help=f"one of: {', '.join(CHECKS)}")
    s = sub.add_parser("suite", parents=[common], help="a group of checks")
    s.add_argument("--name", default="all", help=f"one of: {', '.join(sorted(SUITES))}")
    for q in (v, s):
        q.add_argument("--j", type=int, default=1, help="derivative order for cm_bound")
        q.add_argument("--t0", type=float, default=0.5, help="flow time for cm_bound/appendix_b")
        q.add_argument("--beta", type=float, help="override beta for cm_bound")
    return p


def _config(args) -> RunConfig:
    fmt = args.format
    if fmt is None:
        fmt = "csv" if args.output and args.output.lower().endswith(".csv") else "json"
    if args.dim < 1:
        raise UsageError("--dim must be a positive integer")
    t_grid = parse_sweep(args.t_grid) if args.t_grid else []
    if any(t < 0 for t in t_grid):
        raise UsageError("--t-grid: times must be nonnegative")
    return RunConfig(args.command, parse_sweep(args.alpha), args.dim, args.density, t_grid, args.output,
                     fmt, args.tol_quad, args.tol_fd, args.threads)


def _apply_tolerances(cfg: RunConfig) -> dict:
    saved = {k: getattr(V, k) for k in ("TOL_QUADRATURE", "TOL_FD_FIRST", "TOL_FD_SECOND")}
    if cfg.tol_quad is not None:
        V.TOL_QUADRATURE = cfg.tol_quad
    if cfg.tol_fd is not None:
        V.TOL_FD_FIRST = V.TOL_FD_SECOND = cfg.tol_fd
    return saved


def run(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    saved = {}
    try:
        cfg = _config(args)
        args.t_grid_values = cfg.t_grid
        saved = _apply_tolerances(cfg)
        text, code = HANDLERS[args.command](args, cfg)
    except UsageError as exc:
        print(f"renyifisher {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RegionError as exc:
        print(f"renyifisher {args.command}: --alpha/--dim outside the valid region: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RenyiFisherError as exc:
        print(f"renyifisher {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    finally:
        for k, val in saved.items():
            setattr(V, k, val)
    _emit(text, cfg.output)
    return code


def main() -> None:
    sys.exit(run())
