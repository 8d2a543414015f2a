"""Command-line front end.

Subcommands::

    oudesign eval      evaluate criteria on a design over a parameter grid
    oudesign table1    8x8 grid vs. optimal 64-point monotonic chain
    oudesign surface   lattice data behind the surface plots (fig1..fig4)
    oudesign optimize  run an optimizer and emit a JSON report

Exit codes: 0 success, 2 usage error, 3 numerical failure, 4 solver found
no solution.
"""
from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import os
import sys

import numpy as np

from . import fisher, optimize, oracle, prediction
from .covariance import covariance_derivatives, dense_covariance
from .design import (CovParams, DesignSpace, GridDesign, MonotonicChain,
                     design_from_json, design_to_json, make_equidistant_grid)
from .errors import (AccuracyError, DesignError, DomainError,
                     FactorizationError, NoSolutionError, SingularityError)

EXIT_USAGE, EXIT_NUMERIC, EXIT_NO_SOLUTION = 2, 3, 4

TABLE1_SPACE = optimize.TABLE1_SPACE
TABLE1_PARAMS = ((0.001, 0.01), (0.1, 1.0), (1.0, 1.0), (1.0, 10.0))

SURFACE_PRESETS = {
    # name: (objective, alpha, beta, n, x axis, y axis, header)
    "fig1": ("det_m_r_33", 0.6, 1.0, 3, np.linspace(0.01, 0.99, 99),
             np.linspace(0.01, 0.99, 99), ("d", "delta")),
    "fig2": ("det_r_free", 1.0, 1.0, 5, np.linspace(0.01, 3.0, 300),
             np.linspace(0.01, 3.0, 300), ("d", "delta")),
    "fig3": ("det_free", 1.0, 1.0, 6, np.linspace(0.01, 3.0, 300),
             np.linspace(0.01, 3.0, 300), ("d", "delta")),
    "fig4": ("m_theta_88", 1.0, 1.0, 8, np.geomspace(1e-3, 10.0, 41),
             np.geomspace(1e-3, 10.0, 41), ("alpha", "beta")),
}


class UsageError(Exception):
    pass


# -- criteria registry ----------------------------------------------------

def _corr(points, p):
    return dense_covariance(points, CovParams(p.alpha, p.beta))


def _trace(points, p):
    C = _corr(points, p)
    da, db = covariance_derivatives(points, CovParams(p.alpha, p.beta))
    return oracle.fisher_trace(C, da, db)


def _trend_block(points, p, mu, B):
    return oracle.fisher_trend_general(
        oracle.arrhenius_gradient(points[:, 1], mu, B), _corr(points, p))


GRID_CRITERIA = {
    # name: (closed form, dense oracle, needs (mu, B))
    "m_theta": (fisher.m_theta,
                lambda pts, p, mu, B: oracle.one_c_inv_one(_corr(pts, p)), False),
    "m_alpha": (lambda g, p: fisher.m_r(g, p).m_alpha,
                lambda pts, p, mu, B: _trace(pts, p).m_alpha, False),
    "m_beta": (lambda g, p: fisher.m_r(g, p).m_beta,
               lambda pts, p, mu, B: _trace(pts, p).m_beta, False),
    "m_alphabeta": (lambda g, p: fisher.m_r(g, p).m_alphabeta,
                    lambda pts, p, mu, B: _trace(pts, p).m_alphabeta, False),
    "det_m_r": (lambda g, p: fisher.m_r(g, p).det,
                lambda pts, p, mu, B: _trace(pts, p).det, False),
    "det_m_all": (fisher.det_m_all,
                  lambda pts, p, mu, B: (oracle.one_c_inv_one(_corr(pts, p))
                                         * _trace(pts, p).det), False),
    "entropy": (prediction.entropy,
                lambda pts, p, mu, B: oracle.entropy_dense(pts, p), False),
    "imspe": (prediction.imspe,
              lambda pts, p, mu, B: oracle.imspe_quadrature(pts, p), False),
    "m_B": (lambda g, p, mu, B: fisher.m_B_arrhenius(g, p, mu, B),
            lambda pts, p, mu, B: _trend_block(pts, p, mu, B)[1, 1], True),
    "det_m_muB": (lambda g, p, mu, B: fisher.m_muB_arrhenius(g, p, mu, B).det,
                  lambda pts, p, mu, B: np.linalg.det(
                      _trend_block(pts, p, mu, B)), True),
    "det_frak_m": (lambda g, p, mu, B: fisher.det_frak_m(g, p, mu, B),
                   lambda pts, p, mu, B: (np.linalg.det(_trend_block(pts, p, mu, B))
                                          * _trace(pts, p).det), True),
    "det_frak_m_known_mu": (
        lambda g, p, mu, B: fisher.det_frak_m(g, p, mu, B, mu_known=True),
        lambda pts, p, mu, B: (_trend_block(pts, p, mu, B)[1, 1]
                               * _trace(pts, p).det), True),
}

CHAIN_CRITERIA = {
    "m_theta": (fisher.m_theta_monotonic,
                lambda pts, p, mu, B: oracle.one_c_inv_one(_corr(pts, p))),
    "entropy": (prediction.entropy_monotonic,
                lambda pts, p, mu, B: oracle.entropy_dense(pts, p)),
}


# -- helpers ----------------------------------------------------------------

def _fmt(v, digits):
    if isinstance(v, (float, np.floating)):
        return format(float(v), f".{digits}g")
    return str(v)


def _write(text, out):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_text(header, rows, digits):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v, digits) for v in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, default=_json_default) + "\n"


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _load_design(source):
    if source is None:
        raise UsageError("--design is required")
    if source == "table1-grid":
        return "table1-grid", make_equidistant_grid(TABLE1_SPACE, 8, 8)
    if source == "table1-chain":
        return "table1-chain", None
    if not os.path.exists(source):
        raise UsageError(f"design file not found: {source}")
    try:
        with open(source) as fh:
            return os.path.basename(source), design_from_json(fh.read())
    except (ValueError, KeyError, DesignError) as exc:
        raise UsageError(f"malformed design descriptor {source}: {exc}")


def _param_grid(args, need_trend):
    alphas, betas = args.alpha or [], args.beta or []
    sigmas = args.sigma or [1.0]
    if not alphas or not betas:
        raise UsageError("parameter grid is empty: give --alpha and --beta")
    for name, vals in (("alpha", alphas), ("beta", betas), ("sigma", sigmas)):
        if any(not (v > 0 and math.isfinite(v)) for v in vals):
            raise UsageError(f"--{name} values must be positive")
    mus = args.mu or [None]
    Bs = args.B or [None]
    if need_trend and (mus == [None] or Bs == [None]):
        raise UsageError("Arrhenius criteria need --mu and --B")
    return list(itertools.product(alphas, betas, sigmas, mus, Bs))


# -- subcommands ------------------------------------------------------------

def cmd_eval(args):
    name, design = _load_design(args.design)
    criteria = args.criterion or ["m_theta"]
    table = CHAIN_CRITERIA if (name == "table1-chain"
                               or isinstance(design, MonotonicChain)) else GRID_CRITERIA
    unknown = [c for c in criteria if c not in table]
    if unknown:
        raise UsageError(f"unknown criteria for this design: {unknown}; "
                         f"choose from {sorted(table)}")
    need_trend = any(table is GRID_CRITERIA and GRID_CRITERIA[c][2]
                     for c in criteria)
    grid = _param_grid(args, need_trend)
    header = ["design", "alpha", "beta", "sigma", "mu", "B", "criterion", "value"]
    if args.oracle:
        header += ["oracle", "abs_diff"]
    rows = []
    try:
        for alpha, beta, sigma, mu, B in grid:
            p = CovParams(alpha, beta, sigma)
            dsg = design
            if name == "table1-chain":
                dsg = optimize.optimize_monotonic_chain(
                    TABLE1_SPACE, 64, p, "trend-D", seed=args.seed).design
            pts = dsg.points if isinstance(dsg, MonotonicChain) else dsg.points()
            for crit in criteria:
                entry = table[crit]
                if table is GRID_CRITERIA and entry[2]:
                    val = entry[0](dsg, p, mu, B)
                else:
                    val = entry[0](dsg, p)
                row = [name, alpha, beta, sigma, "" if mu is None else mu,
                       "" if B is None else B, crit, float(val)]
                if args.oracle:
                    ref = float(entry[1](pts, p, mu, B))
                    row += [ref, abs(float(val) - ref)]
                rows.append(row)
    except (SingularityError, FactorizationError, AccuracyError,
            DomainError, FloatingPointError) as exc:
        rows.append([name, "", "", "", "", "", "error", str(exc)])
        _emit_rows(args, header, rows)
        return EXIT_NUMERIC
    _emit_rows(args, header, rows)
    return 0


def _emit_rows(args, header, rows):
    if args.format == "json":
        _write(_json_text([dict(zip(header, r)) for r in rows]), args.out)
    else:
        _write(_csv_text(header, rows, args.digits), args.out)


def table1_rows(seed=0, params=TABLE1_PARAMS):
    """Rows of the grid-vs-chain comparison, as plain Python values."""
    grid = make_equidistant_grid(TABLE1_SPACE, 8, 8)
    out = []
    for crit, grid_fn, chain_crit in (
            ("D-opt", fisher.m_theta, "trend-D"),
            ("entropy", prediction.entropy, "entropy")):
        mono, rect = [], []
        for a, b in params:
            p = CovParams(a, b)
            mono.append(optimize.optimize_monotonic_chain(
                TABLE1_SPACE, 64, p, chain_crit, seed=seed).value)
            rect.append(grid_fn(grid, p))
        out.append([crit, "monotonic"] + mono)
        out.append([crit, "rectangular"] + rect)
        out.append([crit, "rel. eff. mono/rect (%)"]
                   + [100.0 * u / v for u, v in zip(mono, rect)])
        out.append([crit, "rel. eff. min/max (%)"]
                   + [_minmax_eff(u, v) for u, v in zip(mono, rect)])
    return out


def _minmax_eff(u, v):
    # only meaningful for positive criteria; entropies can be negative
    if u <= 0 or v <= 0:
        return float("nan")
    return 100.0 * min(u, v) / max(u, v)


def cmd_table1(args):
    rows = table1_rows(seed=args.seed)
    header = ["criterion", "row"] + [f"alpha={a:g} beta={b:g}"
                                     for a, b in TABLE1_PARAMS]
    if args.format == "json":
        _write(_json_text([dict(zip(header, r)) for r in rows]), args.out)
        return 0
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow(r[:2] + [f"{v:.4f}" for v in r[2:]])
    _write(buf.getvalue(), args.out)
    return 0


def cmd_surface(args):
    preset = args.design
    if preset not in SURFACE_PRESETS:
        raise UsageError(f"surface needs --design in {sorted(SURFACE_PRESETS)}")
    objective, alpha, beta, n, xs, ys, axes = SURFACE_PRESETS[preset]
    if args.alpha:
        alpha = args.alpha[0]
    if args.beta:
        beta = args.beta[0]
    rows = optimize.surface_scan(objective, CovParams(alpha, beta), xs, ys, n=n)
    header = list(axes) + ["value"]
    if args.format == "json":
        _write(_json_text({"objective": objective, "alpha": alpha, "beta": beta,
                           "n": n, "columns": header, "rows": rows}), args.out)
    else:
        _write(_csv_text(header, rows.tolist(), args.digits), args.out)
    return 0


def _single(values, name, default=None):
    if not values:
        if default is None:
            raise UsageError(f"--{name} is required")
        return default
    if len(values) > 1:
        raise UsageError(f"optimize takes a single --{name}")
    return values[0]


def cmd_optimize(args):
    fam = args.family
    if fam == "free-boundary":
        p = CovParams(_single(args.alpha, "alpha"), _single(args.beta, "beta"))
        sol = optimize.solve_all_params_free(args.n, p)
        report = {"family": fam, "n": args.n, "alpha": p.alpha, "beta": p.beta,
                  "d_star": sol.d_star, "delta_star": sol.delta_star,
                  "value": sol.value, "iterations": sol.iterations,
                  "residuals": list(sol.residuals),
                  "roots_found": sol.roots_found}
    elif fam == "chain":
        p = CovParams(_single(args.alpha, "alpha"), _single(args.beta, "beta"),
                      _single(args.sigma, "sigma", 1.0))
        space = _space_from(args.design)
        crit = args.criterion[0] if args.criterion else "trend-D"
        if crit not in optimize.CHAIN_CRITERIA:
            raise UsageError(f"chain criterion must be one of "
                             f"{optimize.CHAIN_CRITERIA}")
        rep = optimize.optimize_monotonic_chain(space, args.k, p, crit,
                                                starts=args.starts,
                                                seed=args.seed)
        report = {"family": fam, **rep.to_dict()}
    elif fam == "grid":
        space = _space_from(args.design)
        crit = args.criterion[0] if args.criterion else "trend-D"
        if crit not in optimize.GRID_CRITERIA:
            raise UsageError(f"grid criterion must be one of "
                             f"{optimize.GRID_CRITERIA}")
        g = optimize.optimal_grid(space, args.n, args.m, crit)
        report = {"family": fam, "criterion": crit, "method": "analytic",
                  "design": json.loads(design_to_json(g))}
    elif fam == "maximin":
        mu, B = _single(args.mu, "mu"), _single(args.B, "B")
        beta = _single(args.beta, "beta", 1.0)
        report = {"family": fam, "mu": mu, "B": B, "beta": beta,
                  "delta_star": optimize.maximin_two_point(mu, B, beta)}
    elif fam == "joint-two-point":
        mu, B = _single(args.mu, "mu"), _single(args.B, "B")
        beta = _single(args.beta, "beta", 1.0)
        report = {"family": fam, "mu": mu, "B": B, "beta": beta, "p": args.p,
                  "delta_star": optimize.joint_two_point_delta(mu, B, beta,
                                                               args.p)}
    else:  # argparse restricts choices
        raise UsageError(f"unknown family {fam}")
    _write(_json_text(report), args.out)
    return 0


def _space_from(source):
    if source in (None, "table1-grid", "table1-chain"):
        return TABLE1_SPACE
    _, design = _load_design(source)
    return design.space


# -- parser -----------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(
        prog="oudesign",
        description="Optimal designs for Ornstein-Uhlenbeck sheets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--design", help="design JSON path or preset "
                        "(table1-grid, table1-chain, fig1..fig4)")
    for flag in ("--alpha", "--beta", "--sigma", "--mu", "--B"):
        common.add_argument(flag, type=float, action="append",
                            help="repeatable")
    common.add_argument("--criterion", action="append", help="repeatable")
    common.add_argument("--oracle", action="store_true",
                        help="add a dense-oracle cross-check column")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--out", help="output path (default stdout)")
    common.add_argument("--digits", type=int, default=10,
                        help="significant digits in CSV output")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="evaluate criteria")
    sub.add_parser("table1", parents=[common], help="grid vs chain table")
    sub.add_parser("surface", parents=[common], help="surface lattice data")
    opt = sub.add_parser("optimize", parents=[common], help="run optimizers")
    opt.add_argument("--family", required=True,
                     choices=("free-boundary", "chain", "grid", "maximin",
                              "joint-two-point"))
    opt.add_argument("--n", type=int, default=6)
    opt.add_argument("--m", type=int, default=6)
    opt.add_argument("--k", type=int, default=64)
    opt.add_argument("--p", type=float, default=0.0,
                     help="environment-direction correlation for joint-two-point")
    opt.add_argument("--starts", type=int, default=32)
    return parser


COMMANDS = {"eval": cmd_eval, "table1": cmd_table1, "surface": cmd_surface,
            "optimize": cmd_optimize}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"oudesign: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NoSolutionError as exc:
        _write(_json_text({"error": str(exc),
                           "diagnostics": exc.diagnostics}), args.out)
        return EXIT_NO_SOLUTION
    except (SingularityError, FactorizationError, AccuracyError,
            DomainError, DesignError) as exc:
        print(f"oudesign: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
