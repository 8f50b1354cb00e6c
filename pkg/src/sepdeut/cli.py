"""Command line front end.

Subcommands
-----------
observables    bound-state observables as JSON (default) or a text table
wavefunctions  CSV of u(r), w(r) with region labels, optional overlay merge
momentum       CSV of form factors and momentum-space wavefunctions
fit            solve (b, ratio) for a target (r_rms, Q) pair
validate       continuity / transform / normalisation self-checks

Exit codes
----------
0  success
1  a validate check failed
2  bad parameters or arguments
3  quadrature or transform did not converge
4  file I/O failure
5  fit did not converge

Parameters come from defaults (the fitted equal-range point), overridden
by --params-json, overridden by individual flags.  A and B must be given
together; when absent they are re-solved from the normalisation
condition at the requested ratio.

CSV output is deterministic: floats are written with repr, which
round-trips exactly, so identical inputs give byte-identical files.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from contextlib import contextmanager
from dataclasses import dataclass

import numpy as np

from .fitting import FitTargets, fit_parameters
from .model import ModelParams, Region, region_of
from .observables import (
    prob_D_closed,
    prob_D_coordinate,
    prob_D_numeric,
    prob_S_closed,
    prob_S_coordinate,
    prob_S_numeric,
    report,
    solve_normalisation,
)
from .quadrature import QuadratureError
from .transform_oracle import TransformConvergenceError, validate_transforms
from .wf_coordinate import branch_value, du_dr, dw_dr, u_coordinate, w_coordinate
from .wf_momentum import form_factor_central, form_factor_tensor, u_momentum, w_momentum

DEFAULT_B = 1.475
DEFAULT_ALPHA = 0.23165
DEFAULT_RATIO = 3.0

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BAD_PARAMS = 2
EXIT_NO_CONVERGENCE = 3
EXIT_IO = 4
EXIT_FIT_FAILED = 5


@dataclass(frozen=True)
class RunConfig:
    """Resolved inputs for one CLI invocation."""

    params: ModelParams
    panel_order: int = 40


def _add_param_options(sub: argparse.ArgumentParser):
    g = sub.add_argument_group("model parameters")
    g.add_argument("--params-json", metavar="PATH", help="JSON file with b1_fm, b2_fm, alpha_inv_fm, A, B")
    g.add_argument("--b1", type=float, help=f"first range in fm (default {DEFAULT_B})")
    g.add_argument("--b2", type=float, help="second range in fm (default: equal to --b1)")
    g.add_argument("--alpha", type=float, help=f"bound-state wavenumber in fm^-1 (default {DEFAULT_ALPHA})")
    g.add_argument("--ratio", type=float, help=f"(B/A)^2 used when A, B are re-solved (default {DEFAULT_RATIO})")
    g.add_argument("--A", type=float, help="S-channel normalisation; requires --B")
    g.add_argument("--B", type=float, help="D-channel normalisation; requires --A")
    g.add_argument("--panel-order", type=int, default=40, help="Gauss-Legendre points per panel (default 40)")


def _resolve_config(args) -> RunConfig:
    b1 = b2 = alpha = A = B = None
    if args.params_json:
        with open(args.params_json) as f:
            loaded = ModelParams.from_dict(json.load(f))
        b1, b2, alpha, A, B = loaded.b1, loaded.b2, loaded.alpha, loaded.A, loaded.B
    if (args.A is None) != (args.B is None):
        raise ValueError("give --A and --B together or neither")
    if args.b1 is not None:
        b1 = args.b1
        if args.b2 is None and args.params_json is None:
            b2 = None  # follow b1 below
    if args.b2 is not None:
        b2 = args.b2
    if args.alpha is not None:
        alpha = args.alpha
    if args.A is not None:
        A, B = args.A, args.B
    b1 = DEFAULT_B if b1 is None else b1
    b2 = b1 if b2 is None else b2
    alpha = DEFAULT_ALPHA if alpha is None else alpha
    if args.ratio is not None and args.A is None:
        A = B = None  # an explicit ratio re-solves even over JSON-supplied A, B
    if A is None:
        ratio = DEFAULT_RATIO if args.ratio is None else args.ratio
        A, B = solve_normalisation(b1, alpha, ratio, b2, panel_order=args.panel_order)
    return RunConfig(
        params=ModelParams(b1=b1, b2=b2, alpha=alpha, A=A, B=B),
        panel_order=args.panel_order,
    )


@contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="") as f:
            yield f


# ---------------------------------------------------------------------------
# subcommands

def cmd_observables(args) -> int:
    cfg = _resolve_config(args)
    rep = report(cfg.params, panel_order=cfg.panel_order)
    payload = {"params": cfg.params.to_dict(), "observables": rep.to_dict()}
    with _open_out(args.output) as out:
        if args.table:
            rows = [("quantity", "value")] + [(k, repr(v)) for k, v in payload["observables"].items()]
            width = max(len(r[0]) for r in rows)
            for name, value in rows:
                out.write(f"{name:<{width}}  {value}\n")
        else:
            json.dump(payload, out, indent=2)
            out.write("\n")
    return EXIT_OK


def _float_grid(stop: float, step: float):
    n = int(round(stop / step))
    return [i * step for i in range(n + 1)]


def cmd_wavefunctions(args) -> int:
    cfg = _resolve_config(args)
    p = cfg.params
    overlay_rows = None
    overlay_fields = []
    if args.overlay:
        with open(args.overlay, newline="") as f:
            reader = csv.DictReader(f)
            if reader.fieldnames is None or "r_fm" not in reader.fieldnames:
                raise ValueError(f"overlay file {args.overlay!r} has no r_fm column")
            overlay_fields = [name for name in reader.fieldnames if name != "r_fm"]
            overlay_rows = [row for row in reader]
        overlay_r = np.array([float(row["r_fm"]) for row in overlay_rows])
        if overlay_r.size == 0:
            raise ValueError(f"overlay file {args.overlay!r} has no data rows")
    with _open_out(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        header = ["r_fm", "u", "w", "region"]
        header += [f"ref_{name}" for name in overlay_fields]
        writer.writerow(header)
        for r in _float_grid(args.r_max, args.dr):
            row = [repr(r), repr(u_coordinate(r, p)), repr(w_coordinate(r, p)), region_of(r, p).value]
            if overlay_rows is not None:
                near = int(np.argmin(np.abs(overlay_r - r)))
                row += [overlay_rows[near][name] for name in overlay_fields]
            writer.writerow(row)
    return EXIT_OK


def cmd_momentum(args) -> int:
    cfg = _resolve_config(args)
    p = cfg.params
    with _open_out(args.output) as out:
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["k_inv_fm", "g_C", "g_T", "u_k", "w_k"])
        for k in _float_grid(args.k_max, args.dk):
            writer.writerow(
                [
                    repr(k),
                    repr(float(form_factor_central(k, p))),
                    repr(float(form_factor_tensor(k, p))),
                    repr(float(u_momentum(k, p))),
                    repr(float(w_momentum(k, p))),
                ]
            )
    return EXIT_OK


def cmd_fit(args) -> int:
    targets = FitTargets(r_rms=args.target_rrms, Q=args.target_q)
    alpha = DEFAULT_ALPHA if args.alpha is None else args.alpha
    result = fit_parameters(
        targets,
        alpha,
        initial=(args.start_b, args.start_ratio),
        panel_order=args.panel_order,
    )
    payload = {
        "b_fm": result.b,
        "ratio": result.ratio,
        "A": result.A,
        "B": result.B,
        "residual_norm": result.residual_norm,
        "iterations": result.iterations,
        "converged": result.converged,
    }
    with _open_out(args.output) as out:
        json.dump(payload, out, indent=2)
        out.write("\n")
    if not result.converged:
        print("fit did not converge", file=sys.stderr)
        return EXIT_FIT_FAILED
    return EXIT_OK


def _rel(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale > 0 else 0.0


def cmd_validate(args) -> int:
    cfg = _resolve_config(args)
    p = cfg.params
    checks = []  # (name, deviation, tolerance)

    boundaries = []
    if not p.equal_range:
        boundaries.append((p.delta, Region.INNER, Region.MIDDLE))
    boundaries.append((p.range_sum, Region.MIDDLE, Region.OUTER))
    for r0, lo, hi in boundaries:
        for channel in ("u", "w"):
            a = float(branch_value(channel, lo, r0, p))
            b = float(branch_value(channel, hi, r0, p))
            checks.append((f"continuity {channel} at r={r0:.6g}", _rel(a, b), 1e-10))
            deriv = du_dr if channel == "u" else dw_dr
            da = deriv(r0, p, lo)
            db = deriv(r0, p, hi)
            checks.append((f"derivative {channel} at r={r0:.6g}", _rel(da, db), 1e-8))

    trep = validate_transforms(p, panel_order=cfg.panel_order)
    checks.append(("transform u, max over r grid", trep.max_abs_dev_u, 1e-7))
    checks.append(("transform w, max over r grid", trep.max_abs_dev_w, 1e-7))

    pS_k = prob_S_numeric(p, panel_order=cfg.panel_order)
    pD_k = prob_D_numeric(p, panel_order=cfg.panel_order)
    pS_r = prob_S_coordinate(p, panel_order=cfg.panel_order)
    pD_r = prob_D_coordinate(p, panel_order=cfg.panel_order)
    checks.append(("Parseval S (k-space vs r-space norm)", abs(pS_k - pS_r), 1e-7))
    checks.append(("Parseval D (k-space vs r-space norm)", abs(pD_k - pD_r), 1e-7))

    lines = []
    if p.equal_range:
        checks.append(("closed vs numeric P_S", _rel(prob_S_closed(p), pS_k), 1e-8))
        checks.append(("closed vs numeric P_D", _rel(prob_D_closed(p), pD_k), 1e-6))
    else:
        lines.append("closed vs numeric probabilities: skipped (unequal ranges)")

    failed = False
    with _open_out(args.output) as out:
        for name, dev, tol in checks:
            ok = dev <= tol
            failed = failed or not ok
            out.write(f"{name}: dev {dev:.3e} (tol {tol:.1e}) {'PASS' if ok else 'FAIL'}\n")
        for line in lines:
            out.write(line + "\n")
    return EXIT_VALIDATION if failed else EXIT_OK


# ---------------------------------------------------------------------------

def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sepdeut",
        description="Separable-potential deuteron model: wavefunctions, observables, fitting.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    p_obs = subs.add_parser("observables", help="channel probabilities, A_S, A_D, eta, r_rms, Q")
    _add_param_options(p_obs)
    p_obs.add_argument("--table", action="store_true", help="plain text table instead of JSON")
    p_obs.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    p_obs.set_defaults(func=cmd_observables)

    p_wf = subs.add_parser("wavefunctions", help="CSV of u(r), w(r) with region labels")
    _add_param_options(p_wf)
    p_wf.add_argument("--r-max", type=float, default=12.0, help="grid end in fm (default 12)")
    p_wf.add_argument("--dr", type=float, default=0.05, help="grid step in fm (default 0.05)")
    p_wf.add_argument("--overlay", metavar="PATH", help="reference CSV with r_fm column; merged by nearest r")
    p_wf.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    p_wf.set_defaults(func=cmd_wavefunctions)

    p_mom = subs.add_parser("momentum", help="CSV of form factors and momentum wavefunctions")
    _add_param_options(p_mom)
    p_mom.add_argument("--k-max", type=float, default=5.0, help="grid end in fm^-1 (default 5)")
    p_mom.add_argument("--dk", type=float, default=0.02, help="grid step in fm^-1 (default 0.02)")
    p_mom.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    p_mom.set_defaults(func=cmd_momentum)

    p_fit = subs.add_parser("fit", help="solve (b, ratio) for target r_rms and Q")
    p_fit.add_argument("--target-rrms", type=float, default=2.08, help="target rms radius in fm (default 2.08)")
    p_fit.add_argument("--target-q", type=float, default=0.286, help="target quadrupole moment in fm^2 (default 0.286)")
    p_fit.add_argument("--alpha", type=float, help=f"bound-state wavenumber (default {DEFAULT_ALPHA})")
    p_fit.add_argument("--start-b", type=float, default=1.2, help="initial range (default 1.2)")
    p_fit.add_argument("--start-ratio", type=float, default=2.0, help="initial (B/A)^2 (default 2.0)")
    p_fit.add_argument("--panel-order", type=int, default=40, help="Gauss-Legendre points per panel (default 40)")
    p_fit.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    p_fit.set_defaults(func=cmd_fit)

    p_val = subs.add_parser("validate", help="run continuity, transform and normalisation checks")
    _add_param_options(p_val)
    p_val.add_argument("--output", metavar="PATH", help="write to a file instead of stdout")
    p_val.set_defaults(func=cmd_validate)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_PARAMS if exc.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_PARAMS
    except (QuadratureError, TransformConvergenceError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
