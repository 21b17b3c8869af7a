"""Command-line front end: single evaluations, convergence studies, sweeps.

Every command emits a table (CSV by default, JSON with ``--format json``)
to stdout or ``--out``.  Exit status: 0 on success, 2 on malformed
arguments, 3 when a lower layer rejects the physics (unbound motion,
photon sphere, non-convergence, no stationary point).
"""

import argparse
import csv
import io
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from . import closed_forms, gr, pms
from .delta_core import QuadraticFamily, sum_series
from .errors import DomainError, NoStationaryPointError, QuadratureError
from .potential import parse_potential, turning_points, turning_points_from_amplitude
from .quadrature import DEFAULT_TOL, exact_duffing_period, exact_pendulum_period, exact_period

COMMANDS = ("period", "converge", "pendulum", "anharmonic", "deflect", "precess", "sweep")

COLUMNS = {
    "period": [
        "potential", "amplitude", "energy", "order", "lambda_mode", "s", "t_delta",
        "t_exact", "rel_error", "sup_delta", "convergent",
    ],
    "converge": [
        "potential", "amplitude", "order", "lambda_scale", "s", "t_partial", "t_exact",
        "abs_percent_error",
    ],
    "pendulum": ["theta", "s_pms", "t_pms", "t_exact", "rel_error"],
    "anharmonic": ["rho", "N", "amplitude", "s_pms", "t_pms", "t_exact", "rel_error"],
    "deflect": [
        "gm", "r0", "r0_over_gm", "dphi_exact", "dphi_pms", "dphi_asymptotic",
        "rel_error_pms", "rel_error_asymptotic", "unit",
    ],
    "precess": [
        "gm", "a", "eccentricity", "L", "L_over_gm", "dtheta_exact", "dtheta_pms",
        "dtheta_leading", "rel_error_pms", "rel_error_leading", "unit",
    ],
}


class UsageError(Exception):
    pass


def quad_tol():
    raw = os.environ.get("OSC_QUAD_TOL")
    if raw is None:
        return DEFAULT_TOL
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"OSC_QUAD_TOL must be a number, got {raw!r}") from None
    if not 0 < tol < 1:
        raise UsageError("OSC_QUAD_TOL must lie in (0, 1)")
    return tol


def parse_grid(text, spacing="lin"):
    """``start:stop:count`` -> list of floats, linear or logarithmic."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"bad grid {text!r}") from None
    if count < 1:
        raise UsageError("grid count must be >= 1")
    if spacing == "log":
        if start <= 0 or stop <= 0:
            raise UsageError("log grid needs positive endpoints")
        return [float(v) for v in np.geomspace(start, stop, count)]
    return [float(v) for v in np.linspace(start, stop, count)]


def parse_orders(text):
    if ".." in text:
        lo, _, hi = text.partition("..")
        try:
            return list(range(int(lo), int(hi) + 1))
        except ValueError:
            raise UsageError(f"bad order range {text!r}") from None
    try:
        return [int(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad order list {text!r}") from None


def parse_floats(text):
    try:
        return [float(v) for v in text.split(",")]
    except ValueError:
        raise UsageError(f"bad number list {text!r}") from None


def parse_lambda_mode(text):
    """auto-pms | fixed:<lambda> | fixed-s:<lambda^2> | scan."""
    if text in ("auto-pms", "scan"):
        return text, None
    kind, _, value = text.partition(":")
    if kind in ("fixed", "fixed-s") and value:
        try:
            v = float(value)
        except ValueError:
            raise UsageError(f"bad lambda value {value!r}") from None
        return kind, (v * v if kind == "fixed" else v)
    raise UsageError(f"lambda mode must be auto-pms, fixed:<value>, fixed-s:<value> or scan, got {text!r}")


def closed_form_s(p, A):
    """First-order PMS s = lambda^2 from the closed forms, or None."""
    if p.kind == "duffing":
        return pms.lambda_pms_duffing(p.params["mu"], A) ** 2
    if p.kind == "anharmonic":
        return pms.lambda_pms_anharmonic(p.params["rho"], p.params["N"], A) ** 2
    if p.kind == "pendulum":
        return pms.lambda_pms_pendulum(A)
    if p.kind == "harmonic":
        return p.params.get("k", 1.0) - 1.0
    return None


def oracle_period(p, tp, tol):
    if p.kind == "duffing" and p.params["mu"] >= 0:
        return exact_duffing_period(p.params["mu"], tp.x_plus)
    if p.kind == "pendulum":
        return exact_pendulum_period(tp.x_plus)
    return exact_period(p, tp, tol=tol)


def _setup(args):
    try:
        p = parse_potential(args.potential)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.amplitude is not None:
        tp = turning_points_from_amplitude(p, args.amplitude)
    elif getattr(args, "energy", None) is not None:
        tp = turning_points(p, args.energy)
    else:
        raise UsageError("need --amplitude or --energy")
    return p, tp


def cmd_period(args):
    p, tp = _setup(args)
    tol = quad_tol()
    mode, s_fixed = parse_lambda_mode(args.lambda_mode)
    t_exact = oracle_period(p, tp, tol)
    if mode == "auto-pms":
        s_cf = closed_form_s(p, tp.x_plus)
        s_values = [pms.optimize_series(p, tp, args.order, s_closed=s_cf).s_star]
    elif mode == "scan":
        if args.grid is None:
            raise UsageError("--lambda scan needs --grid start:stop:count (over lambda)")
        s_values = [v * v for v in parse_grid(args.grid, args.spacing)]
    else:
        s_values = [s_fixed]
    rows = []
    for s in s_values:
        series = sum_series(p, QuadraticFamily(s), tp, args.order)
        rows.append({
            "potential": p.label,
            "amplitude": tp.x_plus,
            "energy": tp.energy,
            "order": args.order,
            "lambda_mode": mode,
            "s": s,
            "t_delta": series.value,
            "t_exact": t_exact,
            "rel_error": series.value / t_exact - 1.0,
            "sup_delta": series.sup_delta,
            "convergent": series.convergent,
        })
    return rows


def cmd_converge(args):
    p, tp = _setup(args)
    tol = quad_tol()
    orders = parse_orders(args.orders)
    if min(orders) < 0:
        raise UsageError("orders must be >= 0")
    s_pms = closed_form_s(p, tp.x_plus)
    if s_pms is None:
        s_pms = pms.optimize_series(p, tp, 1).s_star
    t_exact = oracle_period(p, tp, tol)
    rows = []
    for scale in parse_floats(args.lambda_scale):
        s = s_pms * scale * scale
        series = sum_series(p, QuadraticFamily(s), tp, max(orders))
        for n in orders:
            rows.append({
                "potential": p.label,
                "amplitude": tp.x_plus,
                "order": n,
                "lambda_scale": scale,
                "s": s,
                "t_partial": series.partial_sums[n],
                "t_exact": t_exact,
                "abs_percent_error": abs(series.partial_sums[n] / t_exact - 1.0) * 100.0,
            })
    return rows


def cmd_pendulum(args):
    theta = args.theta
    t_pms = closed_forms.pendulum_t_pms(theta)
    t_exact = exact_pendulum_period(theta)
    return [{
        "theta": theta,
        "s_pms": pms.lambda_pms_pendulum(theta),
        "t_pms": t_pms,
        "t_exact": t_exact,
        "rel_error": t_pms / t_exact - 1.0,
    }]


def cmd_anharmonic(args):
    from .potential import anharmonic

    if args.N != int(args.N):
        raise UsageError("N must be an integer")
    N = int(args.N)
    p = anharmonic(args.rho, N)
    tp = turning_points_from_amplitude(p, args.amplitude)
    t_pms = closed_forms.anharmonic_t_pms(args.rho, N, args.amplitude)
    t_exact = exact_period(p, tp, tol=quad_tol())
    return [{
        "rho": args.rho,
        "N": N,
        "amplitude": args.amplitude,
        "s_pms": pms.lambda_pms_anharmonic(args.rho, N, args.amplitude) ** 2,
        "t_pms": t_pms,
        "t_exact": t_exact,
        "rel_error": t_pms / t_exact - 1.0,
    }]


def cmd_deflect(args):
    gm = args.gm
    given = [v is not None for v in (args.r0, args.r0_over_rsun, args.r0_over_gm)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --r0, --r0-over-rsun, --r0-over-gm")
    if args.r0 is not None:
        r0 = args.r0
    elif args.r0_over_rsun is not None:
        r0 = args.r0_over_rsun * args.rsun
    else:
        r0 = args.r0_over_gm * gm
    sc = gr.GrScenario.ray(gm, r0)
    exact = gr.deflection_exact(sc, tol=quad_tol())
    approx = gr.deflection_pms(sc)
    asym = gr.deflection_asymptotic(sc)
    k = gr.ARCSEC_PER_RAD if args.arcsec else 1.0
    return [{
        "gm": gm,
        "r0": r0,
        "r0_over_gm": r0 / gm,
        "dphi_exact": exact * k,
        "dphi_pms": approx * k,
        "dphi_asymptotic": asym * k,
        "rel_error_pms": approx / exact - 1.0,
        "rel_error_asymptotic": asym / exact - 1.0,
        "unit": "arcsec" if args.arcsec else "rad",
    }]


def cmd_precess(args):
    gm, ecc = args.gm, args.eccentricity
    given = [v is not None for v in (args.a, args.a_over_a0, args.L_over_gm)]
    if sum(given) != 1:
        raise UsageError("give exactly one of --a, --a-over-a0, --L-over-gm")
    if args.a is not None:
        a = args.a
    elif args.a_over_a0 is not None:
        a = args.a_over_a0 * args.a0
    else:
        a = args.L_over_gm * gm / (1.0 - ecc * ecc)
    sc = gr.GrScenario.orbit(gm, a, ecc)
    exact = gr.precession_exact(sc, tol=quad_tol())
    approx = gr.precession_pms(sc)
    lead = gr.precession_leading(sc)
    k = gr.ARCSEC_PER_RAD if args.arcsec else 1.0
    return [{
        "gm": gm,
        "a": sc.a,
        "eccentricity": ecc,
        "L": sc.semilatus,
        "L_over_gm": sc.semilatus / gm,
        "dtheta_exact": exact * k,
        "dtheta_pms": approx * k,
        "dtheta_leading": lead * k,
        "rel_error_pms": approx / exact - 1.0,
        "rel_error_leading": lead / exact - 1.0,
        "unit": "arcsec" if args.arcsec else "rad",
    }]


HANDLERS = {
    "period": cmd_period,
    "converge": cmd_converge,
    "pendulum": cmd_pendulum,
    "anharmonic": cmd_anharmonic,
    "deflect": cmd_deflect,
    "precess": cmd_precess,
}


class _Parser(argparse.ArgumentParser):
    # unknown keys are rejected rather than ignored
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _add_output(p):
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="write to this path instead of stdout")


def build_parser():
    parser = _Parser(prog="oscperiod", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("period", help="delta-expansion period vs exact period")
    p.add_argument("--potential", required=True, help="e.g. duffing:mu=1, anharmonic:rho=1,N=3, pendulum")
    p.add_argument("--amplitude", type=float)
    p.add_argument("--energy", type=float)
    p.add_argument("--order", type=int, default=1)
    p.add_argument("--lambda", dest="lambda_mode", default="auto-pms")
    p.add_argument("--grid", help="lambda grid start:stop:count for --lambda scan")
    p.add_argument("--spacing", choices=("lin", "log"), default="lin")
    _add_output(p)

    p = sub.add_parser("converge", help="partial-sum error vs order for three lambda scales")
    p.add_argument("--potential", required=True)
    p.add_argument("--amplitude", type=float)
    p.add_argument("--energy", type=float)
    p.add_argument("--orders", default="0..20")
    p.add_argument("--lambda-scale", default="0.9,1.0,1.1")
    _add_output(p)

    p = sub.add_parser("pendulum", help="closed-form pendulum period vs 4K(sin(theta/2))")
    p.add_argument("--theta", type=float, required=True)
    _add_output(p)

    p = sub.add_parser("anharmonic", help="closed-form x^(2N) period vs quadrature")
    p.add_argument("--rho", type=float, required=True)
    p.add_argument("--N", type=float, required=True)
    p.add_argument("--amplitude", type=float, required=True)
    _add_output(p)

    p = sub.add_parser("deflect", help="light deflection, exact vs PMS vs 4 gm/r0")
    p.add_argument("--gm", type=float, default=gr.GM_SUN, help="G M / c^2 in meters")
    p.add_argument("--r0", type=float)
    p.add_argument("--r0-over-rsun", type=float)
    p.add_argument("--r0-over-gm", type=float)
    p.add_argument("--rsun", type=float, default=gr.R_SUN)
    p.add_argument("--arcsec", action="store_true")
    _add_output(p)

    p = sub.add_parser("precess", help="perihelion precession per orbit, exact vs PMS vs leading order")
    p.add_argument("--gm", type=float, default=gr.GM_SUN)
    p.add_argument("--a", type=float)
    p.add_argument("--a-over-a0", type=float)
    p.add_argument("--a0", type=float, default=gr.A_MERCURY)
    p.add_argument("--L-over-gm", type=float)
    p.add_argument("--eccentricity", type=float, default=gr.ECC_MERCURY)
    p.add_argument("--arcsec", action="store_true")
    _add_output(p)

    p = sub.add_parser("sweep", help="run another command over a grid of one flag")
    p.add_argument("target", choices=sorted(HANDLERS))
    p.add_argument("--vary", required=True, help="flag name of the target, without dashes")
    p.add_argument("--grid", required=True, help="start:stop:count")
    p.add_argument("--spacing", choices=("lin", "log"), default="lin")
    p.add_argument("--jobs", type=int, default=1)
    _add_output(p)
    return parser


def _sweep_point(target, argv):
    args = build_parser().parse_args([target, *argv])
    return HANDLERS[target](args)


def cmd_sweep(args, rest):
    rest = [a for a in rest if a != "--"]
    values = parse_grid(args.grid, args.spacing)
    flag = "--" + args.vary.lstrip("-")
    argvs = [[*rest, flag, repr(v)] for v in values]
    # validate once up front so usage errors surface as exit 2
    build_parser().parse_args([args.target, *argvs[0]])
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            chunks = list(pool.map(_sweep_point, [args.target] * len(argvs), argvs))
    else:
        chunks = [_sweep_point(args.target, argv) for argv in argvs]
    return [row for chunk in chunks for row in chunk]


def format_value(v):
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if v is None:
        return ""
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".15g")
    return str(v)


def render(rows, columns, fmt):
    if fmt == "json":
        out = [{k: _json_value(row.get(k)) for k in columns} for row in rows]
        return json.dumps(out, indent=1) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_value(row.get(k)) for k in columns])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (np.floating, float)):
        v = float(v)
        return v if math.isfinite(v) else None
    if isinstance(v, np.integer):
        return int(v)
    return v


def run(argv=None):
    """Parse, compute and emit.  Returns the process exit status."""
    try:
        args, extra = build_parser().parse_known_args(argv)
        if extra and args.command != "sweep":
            raise UsageError(f"unrecognized arguments: {' '.join(extra)}")
        if args.command == "sweep":
            rows = cmd_sweep(args, extra)
            columns = COLUMNS[args.target]
        else:
            rows = HANDLERS[args.command](args)
            columns = COLUMNS[args.command]
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (DomainError, QuadratureError, NoStationaryPointError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    text = render(rows, columns, args.format)
    if args.out:
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def main():
    sys.exit(run())
