"""Command-line front end.

Parses system specs (JSON scalar-function trees), runs hypothesis analysis,
trajectory simulation, cycle detection, deformations, and first-order
averaging, and emits versioned JSON reports plus CSV plot data.

Exit codes: 0 success, 2 input error (unreadable or malformed spec, bad
flags), 3 precondition violation (the message names the failing
hypothesis), 4 numerical failure (divergence, step-size underflow, retry
budgets, degenerate averaging).

Reports are deterministic: keys are sorted and floats are rendered with
Python's shortest round-trip representation (up to 17 significant digits),
so identical inputs produce byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .avg import averaged_amplitude, duff_levinson_system, predict_cycles
from .cycles import cycle_integrals, default_search_range, find_cycles, verify_crossing_direction
from .deform import deform_F, deform_g, poly_deform
from .errors import (
    DegenerateAmplitudeError,
    DeformRetriesExhaustedError,
    DivergenceError,
    LienardError,
    PreconditionError,
    StepSizeUnderflowError,
)
from .funcs import LienardSystem
from .hypo import DEFAULT_D_TOL, analyze
from .ode import DEFAULT_ATOL, DEFAULT_RTOL, State, integrate

SCHEMA_VERSION = 1

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4

_STATUS_NAMES = {0: "done", 1: "event", 2: "underflow", 3: "blowup", 4: "max-steps"}


class _CliInputError(Exception):
    """Bad file, malformed spec, or invalid flag combination (exit 2)."""


# ---------------------------------------------------------------------------
# plumbing


def _load_system(path: str) -> LienardSystem:
    try:
        with open(path) as fh:
            payload = json.load(fh)
    except OSError as exc:
        raise _CliInputError(f"cannot read system spec {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise _CliInputError(f"malformed JSON in {path!r}: {exc}") from exc
    try:
        return LienardSystem.from_dict(payload)
    except LienardError as exc:
        raise _CliInputError(f"invalid system spec {path!r}: {exc}") from exc


def _parse_range(text: str) -> tuple[float, float]:
    lo_s, _, hi_s = text.partition(":")
    try:
        lo, hi = float(lo_s), float(hi_s)
    except ValueError as exc:
        raise _CliInputError(f"--range expects LO:HI, got {text!r}") from exc
    if not 0.0 < lo < hi:
        raise _CliInputError(f"--range requires 0 < LO < HI, got {text!r}")
    return lo, hi


def _check_tolerances(args) -> None:
    for name in ("tol_abs", "tol_rel", "tol_D"):
        value = getattr(args, name, None)
        if value is not None and not value > 0.0:
            flag = "--" + name.replace("_", "-")
            raise _CliInputError(f"{flag} must be positive, got {value}")


def _report_base(args, command: str) -> dict:
    base = {"schema": SCHEMA_VERSION, "command": command}
    if getattr(args, "seed", None) is not None:
        base["seed"] = args.seed
    return base


def _emit(report: dict, out_path: Optional[str]) -> None:
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# ---------------------------------------------------------------------------
# commands


def cmd_analyze(args) -> int:
    system = _load_system(args.system)
    report = analyze(system, tol_D=args.tol_D)
    payload = _report_base(args, "analyze")
    payload["system"] = system.to_dict()
    payload["report"] = report.to_json_dict()
    _emit(payload, args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    system = _load_system(args.system)
    if not args.t_max > 0.0:
        raise _CliInputError(f"--t-max must be positive, got {args.t_max}")
    traj = integrate(
        system,
        State(x=args.x0, y=args.y0, t=0.0),
        args.t_max,
        rtol=args.tol_rel,
        atol=args.tol_abs,
    )
    if args.csv:
        traj.to_csv(args.csv, n=args.samples)
    payload = _report_base(args, "simulate")
    payload["initial"] = {"t": 0.0, "x": args.x0, "y": args.y0}
    payload["final"] = {"t": traj.final.t, "x": traj.final.x, "y": traj.final.y}
    payload["status"] = _STATUS_NAMES.get(traj.status, str(traj.status))
    payload["stats"] = {
        "naccept": traj.naccept,
        "nreject": traj.nreject,
        "nfev": traj.nfev,
    }
    _emit(payload, args.out)
    return EXIT_OK


def _cycle_csv(system: LienardSystem, records, path: str, samples: int = 512) -> None:
    """One resampled closed orbit per record, tagged with its index."""
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cycle", "x", "y"])
        for index, rec in enumerate(records):
            traj = integrate(system, State(x=rec.x_fixed, y=0.0, t=0.0), rec.period)
            for k in range(samples):
                t = rec.period * k / (samples - 1)
                x, y = traj.eval(min(t, traj.final.t))
                writer.writerow([index, repr(x), repr(y)])


def cmd_cycles(args) -> int:
    system = _load_system(args.system)
    analysis = analyze(system, tol_D=args.tol_D)
    if args.grid < 8:
        raise _CliInputError(f"--grid must be at least 8, got {args.grid}")
    if args.range:
        lo, hi = _parse_range(args.range)
    else:
        lo, hi = default_search_range(analysis.x1, analysis.x2)
    records = find_cycles(
        system,
        lo,
        hi,
        args.grid,
        x1=analysis.x1,
        x2=analysis.x2,
        rtol=args.tol_rel,
        atol=args.tol_abs,
        jobs=args.jobs,
    )
    entries = []
    for rec in records:
        entry = rec.to_json_dict()
        ig, igF = cycle_integrals(system, rec, rtol=args.tol_rel, atol=args.tol_abs)
        entry["integral_recheck"] = {"integral_g": ig, "integral_gF": igF}
        entries.append(entry)
    direction_check = None
    if analysis.direction is not None and analysis.x1 is not None and analysis.x2 is not None:
        direction_check = verify_crossing_direction(
            system, records, analysis.x1, analysis.x2, analysis.direction
        )
    if args.csv and records:
        _cycle_csv(system, records, args.csv)
    payload = _report_base(args, "cycles")
    payload["range"] = [lo, hi]
    payload["grid"] = args.grid
    payload["count"] = len(records)
    payload["records"] = entries
    payload["direction_check"] = direction_check
    payload["analysis"] = analysis.to_json_dict()
    _emit(payload, args.out)
    return EXIT_OK


def cmd_deform(args) -> int:
    system = _load_system(args.system)
    if args.kind == "g_lambda":
        outcome = deform_g(system)
    elif args.kind == "F_scale":
        outcome = deform_F(system)
    else:  # poly
        neg, pos = system.F.pieces()
        if neg.coeffs != pos.coeffs:
            raise PreconditionError(
                "polynomial friction primitive",
                "the poly deformation requires F given by one polynomial on "
                "both half-axes",
            )
        outcome = poly_deform(pos, system.g)
    # The deformed spec sits at the top level so the report is itself a
    # valid system spec for `analyze` / `cycles` (closure property).
    payload = _report_base(args, "deform")
    payload.update(outcome.system.to_dict())
    payload["deform"] = {
        "kind": args.kind,
        "parameter": outcome.parameter,
        "certificate": outcome.certificate.to_json_dict(),
    }
    _emit(payload, args.out)
    return EXIT_OK


def cmd_average(args) -> int:
    system = _load_system(args.system)
    amplitude = averaged_amplitude(system.f)
    payload = _report_base(args, "average")
    payload.update(amplitude.to_json_dict())
    payload["predictions"] = [
        {"radius": radius, "stability": stability.value}
        for radius, stability in predict_cycles(system.f)
    ]
    _emit(payload, args.out)
    return EXIT_OK


def cmd_counterexample(args) -> int:
    if not args.eps > 0.0:
        raise _CliInputError(f"--eps must be positive, got {args.eps}")
    system = duff_levinson_system(args.eps, A=args.tilt_a, B=args.tilt_b)
    payload = _report_base(args, "counterexample")
    payload.update(system.to_dict())
    payload["counterexample"] = {
        "eps": args.eps,
        "A": args.tilt_a,
        "B": args.tilt_b,
        "predictions": [
            {"radius": radius, "stability": stability.value}
            for radius, stability in predict_cycles(system.f)
        ],
    }
    _emit(payload, args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="lienard",
        description=(
            "Limit-cycle analysis for Lienard oscillators "
            "x'' + f(x) x' + g(x) = 0 in the plane x' = y - F(x), y' = -g(x)."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, func, help_, *, system=True, csv=False, tolerances=False, tol_D=False):
        p = sub.add_parser(
            name, help=help_, formatter_class=argparse.ArgumentDefaultsHelpFormatter
        )
        if system:
            p.add_argument("--system", required=True, help="path to a system spec JSON")
        p.add_argument("--out", default=None, help="report path (default: stdout)")
        if csv:
            p.add_argument("--csv", default=None, help="CSV output path")
        if tolerances:
            p.add_argument(
                "--tol-abs", type=float, default=DEFAULT_ATOL, dest="tol_abs",
                help="absolute integration tolerance",
            )
            p.add_argument(
                "--tol-rel", type=float, default=DEFAULT_RTOL, dest="tol_rel",
                help="relative integration tolerance",
            )
        if tol_D:
            p.add_argument(
                "--tol-D", type=float, default=DEFAULT_D_TOL, dest="tol_D",
                help="relative tolerance for the potential-balance check",
            )
        p.add_argument(
            "--seed", type=int, default=None,
            help="echoed into the report; for randomized corpora built on top",
        )
        p.set_defaults(func=func)
        return p

    add("analyze", cmd_analyze, "verify the limit-cycle hypotheses", tol_D=True)

    p = add("simulate", cmd_simulate, "integrate one trajectory",
            csv=True, tolerances=True)
    p.add_argument("--x0", type=float, default=1.0, help="initial x")
    p.add_argument("--y0", type=float, default=0.0, help="initial y")
    p.add_argument("--t-max", type=float, default=100.0, dest="t_max",
                   help="integration horizon")
    p.add_argument("--samples", type=int, default=None,
                   help="resample the CSV to N uniform times (default: accepted steps)")

    p = add("cycles", cmd_cycles, "detect and classify limit cycles",
            csv=True, tolerances=True, tol_D=True)
    p.add_argument("--range", default=None,
                   help="section search interval LO:HI (default: derived from the system)")
    p.add_argument("--grid", type=int, default=16, help="number of seed points")
    p.add_argument("--jobs", type=int, default=1,
                   help="parallel workers for the return-map grid")

    p = add("deform", cmd_deform, "repair a system so uniqueness certifies")
    p.add_argument("--kind", required=True, choices=("g_lambda", "F_scale", "poly"),
                   help="g_lambda: rescale g on x<0; F_scale: rescale the argument "
                        "of F on x<0; poly: subtract a certified linear slope from F")

    add("average", cmd_average, "first-order averaging: amplitude polynomial and "
                                "predicted cycle radii")

    p = add("counterexample", cmd_counterexample,
            "emit the seven-degree three-cycle system spec", system=False)
    p.add_argument("--eps", type=float, default=0.01, help="friction strength")
    p.add_argument("--tilt-a", type=float, default=None, dest="tilt_a",
                   help="linear tilt coefficient (default: 1/(100*pi))")
    p.add_argument("--tilt-b", type=float, default=None, dest="tilt_b",
                   help="cubic tilt coefficient (default: 2/pi)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _check_tolerances(args)
        return args.func(args)
    except _CliInputError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except PreconditionError as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except (
        DivergenceError,
        StepSizeUnderflowError,
        DeformRetriesExhaustedError,
        DegenerateAmplitudeError,
    ) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except LienardError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    raise SystemExit(main())
