"""Command-line front end.

Exit codes: 0 success, 1 verification gap above threshold, 2 invalid input,
3 solver failure, 4 oracle failure.  Numbers are written with 17
significant digits so every CSV round-trips exactly.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from pathlib import Path

import numpy as np

from .basecase import build_base_profile, eval_base_power
from .controller import Mode, sample_dispatch
from .cost import base_case_cost, discrete_cost, optimal_cost
from .errors import (DispatchError, HourFailure, NoConvergence, SingularKKT,
                     SingularSystem)
from .oracle import compare, solve_numeric
from .simulator import (ErrorModel, HourInput, ScenarioConfig, duration_curve,
                        run_scenario, sensitivity_sweep, synthetic_year, total_savings)
from .trajectory import HourSchedule, PriceSet, eval_power, eval_ramp, solve_hour

EXIT_OK = 0
EXIT_GAP = 1
EXIT_INVALID = 2
EXIT_SOLVER = 3
EXIT_ORACLE = 4

SCENARIO_HEADER = ["hour", "a", "b", "c", "Qz", "Q0", "QT", "ET"]
SIDECAR_KEYS = {"error_mean", "error_std", "seed", "t_s", "mode", "chaining", "horizon"}
OUTPUT_DIR_ENV = "RAMPDISPATCH_OUTPUT_DIR"


class UsageError(Exception):
    """Bad user input; the message is printed as a one-line diagnostic."""


def fmt(x) -> str:
    return f"{float(x):.17g}"


def _write_csv(path, header, rows):
    text = io.StringIO()
    w = csv.writer(text, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([v if isinstance(v, str) else fmt(v) for v in row])
    if path is None:
        sys.stdout.write(text.getvalue())
    else:
        Path(path).write_text(text.getvalue())


def _output_dir(arg):
    d = Path(arg or os.environ.get(OUTPUT_DIR_ENV) or ".")
    d.mkdir(parents=True, exist_ok=True)
    return d


def _check_flags(args, names, positive=()):
    for name in names:
        value = getattr(args, name)
        flag = "--" + name.replace("_", "-")
        if not math.isfinite(value):
            raise UsageError(f"{flag}: must be finite, got {value}")
        if name in positive and value <= 0.0:
            raise UsageError(f"{flag}: must be positive, got {value}")
        if value < 0.0:
            raise UsageError(f"{flag}: must be non-negative, got {value}")


def _instance(args):
    _check_flags(args, ("a", "b", "c", "qz", "q0", "qt", "et", "horizon"), positive=("horizon",))
    if args.a <= 1e-12 and args.c <= 1e-12:
        raise UsageError("--a/--c: energy and ramping prices cannot both be zero")
    prices = PriceSet(args.a, args.b, args.c, args.qz)
    sched = HourSchedule(args.q0, args.qt, args.et, args.horizon)
    return prices, sched


def _add_instance_flags(p):
    p.add_argument("--a", type=float, required=True, help="energy price, $/MW^2 h")
    p.add_argument("--b", type=float, default=None, help="power price, $/MW^2 (default: equal to --a)")
    p.add_argument("--c", type=float, required=True, help="ramping price, $ h/MW^2")
    p.add_argument("--qz", type=float, default=0.0, help="must-take generation, MW")
    p.add_argument("--q0", type=float, required=True, help="initial power, MW")
    p.add_argument("--qt", type=float, required=True, help="final power, MW")
    p.add_argument("--et", type=float, required=True, help="scheduled energy, MWh")
    p.add_argument("--horizon", type=float, default=1.0, help="interval length, h")


# ---------------------------------------------------------------------------
# scenario files


def _parse_float(text, line, column):
    try:
        value = float(text)
    except ValueError:
        raise UsageError(f"line {line}: {column} is not a number: {text!r}") from None
    if not math.isfinite(value):
        raise UsageError(f"line {line}: {column} is not finite")
    return value


def read_scenario(path, chaining=False):
    """Parse a scenario CSV into ``HourInput`` records.  ``Q0`` may be left
    blank after the first row when chaining."""
    try:
        with open(path, newline="") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise UsageError(f"cannot read scenario {path}: {exc.strerror}") from None
    if not rows or [h.strip() for h in rows[0]] != SCENARIO_HEADER:
        raise UsageError(f"line 1: header must be {','.join(SCENARIO_HEADER)}")
    hours, last = [], None
    for line, row in enumerate(rows[1:], start=2):
        if not row or all(not v.strip() for v in row):
            continue
        if len(row) != len(SCENARIO_HEADER):
            raise UsageError(f"line {line}: expected {len(SCENARIO_HEADER)} fields, got {len(row)}")
        try:
            idx = int(row[0])
        except ValueError:
            raise UsageError(f"line {line}: hour is not an integer: {row[0]!r}") from None
        if last is not None and idx <= last:
            raise UsageError(f"line {line}: hour indices must increase strictly")
        last = idx
        values = {}
        for col, text in zip(SCENARIO_HEADER[1:], row[1:]):
            if col == "Q0" and not text.strip() and chaining and hours:
                values[col] = math.nan
            else:
                values[col] = _parse_float(text, line, col)
        hours.append(HourInput(values["a"], values["b"], values["c"], values["Qz"],
                               values["Q0"], values["QT"], values["ET"]))
    if not hours:
        raise UsageError(f"{path}: no data rows")
    return hours


def read_sidecar(path):
    if path is None:
        return {}
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise UsageError(f"cannot read sidecar {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise UsageError(f"sidecar {path} line {exc.lineno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise UsageError(f"sidecar {path} must hold a JSON object")
    unknown = set(data) - SIDECAR_KEYS
    if unknown:
        raise UsageError(f"sidecar {path}: unknown keys {sorted(unknown)}")
    return data


def write_scenario(path, cfg: ScenarioConfig):
    rows = [[str(i), h.a, h.b, h.c, h.qz, h.q0, h.qt, h.energy] for i, h in enumerate(cfg.hours)]
    _write_csv(path, SCENARIO_HEADER, rows)
    sidecar = {
        "error_mean": cfg.error_model.mean,
        "error_std": cfg.error_model.std,
        "seed": int(cfg.seed),
        "t_s": cfg.t_s,
        "mode": cfg.mode.value,
        "chaining": cfg.chaining,
        "horizon": cfg.horizon,
    }
    Path(path).with_suffix(".json").write_text(json.dumps(sidecar, indent=2) + "\n")


def load_config(args):
    sidecar_path = args.sidecar
    if sidecar_path is None:
        guess = Path(args.scenario).with_suffix(".json")
        sidecar_path = guess if guess.exists() else None
    side = read_sidecar(sidecar_path)
    for key in ("seed", "t_s", "mode", "chaining"):
        override = getattr(args, key, None)
        if override is not None:
            side[key] = override
    chaining = bool(side.get("chaining", False))
    hours = read_scenario(args.scenario, chaining=chaining)
    try:
        return ScenarioConfig(
            hours=hours,
            error_model=ErrorModel(float(side.get("error_mean", 0.0)), float(side.get("error_std", 100.0))),
            seed=int(side.get("seed", 0)),
            t_s=float(side.get("t_s", 300.0)),
            mode=Mode.parse(side.get("mode", "sampled")),
            chaining=chaining,
            horizon=float(side.get("horizon", 1.0)),
        )
    except (TypeError, ValueError) as exc:
        if isinstance(exc, DispatchError) or not isinstance(exc, TypeError):
            raise UsageError(str(exc)) from None
        raise UsageError(f"sidecar: {exc}") from None


# ---------------------------------------------------------------------------
# commands


def cmd_solve_hour(args):
    if args.b is None:
        args.b = args.a
    prices, sched = _instance(args)
    if args.samples < 2:
        raise UsageError("--samples: need at least 2")
    params = solve_hour(prices, sched)
    traj = sample_dispatch(params, args.ts, args.mode)
    c_opt = optimal_cost(params).total
    c_base = base_case_cost(prices, sched).total
    c_star = discrete_cost(traj, prices)
    t = np.linspace(0.0, sched.horizon, args.samples)
    base = eval_base_power(build_base_profile(sched), t)
    rows = zip(t, eval_power(params, t), base, eval_ramp(params, t))
    _write_csv(args.out, ["t", "Q_optimal", "Q_base", "Qdot_optimal"], rows)
    summary = [
        ("regime", params.regime.name),
        ("mu", fmt(params.mu)),
        ("qdot0", fmt(params.qdot0)),
        ("omega", fmt(params.omega)),
        ("C_opt", fmt(c_opt)),
        ("C_base", fmt(c_base)),
        ("C_star", fmt(c_star)),
        ("savings", fmt(c_base - c_star)),
    ]
    prefix = "# " if args.out is None else ""
    for key, value in summary:
        print(f"{prefix}{key} = {value}")
    return EXIT_OK


def cmd_simulate(args):
    cfg = load_config(args)
    out_dir = _output_dir(args.out_dir)
    results = run_scenario(cfg)
    _write_csv(out_dir / "hours.csv", ["hour", "C_opt", "C_base", "C_star", "savings", "carried_error"],
               ([str(r.hour), r.c_opt, r.c_base, r.c_star, r.savings, r.carried] for r in results))
    curve = duration_curve([r.savings for r in results])
    _write_csv(out_dir / "duration.csv", ["rank", "savings"],
               ([str(int(h)), v] for h, v in zip(curve.hours, curve.values)))
    base = math.fsum(r.c_base for r in results)
    print(f"hours = {len(results)}")
    print(f"total_C_base = {fmt(base)}")
    print(f"total_C_star = {fmt(math.fsum(r.c_star for r in results))}")
    print(f"total_savings = {fmt(total_savings(results))}")
    return EXIT_OK


def cmd_verify(args):
    if args.b is None:
        args.b = args.a
    prices, sched = _instance(args)
    if args.steps < 8:
        raise UsageError("--steps: need at least 8")
    if not (args.threshold >= 0.0):
        raise UsageError("--threshold: must be non-negative")
    analytic = optimal_cost(solve_hour(prices, sched))
    try:
        numeric = solve_numeric(prices, sched, args.steps)
    except (NoConvergence, SingularKKT) as exc:
        print(f"error: oracle failed: {exc}", file=sys.stderr)
        return EXIT_ORACLE
    gap = compare(analytic, numeric)
    print(f"analytic_cost = {fmt(analytic.total)}")
    print(f"oracle_cost = {fmt(numeric.cost)}")
    print(f"relative_gap = {fmt(gap)}")
    return EXIT_OK if gap <= args.threshold else EXIT_GAP


def _parse_factors(text):
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise UsageError("--factors: empty factor list")
    out = []
    for p in parts:
        try:
            out.append(float(p))
        except ValueError:
            raise UsageError(f"--factors: not a number: {p!r}") from None
    return out


def cmd_sensitivity(args):
    factors = _parse_factors(args.factors)
    cfg = load_config(args)
    rows = sensitivity_sweep(cfg, factors)
    _write_csv(args.out, ["factor", "total_savings"], ([r.factor, r.total_savings] for r in rows))
    if args.out is not None:
        for r in rows:
            print(f"factor {fmt(r.factor)}: savings {fmt(r.total_savings)} "
                  f"({100.0 * r.savings_fraction:.3f}% of base)")
    return EXIT_OK


def cmd_synth(args):
    cfg = synthetic_year(args.kind, n_hours=args.hours, seed=args.seed, t_s=args.ts,
                         mode=args.mode)
    path = Path(args.out)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    elif os.environ.get(OUTPUT_DIR_ENV):
        path = _output_dir(None) / path
    write_scenario(path, cfg)
    print(f"wrote {path} and {path.with_suffix('.json')}")
    return EXIT_OK


def _mode(text):
    try:
        return Mode.parse(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"unknown mode {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(
        prog="rampdispatch",
        description="Cost-optimal sub-hourly dispatch under energy, power and ramping prices.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve-hour", help="solve one hour and print its trajectory")
    _add_instance_flags(p)
    p.add_argument("--ts", type=float, default=300.0, help="controller update interval, s")
    p.add_argument("--mode", type=_mode, default=Mode.SAMPLED, help="sampled | energy_corrected")
    p.add_argument("--samples", type=int, default=61, help="number of output rows")
    p.add_argument("--out", default=None, help="trajectory CSV path (default: stdout)")
    p.set_defaults(func=cmd_solve_hour)

    for name, func, text in (("simulate", cmd_simulate, "run a multi-hour scenario"),
                             ("sensitivity", cmd_sensitivity, "sweep the ramping price")):
        p = sub.add_parser(name, help=text)
        p.add_argument("scenario", help="scenario CSV (hour,a,b,c,Qz,Q0,QT,ET)")
        p.add_argument("--sidecar", default=None, help="JSON settings (default: scenario name with .json)")
        p.add_argument("--seed", type=int, default=None, help="override the sidecar seed")
        p.add_argument("--ts", dest="t_s", type=float, default=None, help="override the update interval, s")
        p.add_argument("--mode", type=_mode, default=None, help="override the controller mode")
        p.set_defaults(func=func)
        if name == "simulate":
            p.add_argument("--out-dir", default=None,
                           help=f"directory for hours.csv and duration.csv (default: ${OUTPUT_DIR_ENV} or .)")
        else:
            p.add_argument("--factors", required=True, help="comma-separated ramping-price factors")
            p.add_argument("--out", default=None, help="output CSV path (default: stdout)")

    p = sub.add_parser("verify", help="compare the closed form against the brute-force oracle")
    _add_instance_flags(p)
    p.add_argument("--steps", type=int, default=3600, help="oracle grid intervals")
    p.add_argument("--threshold", type=float, default=1e-3, help="largest accepted relative gap")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("synth", help="write a seeded synthetic year scenario")
    p.add_argument("--kind", choices=("high", "low"), default="high", help="renewables level")
    p.add_argument("--hours", type=int, default=8760, help="number of hours")
    p.add_argument("--seed", type=int, default=2024, help="generator seed")
    p.add_argument("--ts", type=float, default=300.0, help="controller update interval, s")
    p.add_argument("--mode", type=_mode, default=Mode.SAMPLED, help="controller mode")
    p.add_argument("--out", default="scenario.csv", help="scenario CSV path; a .json sidecar is written beside it")
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "mode", None) is not None and args.command in ("simulate", "sensitivity"):
        args.mode = args.mode.value
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except HourFailure as exc:
        print(f"error: solver failed at {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (SingularSystem, ArithmeticError) as exc:
        print(f"error: solver failed: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except (DispatchError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
