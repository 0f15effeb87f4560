"""Command-line harness.

Subcommands: ``budget`` (noise-quanta tables), ``qnd-check`` (self-commutation
verdicts), ``simulate`` (ensemble run from a config file), ``sweep`` (grid of
runs), ``analyze`` (re-run statistics on an existing record CSV).  Exit codes:
0 success, 1 configuration/usage errors, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from itertools import product

import numpy as np

from .budget import BudgetInputs, budget_csv_rows, budget_sweep
from .config import CONFIG_KEYS, convert_config_value, default_config, load_config
from .ensemble import RECORD_CSV_HEADER, ensemble_stats, run_ensemble
from .errors import (
    ConfigError,
    DegenerateSeriesError,
    InsufficientDataError,
    NumericalFailureError,
    ParameterError,
    StateDomainError,
)
from .observables import OscillatorParams, is_qnd_sequence
from .stats import SampleSeries, energy_histogram

_BUDGET_FLAGS = (
    ("T", "temperature", 0.05),
    ("omega1", "omega1", 1e4),
    ("tau1", "tau1", 1e4),
    ("omega2", "omega2", 1e8),
    ("tau2", "tau2", 1.0),
    ("dt", "dt", 1e-2),
    ("eta_a", "amplifier_quanta", 1.0),
    ("mass", "mass", 1e-3),
)

_SWEEP_STAT_COLUMNS = ("t1_hat_K", "t1_stderr_K", "gof_p_value", "v22_slope_m2", "eta1", "eta2")


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _float_list(raw: str) -> list[float]:
    try:
        values = [float(part) for part in raw.split(",") if part.strip() != ""]
    except ValueError:
        raise _UsageError(f"expected comma-separated numbers, got {raw!r}") from None
    if not values:
        raise _UsageError(f"expected at least one number, got {raw!r}")
    return values


def _build_parser() -> _Parser:
    parser = _Parser(prog="qndsim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("budget", help="noise-quanta budget figures")
    for flag, _, default in _BUDGET_FLAGS:
        p.add_argument(f"--{flag.replace('_', '-')}", dest=flag, default=None,
                       help=f"value or comma-separated sweep values (default {default:g})")
    p.add_argument("--out", default=None, help="write the budget CSV here")
    p.set_defaults(func=_cmd_budget)

    p = sub.add_parser("qnd-check", help="self-commutation verdict for a schedule")
    p.add_argument("--observable", required=True, choices=("x1", "x2", "x", "p"))
    p.add_argument("--times", required=True, help="comma-separated measurement times [s]")
    p.add_argument("--mass", type=float, default=1e-3)
    p.add_argument("--omega1", type=float, default=1e4)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=_cmd_qnd_check)

    p = sub.add_parser("simulate", help="run an ensemble from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None, help="override the config seed")
    p.add_argument("--out", default=None, help="write the summary JSON here")
    p.add_argument("--records", default=None, help="write the per-measurement record CSV here")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="grid of runs over config fields")
    p.add_argument("--config", default=None, help="base config (defaults when omitted)")
    p.add_argument("--vary", action="append", default=[], metavar="KEY=V1,V2,...",
                   help="config key and values; repeatable, row-major in flag order")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default=None, help="write the sweep CSV here (stdout otherwise)")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("analyze", help="re-run statistics on a record CSV")
    p.add_argument("--records", required=True)
    p.add_argument("--config", default=None, help="config the records came from (defaults when omitted)")
    p.add_argument("--alpha", type=float, default=0.01, help="significance threshold for the verdict")
    p.add_argument("--out", default=None, help="write the analysis JSON here")
    p.add_argument("--histogram", default=None, help="write the energy histogram CSV here")
    p.add_argument("--bins", type=int, default=20)
    p.set_defaults(func=_cmd_analyze)
    return parser


def _cmd_budget(args) -> int:
    singles = {}
    axes = {}
    for flag, fieldname, default in _BUDGET_FLAGS:
        raw = getattr(args, flag)
        values = [default] if raw is None else _float_list(raw)
        singles[fieldname] = values[0]
        if len(values) > 1:
            axes[fieldname] = values
    pairs = budget_sweep(BudgetInputs(**singles), axes)
    if len(pairs) == 1:
        report = pairs[0][1]
        print(f"eta1={report.eta1:.4g}")
        print(f"eta2={report.eta2:.4g}")
        print(f"eta_a={report.eta_a:.4g}")
        print(f"delta_e_br_J={report.delta_e_br:.4g}")
        print(f"x_zp_m={report.x_zp:.4g}")
    lines = budget_csv_rows(pairs)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    elif len(pairs) > 1:
        for line in lines:
            print(line)
    return 0


def _cmd_qnd_check(args) -> int:
    times = _float_list(args.times)
    params = OscillatorParams(mass=args.mass, omega1=args.omega1, tau1=1.0, temperature=1.0)
    verdict = is_qnd_sequence(args.observable, times, params, tol=args.tol)
    print(f"QND: {'yes' if verdict.is_qnd else 'no'}, max violation {verdict.max_violation:.3e}")
    return 0


def _cmd_simulate(args) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        config = replace(config, seed=args.seed)
    summary = run_ensemble(config, workers=args.workers, record_path=args.records)
    text = summary.to_json()
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    print(text)
    print(f"wall_time_s={summary.wall_time_s:.3f}", file=sys.stderr)
    return 0


def _cmd_sweep(args) -> int:
    base = load_config(args.config) if args.config is not None else default_config()
    if args.seed is not None:
        base = replace(base, seed=args.seed)
    keys = []
    value_lists = []
    for item in args.vary:
        key, sep, raw = item.partition("=")
        key = key.strip()
        if not sep or key not in CONFIG_KEYS:
            raise ConfigError(f"--vary expects KEY=V1,V2 with a config key, got {item!r}")
        values = [convert_config_value(key, part.strip()) for part in raw.split(",") if part.strip()]
        if not values:
            raise ConfigError(f"--vary {key} needs at least one value")
        keys.append(key)
        value_lists.append(values)
    lines = [",".join(list(keys) + list(_SWEEP_STAT_COLUMNS))]
    for combo in product(*value_lists) if keys else [()]:
        point = replace(base, **dict(zip(keys, combo))) if keys else base
        summary = run_ensemble(point, workers=args.workers)
        cells = [_format_cell(value) for value in combo]
        stats = summary.to_dict()
        cells += [_format_cell(stats[column]) for column in _SWEEP_STAT_COLUMNS]
        lines.append(",".join(cells))
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    else:
        for line in lines:
            print(line)
    return 0


def _format_cell(value) -> str:
    if value is None:
        return "nan"
    if isinstance(value, float):
        return f"{value:.17g}"
    return str(value)


def _read_records(path: str):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read records {path!r}: {exc}") from None
    if not lines or lines[0] != RECORD_CSV_HEADER:
        raise ConfigError(f"{path!r} is not a record CSV (bad header)")
    finals: dict[int, tuple[int, float, float]] = {}
    v22_sums: dict[int, float] = {}
    v22_counts: dict[int, int] = {}
    for line in lines[1:]:
        if not line:
            continue
        parts = line.split(",")
        if len(parts) != 8:
            raise ConfigError(f"malformed record row: {line!r}")
        traj = int(parts[0])
        step = int(parts[1])
        mean1 = float(parts[4])
        mean2 = float(parts[5])
        v22 = float(parts[7])
        prev = finals.get(traj)
        if prev is None or step > prev[0]:
            finals[traj] = (step, mean1, mean2)
        v22_sums[step] = v22_sums.get(step, 0.0) + v22
        v22_counts[step] = v22_counts.get(step, 0) + 1
    if not finals:
        raise ConfigError(f"{path!r} contains no record rows")
    x1 = np.array([finals[traj][1] for traj in sorted(finals)])
    steps = sorted(v22_sums)
    v22_trace = np.array([v22_sums[s] / v22_counts[s] for s in steps])
    return x1, v22_trace


def _cmd_analyze(args) -> int:
    config = load_config(args.config) if args.config is not None else default_config()
    x1, v22_trace = _read_records(args.records)
    t1_hat, t1_stderr, gof_p, slope = ensemble_stats(x1, v22_trace, config)
    out = {
        "n_traj": len(x1),
        "n_meas": len(v22_trace),
        "t1_hat_K": t1_hat,
        "t1_stderr_K": t1_stderr,
        "gof_p_value": gof_p,
        "v22_slope_m2": slope,
        "alpha": args.alpha,
    }
    text = json.dumps(out)
    if args.out is not None:
        with open(args.out, "w", encoding="utf-8") as handle:
            handle.write(text + "\n")
    print(text)
    if gof_p is None:
        print("boltzmann: undetermined (too few trajectories)")
    elif gof_p < args.alpha:
        print(f"boltzmann: deviation detected (p={gof_p:.6g} < alpha={args.alpha:g})")
    else:
        print(f"boltzmann: consistent (p={gof_p:.6g} >= alpha={args.alpha:g})")
    if args.histogram is not None:
        series = SampleSeries(x1, "x1")
        hist = energy_histogram(series, config.oscillator(), args.bins)
        lines = ["e_lo_J,e_hi_J,count,model_density_per_J"]
        for i in range(len(hist.counts)):
            lines.append(
                f"{hist.bin_edges[i]:.17g},{hist.bin_edges[i + 1]:.17g},"
                f"{int(hist.counts[i])},{hist.model_density[i]:.17g}"
            )
        with open(args.histogram, "w", encoding="utf-8") as handle:
            handle.write("\n".join(lines) + "\n")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        parser.print_usage(sys.stderr)
        return 1
    except SystemExit as exc:  # argparse -h/--help
        return int(exc.code or 0)
    try:
        return args.func(args)
    except _UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ConfigError, ParameterError, StateDomainError, InsufficientDataError, DegenerateSeriesError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalFailureError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    raise SystemExit(main())
