"""Command-line interface.

Subcommands
-----------
solve    steady-state branches at the configured operating point
sweep    run the configured 1-D sweep (direction "both" ramps hysteresis)
preset   run a canned figure campaign over the built-in device
folds    locate branch-count changes inside the configured sweep interval

Exit codes: 0 success, 2 configuration problem, 3 numerical failure,
4 I/O failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import os
import sys

from .config import parse_config
from .continuation import hysteresis_sweep, locate_folds, sweep_1d
from .errors import (ClassificationError, ConfigError, IntegrationError,
                     ParameterError, PolynomialError, SolverError, SweepError)
from .figures import FIGURE_PRESETS, run_preset
from .io import FORMATS, branch_row, labeled_rows, write_rows, write_summary
from .stability import solve_and_classify
from .steady import SolverOptions

_NUMERIC_ERRORS = (PolynomialError, SolverError, ClassificationError,
                   IntegrationError, SweepError)


def _add_common(sub, *, config_required=True):
    sub.add_argument("--config", required=config_required,
                     help="path to a run configuration document")
    sub.add_argument("--out", default=None,
                     help="output path (default: stdout)")
    sub.add_argument("--format", default=None, choices=FORMATS,
                     help="record format (default: config output.format)")
    sub.add_argument("--sign", default=None, choices=("plus", "minus"),
                     help="override flags.sign_convention")
    sub.add_argument("--kappa2", default=None, choices=("angular", "literal"),
                     help="override flags.kappa2_interpretation")
    sub.add_argument("--threads", type=int, default=None,
                     help="worker processes for sweeps (default: all cores)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twomode",
        description="steady-state branches, stability, and hysteresis of a "
                    "two-mode optomechanical cavity")
    subs = parser.add_subparsers(dest="command", required=True)

    solve = subs.add_parser("solve", help="branches at one operating point")
    _add_common(solve)

    sweep = subs.add_parser("sweep", help="run the configured sweep")
    _add_common(sweep)

    preset = subs.add_parser("preset", help="run a canned figure campaign")
    preset.add_argument("name", choices=FIGURE_PRESETS)
    _add_common(preset, config_required=False)
    preset.add_argument("--points", type=int, default=400,
                        help="samples per trace (default 400)")

    folds = subs.add_parser("folds",
                            help="locate branch-count changes on the sweep "
                                 "interval")
    _add_common(folds)
    folds.add_argument("--samples", type=int, default=1024,
                       help="coarse scan resolution (default 1024)")
    return parser


def _load_config(args):
    with open(args.config) as fh:
        text = fh.read()
    return parse_config(text, sign_convention=args.sign,
                        kappa2_interpretation=args.kappa2)


def _threads(args) -> int:
    if args.threads is not None:
        if args.threads < 1:
            raise ParameterError("--threads must be >= 1")
        return args.threads
    return os.cpu_count() or 1


def _out_and_format(args, config):
    out = args.out if args.out is not None else (
        config.out_path if config is not None else None)
    fmt = args.format if args.format is not None else (
        config.out_format if config is not None else "csv")
    return out, fmt


def _cmd_solve(args) -> int:
    config = _load_config(args)
    branches, diagnostics = solve_and_classify(config.params, config.drive,
                                               config.options)
    out, fmt = _out_and_format(args, config)
    if out is None and args.format is None:
        d = config.drive
        print(f"operating point: delta1={d.delta1!r} delta2={d.delta2!r} "
              f"power_l={d.power_l!r} power_r={d.power_r!r}")
        for i, b in enumerate(branches):
            print(f"branch {i}: q_s={b.q_s!r} n_p1={b.n_p1!r} "
                  f"n_p2={b.n_p2!r} {b.verdict.name} "
                  f"max_re_eig={b.max_re_eig!r}")
        for note in diagnostics:
            print(f"note: {note}")
        return 0
    rows = [branch_row(0.0, i, b) for i, b in enumerate(branches)]
    write_rows({"grid": rows}, fmt, out)
    return 0


def _cmd_sweep(args) -> int:
    config = _load_config(args)
    if config.sweep is None:
        raise ConfigError("this run needs a sweep.* section")
    threads = _threads(args)
    if config.sweep.direction == "both":
        result = hysteresis_sweep(config.params, config.sweep,
                                  config.options, threads=threads)
    else:
        result = sweep_1d(config.params, config.sweep, config.options,
                          threads=threads)
    out, fmt = _out_and_format(args, config)
    rows = labeled_rows(result)
    write_rows(rows, fmt, out)
    if out is not None:
        summary_path = write_summary({"sweep": result}, out)
        print(f"wrote {len(rows)} trace(s) to {out}; summary: {summary_path}")
    return 0


def _cmd_preset(args) -> int:
    config = _load_config(args) if args.config else None
    kappa2 = args.kappa2 or (config.kappa2_interpretation if config
                             else "angular")
    amp = config.amp_convention if config else "literal"
    options = config.options if config else None
    if args.sign is not None:
        base = options if options is not None else SolverOptions()
        options = dataclasses.replace(base, sign=1 if args.sign == "plus" else -1)
    results = run_preset(args.name, kappa2_interpretation=kappa2,
                         amp_convention=amp, options=options,
                         points=args.points, threads=_threads(args))
    out, fmt = _out_and_format(args, config)
    rows = {}
    for label, result in results.items():
        for inner_label, inner_rows in labeled_rows(result).items():
            key = label if inner_label == "grid" else f"{label}_{inner_label}"
            rows[key] = inner_rows
    write_rows(rows, fmt, out)
    if out is not None:
        summary_path = write_summary(results, out)
        print(f"wrote {len(rows)} trace(s); summary: {summary_path}")
    return 0


def _cmd_folds(args) -> int:
    config = _load_config(args)
    if config.sweep is None:
        raise ConfigError("fold location needs a sweep.* section as the "
                          "search interval")
    spec = config.sweep
    folds = locate_folds(config.params, spec.drive, spec.axis,
                         spec.start, spec.stop, config.options,
                         samples=args.samples)
    if folds:
        lines = [f"fold {spec.axis} = {v!r}" for v in folds]
    else:
        lines = [f"no folds on {spec.axis} in [{spec.start!r}, {spec.stop!r}]"]
    text = "\n".join(lines) + "\n"
    out, _ = _out_and_format(args, config)
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
        print(f"wrote fold list to {out}")
    return 0


_COMMANDS = {
    "solve": _cmd_solve,
    "sweep": _cmd_sweep,
    "preset": _cmd_preset,
    "folds": _cmd_folds,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (ConfigError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o failure: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
