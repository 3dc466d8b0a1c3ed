"""
Command-line entry point.

    noisylearn identify-pauli --n 2,3 --lambda 0,0.1 --trials 200 --seed 42
    noisylearn happy --R 4 --r 1 --erasure-rate 0.0167 --trials 10000 --out bh.csv
    noisylearn run --config sweep.cfg --workers 8

The summary table goes to stdout (and next to ``--out`` when given, as
``<stem>.summary<suffix>``); ``--out`` receives one row per trial.

Exit status: 0 when the invoked suite's checks pass, 1 when any fails,
2 on a usage or configuration error.
"""
from __future__ import annotations

import argparse
import sys

from ..errors import CapacityError, DomainError
from .config import SIMON_MODES, TASKS, ConfigError, parse_config, read_config_file
from .emit import emit, render, summary_path
from .runner import TASK_DEFS, run_sweep, summary_fields

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

TASK_FLAGS = {
    "identify-pauli": ("n", "lambda", "T", "C", "arm"),
    "bell-sample": ("n", "lambda", "T", "pauli"),
    "shadows": ("n", "lambda", "N", "pauli", "eps"),
    "purity": ("n", "lambda", "T"),
    "happy": ("R", "r", "erasure_rate", "swap_reps"),
    "simon": ("n", "lambda", "queries", "mode", "depth"),
    "verify-lemmas": ("n", "lambda"),
}
ALL_FLAGS = ("task", "n", "lambda", "T", "C", "arm", "pauli", "N", "eps", "R", "r", "erasure_rate",
             "swap_reps", "queries", "mode", "depth")
HELP = {
    "n": "qubit counts, comma-separated", "lambda": "depolarizing strengths, comma-separated",
    "T": "samples or tests per trial (identify-pauli defaults to ceil(C n (1-lam)^-4n))",
    "C": "sample-budget constant (default 8)", "arm": "hypotheses to test: both, H0 or H1",
    "pauli": "fixed Pauli label instead of a random one", "N": "shadow snapshots per trial",
    "eps": "accepted shadow error", "R": "outer radii", "r": "inner radii", "erasure_rate": "erasure rates",
    "swap_reps": "SWAP tests per trial", "queries": "Simon queries per trial", "depth": "oracle calls per circuit",
    "mode": "recover or tv", "task": "task to run",
}


def _add_global(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("global options")
    g.add_argument("--config", help="flat key = value file; flags override it")
    g.add_argument("--seed", help="master seed (64-bit)")
    g.add_argument("--out", help="per-trial output file")
    g.add_argument("--format", help="csv or json-lines")
    g.add_argument("--workers", help="worker processes")
    g.add_argument("--trials", help="trials per grid point (Haar states for verify-lemmas)")
    g.add_argument("--min-success", dest="min_success", help="fail unless every grid point reaches this rate")
    g.add_argument("--timing", action="store_const", const="true", help="record wall-clock time per trial")


def _add_keys(p: argparse.ArgumentParser, keys) -> None:
    for key in keys:
        flag = "--" + key.replace("_", "-")
        kwargs = {"dest": key, "help": HELP[key]}
        if key == "task":
            kwargs["choices"] = TASKS
        if key == "mode":
            kwargs["choices"] = SIMON_MODES
        p.add_argument(flag, **kwargs)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="noisylearn", description="Noisy quantum learning experiments.")
    sub = parser.add_subparsers(dest="command", required=True)
    for task, keys in TASK_FLAGS.items():
        p = sub.add_parser(task, help=f"run the {task} sweep")
        _add_keys(p, keys)
        _add_global(p)
    p = sub.add_parser("run", help="run the task named in --task or the config file")
    _add_keys(p, ALL_FLAGS)
    _add_global(p)
    return parser


def config_from_args(args: argparse.Namespace):
    file_values = read_config_file(args.config) if args.config else {}
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config") and v is not None}
    if args.command != "run":
        if file_values.get("task", args.command) != args.command:
            raise ConfigError(f"config file names task {file_values['task']!r} but the subcommand is {args.command!r}")
        flags["task"] = args.command
    return parse_config(file_values, flags)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_USAGE
    try:
        cfg = config_from_args(args)
        result = run_sweep(cfg)
    except (ConfigError, DomainError, CapacityError, KeyError, OSError) as exc:
        print(f"noisylearn: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    fields = summary_fields(cfg.task)
    if cfg.out:
        try:
            emit([r.to_row() for r in result.reports], TASK_DEFS[cfg.task].trial_fields(), cfg.format, cfg.out)
            emit(result.summary, fields, cfg.format, summary_path(cfg.out))
        except OSError as exc:
            print(f"noisylearn: error: {exc}", file=sys.stderr)
            return EXIT_USAGE
    sys.stdout.write(render(result.summary, fields, cfg.format))
    ok = result.passed()
    print("PASS" if ok else "FAIL", file=sys.stderr)
    return EXIT_OK if ok else EXIT_FAIL
