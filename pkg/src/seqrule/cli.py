"""Command line: ``seqrule run ...`` and ``seqrule enumerate``."""

from __future__ import annotations

import argparse
import logging
import sys
import time
from pathlib import Path

from . import env
from .env import MalformedObservation
from .harness import ExperimentConfig, block_rates, emit, run_experiment, table
from .memory import CorruptStoreError
from .tokens import ContractViolation

# flag name -> (ExperimentConfig field, parser)
KEYS = {
    "cells": ("cell_counts", lambda v: [int(x) for x in str(v).split(",") if x.strip()]),
    "trials": ("trials", int),
    "episodes": ("episodes", int),
    "seed": ("seed", int),
    "decay": ("decay", float),
    "delta": ("delta", float),
    "gap-steps": ("gap_steps", int),
    "out": ("out_dir", Path),
    "trace": ("trace", lambda v: str(v).strip().lower() in ("1", "true", "yes", "on")),
    "workers": ("workers", int),
    "refresh": ("refresh", str),
    "learning": ("learning", str),
}


def read_config_file(path: Path) -> dict:
    """``key = value`` (or ``key: value``) lines using the CLI flag names; ``#`` starts a comment."""
    values = {}
    for n, raw in enumerate(Path(path).read_text().splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        sep = "=" if "=" in line else ":"
        key, _, value = line.partition(sep)
        key = key.strip().lstrip("-").replace("_", "-")
        if key not in KEYS:
            raise ValueError(f"{path}:{n}: unknown key {key!r}")
        field, parse = KEYS[key]
        values[field] = parse(value.strip())
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="seqrule", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run a cell-count sweep and write CSV/SVG results")
    run.add_argument("--config", type=Path, help="key-value file with the same keys as the flags")
    for key, (field, parse) in KEYS.items():
        if key == "trace":
            run.add_argument("--trace", action="store_const", const=True, default=None,
                             help="also write per-step traces of trial 0")
        else:
            run.add_argument(f"--{key}", dest=field, type=parse, default=None)
    run.add_argument("-q", "--quiet", action="store_true")

    sub.add_parser("enumerate", help="print the task's configuration and attention counts")
    return parser


def config_from_args(args) -> ExperimentConfig:
    values = read_config_file(args.config) if args.config else {}
    for _, (field, _) in KEYS.items():
        v = getattr(args, field)
        if v is not None:
            values[field] = v
    return ExperimentConfig(**values)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "enumerate":
        counts = env.enumerate_space()
        for k, v in counts.items():
            print(f"{k}: {v}")
        return 0

    logging.basicConfig(level=logging.WARNING if args.quiet else logging.INFO, format="%(message)s")
    try:
        config = config_from_args(args)
        if config.out_dir is None:
            raise ValueError("--out is required")
        t0 = time.perf_counter()
        log = run_experiment(config)
        rates = block_rates(log)
        paths = emit(log, rates, config)
    except (ContractViolation, CorruptStoreError, MalformedObservation, ValueError, OSError) as exc:
        print(f"seqrule: error: {exc}", file=sys.stderr)
        return 2
    if not args.quiet:
        print(table(rates))
        print(f"\n{len(log)} episodes in {time.perf_counter() - t0:.1f}s; wrote:")
        for p in paths:
            print(f"  {p}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
