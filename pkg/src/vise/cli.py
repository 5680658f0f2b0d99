"""Command-line entry point: ``vise sweep | tails | game``.

Exit codes: 0 success, 2 configuration/usage error, 3 domain error.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import logging
import math
import os
import sys

import numpy as np

from .config import load_config, parse_grid
from .distributions import DistributionSpec, Family, log_tail_heaviness
from .errors import ConfigError, DomainError
from .experiment import build_cells, cell_key, default_workers, derive_seed, run_sweep
from .voting import run_game

__all__ = ["main", "SWEEP_HEADER", "TRACE_HEADER", "format_value", "write_sweep_csv",
           "parse_zgrid", "parse_families", "tails_table"]

EXIT_OK, EXIT_CONFIG, EXIT_DOMAIN = 0, 2, 3

SWEEP_HEADER = [
    "family", "k", "mu", "sigma", "n", "c0", "steps", "mode", "strategy", "window_pct",
    "replicates", "base_seed", "aci_mean", "aci_stderr", "survival_mean", "survival_stderr",
    "accept_share",
]
TRACE_HEADER = ["step", "alive_count", "accepted", "total_increment", "min_capital", "max_capital"]
TRACE_NOTE = ("# total_increment is the proposal sum over alive agents; "
              "it is applied to capitals only when accepted=1")

DEFAULT_FAMILIES = "normal,t3,sp:2.01,sp:2.1,sp:3,sp:20,sp:200,laplace"
DEFAULT_ZGRID = "log:-2:12:141"

log = logging.getLogger("vise")


def format_value(v):
    """Render a CSV field: 9 significant digits for reals, blank for missing."""
    if v is None:
        return ""
    if isinstance(v, str):
        return v
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    v = float(v)
    if math.isnan(v):
        return "nan"
    return format(v + 0.0, ".9g")  # + 0.0 turns -0.0 into 0


def write_sweep_csv(rows, fh):
    writer = csv.writer(fh, lineterminator="\n")
    writer.writerow(SWEEP_HEADER)
    for row in rows:
        writer.writerow([format_value(getattr(row, name)) for name in SWEEP_HEADER])


def parse_zgrid(text):
    """``log:lo:hi:num`` (log10-spaced, inclusive) or any :func:`parse_grid` form."""
    text = text.strip()
    if text.startswith("log:"):
        parts = text.split(":")
        if len(parts) != 4:
            raise ValueError("log grid must be log:lo:hi:num")
        lo, hi, num = float(parts[1]), float(parts[2]), int(parts[3])
        if num < 1:
            raise ValueError("log grid needs at least one point")
        grid = np.logspace(lo, hi, num).tolist()
    else:
        grid = parse_grid(text)
    if any(z < 0 or math.isnan(z) for z in grid):
        raise ValueError("z grid values must be non-negative")
    return grid


def parse_families(text):
    """``normal,t3,laplace,sp:<k>`` into unit distribution specs."""
    specs = []
    for token in (t.strip().lower() for t in text.split(",")):
        if not token:
            continue
        if token.startswith("sp:"):
            specs.append(DistributionSpec(Family.SP, 0.0, 1.0, float(token[3:])))
        elif token in ("normal", "t3", "laplace"):
            specs.append(DistributionSpec(Family(token), 0.0, 1.0))
        else:
            raise ValueError(f"unknown family {token!r}")
    if not specs:
        raise ValueError("no families given")
    return specs


def tails_table(zgrid, specs):
    """Rows of ``z`` followed by log10 w(z) for every spec."""
    z = np.asarray(zgrid, dtype=float)
    cols = [log_tail_heaviness(s, z) / math.log(10.0) for s in specs]
    return [[zi, *(c[i] for c in cols)] for i, zi in enumerate(z)]


@contextlib.contextmanager
def _open_out(path):
    if path in (None, "-"):
        yield sys.stdout
    else:
        with open(path, "w", newline="", encoding="utf-8") as fh:
            yield fh


def cmd_sweep(args):
    config = load_config(args.config)
    if args.seed is not None:
        config.base_seed = args.seed
    rows = run_sweep(config, workers=args.workers)
    with _open_out(args.out) as fh:
        write_sweep_csv(rows, fh)
    return EXIT_OK


def cmd_tails(args):
    try:
        zgrid = parse_zgrid(args.zgrid)
    except ValueError as exc:
        raise ConfigError(f"--zgrid: {exc}") from None
    try:
        specs = parse_families(args.families)
    except DomainError:
        raise
    except ValueError as exc:
        raise ConfigError(f"--families: {exc}") from None
    with _open_out(args.out) as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["z"] + [f"log10_w_{s.label}" for s in specs])
        for row in tails_table(zgrid, specs):
            writer.writerow([format_value(v) for v in row])
    return EXIT_OK


def cmd_game(args):
    config = load_config(args.config)
    cells = build_cells(config)
    if len(cells) != 1:
        raise ConfigError(f"game needs a single-cell config (one family, mu and strategy); got {len(cells)} cells")
    cell = cells[0]
    seed = args.seed
    if seed is None:
        seed = derive_seed(config.base_seed, cell_key(cell, config.common_random_numbers), 0)

    with _open_out(args.out) as fh:
        fh.write(TRACE_NOTE + "\n")
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(TRACE_HEADER)

        def on_step(rec):
            after = rec.capitals_after
            writer.writerow([
                rec.step, rec.increments.size, int(rec.accepted), format_value(rec.increments.sum()),
                format_value(after.min()), format_value(after.max()),
            ])

        run_game(cell.dist, cell.strategy, cell.mode, cell.n, seed, on_step=on_step)
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="vise", description="Voting in a stochastic environment: Monte Carlo sweeps and tail analysis.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="run a parameter sweep and write one CSV row per cell")
    p.add_argument("--config", required=True)
    p.add_argument("--out", default="-", help="output CSV (default stdout)")
    p.add_argument("--workers", type=int, default=None, help="worker processes (default $VISE_WORKERS or CPU count)")
    p.add_argument("--seed", type=int, default=None, help="override base_seed")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("tails", help="tabulate log10 tail heaviness w(z) per family")
    p.add_argument("--zgrid", default=DEFAULT_ZGRID, help="log:lo:hi:num, start:step:stop or comma list")
    p.add_argument("--families", default=DEFAULT_FAMILIES)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_tails)

    p = sub.add_parser("game", help="play one game and write a per-step trace")
    p.add_argument("--config", required=True)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", default="-")
    p.set_defaults(func=cmd_game)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if getattr(args, "workers", 0) is None:
        try:
            args.workers = default_workers()
        except ValueError:
            print("vise: VISE_WORKERS must be an integer", file=sys.stderr)
            return EXIT_CONFIG
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"vise: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"vise: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except BrokenPipeError:
        # reader went away (e.g. piped into head); silence the flush at exit
        devnull = os.open(os.devnull, os.O_WRONLY)
        os.dup2(devnull, sys.stdout.fileno())
        return EXIT_OK
    except OSError as exc:
        print(f"vise: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
