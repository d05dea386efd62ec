"""Command-line entry point: ``run``, ``norms`` and ``bounds``."""

from __future__ import annotations

import argparse
import logging
import sys

import numpy as np

from .config import ConfigError, parse_config, with_overrides
from .conformable import lifespan_estimate, riccati_blowup_bounds
from .experiments import fmt, run_experiment
from .grid import PeriodicGrid
from .initial_data import read_field_csv
from .littlewood_paley import besov_norm


def _resolutions(text: str) -> tuple:
    try:
        return tuple(int(p) for p in text.split(",") if p.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")


def _r_value(text: str):
    if text in ("inf", "infinity"):
        return np.inf
    if text == "1":
        return 1
    raise argparse.ArgumentTypeError("r must be 1 or inf")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tsunamilab", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="run an experiment from a config file")
    run.add_argument("config")
    run.add_argument("--out", help="output directory (overrides the config)")
    run.add_argument("--resolutions", type=_resolutions, help="e.g. 1024,2048,4096")

    norms = sub.add_parser("norms", help="Besov norm of the fields in a x,u,psi CSV")
    norms.add_argument("field_csv")
    norms.add_argument("--s", type=float, default=1.5)
    norms.add_argument("--r", type=_r_value, default=1)

    bounds = sub.add_parser("bounds", help="Riccati blow-up bounds and lifespan gate")
    bounds.add_argument("--u0x", type=float, required=True)
    bounds.add_argument("--beta", type=float, required=True)
    bounds.add_argument("--norm-u0", type=float)
    bounds.add_argument("--norm-theta", type=float, default=0.0)
    bounds.add_argument("--c0", type=float, default=1.0)
    return p


def _grid_from_x(x: np.ndarray) -> PeriodicGrid:
    n = x.size
    dx = float(np.mean(np.diff(x)))
    grid = PeriodicGrid(n * dx / 2.0, n)
    if not np.allclose(grid.x, x, atol=1e-9 * grid.half_width):
        raise ValueError("x column is not a periodic grid x_i = -L + i dx")
    return grid


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "run":
            cfg = with_overrides(parse_config(args.config), out=args.out, resolutions=args.resolutions)
            return run_experiment(cfg)
        if args.command == "norms":
            x, u, psi = read_field_csv(args.field_csv)
            grid = _grid_from_x(x)
            for name, f in (("u", u), ("psi", psi)):
                print(f"{name},{fmt(besov_norm(f, grid, args.s, args.r))}")
            print(f"U,{fmt(besov_norm([u, psi], grid, args.s, args.r))}")
            return 0
        if args.command == "bounds":
            t_paper, t_sharp = riccati_blowup_bounds(args.u0x, args.beta)
            print(f"T_paper,{fmt(t_paper)}")
            print(f"T_sharp,{fmt(t_sharp)}")
            if args.norm_u0 is not None:
                gate = lifespan_estimate(args.norm_u0, args.norm_theta, args.beta, args.c0)
                print(f"lifespan_gate,{fmt(gate)}")
            return 0
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 1


if __name__ == "__main__":
    sys.exit(main())
