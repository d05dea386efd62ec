"""Run orchestration and CSV output.

Output layout under ``config.out``::

    series.csv            t, s, min_ux, argmin_x, linf_ux, linf_psix, mass, momentum,
                          criterion_integral   (finest resolution)
    snapshots/NNNN.csv    x, u, psi            (finest resolution)
    report.csv            section, key, value

Numbers are written with 17 significant digits, so a rerun of the same
config reproduces the files bit for bit.
"""

from __future__ import annotations

import csv
import logging
import os
from pathlib import Path

import numpy as np

from .config import RunConfig
from .conformable import time_forward_map
from .grid import PeriodicGrid
from .initial_data import bathymetry, initial_data
from .littlewood_paley import besov_norm
from .model import ModelParams, _ops, symmetrize
from .monitor import criterion_integral, detect_blowup
from .solver_direct import RECORD_COLUMNS, StepperConfig, simulate
from .solver_picard import PicardConfig, picard_solve, uniform_bound_check

log = logging.getLogger(__name__)

SERIES_COLUMNS = RECORD_COLUMNS + ("criterion_integral",)
SNAPSHOT_COLUMNS = ("x", "u", "psi")
REPORT_COLUMNS = ("section", "key", "value")


def fmt(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.17g}"
    return str(v)


def _write(path: Path, header, rows):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for r in rows:
            w.writerow([fmt(v) for v in r])


def stepper_config(config: RunConfig) -> StepperConfig:
    return StepperConfig(
        ds=config.ds,
        cfl=config.cfl,
        t_end=config.t_end,
        snapshot_stride=config.snapshot_stride,
        gradient_cap=config.gradient_cap,
        resolution_tol=config.resolution_tol,
    )


def setup(config: RunConfig, n_points: int):
    grid = PeriodicGrid(config.L, n_points)
    theta = bathymetry(config.theta, grid)
    params = ModelParams(theta=theta, g=config.g, beta=config.beta)
    return grid, initial_data(config.initial, grid), params


def write_series(path: Path, traj):
    cols = [traj.series(c) for c in RECORD_COLUMNS]
    cols.append(criterion_integral(traj).values)
    _write(path, SERIES_COLUMNS, zip(*cols))


def write_snapshots(directory: Path, traj):
    directory.mkdir(parents=True, exist_ok=True)
    for i, snap in enumerate(traj.snapshots):
        st = snap.state
        _write(directory / f"{i:04d}.csv", SNAPSHOT_COLUMNS, zip(st.grid.x, st.u, st.psi))


def _u0x_at_origin(state) -> float:
    ux = _ops(state.grid).d(state.u)
    i = int(np.argmin(np.abs(state.grid.x)))
    return float(ux[i])


def run_direct(config: RunConfig):
    trajs = []
    for n in config.grid_sizes:
        grid, init, params = setup(config, n)
        log.info("direct run N=%d beta=%g", n, config.beta)
        trajs.append(simulate(init, params, stepper_config(config)))
    grid, init, params = setup(config, config.grid_sizes[-1])
    u0x = _u0x_at_origin(init)
    try:
        norm_u0 = besov_norm(list(symmetrize(init, params).stacked()), grid, 1.5, 1)
    except ValueError:
        norm_u0 = None  # vacuum below the bathymetry; gate undefined
    report = detect_blowup(
        trajs, params.theta, config.g,
        u0x_at_x0=u0x if u0x < 0 else None,
        norm_u0=norm_u0,
        norm_theta=besov_norm(params.theta, grid, 1.5, 1),
        c0=config.c0,
    )
    return trajs, report


def run_picard(config: RunConfig):
    grid, init, params = setup(config, config.grid_sizes[-1])
    sym = symmetrize(init, params)
    pc = PicardConfig(
        n_max=config.n_max,
        tol_l2=config.tol_l2,
        T=time_forward_map(config.t_end, config.beta),
        inner=stepper_config(config),
        c0=config.c0,
    )
    traj, rep = picard_solve(sym, params, pc)
    ok, margin = uniform_bound_check(
        rep, besov_norm(list(sym.stacked()), grid, 1.5, 1),
        besov_norm(params.theta, grid, 1.5, 1), config.c0,
    )
    return traj, rep, ok, margin


def run_experiment(config: RunConfig) -> int:
    out = Path(config.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {out}: {exc}") from exc
    if not os.access(out, os.W_OK):
        raise OSError(f"output directory {out} is not writable")

    rows = []
    if config.solver in ("direct", "both"):
        trajs, report = run_direct(config)
        finest = trajs[-1]
        write_series(out / "series.csv", finest)
        write_snapshots(out / "snapshots", finest)
        rows += [("blowup", k, v) for k, v in report.as_row().items()]
        for tr, n in zip(trajs, config.grid_sizes):
            rows.append((f"run_N{n}", "truncated", tr.truncated))
            rows.append((f"run_N{n}", "reason", tr.reason))
        for est in report.per_resolution:
            sec = f"estimate_N{est.n_points}"
            rows += [(sec, "t_star", est.t_star), (sec, "s_star", est.s_star), (sec, "x_star", est.x_star)]
    if config.solver in ("picard", "both"):
        _, rep, ok, margin = run_picard(config)
        rows += [
            ("picard", "verdict", rep.verdict),
            ("picard", "iterations", rep.iterations),
            ("picard", "residual", rep.residual),
            ("picard", "uniform_bound", ok),
            ("picard", "uniform_bound_margin", margin),
        ]
        for r in rep.rows():
            sec = f"picard_iteration_{r['iteration']}"
            rows += [(sec, k, r[k]) for k in ("besov_sup", "increment", "data_tail")]
    _write(out / "report.csv", REPORT_COLUMNS, rows)
    return 0
