"""Catalog of initial data and bathymetry profiles.

Selectors are strings ``name`` or ``name:p1,p2,...``::

    example1                       u0 = -x exp(-x^2), psi0 = 0.02 (cos(x/2 + pi) + 1)
    example2                       compactly supported u0 on |x| < 1, same psi0
    gaussian:u_amp,psi_amp,width   u0 = -u_amp x/w exp(-(x/w)^2), psi0 = psi_amp exp(-(x/w)^2)
    zero
    file:<path>                    CSV with columns x,u,psi (one row per grid point)

Bathymetry selectors: ``zero``, ``constant:<depth>``, ``gaussian:<amp>,<width>``.
"""

from __future__ import annotations

import csv

import numpy as np

from .grid import PeriodicGrid
from .model import PhysState

INITIAL_SELECTORS = ("example1", "example2", "gaussian", "zero", "file")
THETA_SELECTORS = ("zero", "constant", "gaussian")


def split_selector(selector: str) -> tuple[str, list[str]]:
    name, _, rest = selector.strip().partition(":")
    args = [a.strip() for a in rest.split(",")] if rest else []
    return name.strip(), args


def _floats(name, args, n):
    if len(args) != n:
        raise ValueError(f"{name} takes {n} parameter(s), got {len(args)}")
    return [float(a) for a in args]


def example_psi0(x):
    return 0.02 * (np.cos(x / 2.0 + np.pi) + 1.0)


def example1_u0(x):
    return -x * np.exp(-(x**2))


def example2_u0(x):
    """``-2x/(1-x^2)^2 exp(-1/(1-x^2))`` on ``|x| < 1``, exactly zero elsewhere."""
    x = np.asarray(x, dtype=float)
    out = np.zeros_like(x)
    m = np.abs(x) < 1.0
    xm = x[m]
    q = 1.0 - xm**2
    out[m] = -2.0 * xm / q**2 * np.exp(-1.0 / q)
    return out


def read_field_csv(path: str):
    """Read ``x,u,psi`` columns; returns three arrays."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValueError(f"{path}: no data rows")
    missing = {"x", "u", "psi"} - set(rows[0])
    if missing:
        raise ValueError(f"{path}: missing column(s) {sorted(missing)}")
    return tuple(np.array([float(r[c]) for r in rows]) for c in ("x", "u", "psi"))


def initial_data(selector: str, grid: PeriodicGrid) -> PhysState:
    name, args = split_selector(selector)
    x = np.asarray(grid.x)
    if name == "example1":
        _floats(name, args, 0)
        return PhysState(grid, example1_u0(x), example_psi0(x))
    if name == "example2":
        _floats(name, args, 0)
        return PhysState(grid, example2_u0(x), example_psi0(x))
    if name == "gaussian":
        ua, pa, w = _floats(name, args, 3)
        if not w > 0:
            raise ValueError("gaussian width must be positive")
        e = np.exp(-((x / w) ** 2))
        return PhysState(grid, -ua * (x / w) * e, pa * e)
    if name == "zero":
        _floats(name, args, 0)
        return PhysState(grid, np.zeros_like(x), np.zeros_like(x))
    if name == "file":
        if len(args) != 1:
            raise ValueError("file selector needs a path: file:<path>")
        _, u, psi = read_field_csv(args[0])
        if u.size != grid.n_points:
            raise ValueError(f"{args[0]}: {u.size} rows, grid has N={grid.n_points}")
        return PhysState(grid, u, psi)
    raise ValueError(f"unknown initial data {name!r}; choose from {', '.join(INITIAL_SELECTORS)}")


def bathymetry(selector: str, grid: PeriodicGrid) -> np.ndarray:
    name, args = split_selector(selector)
    x = np.asarray(grid.x)
    if name == "zero":
        _floats(name, args, 0)
        return np.zeros_like(x)
    if name == "constant":
        (d,) = _floats(name, args, 1)
        return np.full_like(x, d)
    if name == "gaussian":
        a, w = _floats(name, args, 2)
        if not w > 0:
            raise ValueError("gaussian width must be positive")
        return a * np.exp(-((x / w) ** 2))
    raise ValueError(f"unknown theta {name!r}; choose from {', '.join(THETA_SELECTORS)}")
