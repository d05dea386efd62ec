"""Flat ``key = value`` run configuration.

Blank lines and ``#`` comments are ignored.  Keys::

    beta g L N cfl t_end ds initial theta solver out resolutions
    gradient_cap resolution_tol snapshot_stride n_max tol_l2 c0

``L`` defaults to ``2 pi`` for ``example1``/``example2``, whose
``psi0 = 0.02 (cos(x/2 + pi) + 1)`` is ``4 pi``-periodic, and to 10
otherwise.  ``resolution_tol = none`` disables the resolution guard.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields

from .initial_data import INITIAL_SELECTORS, THETA_SELECTORS, split_selector

SOLVERS = ("direct", "picard", "both")
DEFAULT_L = 10.0
EXAMPLE_L = 2.0 * math.pi


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    beta: float = 1.0
    g: float = 1.0
    L: float | None = None
    N: int = 2048
    cfl: float = 0.4
    t_end: float = 1.0
    ds: float = 1e-3
    initial: str = "example1"
    theta: str = "zero"
    solver: str = "direct"
    out: str = "out"
    resolutions: tuple = ()
    gradient_cap: float = 1e4
    resolution_tol: float | None = 1e-5
    snapshot_stride: int = 10
    n_max: int = 20
    tol_l2: float = 1e-10
    c0: float = 1.0

    def __post_init__(self):
        if self.L is None:
            name, _ = split_selector(self.initial)
            self.L = EXAMPLE_L if name in ("example1", "example2") else DEFAULT_L
        self.validate()

    def validate(self):
        if not 0.0 < self.beta <= 1.0:
            raise ConfigError("beta must lie in (0,1]")
        if not self.g > 0:
            raise ConfigError("g must be positive")
        if not self.L > 0:
            raise ConfigError("L must be positive")
        for n in (self.N, *self.resolutions):
            if n < 8 or n % 2:
                raise ConfigError(f"N must be an even integer >= 8, got {n}")
        if not 0.0 < self.cfl <= 1.0:
            raise ConfigError("cfl must lie in (0,1]")
        for k in ("t_end", "ds", "gradient_cap", "tol_l2", "c0"):
            if not getattr(self, k) > 0:
                raise ConfigError(f"{k} must be positive")
        if self.resolution_tol is not None and not self.resolution_tol > 0:
            raise ConfigError("resolution_tol must be positive or none")
        if self.snapshot_stride < 0:
            raise ConfigError("snapshot_stride must be >= 0")
        if self.n_max < 1:
            raise ConfigError("n_max must be >= 1")
        if self.solver not in SOLVERS:
            raise ConfigError(f"solver must be one of {', '.join(SOLVERS)}")
        if split_selector(self.initial)[0] not in INITIAL_SELECTORS:
            raise ConfigError(f"initial must be one of {', '.join(INITIAL_SELECTORS)}")
        if split_selector(self.theta)[0] not in THETA_SELECTORS:
            raise ConfigError(f"theta must be one of {', '.join(THETA_SELECTORS)}")

    @property
    def grid_sizes(self) -> tuple:
        return tuple(sorted(self.resolutions)) if self.resolutions else (self.N,)


def _parse_resolutions(text: str) -> tuple:
    return tuple(int(p) for p in text.replace(" ", "").split(",") if p)


def _parse_optional_float(text: str):
    return None if text.strip().lower() == "none" else float(text)


_CONVERTERS = {
    "beta": float,
    "g": float,
    "L": float,
    "N": int,
    "cfl": float,
    "t_end": float,
    "ds": float,
    "initial": str,
    "theta": str,
    "solver": str,
    "out": str,
    "resolutions": _parse_resolutions,
    "gradient_cap": float,
    "resolution_tol": _parse_optional_float,
    "snapshot_stride": int,
    "n_max": int,
    "tol_l2": float,
    "c0": float,
}
assert set(_CONVERTERS) == {f.name for f in fields(RunConfig)}


def parse_config_text(text: str, source: str = "<config>") -> RunConfig:
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key, value = key.strip(), value.strip()
        if not sep or not key:
            raise ConfigError(f"{source}:{lineno}: expected key=value, got {raw.strip()!r}")
        if key not in _CONVERTERS:
            raise ConfigError(f"{source}:{lineno}: unknown key {key!r}")
        if key in values:
            raise ConfigError(f"{source}:{lineno}: duplicate key {key!r}")
        try:
            values[key] = _CONVERTERS[key](value)
        except ValueError as exc:
            raise ConfigError(f"{source}:{lineno}: bad value for {key}: {value!r}") from exc
        values.setdefault("_lines", {})[key] = lineno
    lines = values.pop("_lines", {})
    try:
        return RunConfig(**values)
    except ConfigError as exc:
        key = str(exc).split(" ", 1)[0]
        where = f"{source}:{lines[key]}" if key in lines else source
        raise ConfigError(f"{where}: {exc}") from None


def parse_config(path) -> RunConfig:
    with open(path) as fh:
        return parse_config_text(fh.read(), str(path))


def with_overrides(config: RunConfig, **kw) -> RunConfig:
    data = {f.name: getattr(config, f.name) for f in fields(config)}
    data.update({k: v for k, v in kw.items() if v is not None})
    return RunConfig(**data)
