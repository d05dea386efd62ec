"""Dyadic Littlewood-Paley blocks, low-frequency cut-offs and Besov norms.

The ball multiplier ``chi`` equals 1 on ``|xi| <= 3/4`` and 0 on
``|xi| >= 4/3``; in between it is the C-infinity smooth step built from
``h(t) = exp(-1/t)``::

    step(t) = h(t) / (h(t) + h(1 - t)),   chi(xi) = 1 - step((|xi| - 3/4) / (4/3 - 3/4))

and the annulus multiplier is ``phi(xi) = chi(xi/2) - chi(xi)``, supported in
``3/4 <= |xi| <= 8/3``.  The sum ``chi + sum_{j<=J} phi(2^-j .)`` telescopes
to ``chi(2^-(J+1) .)``, which is exactly 1 on the resolved band once
``(3/4) 2^(J+1) >= k_max``.  Any other pair with the same supports gives an
equivalent (not equal) Besov norm.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .grid import PeriodicGrid, check_finite, l2_norm

BALL_INNER = 3.0 / 4.0
BALL_OUTER = 4.0 / 3.0
ANNULUS_INNER = 3.0 / 4.0
ANNULUS_OUTER = 8.0 / 3.0


def _smooth_step(t: np.ndarray) -> np.ndarray:
    """0 for t <= 0, 1 for t >= 1, C-infinity in between."""
    t = np.asarray(t, dtype=float)
    out = np.zeros_like(t)
    out[t >= 1.0] = 1.0
    mid = (t > 0.0) & (t < 1.0)
    tm = t[mid]
    a = np.exp(-1.0 / tm)
    b = np.exp(-1.0 / (1.0 - tm))
    out[mid] = a / (a + b)
    return out


def chi(xi) -> np.ndarray:
    """Ball multiplier, radial in ``xi``."""
    r = np.abs(np.asarray(xi, dtype=float))
    return 1.0 - _smooth_step((r - BALL_INNER) / (BALL_OUTER - BALL_INNER))


def phi(xi) -> np.ndarray:
    """Annulus multiplier ``chi(xi/2) - chi(xi)``."""
    xi = np.asarray(xi, dtype=float)
    return chi(0.5 * xi) - chi(xi)


def top_block_index(grid: PeriodicGrid) -> int:
    """Smallest ``j >= 0`` with ``(3/4) 2^j >= k_max``.

    ``S_j`` is the identity on the grid for every ``j`` at or above this
    index, and blocks beyond it vanish identically.
    """
    j = 0
    while ANNULUS_INNER * 2.0**j < grid.k_max:
        j += 1
    return j


@dataclass(frozen=True)
class DyadicPartition:
    """Tabulated multipliers on a grid's rfft wavenumbers.

    ``tables[0]`` is ``chi``; ``tables[j + 1]`` is ``phi(2^-j k)`` for
    ``j = 0..j_max``.
    """

    grid: PeriodicGrid
    j_max: int
    tables: np.ndarray

    @property
    def indices(self) -> range:
        return range(-1, self.j_max + 1)

    def multiplier(self, j: int) -> np.ndarray:
        if not -1 <= j <= self.j_max:
            return np.zeros_like(self.tables[0])
        return self.tables[j + 1]


@functools.lru_cache(maxsize=32)
def build_dyadic_partition(grid: PeriodicGrid) -> DyadicPartition:
    j_max = top_block_index(grid)
    if j_max < 1:
        raise ValueError(
            f"grid too coarse for a dyadic decomposition: k_max={grid.k_max:.3g} "
            f"gives j_max={j_max} < 1"
        )
    k = np.asarray(grid.k)
    tables = np.empty((j_max + 2, k.size))
    tables[0] = chi(k)
    for j in range(j_max + 1):
        tables[j + 1] = phi(k / 2.0**j)
    tables.setflags(write=False)
    return DyadicPartition(grid=grid, j_max=j_max, tables=tables)


@dataclass
class LPDecomposition:
    """Real-space blocks ``blocks[j + 1] = Delta_j f`` for ``j = -1..j_max``."""

    partition: DyadicPartition
    blocks: np.ndarray

    @property
    def j_min(self) -> int:
        return -1

    @property
    def j_max(self) -> int:
        return self.partition.j_max

    def block(self, j: int) -> np.ndarray:
        return self.blocks[j + 1]

    def reconstruct(self) -> np.ndarray:
        return self.blocks.sum(axis=0)

    def block_l2(self) -> np.ndarray:
        g = self.partition.grid
        return np.array([l2_norm(b, g) for b in self.blocks])


def lp_decompose(f: np.ndarray, grid: PeriodicGrid) -> LPDecomposition:
    f = np.asarray(f, dtype=float)
    check_finite(f)
    part = build_dyadic_partition(grid)
    fh = grid.fft(f)
    blocks = np.stack([grid.ifft(fh * t) for t in part.tables])
    return LPDecomposition(partition=part, blocks=blocks)


def low_freq_truncate(f: np.ndarray, grid: PeriodicGrid, j: int) -> np.ndarray:
    """``S_j f = chi(2^-j D) f``, i.e. the sum of blocks below ``j``."""
    if j < 0:
        raise ValueError(f"S_j needs j >= 0, got {j}")
    return grid.apply_multiplier(np.asarray(f, dtype=float), chi(np.asarray(grid.k) / 2.0**j))


def _rfft_energy_weights(n_points: int) -> np.ndarray:
    # Parseval weights for the half spectrum: interior modes count twice.
    w = np.full(n_points // 2 + 1, 2.0)
    w[0] = 1.0
    w[-1] = 1.0
    return w


def block_l2_norms(f: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """``||Delta_j f||_{L2}`` for ``j = -1..j_max`` straight from the spectrum."""
    part = build_dyadic_partition(grid)
    fh = grid.fft(np.asarray(f, dtype=float))
    w = _rfft_energy_weights(grid.n_points) * np.abs(fh) ** 2
    energies = (part.tables**2) @ w
    return np.sqrt(energies * grid.dx / grid.n_points)


def besov_norm(f, grid: PeriodicGrid, s: float, r: float = 1) -> float:
    """Inhomogeneous ``B^s_{2,r}`` norm for ``r`` in ``{1, inf}``.

    ``f`` may be a single field or a sequence of fields (a vector state),
    in which case the per-block L2 norms are added before weighting.
    """
    fields = [f] if np.ndim(f) == 1 else list(f)
    for g in fields:
        check_finite(np.asarray(g))
    norms = sum(block_l2_norms(g, grid) for g in fields)
    part = build_dyadic_partition(grid)
    weights = 2.0 ** (s * np.array(part.indices, dtype=float))
    terms = weights * norms
    if r == 1:
        return float(terms.sum())
    if r == np.inf or r == "inf":
        return float(terms.max())
    raise ValueError(f"r must be 1 or inf, got {r!r}")


def sobolev_norm(f, grid: PeriodicGrid, s: float) -> float:
    """``H^s`` norm with weight ``(1 + k^2)^(s/2)``."""
    fields: Sequence = [f] if np.ndim(f) == 1 else list(f)
    total = 0.0
    w = _rfft_energy_weights(grid.n_points) * (1.0 + np.asarray(grid.k) ** 2) ** s
    for g in fields:
        fh = grid.fft(np.asarray(g, dtype=float))
        total += float(w @ np.abs(fh) ** 2) * grid.dx / grid.n_points
    return float(np.sqrt(total))
