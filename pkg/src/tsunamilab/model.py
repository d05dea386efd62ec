"""The coupled velocity / wave-magnification system and its symmetric form.

Physical variables ``(u, psi)`` over bathymetry ``theta`` evolve (in the
rescaled time ``s``, see :mod:`tsunamilab.conformable`) by::

    u_s + u u_x + g psi_x = 0
    psi_s + ((theta + psi) u)_x = 0

With ``v = 2 sqrt(g (psi + theta))`` the pair ``U = (u, v)`` satisfies the
symmetric quasilinear system ``U_s + A(U) U_x = M`` with
``A = [[u, v/2], [v/2, u]]`` and ``M = (g theta_x, 0)``.  For ``g = 1`` this
is the familiar ``v = 2 sqrt(psi + theta)`` form.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field, replace

import numpy as np

from .grid import PeriodicGrid, check_finite, integral, linf_norm

ADMISSIBILITY_FLOOR = 1e-3


@dataclass
class PhysState:
    grid: PeriodicGrid
    u: np.ndarray
    psi: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.psi = np.asarray(self.psi, dtype=float)
        n = self.grid.n_points
        if self.u.shape != (n,) or self.psi.shape != (n,):
            raise ValueError(f"state fields must have shape ({n},)")

    def copy(self) -> "PhysState":
        return PhysState(self.grid, self.u.copy(), self.psi.copy())

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.u)) and np.all(np.isfinite(self.psi)))


@dataclass
class SymState:
    grid: PeriodicGrid
    u: np.ndarray
    v: np.ndarray

    def __post_init__(self):
        self.u = np.asarray(self.u, dtype=float)
        self.v = np.asarray(self.v, dtype=float)

    def copy(self) -> "SymState":
        return SymState(self.grid, self.u.copy(), self.v.copy())

    def stacked(self) -> np.ndarray:
        return np.stack([self.u, self.v])


@dataclass
class ModelParams:
    """``g`` (gravity), bathymetry samples ``theta`` and fractional order ``beta``."""

    theta: np.ndarray
    g: float = 1.0
    beta: float = 1.0
    theta_x: np.ndarray = field(default=None, repr=False)

    def __post_init__(self):
        self.theta = np.asarray(self.theta, dtype=float)
        check_finite(self.theta, "theta")
        if not self.g > 0:
            raise ValueError(f"g must be positive, got {self.g}")
        if not 0.0 < self.beta <= 1.0:
            raise ValueError(f"beta must lie in (0,1], got {self.beta}")

    @classmethod
    def flat(cls, grid: PeriodicGrid, depth: float = 0.0, **kw) -> "ModelParams":
        return cls(theta=np.full(grid.n_points, float(depth)), **kw)

    def with_beta(self, beta: float) -> "ModelParams":
        return replace(self, beta=beta, theta_x=self.theta_x)

    def bathymetry_slope(self, grid: PeriodicGrid) -> np.ndarray:
        if self.theta_x is None:
            self.theta_x = _ops(grid).d(self.theta)
        return self.theta_x


class _SpectralOps:
    """Per-grid tables reused by every right-hand-side evaluation."""

    def __init__(self, grid: PeriodicGrid):
        self.grid = grid
        self.ik = grid.derivative_symbol()
        self.mask = grid.dealias_mask()
        self.ik_mask = self.ik * self.mask

    def d(self, f):
        g = self.grid
        return g.ifft(g.fft(f) * self.ik)

    def truncate(self, f):
        g = self.grid
        return g.ifft(g.fft(f) * self.mask)

    def d_dealiased(self, f):
        g = self.grid
        return g.ifft(g.fft(f) * self.ik_mask)


@functools.lru_cache(maxsize=16)
def _ops(grid: PeriodicGrid) -> _SpectralOps:
    return _SpectralOps(grid)


# transforms ---------------------------------------------------------------


def symmetrize(state: PhysState, params: ModelParams) -> SymState:
    depth = state.psi + params.theta
    if np.any(depth < 0.0):
        i = int(np.argmin(depth))
        raise ValueError(
            f"psi + theta < 0 (min {depth[i]:.3e} at x={state.grid.x[i]:.6g}); "
            "symmetric variables undefined"
        )
    return SymState(state.grid, state.u.copy(), 2.0 * np.sqrt(params.g * depth))


def desymmetrize(state: SymState, params: ModelParams) -> PhysState:
    if np.any(state.v < 0.0):
        raise ValueError("v must be nonnegative")
    psi = state.v**2 / (4.0 * params.g) - params.theta
    return PhysState(state.grid, state.u.copy(), psi)


# right-hand sides ---------------------------------------------------------


def rhs_physical(state: PhysState, params: ModelParams):
    """Classical-time tendencies ``(u_s, psi_s)``.

    Fluxes are written in conservative form, ``u_s = -(u^2/2 + g psi)_x``,
    so the mean of each field is preserved to round-off; the quadratic
    products are 2/3-rule dealiased.
    """
    ops = _ops(state.grid)
    ud = ops.truncate(state.u)
    depth_d = ops.truncate(state.psi + params.theta)
    du = -ops.d_dealiased(0.5 * ud * ud) - params.g * ops.d(state.psi)
    dpsi = -ops.d_dealiased(depth_d * ud)
    return du, dpsi


def rhs_symmetric(state: SymState, params: ModelParams):
    """Tendencies ``(u_s, v_s)`` of the symmetric system."""
    ops = _ops(state.grid)
    ud = ops.truncate(state.u)
    vd = ops.truncate(state.v)
    ux = ops.d(ud)
    vx = ops.d(vd)
    du = params.g * params.bathymetry_slope(state.grid) - ops.truncate(ud * ux + 0.5 * vd * vx)
    dv = -ops.truncate(0.5 * vd * ux + ud * vx)
    return du, dv


def coefficient_matrix(state: SymState) -> np.ndarray:
    """Pointwise ``A(U)`` as an ``(N, 2, 2)`` array of symmetric matrices."""
    n = state.u.size
    a = np.empty((n, 2, 2))
    a[:, 0, 0] = state.u
    a[:, 1, 1] = state.u
    a[:, 0, 1] = 0.5 * state.v
    a[:, 1, 0] = 0.5 * state.v
    return a


def characteristic_speed(state: PhysState, params: ModelParams) -> float:
    """``max |u| + sqrt(g (psi + theta))``, the larger eigenvalue modulus of ``A``."""
    depth = np.maximum(state.psi + params.theta, 0.0)
    return float(np.max(np.abs(state.u) + np.sqrt(params.g * depth)))


def conserved_quantities(state: PhysState, params: ModelParams | None = None):
    """``(mass, momentum) = (int psi dx, int u dx)``."""
    return integral(state.psi, state.grid), integral(state.u, state.grid)


def parity_check(f: np.ndarray, grid: PeriodicGrid, kind: str) -> float:
    """``||f(x) + f(-x)||_inf`` for ``kind='odd'``, ``||f(x) - f(-x)||_inf`` for ``'even'``."""
    L = grid.half_width
    gap = np.mod(grid.reflect(np.asarray(grid.x)) + grid.x + L, 2 * L) - L
    if not np.allclose(gap, 0.0, atol=1e-12 * L):
        raise ValueError("grid is not reflection-symmetric about x = 0")
    fr = grid.reflect(np.asarray(f))
    if kind == "odd":
        return linf_norm(f + fr)
    if kind == "even":
        return linf_norm(f - fr)
    raise ValueError(f"kind must be 'odd' or 'even', got {kind!r}")
