"""Successive linearisation of the symmetric system.

Starting from ``U^0 = 0``, each iterate solves the linear symmetric
transport problem

    U^{n+1}_s + A(U^n) U^{n+1}_x = M,     U^{n+1}(0) = S_{n+1} U_0

with the coefficients frozen along the previous iterate's trajectory.
The report tracks the quantities that drive the existence argument:
sup-in-time ``B^{3/2}_{2,1}`` norms of the iterates, the Cauchy increments
``V_{n+1} = sup_s ||U^{n+1} - U^n||_{L2}`` and the data tails
``||Delta_n U_0||_{L2}``.  Everything runs in rescaled time ``s``.
"""

from __future__ import annotations

import logging
import warnings
from dataclasses import dataclass, field

import numpy as np

from .conformable import lifespan_estimate
from .grid import PeriodicGrid, l2_norm
from .littlewood_paley import besov_norm, block_l2_norms, low_freq_truncate
from .model import ModelParams, SymState, _ops, rhs_symmetric
from .solver_direct import StepperConfig

log = logging.getLogger(__name__)


class LifespanWarning(UserWarning):
    pass


@dataclass
class PicardConfig:
    """``T`` is the horizon in rescaled time; ``inner.ds`` the fixed linear step."""

    n_max: int = 20
    tol_l2: float = 1e-10
    T: float = 0.1
    inner: StepperConfig = field(default_factory=lambda: StepperConfig(ds=1e-3, t_end=1.0))
    c0: float = 1.0

    def __post_init__(self):
        if self.n_max < 1:
            raise ValueError("n_max must be >= 1")
        if not self.tol_l2 > 0:
            raise ValueError("tol_l2 must be positive")
        if not self.T > 0:
            raise ValueError("T must be positive")


@dataclass
class SymTrajectory:
    """Symmetric-variable states on a fixed ``s`` grid."""

    grid: PeriodicGrid
    s: np.ndarray
    u: np.ndarray  # shape (n_times, N)
    v: np.ndarray

    def state(self, i: int) -> SymState:
        return SymState(self.grid, self.u[i], self.v[i])

    def at(self, s: float):
        """Linear interpolation in ``s`` between stored states."""
        if s <= self.s[0]:
            return self.u[0], self.v[0]
        if s >= self.s[-1]:
            return self.u[-1], self.v[-1]
        i = int(np.searchsorted(self.s, s)) - 1
        a = (s - self.s[i]) / (self.s[i + 1] - self.s[i])
        return (1 - a) * self.u[i] + a * self.u[i + 1], (1 - a) * self.v[i] + a * self.v[i + 1]

    @classmethod
    def constant(cls, grid, s, u, v):
        n = len(s)
        return cls(grid, np.asarray(s), np.tile(u, (n, 1)), np.tile(v, (n, 1)))


@dataclass
class IterationReport:
    besov_sup: list = field(default_factory=list)
    increments: list = field(default_factory=list)
    data_tails: list = field(default_factory=list)
    converged: bool = False
    iterations: int = 0
    residual: float = float("nan")

    @property
    def verdict(self) -> str:
        return "converged" if self.converged else "not converged"

    def ratios(self) -> np.ndarray:
        v = np.asarray(self.increments)
        with np.errstate(divide="ignore", invalid="ignore"):
            return v[1:] / v[:-1]

    def rows(self) -> list[dict]:
        return [
            {
                "iteration": n + 1,
                "besov_sup": self.besov_sup[n],
                "increment": self.increments[n],
                "data_tail": self.data_tails[n],
            }
            for n in range(len(self.increments))
        ]


def _time_grid(T: float, ds: float) -> np.ndarray:
    n = max(1, int(np.ceil(T / ds - 1e-12)))
    return np.linspace(0.0, T, n + 1)


def linear_transport_solve(coeff: SymTrajectory, forcing, init: SymState, config: StepperConfig,
                           s_grid: np.ndarray | None = None) -> SymTrajectory:
    """RK4 solve of ``U_s + A(C(s)) U_x = M`` on ``coeff``'s time grid.

    ``forcing`` is the pair ``(M_u, M_v)``; ``C(s)`` is linearly interpolated
    between the stored coefficient states.
    """
    grid = init.grid
    ops = _ops(grid)
    s_grid = coeff.s if s_grid is None else np.asarray(s_grid)
    filt = grid.exponential_filter(config.filter_strength, config.filter_order)
    mu, mv = (np.asarray(f, dtype=float) for f in forcing)

    def rhs(s, u, v):
        cu, cv = coeff.at(s)
        cu, cv = ops.truncate(cu), ops.truncate(cv)
        ux = ops.d(ops.truncate(u))
        vx = ops.d(ops.truncate(v))
        du = mu - ops.truncate(cu * ux + 0.5 * cv * vx)
        dv = mv - ops.truncate(0.5 * cv * ux + cu * vx)
        return du, dv

    nt = len(s_grid)
    us = np.empty((nt, grid.n_points))
    vs = np.empty((nt, grid.n_points))
    u, v = init.u.copy(), init.v.copy()
    us[0], vs[0] = u, v
    for i in range(nt - 1):
        s, h = s_grid[i], s_grid[i + 1] - s_grid[i]
        k1 = rhs(s, u, v)
        k2 = rhs(s + h / 2, u + h / 2 * k1[0], v + h / 2 * k1[1])
        k3 = rhs(s + h / 2, u + h / 2 * k2[0], v + h / 2 * k2[1])
        k4 = rhs(s + h, u + h * k3[0], v + h * k3[1])
        u = u + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        v = v + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        u = grid.ifft(grid.fft(u) * filt)
        v = grid.ifft(grid.fft(v) * filt)
        if not (np.all(np.isfinite(u)) and np.all(np.isfinite(v))):
            raise FloatingPointError(f"linear transport solve went non-finite at s={s + h:.6g}")
        us[i + 1], vs[i + 1] = u, v
    return SymTrajectory(grid, np.asarray(s_grid), us, vs)


def _sup_l2_difference(a: SymTrajectory, b: SymTrajectory) -> float:
    g = a.grid
    return max(
        float(np.sqrt(l2_norm(a.u[i] - b.u[i], g) ** 2 + l2_norm(a.v[i] - b.v[i], g) ** 2))
        for i in range(len(a.s))
    )


def _sup_besov(traj: SymTrajectory) -> float:
    return max(besov_norm([traj.u[i], traj.v[i]], traj.grid, 1.5, 1) for i in range(len(traj.s)))


def nonlinear_residual(traj: SymTrajectory, params: ModelParams) -> float:
    """``sup_s ||U_s + A(U) U_x - M||_{L2}`` with ``U_s`` by second-order differences."""
    g = traj.grid
    du_ds = np.gradient(traj.u, traj.s, axis=0, edge_order=2)
    dv_ds = np.gradient(traj.v, traj.s, axis=0, edge_order=2)
    worst = 0.0
    for i in range(len(traj.s)):
        fu, fv = rhs_symmetric(traj.state(i), params)
        r = np.sqrt(l2_norm(du_ds[i] - fu, g) ** 2 + l2_norm(dv_ds[i] - fv, g) ** 2)
        worst = max(worst, float(r))
    return worst


def picard_solve(initial: SymState, params: ModelParams, config: PicardConfig):
    """Iterate the linearised problems until ``V_{n+1} < tol_l2`` or ``n_max``.

    Returns ``(last_trajectory, report)``.  Non-convergence is reported in
    ``report.converged``, not raised.
    """
    grid = initial.grid
    if np.any(initial.v < 0):
        raise ValueError("symmetric state needs v >= 0")
    depth = initial.v**2 / (4.0 * params.g)
    if depth.min() < 1e-3:
        warnings.warn(
            f"min(psi + theta) = {depth.min():.2e} is below the admissibility floor 1e-3",
            LifespanWarning, stacklevel=2,
        )
    u0, v0 = initial.u, initial.v
    norm_u0 = besov_norm([u0, v0], grid, 1.5, 1)
    norm_theta = besov_norm(params.theta, grid, 1.5, 1)
    gate = lifespan_estimate(norm_u0, norm_theta, 1.0, config.c0)
    if config.T > gate:
        warnings.warn(
            f"horizon T={config.T:.4g} exceeds the lifespan gate {gate:.4g} (C0={config.c0})",
            LifespanWarning, stacklevel=2,
        )

    s_grid = _time_grid(config.T, config.inner.ds)
    forcing = (params.g * params.bathymetry_slope(grid), np.zeros(grid.n_points))
    zero = np.zeros(grid.n_points)
    prev = SymTrajectory.constant(grid, s_grid, zero, zero)
    report = IterationReport()
    tails_u = block_l2_norms(u0, grid)
    tails_v = block_l2_norms(v0, grid)

    for n in range(config.n_max):
        init = SymState(grid, low_freq_truncate(u0, grid, n + 1), low_freq_truncate(v0, grid, n + 1))
        nxt = linear_transport_solve(prev, forcing, init, config.inner, s_grid)
        inc = _sup_l2_difference(nxt, prev)
        j = n + 1  # Delta_n sits at index n + 1 (index 0 is the ball block)
        tail = float(np.hypot(tails_u[j], tails_v[j])) if j < tails_u.size else 0.0
        report.increments.append(inc)
        report.data_tails.append(tail)
        report.besov_sup.append(_sup_besov(nxt))
        report.iterations = n + 1
        prev = nxt
        log.debug("iteration %d: V=%.3e", n + 1, inc)
        if inc < config.tol_l2:
            report.converged = True
            break
    report.residual = nonlinear_residual(prev, params)
    return prev, report


def uniform_bound_check(report: IterationReport, norm_u0: float, norm_theta: float, c0: float = 1.0):
    """Check ``sup_s |U^n|_{B^{3/2}_{2,1}} <= 2 (|U_0| + C0 |theta|)`` for every iterate.

    Returns ``(holds, margin)`` with ``margin = cap - max iterate norm``.
    """
    cap = 2.0 * (norm_u0 + c0 * norm_theta)
    worst = max(report.besov_sup, default=0.0)
    margin = cap - worst
    return bool(margin >= 0.0), float(margin)
