"""Method-of-lines pseudospectral integrator in rescaled time.

Every order ``beta`` is integrated as the classical system in
``s = t^beta / beta``; physical time is bookkeeping attached to each
record.  Stepping is classical RK4 with a CFL-limited step and one
application of the exponential filter ``exp(-36 (|k|/k_max)^16)`` per step.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .conformable import time_forward_map, time_inverse_map
from .grid import linf_norm
from .model import (
    ModelParams,
    PhysState,
    _ops,
    characteristic_speed,
    conserved_quantities,
    rhs_physical,
)

log = logging.getLogger(__name__)

RECORD_COLUMNS = (
    "t",
    "s",
    "min_ux",
    "argmin_x",
    "linf_ux",
    "linf_psix",
    "mass",
    "momentum",
)


@dataclass
class StepperConfig:
    """Integration controls.

    ``ds`` is the largest step in rescaled time; the CFL limit
    ``cfl * dx / max(|u| + sqrt(g (psi + theta)))`` can only shorten it.
    ``snapshot_times`` are physical times hit exactly; ``snapshot_stride``
    additionally stores every n-th step (0 disables).  ``gradient_cap`` is
    the ``||u_x||_inf`` level that ends a run as blown up, and
    ``resolution_tol`` (when set) ends it once :func:`resolution_tail`
    exceeds that fraction of the spectral peak, or ten times its initial
    value if the initial data is already rougher than that.
    """

    ds: float = 1e-3
    cfl: float = 0.4
    t_end: float = 1.0
    snapshot_stride: int = 0
    snapshot_times: tuple = ()
    filter_strength: float = 36.0
    filter_order: int = 16
    gradient_cap: float = 1e4
    resolution_tol: float | None = None
    max_steps: int = 10_000_000

    def __post_init__(self):
        if not self.ds > 0:
            raise ValueError(f"ds must be positive, got {self.ds}")
        if not 0 < self.cfl <= 1:
            raise ValueError(f"cfl must lie in (0, 1], got {self.cfl}")
        if not self.t_end > 0:
            raise ValueError(f"t_end must be positive, got {self.t_end}")


@dataclass
class Snapshot:
    t: float
    s: float
    state: PhysState


@dataclass
class Trajectory:
    beta: float
    snapshots: list = field(default_factory=list)
    records: dict = field(default_factory=lambda: {c: [] for c in RECORD_COLUMNS})
    truncated: bool = False
    reason: str = "t_end"

    def series(self, name: str) -> np.ndarray:
        return np.asarray(self.records[name], dtype=float)

    def __len__(self) -> int:
        return len(self.records["t"])

    @property
    def final(self) -> Snapshot:
        return self.snapshots[-1]

    def snapshot_at(self, t: float, rtol: float = 1e-12) -> Snapshot:
        for snap in self.snapshots:
            if abs(snap.t - t) <= rtol * max(1.0, abs(t)):
                return snap
        raise KeyError(f"no snapshot stored at t={t}")


def rk4_step(state: PhysState, params: ModelParams, ds: float, filt: np.ndarray | None = None) -> PhysState:
    """One classical RK4 step of ``U_s = rhs_physical(U)`` plus the spectral filter."""
    u0, p0 = state.u, state.psi
    k1u, k1p = rhs_physical(state, params)
    k2u, k2p = rhs_physical(PhysState(state.grid, u0 + 0.5 * ds * k1u, p0 + 0.5 * ds * k1p), params)
    k3u, k3p = rhs_physical(PhysState(state.grid, u0 + 0.5 * ds * k2u, p0 + 0.5 * ds * k2p), params)
    k4u, k4p = rhs_physical(PhysState(state.grid, u0 + ds * k3u, p0 + ds * k3p), params)
    u = u0 + ds / 6.0 * (k1u + 2 * k2u + 2 * k3u + k4u)
    p = p0 + ds / 6.0 * (k1p + 2 * k2p + 2 * k3p + k4p)
    if filt is not None:
        g = state.grid
        u = g.ifft(g.fft(u) * filt)
        p = g.ifft(g.fft(p) * filt)
    return PhysState(state.grid, u, p)


def _record(traj: Trajectory, t: float, s: float, state: PhysState, params: ModelParams):
    ops = _ops(state.grid)
    ux = ops.d(state.u)
    px = ops.d(state.psi)
    i = int(np.argmin(ux))
    mass, momentum = conserved_quantities(state, params)
    rec = traj.records
    rec["t"].append(t)
    rec["s"].append(s)
    rec["min_ux"].append(float(ux[i]))
    rec["argmin_x"].append(float(state.grid.x[i]))
    rec["linf_ux"].append(linf_norm(ux))
    rec["linf_psix"].append(linf_norm(px))
    rec["mass"].append(mass)
    rec["momentum"].append(momentum)
    return linf_norm(ux)


def resolution_tail(state: PhysState) -> float:
    """Largest amplitude in the band ``[0.8, 1] * N/3`` relative to the peak.

    That band sits just under the 2/3-rule cut-off, so it is where an
    under-resolved gradient first shows up.
    """
    g = state.grid
    top = g.n_points // 3
    lo = int(0.8 * top)
    worst = 0.0
    for f in (state.u, state.psi):
        fh = np.abs(g.fft(f))
        peak = fh[1:].max()
        if peak > 0:
            worst = max(worst, fh[lo : top + 1].max() / peak)
    return worst


def simulate(initial: PhysState, params: ModelParams, config: StepperConfig) -> Trajectory:
    """Integrate from ``t = 0`` to ``config.t_end`` or until blow-up is flagged.

    A blow-up flag (non-finite state, ``||u_x||_inf`` above the cap, or loss
    of resolution when ``resolution_tol`` is set) ends the run early with
    ``truncated = True``; this is a result, not an error.
    """
    beta = params.beta
    grid = initial.grid
    s_end = time_forward_map(config.t_end, beta)
    targets = sorted(
        {time_forward_map(t, beta) for t in config.snapshot_times if 0 < t <= config.t_end}
        | {s_end}
    )
    filt = grid.exponential_filter(config.filter_strength, config.filter_order)

    traj = Trajectory(beta=beta)
    state = initial.copy()
    s, t = 0.0, 0.0
    _record(traj, t, s, state, params)
    traj.snapshots.append(Snapshot(t, s, state.copy()))
    tail_cap = None
    if config.resolution_tol is not None:
        tail0 = resolution_tail(state)
        tail_cap = max(config.resolution_tol, 10.0 * tail0)
        if tail0 > config.resolution_tol:
            log.warning("initial data under-resolved on N=%d (tail %.2e)", grid.n_points, tail0)
    step = 0
    ti = 0
    while ti < len(targets):
        target = targets[ti]
        speed = characteristic_speed(state, params)
        ds = config.ds if speed == 0 else min(config.ds, config.cfl * grid.dx / speed)
        hit = s + ds >= target * (1 - 1e-14)
        if hit:
            ds = target - s
        state = rk4_step(state, params, ds, filt)
        s = target if hit else s + ds
        t = time_inverse_map(s, beta)
        step += 1
        if not state.is_finite():
            traj.truncated, traj.reason = True, "non-finite"
            log.info("non-finite state at s=%.6g", s)
            break
        grad = _record(traj, t, s, state, params)
        if hit or (config.snapshot_stride and step % config.snapshot_stride == 0):
            traj.snapshots.append(Snapshot(t, s, state.copy()))
        if hit:
            ti += 1
        if grad > config.gradient_cap:
            traj.truncated, traj.reason = True, "gradient_cap"
            break
        if tail_cap is not None and resolution_tail(state) > tail_cap:
            traj.truncated, traj.reason = True, "resolution"
            break
        if step >= config.max_steps:
            traj.truncated, traj.reason = True, "max_steps"
            break
    if traj.snapshots[-1].s != s and state.is_finite():
        traj.snapshots.append(Snapshot(t, s, state.copy()))
    return traj
