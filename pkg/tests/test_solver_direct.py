import numpy as np
import pytest

from tsunamilab.conformable import time_forward_map
from tsunamilab.grid import PeriodicGrid, l2_norm
from tsunamilab.initial_data import example1_u0, example_psi0
from tsunamilab.model import ModelParams, PhysState, _ops, parity_check
from tsunamilab.solver_direct import (
    RECORD_COLUMNS,
    StepperConfig,
    resolution_tail,
    rk4_step,
    simulate,
)

L = 2 * np.pi


def example1(n, beta=1.0):
    g = PeriodicGrid(L, n)
    x = np.asarray(g.x)
    return PhysState(g, example1_u0(x), example_psi0(x)), ModelParams.flat(g, beta=beta)


def test_config_validation():
    for kw in ({"ds": 0.0}, {"cfl": 0.0}, {"cfl": 1.5}, {"t_end": 0.0}):
        with pytest.raises(ValueError):
            StepperConfig(**kw)


def test_rk4_fixed_points():
    g = PeriodicGrid(L, 64)
    p = ModelParams.flat(g, 0.4)
    z = rk4_step(PhysState(g, np.zeros(64), np.zeros(64)), p, 0.1, g.exponential_filter())
    assert np.all(z.u == 0.0) and np.all(z.psi == 0.0)
    c = rk4_step(PhysState(g, np.zeros(64), np.full(64, 0.3)), p, 0.1, g.exponential_filter())
    assert np.allclose(c.psi, 0.3, atol=1e-15) and np.allclose(c.u, 0.0, atol=1e-15)


def _integrate(state, p, s_end, n):
    for _ in range(n):
        state = rk4_step(state, p, s_end / n)
    return state


def test_rk4_fourth_order_richardson():
    state, p = example1(256)
    a = _integrate(state, p, 0.4, 10)
    b = _integrate(state, p, 0.4, 20)
    c = _integrate(state, p, 0.4, 40)
    g = state.grid
    ratio = l2_norm(a.u - b.u, g) / l2_norm(b.u - c.u, g)
    assert ratio == pytest.approx(16.0, rel=0.2)


def test_records_and_time_map():
    state, p = example1(256, beta=0.5)
    tr = simulate(state, p, StepperConfig(ds=1e-2, t_end=0.1, snapshot_times=(0.01, 0.05)))
    assert set(tr.records) == set(RECORD_COLUMNS)
    t, s = tr.series("t"), tr.series("s")
    assert np.all(np.diff(t) > 0)
    assert np.max(np.abs(s - time_forward_map(t, 0.5))) < 1e-12
    assert tr.snapshot_at(0.05).s == pytest.approx(2 * np.sqrt(0.05), rel=1e-14)
    assert tr.final.t == pytest.approx(0.1, rel=1e-12)
    assert not tr.truncated and tr.reason == "t_end"
    with pytest.raises(KeyError):
        tr.snapshot_at(0.07)


def test_beta_equivalence_small():
    half, p_half = example1(256, beta=0.5)
    one, p_one = example1(256, beta=1.0)
    ts = (0.05, 0.1)
    a = simulate(half, p_half, StepperConfig(ds=1e-3, t_end=0.1, snapshot_times=ts))
    b = simulate(one, p_one, StepperConfig(ds=1e-3, t_end=2 * np.sqrt(0.1),
                                           snapshot_times=tuple(2 * np.sqrt(t) for t in ts)))
    g = half.grid
    for t in ts:
        x, y = a.snapshot_at(t).state, b.snapshot_at(2 * np.sqrt(t)).state
        err = np.hypot(l2_norm(x.u - y.u, g), l2_norm(x.psi - y.psi, g))
        assert err / np.hypot(l2_norm(y.u, g), l2_norm(y.psi, g)) < 1e-8


def test_conservation_parity_and_monotone_gradient():
    state, p = example1(512, beta=0.5)
    tr = simulate(state, p, StepperConfig(ds=1e-2, t_end=0.3, snapshot_stride=5, resolution_tol=1e-5))
    assert tr.truncated and tr.reason == "resolution"
    mass, mom = tr.series("mass"), tr.series("momentum")
    assert np.max(np.abs(mass - mass[0])) <= 1e-6 * abs(mass[0])
    assert np.max(np.abs(mom)) < 1e-12  # odd u has zero momentum
    for snap in tr.snapshots:
        assert parity_check(snap.state.u, state.grid, "odd") < 1e-10
        assert parity_check(snap.state.psi, state.grid, "even") < 1e-10
    # u_x at the symmetry point only decreases
    i0 = int(np.argmin(np.abs(state.grid.x)))
    ux0 = [_ops(state.grid).d(sn.state.u)[i0] for sn in tr.snapshots]
    assert np.all(np.diff(ux0) <= 1e-12)


def test_gradient_cap_truncates():
    state, p = example1(256)
    tr = simulate(state, p, StepperConfig(ds=1e-2, t_end=2.0, gradient_cap=3.0))
    assert tr.truncated and tr.reason == "gradient_cap"
    assert tr.series("linf_ux")[-1] > 3.0
    assert tr.final.s == tr.series("s")[-1]


def test_max_steps_truncates():
    state, p = example1(64)
    tr = simulate(state, p, StepperConfig(ds=1e-3, t_end=1.0, max_steps=5))
    assert tr.truncated and tr.reason == "max_steps" and len(tr) == 6


@pytest.mark.filterwarnings("ignore::RuntimeWarning")
def test_non_finite_truncates():
    g = PeriodicGrid(L, 64)
    p = ModelParams.flat(g)
    u = 1e200 * np.sin(g.x)
    tr = simulate(PhysState(g, u, np.zeros(64)), p, StepperConfig(ds=1e-3, cfl=1.0, t_end=1.0, gradient_cap=np.inf))
    assert tr.truncated and tr.reason == "non-finite"


def test_resolution_tail():
    g = PeriodicGrid(L, 256)
    smooth = PhysState(g, np.sin(g.x), np.cos(g.x))
    assert resolution_tail(smooth) < 1e-14
    rough = PhysState(g, np.sin(g.x) + 1e-3 * np.sin(40 * g.x), np.zeros(256))
    assert resolution_tail(rough) == pytest.approx(1e-3)
    assert resolution_tail(PhysState(g, np.zeros(256), np.zeros(256))) == 0.0


def test_zero_state_stays_zero():
    g = PeriodicGrid(L, 64)
    tr = simulate(PhysState(g, np.zeros(64), np.zeros(64)), ModelParams.flat(g), StepperConfig(ds=0.05, t_end=0.5))
    for c in ("min_ux", "linf_ux", "linf_psix", "mass", "momentum"):
        assert np.all(tr.series(c) == 0.0)
