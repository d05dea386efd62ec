"""Conformable derivative and integral on sampled time series.

For differentiable ``f`` the conformable derivative of order ``beta`` is
``t^(1-beta) f'(t)``.  Substituting ``s = t^beta / beta`` turns it into the
ordinary ``d/ds``, which is how the solvers integrate order-``beta``
dynamics with a single classical code path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


def check_order(beta: float) -> float:
    beta = float(beta)
    if not 0.0 < beta <= 1.0:
        raise ValueError(f"beta must lie in (0,1], got {beta}")
    return beta


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if t.size and t[0] < 0:
            raise ValueError("times must be nonnegative")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


class DivergentLimitWarning(RuntimeWarning):
    pass


DIVERGENCE_EXPONENT = 0.1


def conformable_derivative(series: TimeSeries, beta: float, *, strict: bool = False) -> TimeSeries:
    """Sampled ``t^(1-beta) f'(t)``; ``f'`` by second-order differences.

    At a ``t = 0`` sample the value is the limit from the right, estimated
    by linear extrapolation of the two following samples (for ``beta = 1``
    the one-sided difference already is that limit).  If those samples
    grow like ``t^-a`` with ``a > DIVERGENCE_EXPONENT`` the limit is taken
    as divergent: the point is set to ``nan`` and a
    :class:`DivergentLimitWarning` is issued, or raised when ``strict``.
    """
    beta = check_order(beta)
    t, f = series.times, series.values
    if t.size < 3:
        raise ValueError("need at least three samples")
    df = np.gradient(f, t, edge_order=2)
    with np.errstate(divide="ignore"):
        out = t ** (1.0 - beta) * df
    if t[0] == 0.0:
        d1, d2 = out[1], out[2]
        t1, t2 = t[1], t[2]
        # beta = 1 keeps the one-sided difference, which is already f'(0)
        limit = d1 - (d2 - d1) * t1 / (t2 - t1) if beta < 1.0 else out[0]
        # local power law |D f| ~ t^-a between the first two interior samples
        growth = 0.0
        if d1 != 0.0 and d2 != 0.0:
            growth = math.log(abs(d1 / d2)) / math.log(t2 / t1)
        if growth > DIVERGENCE_EXPONENT:
            msg = f"conformable derivative at t=0 appears divergent (D f(t1)={d1:.3g}, D f(t2)={d2:.3g})"
            if strict:
                raise ValueError(msg)
            import warnings

            warnings.warn(msg, DivergentLimitWarning, stacklevel=2)
            limit = np.nan
        out[0] = limit
    return TimeSeries(t, out)


def _cell_moments(t0: np.ndarray, t1: np.ndarray, beta: float):
    """Exact ``int x^(beta-1) dx`` and ``int x^beta dx`` over each ``[t0, t1]``."""
    m0 = (t1**beta - t0**beta) / beta
    m1 = (t1 ** (beta + 1.0) - t0 ** (beta + 1.0)) / (beta + 1.0)
    return m0, m1


def fractional_integral(series: TimeSeries, beta: float) -> TimeSeries:
    """Running ``int_0^t x^(beta-1) f(x) dx`` for ``f`` linear between samples.

    The weight ``x^(beta-1)`` is integrated exactly cell by cell, so the
    singularity at the origin costs nothing.  If the series starts after
    ``t = 0`` the running integral is taken from the first sample.
    """
    beta = check_order(beta)
    t, f = series.times, series.values
    out = np.zeros_like(f)
    if t.size < 2:
        return TimeSeries(t, out)
    t0, t1 = t[:-1], t[1:]
    f0, f1 = f[:-1], f[1:]
    m0, m1 = _cell_moments(t0, t1, beta)
    slope = (f1 - f0) / (t1 - t0)
    # f(x) = f0 + slope (x - t0) on each cell
    cells = (f0 - slope * t0) * m0 + slope * m1
    out[1:] = np.cumsum(cells)
    return TimeSeries(t, out)


def time_forward_map(t, beta: float):
    """``s = t^beta / beta``."""
    beta = check_order(beta)
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise ValueError("t must be nonnegative")
    s = t**beta / beta
    return float(s) if s.ndim == 0 else s


def time_inverse_map(s, beta: float):
    """``t = (beta s)^(1/beta)``."""
    beta = check_order(beta)
    s = np.asarray(s, dtype=float)
    if np.any(s < 0):
        raise ValueError("s must be nonnegative")
    t = (beta * s) ** (1.0 / beta)
    return float(t) if t.ndim == 0 else t


def riccati_blowup_bounds(u0x0: float, beta: float) -> tuple[float, float]:
    """Blow-up times for ``D^beta w <= -w^2``, ``w(0) = u0x0 < 0``.

    Returns ``(T_paper, T_sharp)``: ``(-1/u0x0)^(1/beta)`` from integrating
    with the plain ``t^beta`` weight, and ``(-beta/u0x0)^(1/beta)`` from the
    exact integral ``1/w - 1/w0 >= t^beta / beta``.  ``T_sharp <= T_paper``
    with equality only at ``beta = 1``.
    """
    beta = check_order(beta)
    if not u0x0 < 0:
        raise ValueError(f"u0x0 must be negative for a blow-up bound, got {u0x0}")
    t_paper = (-1.0 / u0x0) ** (1.0 / beta)
    t_sharp = (-beta / u0x0) ** (1.0 / beta)
    return t_paper, t_sharp


def lifespan_estimate(norm_u0: float, norm_theta: float, beta: float, c0: float = 1.0) -> float:
    """Guaranteed-existence gate ``min{beta^(1/beta), [beta ln2 / (2 C0 (|U0| + C0 |theta|))]^(1/beta)}``."""
    beta = check_order(beta)
    if norm_u0 < 0 or norm_theta < 0:
        raise ValueError("norms must be nonnegative")
    if not c0 > 0:
        raise ValueError("C0 must be positive")
    cap = beta ** (1.0 / beta)
    denom = 2.0 * c0 * (norm_u0 + c0 * norm_theta)
    base = beta * math.log(2.0) / denom if denom > 0.0 else math.inf
    if base >= beta:
        return cap
    return base ** (1.0 / beta)
