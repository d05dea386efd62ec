"""Uniform periodic grid on [-L, L) and Fourier-space derivative helpers.

Fields are plain ``numpy`` arrays of length ``N`` sampled at ``grid.x``;
the grid object carries everything needed to move them in and out of
Fourier space.  All transforms use the real FFT, so the wavenumber table
exposed to callers is the non-negative half ``k_m = pi m / L``,
``m = 0..N/2``; the last entry is the unpaired mode ``-N/2``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class NonFiniteFieldError(ValueError):
    """Raised when a field handed to a spectral operator contains NaN/inf."""


def check_finite(f: np.ndarray, name: str = "field") -> None:
    if not np.all(np.isfinite(f)):
        bad = np.flatnonzero(~np.isfinite(f))
        raise NonFiniteFieldError(
            f"{name} has {bad.size} non-finite samples (first at index {bad[0]})"
        )


@dataclass(frozen=True)
class PeriodicGrid:
    """Uniform periodic grid with ``n_points`` samples on ``[-half_width, half_width)``.

    Parameters
    ----------
    half_width : float
        Half the box length ``L``.
    n_points : int
        Number of samples ``N``; even and at least 8.
    """

    half_width: float
    n_points: int
    x: np.ndarray = field(init=False, repr=False, compare=False)
    k: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        L, N = float(self.half_width), int(self.n_points)
        if not L > 0 or not np.isfinite(L):
            raise ValueError(f"half_width must be positive, got {self.half_width}")
        if N < 8 or N % 2:
            raise ValueError(f"n_points must be an even integer >= 8, got {self.n_points}")
        object.__setattr__(self, "half_width", L)
        object.__setattr__(self, "n_points", N)
        x = -L + np.arange(N) * (2.0 * L / N)
        k = np.pi * np.arange(N // 2 + 1) / L
        x.setflags(write=False)
        k.setflags(write=False)
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "k", k)

    @property
    def dx(self) -> float:
        return 2.0 * self.half_width / self.n_points

    @property
    def length(self) -> float:
        return 2.0 * self.half_width

    @property
    def k_max(self) -> float:
        """Largest resolved wavenumber magnitude (the unpaired mode ``N/2``)."""
        return float(self.k[-1])

    def full_wavenumbers(self) -> np.ndarray:
        """Signed table ``pi m / L`` for ``m = -N/2 .. N/2-1`` in increasing order."""
        N = self.n_points
        return np.pi * np.arange(-N // 2, N // 2) / self.half_width

    def reflect(self, f: np.ndarray) -> np.ndarray:
        """Return samples of ``f(-x)``.

        ``x_i = -L + i dx`` reflects to index ``(N - i) mod N``; index 0 (``-L``)
        is its own image because ``L`` and ``-L`` coincide on the torus.
        """
        return np.roll(f[::-1], 1)

    # Fourier helpers -------------------------------------------------------

    def fft(self, f: np.ndarray) -> np.ndarray:
        return np.fft.rfft(f)

    def ifft(self, fh: np.ndarray) -> np.ndarray:
        return np.fft.irfft(fh, n=self.n_points)

    def apply_multiplier(self, f: np.ndarray, mult: np.ndarray) -> np.ndarray:
        """Real-space result of multiplying ``fft(f)`` by a real radial table."""
        return self.ifft(self.fft(f) * mult)

    def derivative_symbol(self) -> np.ndarray:
        """``i k`` with the unpaired ``N/2`` mode zeroed."""
        sym = 1j * np.asarray(self.k)
        sym[-1] = 0.0
        return sym

    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: keep ``|m| <= N/3``."""
        m = np.arange(self.n_points // 2 + 1)
        return (m <= self.n_points // 3).astype(float)

    def exponential_filter(self, strength: float = 36.0, order: int = 16) -> np.ndarray:
        return np.exp(-strength * (np.asarray(self.k) / self.k_max) ** order)


def spectral_derivative(f: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """d/dx of a periodic field by wavenumber multiplication."""
    f = np.asarray(f, dtype=float)
    check_finite(f)
    return grid.ifft(grid.fft(f) * grid.derivative_symbol())


def fd4_derivative(f: np.ndarray, grid: PeriodicGrid) -> np.ndarray:
    """Fourth-order centred finite difference, periodic wrap."""
    return (
        -np.roll(f, -2) + 8 * np.roll(f, -1) - 8 * np.roll(f, 1) + np.roll(f, 2)
    ) / (12.0 * grid.dx)


def linf_norm(f: np.ndarray) -> float:
    return float(np.max(np.abs(f))) if np.size(f) else 0.0


def l2_norm(f: np.ndarray, grid: PeriodicGrid) -> float:
    """Box-quadrature L2 norm ``sqrt(sum f^2 dx)``."""
    return float(np.sqrt(np.sum(np.asarray(f) ** 2) * grid.dx))


def integral(f: np.ndarray, grid: PeriodicGrid) -> float:
    return float(np.sum(f) * grid.dx)


def spectral_tail(f: np.ndarray, grid: PeriodicGrid, fraction: float = 2.0 / 3.0) -> float:
    """Largest Fourier amplitude above ``fraction * k_max`` relative to the peak."""
    fh = np.abs(grid.fft(f))
    peak = fh.max()
    if peak == 0.0:
        return 0.0
    cut = int(fraction * (grid.n_points // 2))
    return float(fh[cut:].max() / peak)
