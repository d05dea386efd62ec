import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from tsunamilab.grid import PeriodicGrid

settings.register_profile(
    "default", deadline=None, suppress_health_check=[HealthCheck.too_slow], derandomize=True
)
settings.load_profile("default")


@pytest.fixture
def grid10():
    return PeriodicGrid(10.0, 256)


@pytest.fixture
def rng():
    return np.random.default_rng(20241015)


def band_limited(grid, rng, top_fraction=1.0 / 3.0, decay=4.0):
    """Random real field with modes only up to ``top_fraction * N``."""
    k = np.asarray(grid.k)
    c = (rng.normal(size=k.size) + 1j * rng.normal(size=k.size)) * np.exp(-decay * k / grid.k_max)
    c[int(top_fraction * grid.n_points) :] = 0.0
    c[0] = c[0].real
    return grid.ifft(c * grid.n_points / 8)
