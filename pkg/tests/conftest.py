import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from holowave.spectral_core import GridSpec, SpectralField

settings.register_profile(
    "default", deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)
settings.load_profile("default")


def random_field(grid: GridSpec, rng: np.random.Generator, decay: float = 0.0,
                 holomorphic: bool = False, zero_mean: bool = False, scale: float = 1.0,
                 k_max: int | None = None) -> SpectralField:
    k = grid.k
    c = (rng.normal(size=grid.n_modes) + 1j * rng.normal(size=grid.n_modes)) / (1.0 + np.abs(k)) ** decay
    if k_max is not None:
        c = np.where(np.abs(k) <= k_max, c, 0.0)
    if holomorphic:
        c = np.where(k < 0, c, 0.0)
    if zero_mean:
        c = np.where(k == 0, 0.0, c)
    c[grid.index(-grid.n_modes // 2)] = 0.0  # keep the Nyquist mode empty
    return SpectralField(grid, scale * c)


@pytest.fixture
def grid64():
    return GridSpec(64)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
