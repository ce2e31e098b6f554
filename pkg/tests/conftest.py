import numpy as np
import pytest

from aavfwave import Grid, State, SystemSpec, build_frequencies, dft, initial_state


@pytest.fixture
def preset():
    """Grid, frequencies and nonlinearity of the long-time benchmark."""
    M = 64
    grid = Grid(M)
    freqs = build_frequencies(0.5, M)
    spec = SystemSpec(rho=0.5, g_coeffs=(-1.0,))
    return grid, freqs, spec


@pytest.fixture
def preset_state(preset):
    grid, freqs, _ = preset
    return initial_state(grid, freqs)


def random_state(rng, grid, amplitude=0.1, t=0.0):
    """Hermitian-symmetric state from random real nodal fields."""
    u = amplitude * rng.standard_normal(grid.n)
    v = amplitude * rng.standard_normal(grid.n)
    return State(q=dft(u, grid), p=dft(v, grid), t=t)
