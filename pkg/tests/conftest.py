"""Shared grids and deterministic generators for the test suite.

Session-scoped grids are safe to share: every value in the package is frozen
after construction.  The resonance fixtures put the pole half-width at one
thousandth of the frequency window, where Lorentzian truncation sits near
1e-3 of the norm and all analytic comparisons have headroom.
"""

import numpy as np
import pytest

from lioutime import (
    ResonanceSpec,
    SpectralState,
    build_grid,
    gaussian_profile,
    resonance_state,
)


@pytest.fixture()
def rng():
    return np.random.default_rng(987654321)


@pytest.fixture(scope="session")
def grid_small():
    # coarse grid for algebraic identities that hold at any resolution
    return build_grid(16.0, 512, 1.0, 16)


@pytest.fixture(scope="session")
def grid_mid():
    # fine enough in nu that admissible Hardy pole widths exist
    return build_grid(32.0, 4096, 1.0, 64)


@pytest.fixture(scope="session")
def res_grid():
    # e_max = 64*d_nu with d_nu = 1000/32768; all spacings exact in binary
    return build_grid(500.0, 2**15, 1.953125, 64)


@pytest.fixture(scope="session")
def res_profile(res_grid):
    return gaussian_profile(res_grid, 0.5 * res_grid.e_max, 0.08 * res_grid.e_max)


@pytest.fixture(scope="session")
def rho_half(res_grid, res_profile):
    # unit-norm decay eigenstate with pole at -0.5i (1/e time of 1)
    rho = resonance_state(ResonanceSpec(-0.5j, res_profile.psi), res_grid)
    return SpectralState(res_grid, rho.values / rho.norm())


def snap(grid, t):
    """Nearest lattice time, where discrete evolution is an exact tau shift."""
    return round(float(t) / grid.d_tau) * grid.d_tau
