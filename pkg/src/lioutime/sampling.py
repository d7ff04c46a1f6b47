"""Seeded random states for property tests and the verification suite.

Everything here takes an explicit numpy Generator so runs are reproducible
from a single seed.  Smooth states are sums of Gaussian bumps scaled to the
grid so that their mass stays far from every window boundary.
"""

from __future__ import annotations

import numpy as np

from .grid import EnergyKernel, SpectralGrid, SpectralState
from .liouville import PureState
from .profiles import gaussian_profile
from .semigroup import ResonanceSpec, resonance_state

__all__ = [
    "random_kernel",
    "random_smooth_state",
    "random_hardy_state",
    "random_pure_state",
    "random_mixture",
]


def _bump(x: np.ndarray, center: float, width: float) -> np.ndarray:
    return np.exp(-((x - center) ** 2) / (2.0 * width**2))


def random_kernel(grid: SpectralGrid, rng: np.random.Generator, terms: int = 3) -> EnergyKernel:
    """Random smooth kernel supported well inside the energy square."""
    e = grid.energies
    vals = np.zeros((grid.n_e, grid.n_e), dtype=np.complex128)
    for _ in range(terms):
        u = _bump(e, rng.uniform(0.2, 0.8) * grid.e_max, rng.uniform(0.05, 0.15) * grid.e_max)
        v = _bump(e, rng.uniform(0.2, 0.8) * grid.e_max, rng.uniform(0.05, 0.15) * grid.e_max)
        c = rng.normal() + 1j * rng.normal()
        vals += c * np.outer(u, v)
    return EnergyKernel(grid, vals)


def random_smooth_state(
    grid: SpectralGrid, rng: np.random.Generator, terms: int = 4
) -> SpectralState:
    """Random smooth spectral state, generic in both Hardy components."""
    vals = np.zeros((grid.n_nu, grid.n_e), dtype=np.complex128)
    for _ in range(terms):
        fnu = _bump(
            grid.nu,
            rng.uniform(-0.15, 0.15) * grid.nu_max,
            rng.uniform(0.01, 0.04) * grid.nu_max,
        )
        fe = _bump(
            grid.energies,
            rng.uniform(0.2, 0.8) * grid.e_max,
            rng.uniform(0.05, 0.15) * grid.e_max,
        )
        c = rng.normal() + 1j * rng.normal()
        vals += c * np.outer(fnu, fe)
    return SpectralState(grid, vals)


def random_hardy_state(
    grid: SpectralGrid, rng: np.random.Generator, poles: int = 4
) -> SpectralState:
    """Random finite sum of resonance eigenstates (upper Hardy up to truncation)."""
    vals = np.zeros((grid.n_nu, grid.n_e), dtype=np.complex128)
    b_lo = max(10.0 * grid.d_nu, grid.nu_max / 400.0)
    b_hi = grid.nu_max / 60.0
    if b_lo >= b_hi:
        raise ValueError("grid too coarse to place admissible poles")
    for _ in range(poles):
        xi = complex(
            rng.uniform(-grid.nu_max / 30.0, grid.nu_max / 30.0),
            -rng.uniform(b_lo, b_hi),
        )
        psi = gaussian_profile(
            grid,
            rng.uniform(0.3, 0.7) * grid.e_max,
            rng.uniform(0.05, 0.15) * grid.e_max,
        )
        c = rng.normal() + 1j * rng.normal()
        vals += c * resonance_state(ResonanceSpec(xi, psi.psi), grid).values
    return SpectralState(grid, vals)


def random_pure_state(grid: SpectralGrid, rng: np.random.Generator) -> PureState:
    """Random Gaussian-bump wave function inside the energy window."""
    return gaussian_profile(
        grid,
        rng.uniform(0.25, 0.75) * grid.e_max,
        rng.uniform(0.04, 0.12) * grid.e_max,
    )


def random_mixture(
    grid: SpectralGrid, rng: np.random.Generator, components: int = 3
) -> EnergyKernel:
    """Random density matrix: convex mixture of Gaussian pure states."""
    weights = rng.dirichlet(np.ones(components))
    vals = np.zeros((grid.n_e, grid.n_e), dtype=np.complex128)
    for w in weights:
        psi = random_pure_state(grid, rng).psi
        vals += w * np.outer(psi, psi.conj())
    return EnergyKernel(grid, vals)
