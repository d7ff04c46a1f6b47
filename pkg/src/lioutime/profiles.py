"""Normalized wave-function families on the energy grid.

These cover every state used by the scenario runner and the test suite:
indicator, Gaussian bump, two-bump superposition, and exponential.
"""

from __future__ import annotations

import numpy as np

from .grid import SpectralGrid
from .liouville import PureState

__all__ = [
    "indicator_profile",
    "gaussian_profile",
    "two_bump_profile",
    "exponential_profile",
]


def indicator_profile(grid: SpectralGrid, lo: float, hi: float) -> PureState:
    """Normalized indicator of [lo, hi) on the energy samples."""
    if not lo < hi:
        raise ValueError(f"need lo < hi, got lo = {lo!r}, hi = {hi!r}")
    psi = ((grid.energies >= lo) & (grid.energies < hi)).astype(np.complex128)
    if not psi.any():
        raise ValueError(f"no energy samples in [{lo!r}, {hi!r})")
    return PureState(grid, psi).normalized()


def gaussian_profile(grid: SpectralGrid, center: float, width: float) -> PureState:
    """Normalized Gaussian bump; width is the standard deviation of |psi|^2."""
    if width <= 0:
        raise ValueError(f"width must be positive, got {width!r}")
    psi = np.exp(-((grid.energies - center) ** 2) / (4.0 * width**2))
    return PureState(grid, psi.astype(np.complex128)).normalized()


def two_bump_profile(
    grid: SpectralGrid, center1: float, center2: float, width: float
) -> PureState:
    """Equal-weight superposition of two Gaussian bumps.

    With well-separated narrow bumps the ordinary survival probability beats
    at the difference frequency instead of decaying monotonically.
    """
    if width <= 0:
        raise ValueError(f"width must be positive, got {width!r}")
    e = grid.energies
    psi = np.exp(-((e - center1) ** 2) / (4.0 * width**2)) + np.exp(
        -((e - center2) ** 2) / (4.0 * width**2)
    )
    return PureState(grid, psi.astype(np.complex128)).normalized()


def exponential_profile(grid: SpectralGrid, rate: float) -> PureState:
    """Normalized exponential amplitude exp(-rate*E)."""
    if rate <= 0:
        raise ValueError(f"rate must be positive, got {rate!r}")
    psi = np.exp(-rate * grid.energies)
    return PureState(grid, psi.astype(np.complex128)).normalized()
