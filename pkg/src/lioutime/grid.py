"""Discretization of the spectral plane and the kernel <-> spectral coordinate change.

The physical representation of a Hilbert-Schmidt operator is a kernel
k(lam, lam') on the energy half-line [0, e_max).  The spectral representation
of the same operator lives on the (nu, E) plane with

    nu = lam - lam'      (frequency, the diagonal direction)
    E  = max(lam, lam')  (energy, the anti-diagonal direction)

The change of variables has unit Jacobian, so on commensurate uniform grids it
is an exact permutation of samples between the kernel square and the wedge
{E >= |nu|} of the spectral plane.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

__all__ = [
    "GridError",
    "UnphysicalSupportError",
    "SpectralGrid",
    "EnergyKernel",
    "SpectralState",
    "build_grid",
    "kernel_to_spectral",
    "spectral_to_kernel",
    "boundary_mass",
]

# Fraction of each axis counted as "boundary" by the truncation diagnostic.
EDGE_FRACTION = 0.05


class GridError(ValueError):
    """Raised when grid parameters violate a construction invariant."""


class UnphysicalSupportError(ValueError):
    """Raised when a spectral state has mass at E < |nu| and therefore no
    kernel preimage on the energy half-line."""


@dataclass(frozen=True)
class SpectralGrid:
    """Uniform discretization of the (nu, E) plane and its Fourier dual.

    Parameters
    ----------
    nu_max : float
        Half-width of the frequency window; nu in [-nu_max, nu_max).
    n_nu : int
        Number of frequency samples, a power of two.
    e_max : float
        Upper truncation of the energy half-line; E in [0, e_max).
    n_e : int
        Number of energy samples.

    Notes
    -----
    The frequency spacing is d_nu = 2*nu_max/n_nu and nu = 0 is always a
    sample.  The energy grid must share the same spacing (d_e = d_nu) and fit
    inside the frequency window (n_e <= n_nu/2); both are required for the
    coordinate change to be a permutation of samples.  The dual time lattice
    tau_n = (n - n_nu/2 + 1/2)*d_tau with d_tau = 2*pi/(n_nu*d_nu) is offset
    by half a sample so that it is symmetric about tau = 0 and no sample sits
    on the cut used by the spectral projections.
    """

    nu_max: float
    n_nu: int
    e_max: float
    n_e: int

    def __post_init__(self) -> None:
        if self.nu_max <= 0 or self.e_max <= 0:
            raise GridError("grid extents must be positive")
        if self.n_nu <= 0 or (self.n_nu & (self.n_nu - 1)) != 0:
            raise GridError(f"n_nu must be a power of two, got {self.n_nu}")
        if self.n_e <= 0:
            raise GridError(f"n_e must be positive, got {self.n_e}")
        d_nu = 2.0 * self.nu_max / self.n_nu
        d_e = self.e_max / self.n_e
        if not np.isclose(d_nu, d_e, rtol=1e-12, atol=0.0):
            raise GridError(
                f"incommensurate spacings: d_nu = {d_nu!r} but d_e = {d_e!r}; "
                "the coordinate change needs d_e = d_nu"
            )
        if self.n_e > self.n_nu // 2:
            raise GridError(
                f"energy window does not fit in the frequency window "
                f"(n_e = {self.n_e} > n_nu/2 = {self.n_nu // 2})"
            )

    @property
    def d_nu(self) -> float:
        return 2.0 * self.nu_max / self.n_nu

    @property
    def d_e(self) -> float:
        # identical to d_nu by construction; kept separate for readability
        return 2.0 * self.nu_max / self.n_nu

    @property
    def d_tau(self) -> float:
        return 2.0 * np.pi / (self.n_nu * self.d_nu)

    @property
    def center(self) -> int:
        """Index of the nu = 0 sample."""
        return self.n_nu // 2

    @cached_property
    def nu(self) -> np.ndarray:
        """Frequency samples nu_k = (k - n_nu/2)*d_nu."""
        v = (np.arange(self.n_nu) - self.center) * self.d_nu
        v.flags.writeable = False
        return v

    @cached_property
    def energies(self) -> np.ndarray:
        """Energy samples lam_j = j*d_e (left endpoints)."""
        v = np.arange(self.n_e) * self.d_e
        v.flags.writeable = False
        return v

    @cached_property
    def tau(self) -> np.ndarray:
        """Dual time samples, half-sample offset, symmetric about zero."""
        v = (np.arange(self.n_nu) - self.center + 0.5) * self.d_tau
        v.flags.writeable = False
        return v

    @cached_property
    def _wedge_rows(self) -> np.ndarray:
        i = np.arange(self.n_e)
        rows = self.center + (i[:, None] - i[None, :])
        rows.flags.writeable = False
        return rows

    @cached_property
    def _wedge_cols(self) -> np.ndarray:
        i = np.arange(self.n_e)
        cols = np.maximum(i[:, None], i[None, :])
        cols.flags.writeable = False
        return cols

    @cached_property
    def _wedge_mask(self) -> np.ndarray:
        # cells reachable from a kernel sample: E >= |nu|, in index form
        k = np.abs(np.arange(self.n_nu) - self.center)
        mask = k[:, None] <= np.arange(self.n_e)[None, :]
        mask.flags.writeable = False
        return mask


def build_grid(nu_max: float, n_nu: int, e_max: float, n_e: int) -> SpectralGrid:
    """Construct a validated :class:`SpectralGrid`.

    Raises
    ------
    GridError
        If n_nu is not a power of two, the spacings are incommensurate,
        extents are non-positive, or the energy window does not fit inside
        the frequency window.
    """
    return SpectralGrid(float(nu_max), int(n_nu), float(e_max), int(n_e))


def _as_complex(values: np.ndarray, shape: tuple[int, int], what: str) -> np.ndarray:
    out = np.ascontiguousarray(values, dtype=np.complex128)
    if out.shape != shape:
        raise GridError(f"{what} values must have shape {shape}, got {out.shape}")
    return out


@dataclass(frozen=True)
class EnergyKernel:
    """Kernel k(lam_i, lam_j) of a Hilbert-Schmidt operator on the half-line.

    The squared norm uses the quadrature weight d_e per axis:
    ||k||^2 = d_e^2 * sum |k|^2.
    """

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = _as_complex(self.values, (self.grid.n_e, self.grid.n_e), "kernel")
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(self.grid.d_e * np.linalg.norm(self.values))


@dataclass(frozen=True)
class SpectralState:
    """State rho(nu_k, E_m) in the spectral representation.

    The squared norm uses the weight d_nu*d_e.  States that are images of an
    :class:`EnergyKernel` vanish for E < |nu|; states produced by spectral
    projections generally do not, and then have no kernel preimage.
    """

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = _as_complex(self.values, (self.grid.n_nu, self.grid.n_e), "spectral state")
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.d_nu * self.grid.d_e) * np.linalg.norm(self.values))


def kernel_to_spectral(k: EnergyKernel) -> SpectralState:
    """Map a kernel to the spectral representation.

    The forward branches are rho(nu, E) = k(E, E - nu) for nu >= 0 and
    rho(nu, E) = k(E + nu, E) for nu < 0; equivalently the sample at
    (lam_i, lam_j) lands at (nu, E) = (lam_i - lam_j, max(lam_i, lam_j)).
    Cells with E < |nu| are zero.  The map preserves the weighted norm
    exactly because the spacings on both axes agree.
    """
    g = k.grid
    out = np.zeros((g.n_nu, g.n_e), dtype=np.complex128)
    out[g._wedge_rows, g._wedge_cols] = k.values
    return SpectralState(g, out)


def spectral_to_kernel(s: SpectralState) -> EnergyKernel:
    """Invert :func:`kernel_to_spectral`.

    Raises
    ------
    UnphysicalSupportError
        If more than 1e-10 of the state's norm lies outside the wedge
        E >= |nu| (typical after a Hardy projection); such states have no
        kernel preimage on the half-line.
    """
    g = s.grid
    total = float(np.sum(np.abs(s.values) ** 2))
    outside = float(np.sum(np.abs(s.values[~g._wedge_mask]) ** 2))
    if total > 0.0 and np.sqrt(outside) > 1e-10 * np.sqrt(total):
        raise UnphysicalSupportError(
            "state has mass at E < |nu| (fraction {:.3e} of squared norm); "
            "no kernel preimage exists".format(outside / total)
        )
    return EnergyKernel(g, s.values[g._wedge_rows, g._wedge_cols].copy())


def boundary_mass(s: SpectralState) -> float:
    """Fraction of the squared norm in the outer 5% of the nu and E axes.

    Truncation diagnostic only; no operation refuses to run because of it.
    Lorentzian resonances have slow 1/nu tails, so accuracy control belongs
    to the scenario grid, and this number quantifies what the window loses.
    """
    g = s.grid
    w = np.abs(s.values) ** 2
    total = float(w.sum())
    if total == 0.0:
        return 0.0
    nu_edge = np.abs(g.nu) >= (1.0 - EDGE_FRACTION) * g.nu_max
    e_edge = g.energies >= (1.0 - EDGE_FRACTION) * g.e_max
    frac = w[nu_edge, :].sum() + w[np.ix_(~nu_edge, e_edge)].sum()
    return float(frac / total)
