"""States of the Liouville space, the generator, and the unitary group.

Wave functions embed as rank-1 kernels |psi><psi| and density matrices embed
as their operator square root M^(1/2), so that operator expectations become
inner products in the space of Hilbert-Schmidt kernels.  In the spectral
representation the generator acts by multiplication with nu and the unitary
group by the phase exp(-i*t*nu).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import EnergyKernel, GridError, SpectralGrid, SpectralState

__all__ = [
    "PureState",
    "TimeSeries",
    "inner",
    "embed_pure",
    "embed_density",
    "observable_expectation",
    "apply_liouvillian",
    "evolve",
    "hilbert_survival",
]

NORMALIZATION_TOL = 1e-8


@dataclass(frozen=True)
class PureState:
    """Wave function psi(lam_j) on the energy grid."""

    grid: SpectralGrid
    psi: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.psi, dtype=np.complex128)
        if v.shape != (self.grid.n_e,):
            raise GridError(f"psi must have shape ({self.grid.n_e},), got {v.shape}")
        object.__setattr__(self, "psi", v)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.d_e) * np.linalg.norm(self.psi))

    def normalized(self) -> "PureState":
        n = self.norm()
        if n == 0.0:
            raise ValueError("cannot normalize the zero state")
        return PureState(self.grid, self.psi / n)


@dataclass(frozen=True)
class TimeSeries:
    """Sampled real-valued function of time (units with hbar = 1)."""

    times: np.ndarray
    values: np.ndarray

    def __post_init__(self) -> None:
        t = np.ascontiguousarray(self.times, dtype=np.float64)
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if t.ndim != 1 or t.shape != v.shape:
            raise ValueError("times and values must be 1-d and the same length")
        if t.size > 1 and np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if not np.all(np.isfinite(v)):
            raise ValueError("values must be finite")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "values", v)


def _same_grid(a, b) -> None:
    if a.grid != b.grid:
        raise GridError("operands live on different grids")


def inner(a: SpectralState, b: SpectralState) -> complex:
    """Inner product <a, b>, conjugate-linear in the first argument.

    This is the trace inner product Tr(a* b) under the quadrature weight
    d_nu*d_e of the spectral plane.
    """
    _same_grid(a, b)
    return complex(a.grid.d_nu * a.grid.d_e * np.vdot(a.values, b.values))


def embed_pure(psi: PureState) -> EnergyKernel:
    """Embed a normalized wave function as the rank-1 kernel psi(x)*conj(psi(y)).

    The result is Hermitian with unit Hilbert-Schmidt norm, and expectations
    of multiplication observables agree with the usual quantum rule.
    """
    if abs(psi.norm() - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"psi must be normalized, got norm {psi.norm()!r}")
    return EnergyKernel(psi.grid, np.outer(psi.psi, psi.psi.conj()))


def embed_density(m: EnergyKernel) -> EnergyKernel:
    """Embed a density matrix M as its operator square root.

    The square root is taken in the quadrature-weighted sense: the returned
    kernel rho satisfies d_e * rho @ rho = m, which is operator composition
    on the discretized half-line.  Computed by eigendecomposition of the
    weighted matrix with eigenvalues below 1e-12 clamped to zero.

    Raises
    ------
    ValueError
        If m is not Hermitian, has an eigenvalue below -1e-10, or its trace
        differs from 1 by more than 1e-8.
    """
    g = m.grid
    v = m.values
    if np.linalg.norm(v - v.conj().T) > 1e-10 * max(np.linalg.norm(v), 1e-300):
        raise ValueError("density matrix must be Hermitian")
    trace = float(g.d_e * np.real(np.trace(v)))
    if abs(trace - 1.0) > 1e-8:
        raise ValueError(f"density matrix must have unit trace, got {trace!r}")
    weighted = v * g.d_e  # eigenvalues of this matrix are the state weights
    evals, evecs = np.linalg.eigh(weighted)
    if evals.min() < -1e-10:
        raise ValueError(f"density matrix is not PSD (min eigenvalue {evals.min():.3e})")
    evals = np.where(evals < 1e-12, 0.0, evals)  # clamp round-off
    root = (evecs * np.sqrt(evals)) @ evecs.conj().T
    return EnergyKernel(g, root / g.d_e)


def observable_expectation(rho: EnergyKernel, a: np.ndarray) -> float:
    """Expectation of the multiplication observable a(lam) in the embedded state.

    For rho = M^(1/2) this equals Tr(M a); for a rank-1 embedding it reduces
    to the quadrature of a*|psi|^2.
    """
    g = rho.grid
    a = np.asarray(a, dtype=np.float64)
    if a.shape != (g.n_e,):
        raise GridError(f"observable must have shape ({g.n_e},), got {a.shape}")
    return float(g.d_e**2 * np.sum(a[:, None] * np.abs(rho.values) ** 2))


def apply_liouvillian(s: SpectralState) -> SpectralState:
    """Apply the generator: multiplication by nu in the spectral representation."""
    return SpectralState(s.grid, s.values * s.grid.nu[:, None])


def evolve(s: SpectralState, t: float) -> SpectralState:
    """Unitary evolution: multiplication by exp(-i*t*nu).

    Exact group law and norm preservation hold sample by sample for any real t.
    """
    phase = np.exp(-1j * float(t) * s.grid.nu)
    return SpectralState(s.grid, s.values * phase[:, None])


def hilbert_survival(psi: PureState, times: np.ndarray) -> TimeSeries:
    """Ordinary Hilbert-space survival probability |<psi, exp(-iHt) psi>|^2.

    This is the rank-1 projection specialization; it is generally not
    monotone (superpositions of well-separated energies produce beats) and
    serves as the contrast to the Liouville-space survival probability.
    """
    if abs(psi.norm() - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"psi must be normalized, got norm {psi.norm()!r}")
    t = np.ascontiguousarray(times, dtype=np.float64)
    weights = psi.grid.d_e * np.abs(psi.psi) ** 2
    amp = np.exp(-1j * psi.grid.energies[:, None] * t[None, :]).T @ weights
    return TimeSeries(t, np.abs(amp) ** 2)
