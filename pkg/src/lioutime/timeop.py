"""The time operator, its spectral projections, and the Hardy decomposition.

The conjugate representation diagonalizes the time operator: a spectral state
rho(nu, E) transforms per energy slice as

    rho_hat(tau, E) = (1/sqrt(2*pi)) * integral exp(+i*tau*nu) rho(nu, E) dnu

and the time operator is multiplication by tau there.  With this sign the
states analytic in the upper half of the nu plane (decaying resonances among
them) have tau support on tau <= 0, and the projection onto "not yet decayed
at time tau" is multiplication by the characteristic function of (-inf, tau].

The discrete tau lattice is offset by half a sample, tau_n = (n - N/2 + 1/2)
* d_tau.  That keeps the lattice symmetric about tau = 0, puts no sample on
the projection cut, and makes the split of states with even tau profile exact.
The transform itself is a phase-conjugated FFT and is exactly unitary and
exactly invertible on samples.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import EDGE_FRACTION, EnergyKernel, GridError, SpectralGrid, SpectralState
from .liouville import NORMALIZATION_TOL

__all__ = [
    "TauState",
    "TimeStats",
    "to_tau",
    "from_tau",
    "tau_boundary_mass",
    "apply_time_operator",
    "project_below",
    "project_decayed",
    "effective_cut",
    "hardy_decompose",
    "time_stats",
]

# Relative guard so cuts that land on a sample up to round-off still include it.
_CUT_GUARD = 1e-9

# Boundary-mass fraction above which multiplication by tau is suspect.
_TAU_EDGE_TOL = 1e-6


@dataclass(frozen=True)
class TauState:
    """State rho_hat(tau_n, E_m) in the representation that diagonalizes T.

    The squared norm uses the weight d_tau*d_e and equals the squared norm of
    the originating spectral state (Parseval).
    """

    grid: SpectralGrid
    values: np.ndarray

    def __post_init__(self) -> None:
        v = np.ascontiguousarray(self.values, dtype=np.complex128)
        if v.shape != (self.grid.n_nu, self.grid.n_e):
            raise GridError(
                f"tau state values must have shape {(self.grid.n_nu, self.grid.n_e)}, "
                f"got {v.shape}"
            )
        object.__setattr__(self, "values", v)

    def norm(self) -> float:
        return float(np.sqrt(self.grid.d_tau * self.grid.d_e) * np.linalg.norm(self.values))


@dataclass(frozen=True)
class TimeStats:
    """First and second moments of the time operator, and the energy spread.

    delta_E and product are None when no physical density matrix was supplied;
    the energy moments are defined by the density matrix, not by the Liouville
    vector alone.
    """

    mean_T: float
    delta_T: float
    delta_E: float | None = None
    product: float | None = None


def _half_offset_phase(grid: SpectralGrid) -> np.ndarray:
    # exp(+i*pi*(k - N/2)/N); conjugate phases implement the half-sample offset
    return np.exp(1j * np.pi * (np.arange(grid.n_nu) - grid.center) / grid.n_nu)


def to_tau(s: SpectralState) -> TauState:
    """Transform to the representation where the time operator is diagonal.

    Returns the discrete approximation of
    rho_hat(tau, E) = (1/sqrt(2*pi)) * integral exp(+i*tau*nu) rho(nu, E) dnu
    sampled on the half-offset tau lattice.  The discrete map is exactly
    unitary (Parseval to round-off) and :func:`from_tau` inverts it exactly
    on samples.
    """
    g = s.grid
    c = s.values * _half_offset_phase(g)[:, None]
    c = np.fft.ifftshift(c, axes=0)
    c = np.fft.ifft(c, axis=0) * g.n_nu
    c = np.fft.fftshift(c, axes=0)
    return TauState(g, c * (g.d_nu / np.sqrt(2.0 * np.pi)))


def from_tau(ts: TauState) -> SpectralState:
    """Invert :func:`to_tau` exactly on samples."""
    g = ts.grid
    c = np.fft.ifftshift(ts.values, axes=0)
    c = np.fft.fft(c, axis=0)
    c = np.fft.fftshift(c, axes=0)
    c = c * _half_offset_phase(g).conj()[:, None]
    return SpectralState(g, c * (g.d_tau / np.sqrt(2.0 * np.pi)))


def tau_boundary_mass(ts: TauState) -> float:
    """Fraction of the squared norm in the outer 5% of the tau axis."""
    g = ts.grid
    w = np.abs(ts.values) ** 2
    total = float(w.sum())
    if total == 0.0:
        return 0.0
    tau_half_width = (g.center - 0.5) * g.d_tau
    edge = np.abs(g.tau) >= (1.0 - EDGE_FRACTION) * tau_half_width
    return float(w[edge, :].sum() / total)


def apply_time_operator(s: SpectralState) -> SpectralState:
    """Apply T: multiplication by tau in the conjugate representation.

    Warns when more than 1e-6 of the state's mass sits near the edge of the
    tau window, where multiplication by the truncated tau values is no longer
    a faithful image of the unbounded operator.
    """
    ts = to_tau(s)
    frac = tau_boundary_mass(ts)
    if frac > _TAU_EDGE_TOL:
        warnings.warn(
            f"state has {frac:.3e} of its mass near the tau boundary; "
            "time-operator application is inaccurate there",
            RuntimeWarning,
            stacklevel=2,
        )
    return from_tau(TauState(s.grid, ts.values * s.grid.tau[:, None]))


def effective_cut(grid: SpectralGrid, cut: float) -> float:
    """The tau sample the projection cut actually lands on.

    Cuts snap down to the last lattice sample at or below the requested value
    (the cut itself belongs to the kept side).  Returns -inf when the cut lies
    below the whole lattice, so the projection is zero.
    """
    guarded = float(cut) + _CUT_GUARD * grid.d_tau
    idx = int(np.floor((guarded - grid.tau[0]) / grid.d_tau))
    if idx < 0:
        return float("-inf")
    return float(grid.tau[min(idx, grid.n_nu - 1)])


def project_below(s: SpectralState, cut: float) -> SpectralState:
    """Spectral projection of the time operator onto (-inf, cut].

    Multiplication by the characteristic function of tau <= cut in the
    conjugate representation.  Idempotent, self-adjoint, norm-nonincreasing;
    cut = 0 selects the upper Hardy (not yet decayed) component.
    """
    g = s.grid
    mask = g.tau <= float(cut) + _CUT_GUARD * g.d_tau
    ts = to_tau(s)
    return from_tau(TauState(g, ts.values * mask[:, None]))


def project_decayed(s: SpectralState, t: float) -> SpectralState:
    """Projection onto the component whose decay event lies at or before time t.

    This is the complement identity applied to the reflected cut: the result
    is s - project_below(s, -t).  For a state prepared undecayed at time zero
    its squared norm is the probability that the decay happened by time t.
    """
    return SpectralState(s.grid, s.values - project_below(s, -float(t)).values)


def hardy_decompose(s: SpectralState) -> tuple[SpectralState, SpectralState]:
    """Split s into its upper and lower Hardy components.

    The upper component is project_below(s, 0) (tau support on tau <= 0), the
    lower is the remainder; the two are orthogonal and their squared norms add
    up to the squared norm of s.
    """
    plus = project_below(s, 0.0)
    minus = SpectralState(s.grid, s.values - plus.values)
    return plus, minus


def time_stats(s: SpectralState, m: EnergyKernel | None = None) -> TimeStats:
    """Moments of the time operator in s, and of the energy in m when given.

    Parameters
    ----------
    s : SpectralState
        Normalized Liouville vector (for a density matrix M this must be the
        embedding of M^(1/2), which is what defines delta_T for mixed states).
    m : EnergyKernel, optional
        The physical density matrix.  Required for delta_E and the product;
        energy moments are Tr(M*H) and Tr(M*H^2) on the lambda grid.
    """
    g = s.grid
    n = s.norm()
    if abs(n - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"state must be normalized, got norm {n!r}")
    ts = to_tau(s)
    w = g.d_tau * g.d_e * np.sum(np.abs(ts.values) ** 2, axis=1)
    mean_t = float(np.sum(g.tau * w))
    var_t = float(np.sum(g.tau**2 * w)) - mean_t**2
    delta_t = float(np.sqrt(max(var_t, 0.0)))
    if m is None:
        return TimeStats(mean_T=mean_t, delta_T=delta_t)
    if m.grid != g:
        raise GridError("density matrix lives on a different grid")
    diag = np.real(np.diagonal(m.values))
    trace = float(g.d_e * diag.sum())
    if abs(trace - 1.0) > 1e-6:
        raise ValueError(f"density matrix must have unit trace, got {trace!r}")
    mean_e = float(g.d_e * np.sum(g.energies * diag))
    var_e = float(g.d_e * np.sum(g.energies**2 * diag)) - mean_e**2
    delta_e = float(np.sqrt(max(var_e, 0.0)))
    return TimeStats(
        mean_T=mean_t,
        delta_T=delta_t,
        delta_E=delta_e,
        product=delta_t * delta_e,
    )
