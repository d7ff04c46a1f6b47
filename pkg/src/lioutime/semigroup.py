"""The contraction semigroup of the unstable component and its eigenstates.

Compressing the unitary group between projections onto the undecayed
subspace gives W_t = P_0 U_t P_0 for t >= 0.  Because evolution only moves
tau support to the right, P_0 U_t (1 - P_0) = 0 and the compression is
multiplicative: a genuine semigroup, contractive, with purely exponential
decay on its eigenstates

    rho_xi(nu, E) = psi(E) / (nu - xi),   Im xi < 0,

which satisfy W_t rho_xi = exp(-i*t*xi) rho_xi up to grid truncation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import GridError, SpectralGrid, SpectralState
from .liouville import NORMALIZATION_TOL, TimeSeries, evolve
from .timeop import _CUT_GUARD, project_below, to_tau

__all__ = [
    "ResonanceSpec",
    "resonance_state",
    "semigroup_apply",
    "survival",
    "decay_window",
]

# Relative slack for the pole-resolution preconditions, so parameters sitting
# exactly on the admissible boundary are not rejected by float round-off.
_PRE_SLACK = 1e-9


@dataclass(frozen=True)
class ResonanceSpec:
    """Pole position xi (lower half-plane) and energy profile psi(E_m)."""

    xi: complex
    profile: np.ndarray

    def __post_init__(self) -> None:
        if not np.imag(self.xi) < 0:
            raise ValueError(f"xi must have Im(xi) < 0, got {self.xi!r}")
        v = np.ascontiguousarray(self.profile, dtype=np.complex128)
        if v.ndim != 1:
            raise ValueError("profile must be a 1-d complex vector")
        object.__setattr__(self, "profile", v)


def resonance_state(spec: ResonanceSpec, grid: SpectralGrid) -> SpectralState:
    """Sample the decay eigenstate rho_xi(nu, E) = psi(E)/(nu - xi).

    The squared norm is approximately pi/|Im xi| for a normalized profile.
    The Lorentzian has slow tails, so callers should check
    :func:`lioutime.grid.boundary_mass` on the result when accuracy matters.

    Raises
    ------
    ValueError
        If the pole is not resolvable (|Im xi| < 10*d_nu) or its tails are
        not contained (|Im xi| > nu_max/50), or the profile is not normalized
        on this grid.
    """
    if spec.profile.shape != (grid.n_e,):
        raise GridError(
            f"profile must have shape ({grid.n_e},), got {spec.profile.shape}"
        )
    b = -float(np.imag(spec.xi))
    if b < 10.0 * grid.d_nu * (1.0 - _PRE_SLACK):
        raise ValueError(
            f"pole is not resolvable: |Im xi| = {b!r} < 10*d_nu = {10 * grid.d_nu!r}"
        )
    if b > grid.nu_max / 50.0 * (1.0 + _PRE_SLACK):
        raise ValueError(
            f"pole tails are not contained: |Im xi| = {b!r} > nu_max/50 = "
            f"{grid.nu_max / 50.0!r}"
        )
    pnorm = float(np.sqrt(grid.d_e) * np.linalg.norm(spec.profile))
    if abs(pnorm - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"profile must be normalized, got norm {pnorm!r}")
    lorentz = 1.0 / (grid.nu - spec.xi)
    return SpectralState(grid, lorentz[:, None] * spec.profile[None, :])


def semigroup_apply(s: SpectralState, t: float) -> SpectralState:
    """Apply W_t = P_0 U_t P_0 for t >= 0.

    Norm-nonincreasing for every state; on the undecayed subspace it agrees
    with project_below(evolve(s, t), 0).
    """
    if t < 0:
        raise ValueError(f"the semigroup is defined for t >= 0, got t = {t!r}")
    return project_below(evolve(project_below(s, 0.0), float(t)), 0.0)


def survival(s: SpectralState, times: np.ndarray) -> TimeSeries:
    """Survival probability p(t) = ||P_0 U_t s||^2 of the undecayed component.

    Computed per time sample as the tau mass at or below zero of the evolved
    state (Parseval makes this the projected norm without transforming back).
    Monotone nonincreasing and exponential exp(-2*|Im xi|*t) on resonance
    eigenstates.
    """
    n = s.norm()
    if abs(n - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"state must be normalized, got norm {n!r}")
    t = np.ascontiguousarray(times, dtype=np.float64)
    if t.size == 0 or t[0] < 0 or (t.size > 1 and np.any(np.diff(t) <= 0)):
        raise ValueError("times must be nonnegative and strictly increasing")
    g = s.grid
    mask = g.tau <= _CUT_GUARD * g.d_tau
    weight = g.d_tau * g.d_e
    p = np.empty(t.size)
    for i, ti in enumerate(t):
        hat = to_tau(evolve(s, ti))
        p[i] = weight * np.sum(np.abs(hat.values[mask, :]) ** 2)
    return TimeSeries(t, p)


def decay_window(s: SpectralState, t1: float, t2: float) -> float:
    """Probability that the decay event falls in the interval ]t1, t2].

    The event-time projections complement the spectral family at reflected
    cuts, so the window probability is the tau mass of s in (-t2, -t1],
    which is nonnegative and additive over disjoint windows by construction.
    """
    if not t1 < t2:
        raise ValueError(f"need t1 < t2, got t1 = {t1!r}, t2 = {t2!r}")
    n = s.norm()
    if abs(n - 1.0) > NORMALIZATION_TOL:
        raise ValueError(f"state must be normalized, got norm {n!r}")
    g = s.grid
    guard = _CUT_GUARD * g.d_tau
    window = (g.tau <= -float(t1) + guard) & ~(g.tau <= -float(t2) + guard)
    hat = to_tau(s)
    return float(g.d_tau * g.d_e * np.sum(np.abs(hat.values[window, :]) ** 2))
