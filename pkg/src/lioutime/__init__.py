"""Time-operator numerics for unstable quantum states in Liouville space.

The package discretizes the spectral plane of the Liouville operator, builds
the Fourier-conjugate representation where the time operator is diagonal,
and from those two multiplications derives everything else: Hardy-class
projections, the contraction semigroup of the undecayed component, resonance
eigenstates with purely exponential decay, and the time-energy uncertainty
product.
"""

from .grid import (
    EnergyKernel,
    GridError,
    SpectralGrid,
    SpectralState,
    UnphysicalSupportError,
    boundary_mass,
    build_grid,
    kernel_to_spectral,
    spectral_to_kernel,
)
from .liouville import (
    PureState,
    TimeSeries,
    apply_liouvillian,
    embed_density,
    embed_pure,
    evolve,
    hilbert_survival,
    inner,
    observable_expectation,
)
from .profiles import (
    exponential_profile,
    gaussian_profile,
    indicator_profile,
    two_bump_profile,
)
from .semigroup import (
    ResonanceSpec,
    decay_window,
    resonance_state,
    semigroup_apply,
    survival,
)
from .timeop import (
    TauState,
    TimeStats,
    apply_time_operator,
    effective_cut,
    from_tau,
    hardy_decompose,
    project_below,
    project_decayed,
    tau_boundary_mass,
    time_stats,
    to_tau,
)

__version__ = "0.1.0"

__all__ = [
    "EnergyKernel",
    "GridError",
    "SpectralGrid",
    "SpectralState",
    "UnphysicalSupportError",
    "boundary_mass",
    "build_grid",
    "kernel_to_spectral",
    "spectral_to_kernel",
    "PureState",
    "TimeSeries",
    "apply_liouvillian",
    "embed_density",
    "embed_pure",
    "evolve",
    "hilbert_survival",
    "inner",
    "observable_expectation",
    "exponential_profile",
    "gaussian_profile",
    "indicator_profile",
    "two_bump_profile",
    "ResonanceSpec",
    "decay_window",
    "resonance_state",
    "semigroup_apply",
    "survival",
    "TauState",
    "TimeStats",
    "apply_time_operator",
    "effective_cut",
    "from_tau",
    "hardy_decompose",
    "project_below",
    "project_decayed",
    "tau_boundary_mass",
    "time_stats",
    "to_tau",
    "__version__",
]
