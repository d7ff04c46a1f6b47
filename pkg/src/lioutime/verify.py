"""Named invariant checks over every module, for the scenario runner.

Each check exercises one property group and reports a worst-case measured
value against its tolerance.  Direction depends on the check: residual checks
pass when measured <= tolerance, bound checks pass when measured >= tolerance
(the CheckResult carries the explicit outcome either way).

The resonance checks place the pole at the resolvability floor (|Im xi| =
10*d_nu), which keeps the Lorentzian as narrow as the grid allows; they need
n_nu >= 2**14 to meet their tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import EnergyKernel, SpectralState, kernel_to_spectral, spectral_to_kernel
from .liouville import (
    apply_liouvillian,
    embed_density,
    embed_pure,
    evolve,
    hilbert_survival,
    inner,
    observable_expectation,
)
from .profiles import gaussian_profile, indicator_profile, two_bump_profile
from .sampling import (
    random_hardy_state,
    random_kernel,
    random_mixture,
    random_pure_state,
    random_smooth_state,
)
from .semigroup import ResonanceSpec, decay_window, resonance_state, semigroup_apply, survival
from .timeop import (
    apply_time_operator,
    from_tau,
    hardy_decompose,
    project_below,
    project_decayed,
    time_stats,
    to_tau,
)

__all__ = ["CheckResult", "run_checks"]


@dataclass(frozen=True)
class CheckResult:
    check_id: str
    passed: bool
    measured: float
    tolerance: float


def _snap(grid, t: float) -> float:
    # lattice times make discrete evolution an exact shift in tau
    return round(float(t) / grid.d_tau) * grid.d_tau


def run_checks(grid, seed: int = 1234) -> list[CheckResult]:
    """Run the full invariant suite on the given grid.  Deterministic in seed."""
    rng = np.random.default_rng(seed)
    out: list[CheckResult] = []

    def residual_check(check_id: str, measured: float, tolerance: float) -> None:
        out.append(CheckResult(check_id, bool(measured <= tolerance), float(measured), tolerance))

    def bound_check(check_id: str, measured: float, bound: float) -> None:
        out.append(CheckResult(check_id, bool(measured >= bound), float(measured), bound))

    kernels = [random_kernel(grid, rng) for _ in range(3)]
    states = [random_smooth_state(grid, rng) for _ in range(3)]
    hardy = [random_hardy_state(grid, rng) for _ in range(2)]

    # --- grid: coordinate change is a norm-preserving permutation
    worst = 0.0
    for k in kernels:
        s = kernel_to_spectral(k)
        worst = max(worst, abs(s.norm() - k.norm()) / k.norm())
        back = spectral_to_kernel(s)
        worst = max(worst, float(np.max(np.abs(back.values - k.values))))
    residual_check("grid_roundtrip_norm", worst, 1e-12)

    # --- grid: branch formulas against the indicator outer product
    psi = indicator_profile(grid, 0.0, grid.e_max / 2.0)
    s = kernel_to_spectral(embed_pure(psi))
    nu = grid.nu[:, None]
    e = grid.energies[None, :]
    hi = grid.e_max / 2.0
    amp = 1.0 / hi  # normalized indicator amplitude squared
    expected = np.where((e >= np.abs(nu)) & (e < hi), amp, 0.0)
    worst = float(np.max(np.abs(s.values - expected)))
    diag = np.zeros((grid.n_e, grid.n_e), dtype=complex)
    np.fill_diagonal(diag, rng.normal(size=grid.n_e))
    sd = kernel_to_spectral(EnergyKernel(grid, diag))
    off = np.delete(np.abs(sd.values), grid.center, axis=0)
    worst = max(worst, float(off.max(initial=0.0)))
    residual_check("grid_branch_formulas", worst, 1e-12)

    # --- liouville: one-parameter unitary group
    worst = 0.0
    for s in states:
        n0 = s.norm()
        t1, t2 = rng.uniform(0.1, 2.0, size=2)
        worst = max(worst, abs(evolve(s, t1).norm() - n0) / n0)
        a = evolve(evolve(s, t1), t2)
        b = evolve(s, t1 + t2)
        worst = max(worst, SpectralState(grid, a.values - b.values).norm() / n0)
        idm = SpectralState(grid, evolve(s, 0.0).values - s.values).norm()
        worst = max(worst, idm / n0)
    residual_check("unitary_group", worst, 1e-12)

    # --- liouville: generator self-adjoint and commuting with the group
    worst = 0.0
    for a, b in zip(states, states[1:]):
        lhs = inner(a, apply_liouvillian(b))
        rhs = inner(apply_liouvillian(a), b)
        worst = max(worst, abs(lhs - rhs) / (a.norm() * b.norm()))
        t = rng.uniform(0.1, 2.0)
        x = evolve(apply_liouvillian(a), t)
        y = apply_liouvillian(evolve(a, t))
        worst = max(worst, SpectralState(grid, x.values - y.values).norm() / a.norm())
    residual_check("generator_self_adjoint", worst, 1e-12)

    # --- liouville: embeddings preserve expectations
    worst = 0.0
    obs = grid.energies + 0.3 * np.sin(2.0 * np.pi * grid.energies / grid.e_max)
    psi = random_pure_state(grid, rng)
    rho = embed_pure(psi)
    direct = float(grid.d_e * np.sum(obs * np.abs(psi.psi) ** 2))
    worst = max(worst, abs(observable_expectation(rho, obs) - direct) / abs(direct))
    m = random_mixture(grid, rng)
    root = embed_density(m)
    tr = float(grid.d_e * np.real(np.trace((obs[:, None] * m.values))))
    worst = max(worst, abs(observable_expectation(root, obs) - tr) / abs(tr))
    residual_check("embedding_expectations", worst, 1e-10)

    # --- liouville: ordinary survival is not monotone for a two-bump state
    bumps = two_bump_profile(grid, 0.3 * grid.e_max, 0.6 * grid.e_max, 0.03 * grid.e_max)
    period = 2.0 * np.pi / (0.3 * grid.e_max)
    ts = np.linspace(0.0, 1.1 * period, 48)
    p = hilbert_survival(bumps, ts).values
    margin = float(np.max(p - np.minimum.accumulate(p)))
    bound_check("hilbert_beats_nonmonotone", margin, 0.1)

    # --- time_op: Parseval and exact inversion
    worst = 0.0
    for s in states:
        ts_ = to_tau(s)
        worst = max(worst, abs(ts_.norm() - s.norm()) / s.norm())
        back = from_tau(ts_)
        worst = max(worst, SpectralState(grid, back.values - s.values).norm() / s.norm())
    residual_check("tau_parseval_roundtrip", worst, 1e-12)

    cuts = [0.0] + [_snap(grid, c) for c in rng.uniform(-5.0, 5.0, size=3) * grid.d_tau * 40]

    # --- time_op: projections are idempotent, self-adjoint, contractive
    worst = 0.0
    for s in states[:2]:
        for c in cuts:
            ps = project_below(s, c)
            pps = project_below(ps, c)
            worst = max(worst, SpectralState(grid, pps.values - ps.values).norm() / s.norm())
            worst = max(worst, max(ps.norm() - s.norm(), 0.0) / s.norm())
    a, b = states[0], states[1]
    for c in cuts:
        lhs = inner(project_below(a, c), b)
        rhs = inner(a, project_below(b, c))
        worst = max(worst, abs(lhs - rhs) / (a.norm() * b.norm()))
    residual_check("projection_idempotent_selfadjoint", worst, 1e-12)

    # --- time_op: nesting and monotone range
    worst = 0.0
    s = states[2]
    sorted_cuts = sorted(cuts)
    for lo, hi2 in zip(sorted_cuts, sorted_cuts[1:]):
        nested = project_below(project_below(s, hi2), lo)
        direct = project_below(s, lo)
        worst = max(worst, SpectralState(grid, nested.values - direct.values).norm() / s.norm())
        worst = max(worst, max(direct.norm() - project_below(s, hi2).norm(), 0.0) / s.norm())
    residual_check("projection_nested_monotone", worst, 1e-12)

    # --- time_op: intertwining with the group at lattice times
    worst = 0.0
    for s in states[:2]:
        for c in cuts[:2]:
            t = _snap(grid, rng.uniform(0.5, 3.0))
            lhs = evolve(project_below(evolve(s, -t), c), t)
            rhs = project_below(s, c + t)
            worst = max(worst, SpectralState(grid, lhs.values - rhs.values).norm() / s.norm())
    residual_check("projection_intertwining", worst, 1e-10)

    # --- time_op: Hardy split is an orthogonal direct sum
    worst = 0.0
    for s in states:
        plus, minus = hardy_decompose(s)
        n2 = s.norm() ** 2
        worst = max(worst, abs(inner(plus, minus)) / n2)
        worst = max(worst, abs(plus.norm() ** 2 + minus.norm() ** 2 - n2) / n2)
    even = SpectralState(
        grid,
        np.outer(
            np.exp(-(grid.nu**2) / (2.0 * (0.02 * grid.nu_max) ** 2)),
            gaussian_profile(grid, 0.5 * grid.e_max, 0.1 * grid.e_max).psi,
        ),
    )
    plus, minus = hardy_decompose(even)
    half = even.norm() ** 2 / 2.0
    worst = max(worst, abs(plus.norm() ** 2 - half) / half)
    worst = max(worst, abs(minus.norm() ** 2 - half) / half)
    residual_check("hardy_orthogonal_split", worst, 1e-10)

    # --- time_op: canonical conjugacy of generator and time operator
    worst = 0.0
    for a, b in zip(states, states[1:]):
        tl = apply_time_operator(apply_liouvillian(b))
        lt = apply_liouvillian(apply_time_operator(b))
        lhs = inner(a, SpectralState(grid, tl.values - lt.values))
        worst = max(worst, abs(lhs - 1j * inner(a, b)) / (a.norm() * b.norm()))
    residual_check("commutation_conjugacy", worst, 1e-6)

    # --- time_op: Weyl relation at lattice times
    worst = 0.0
    for s in states[:3]:
        t = _snap(grid, rng.uniform(0.5, 2.5))
        lhs = evolve(apply_time_operator(evolve(s, t)), -t)
        rhs = SpectralState(grid, apply_time_operator(s).values + t * s.values)
        worst = max(worst, SpectralState(grid, lhs.values - rhs.values).norm() / s.norm())
    residual_check("weyl_relation", worst, 1e-6)

    # --- time_op: event projections complement the spectral family
    worst = 0.0
    for s in states[:2]:
        n2 = s.norm() ** 2
        for t in (0.7, 2.3):
            a2 = project_decayed(s, t).norm() ** 2
            b2 = project_below(s, -t).norm() ** 2
            worst = max(worst, abs(a2 + b2 - n2) / n2)
    f0 = project_below(hardy[0], 0.0)
    worst = max(worst, project_decayed(f0, 0.0).norm() / f0.norm())
    residual_check("event_complement_pythagoras", worst, 1e-10)

    # --- semigroup: composition law on Hardy states at lattice times
    worst = 0.0
    for h in hardy:
        t1 = _snap(grid, rng.uniform(0.2, 1.0))
        t2 = _snap(grid, rng.uniform(0.2, 1.0))
        a = semigroup_apply(semigroup_apply(h, t1), t2)
        b = semigroup_apply(h, t1 + t2)
        worst = max(worst, SpectralState(grid, a.values - b.values).norm() / h.norm())
    residual_check("semigroup_law", worst, 1e-6)

    # --- semigroup: contraction and monotone decay for Hardy and generic states
    worst = 0.0
    for s in states[:2] + hardy[:1]:
        last = s.norm()
        for t in (0.0, 0.7, 1.9):
            n = semigroup_apply(s, _snap(grid, t)).norm()
            worst = max(worst, (n - last) / s.norm())
            last = n
    residual_check("semigroup_contraction", worst, 1e-10)

    # --- semigroup: closed dynamics of the projected component.  Tested on
    # states with interior tau support; truncated Lorentzians carry ~1e-12 of
    # their mass at the tau seam, which the lattice shift wraps around.
    worst = 0.0
    for s in states[:2]:
        t = _snap(grid, 1.3)
        lhs = project_below(evolve(s, t), 0.0)
        rhs = project_below(evolve(project_below(s, 0.0), t), 0.0)
        worst = max(worst, SpectralState(grid, lhs.values - rhs.values).norm() / s.norm())
    residual_check("semigroup_reduction_identity", worst, 1e-10)

    # --- semigroup: resonance eigenstate at the resolvability floor
    b_res = 10.0 * grid.d_nu
    xi = complex(0.0, -b_res)
    prof = gaussian_profile(grid, 0.5 * grid.e_max, 0.1 * grid.e_max)
    rho_xi = resonance_state(ResonanceSpec(xi, prof.psi), grid)
    rn = rho_xi.norm()
    worst = 0.0
    for t in (0.2 / b_res, 1.0 / b_res, 2.0 / b_res):
        ts_ = _snap(grid, t)
        w = semigroup_apply(rho_xi, ts_)
        ref = np.exp(-1j * ts_ * xi) * rho_xi.values
        worst = max(worst, SpectralState(grid, w.values - ref).norm() / rn)
    residual_check("resonance_eigenvalue", worst, 1e-2)

    # --- semigroup: purely exponential survival of the resonance
    s_norm = SpectralState(grid, rho_xi.values / rn)
    times = np.array([_snap(grid, t) for t in np.linspace(0.0, 2.5 / b_res, 21)])
    times = np.unique(times)
    p = survival(s_norm, times).values
    ref = np.exp(-2.0 * b_res * times)
    worst = float(np.max(np.abs(p - ref) / ref))
    worst = max(worst, float(np.max(np.diff(p))))
    residual_check("resonance_survival_exponential", worst, 1e-2)

    # --- semigroup: resonance sits in the upper Hardy class
    _, minus = hardy_decompose(s_norm)
    residual_check("resonance_hardy_mass", minus.norm() ** 2, 1e-3)

    # --- time_op: analytic time moments of the resonance
    stats = time_stats(s_norm)
    worst = abs(stats.mean_T + 1.0 / (2.0 * b_res)) * 2.0 * b_res
    worst = max(worst, abs(stats.delta_T - 1.0 / (2.0 * b_res)) * 2.0 * b_res)
    residual_check("resonance_time_moments", worst, 5e-3)

    # --- semigroup: decay windows complement survival on undecayed states
    worst = 0.0
    for h in hardy[:2]:
        f0 = project_below(h, 0.0)
        f0 = SpectralState(grid, f0.values / f0.norm())
        t = _snap(grid, 1.5)
        total = decay_window(f0, 0.0, t) + survival(f0, np.array([t])).values[0]
        worst = max(worst, abs(total - 1.0))
        worst = max(worst, decay_window(f0, -5.0, 0.0))
        tau_span = (grid.center + 1) * grid.d_tau
        worst = max(worst, abs(decay_window(f0, -tau_span, tau_span) - 1.0))
    residual_check("decay_window_complementarity", worst, 1e-6)

    # --- time_op: uncertainty products of physical embeddings
    products = []
    for _ in range(5):
        psi = random_pure_state(grid, rng)
        m = embed_pure(psi)
        s = kernel_to_spectral(m)
        products.append(time_stats(s, m).product)
    for _ in range(3):
        m = random_mixture(grid, rng)
        s = kernel_to_spectral(embed_density(m))
        products.append(time_stats(s, m).product)
    bound_check("uncertainty_product_bound", float(min(products)), 1.0 / (2.0 * np.sqrt(2.0)) - 0.01)

    return out
