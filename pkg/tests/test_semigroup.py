"""The compressed evolution, survival and decay probabilities, eigenstates."""

import numpy as np
import pytest

from lioutime import (
    GridError,
    ResonanceSpec,
    SpectralState,
    decay_window,
    gaussian_profile,
    project_below,
    resonance_state,
    semigroup_apply,
    survival,
)
from lioutime.sampling import random_hardy_state, random_smooth_state

from conftest import snap


def unit(s):
    return SpectralState(s.grid, s.values / s.norm())


def test_spec_requires_lower_half_plane_pole():
    prof = np.ones(4)
    for xi in (0.5, 0.5 + 0.0j, 0.3 + 0.2j):
        with pytest.raises(ValueError, match=r"Im\(xi\) < 0"):
            ResonanceSpec(complex(xi), prof)
    with pytest.raises(ValueError, match="1-d"):
        ResonanceSpec(-0.5j, np.ones((2, 2)))


def test_pole_resolution_preconditions(grid_mid):
    g = grid_mid  # d_nu = 1/64, nu_max = 32
    prof = gaussian_profile(g, 0.5, 0.1)
    with pytest.raises(ValueError, match="not resolvable"):
        resonance_state(ResonanceSpec(-0.1j, prof.psi), g)
    with pytest.raises(ValueError, match="not contained"):
        resonance_state(ResonanceSpec(-0.7j, prof.psi), g)
    # both admissibility boundaries must be accepted exactly
    resonance_state(ResonanceSpec(-1j * 10.0 * g.d_nu, prof.psi), g)
    resonance_state(ResonanceSpec(-1j * g.nu_max / 50.0, prof.psi), g)


def test_pole_profile_validation(grid_mid):
    prof = gaussian_profile(grid_mid, 0.5, 0.1)
    with pytest.raises(GridError, match="shape"):
        resonance_state(ResonanceSpec(-0.5j, prof.psi[:-1]), grid_mid)
    with pytest.raises(ValueError, match="normalized"):
        resonance_state(ResonanceSpec(-0.5j, 2.0 * prof.psi), grid_mid)


def test_negative_time_is_rejected(grid_mid, rng):
    s = random_hardy_state(grid_mid, rng)
    with pytest.raises(ValueError, match="t >= 0"):
        semigroup_apply(s, -0.5)


def test_zero_time_gives_the_projection(grid_mid, rng):
    s = random_smooth_state(grid_mid, rng)
    w0 = semigroup_apply(s, 0.0)
    p0 = project_below(s, 0.0)
    assert SpectralState(grid_mid, w0.values - p0.values).norm() <= 1e-12 * s.norm()


def test_composition_law_on_undecayed_states(grid_mid, rng):
    for _ in range(3):
        h = random_hardy_state(grid_mid, rng)
        t1 = snap(grid_mid, rng.uniform(0.2, 1.0))
        t2 = snap(grid_mid, rng.uniform(0.2, 1.0))
        a = semigroup_apply(semigroup_apply(h, t1), t2)
        b = semigroup_apply(h, t1 + t2)
        assert SpectralState(grid_mid, a.values - b.values).norm() <= 1e-6 * h.norm()


def test_contraction_for_generic_states(grid_mid, rng):
    for maker in (random_smooth_state, random_hardy_state):
        s = maker(grid_mid, rng)
        last = s.norm()
        for t in (0.0, snap(grid_mid, 0.7), snap(grid_mid, 1.9)):
            n = semigroup_apply(s, t).norm()
            assert n <= last + 1e-10 * s.norm()
            last = n


def test_eigenstate_picks_up_a_complex_exponential(res_grid, rho_half):
    xi = -0.5j
    for t in (snap(res_grid, 0.4), snap(res_grid, 1.0), snap(res_grid, 2.0)):
        w = semigroup_apply(rho_half, t)
        ref = np.exp(-1j * t * xi) * rho_half.values
        assert SpectralState(res_grid, w.values - ref).norm() <= 1e-2


def test_survival_of_the_eigenstate_is_exponential(res_grid, rho_half):
    times = np.unique([snap(res_grid, t) for t in np.linspace(0.0, 2.5, 11)])
    p = survival(rho_half, times).values
    ref = np.exp(-1.0 * times)  # 2*|Im xi| = 1
    assert np.max(np.abs(p - ref) / ref) <= 1e-2
    assert np.all(np.diff(p) <= 1e-12)


def test_survival_of_an_undecayed_state_starts_at_one(grid_mid, rng):
    f0 = unit(project_below(random_hardy_state(grid_mid, rng), 0.0))
    times = np.array([0.0] + [snap(grid_mid, t) for t in (0.6, 1.3, 2.1)])
    p = survival(f0, times).values
    assert p[0] == pytest.approx(1.0, abs=1e-12)
    assert np.all(np.diff(p) <= 1e-10)
    assert np.all((p >= 0.0) & (p <= 1.0 + 1e-12))


def test_survival_validation(grid_mid, rng):
    s = random_smooth_state(grid_mid, rng)
    with pytest.raises(ValueError, match="normalized"):
        survival(s, np.array([0.0, 1.0]))
    u = unit(s)
    with pytest.raises(ValueError, match="increasing"):
        survival(u, np.array([1.0, 0.5]))
    with pytest.raises(ValueError, match="nonnegative"):
        survival(u, np.array([-1.0, 0.5]))


def test_decay_window_complements_survival(grid_mid, rng):
    f0 = unit(project_below(random_hardy_state(grid_mid, rng), 0.0))
    t = snap(grid_mid, 1.5)
    total = decay_window(f0, 0.0, t) + survival(f0, np.array([t])).values[0]
    assert total == pytest.approx(1.0, abs=1e-6)


def test_decay_window_edge_cases(grid_mid, rng):
    g = grid_mid
    f0 = unit(project_below(random_hardy_state(g, rng), 0.0))
    # nothing decays before the preparation time
    assert decay_window(f0, -5.0, 0.0) <= 1e-12
    # the whole lattice carries the whole state
    span = (g.center + 1) * g.d_tau
    assert decay_window(f0, -span, span) == pytest.approx(1.0, abs=1e-10)
    # windows add over adjacent intervals
    t1, t2 = snap(g, 0.8), snap(g, 2.4)
    left = decay_window(f0, 0.0, t1)
    right = decay_window(f0, t1, t2)
    assert left + right == pytest.approx(decay_window(f0, 0.0, t2), abs=1e-12)


def test_decay_window_validation(grid_mid, rng):
    f0 = unit(project_below(random_hardy_state(grid_mid, rng), 0.0))
    with pytest.raises(ValueError, match="t1 < t2"):
        decay_window(f0, 1.0, 1.0)
    s = random_smooth_state(grid_mid, rng)
    with pytest.raises(ValueError, match="normalized"):
        decay_window(s, 0.0, 1.0)
