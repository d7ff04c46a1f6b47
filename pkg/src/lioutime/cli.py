"""Config-driven scenario runner.

Subcommands: verify (invariant suite), survival, resonance, decay-window,
uncertainty.  Configuration is an INI file with [grid], [state], [times],
[output] and optional [tolerances] sections; see the shipped configs for the
exact keys.  Time-series output is CSV with a `t,value[,reference]` header
preceded by `#` metadata lines; every run also writes a JSON summary with the
keys `command`, `config_echo` and `checks`.

Exit codes: 0 on success, 1 when any check fails, 2 on config or usage errors.
"""

from __future__ import annotations

import argparse
import configparser
import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .grid import (
    EnergyKernel,
    GridError,
    SpectralGrid,
    SpectralState,
    boundary_mass,
    build_grid,
    kernel_to_spectral,
)
from .liouville import PureState, embed_density, embed_pure, hilbert_survival
from .profiles import (
    exponential_profile,
    gaussian_profile,
    indicator_profile,
    two_bump_profile,
)
from .semigroup import ResonanceSpec, resonance_state, semigroup_apply, survival
from .timeop import hardy_decompose, time_stats, to_tau
from .verify import run_checks

__all__ = ["ConfigError", "ScenarioConfig", "main"]

UNCERTAINTY_BOUND = 1.0 / (2.0 * np.sqrt(2.0)) - 0.01


class ConfigError(Exception):
    """Configuration violates a precondition of the operation it drives."""


@dataclass(frozen=True)
class ScenarioConfig:
    """Parsed scenario: grid, optional state and times, output controls."""

    grid: SpectralGrid
    state_kind: str | None
    times: np.ndarray | None
    prefix: str
    tolerances: dict[str, float]
    echo: dict[str, dict[str, str]]
    parser: configparser.ConfigParser


@dataclass(frozen=True)
class BuiltState:
    spectral: SpectralState  # unit Liouville norm
    kind: str
    m: EnergyKernel | None
    psi: PureState | None
    xi: complex | None
    norm_note: str
    boundary: float


def _get_float(section, key: str) -> float:
    if key not in section:
        raise ConfigError(f"missing key '{key}' in section [{section.name}]")
    try:
        return float(section[key])
    except ValueError as exc:
        raise ConfigError(f"key '{key}' in [{section.name}] is not a number") from exc


def _get_int(section, key: str) -> int:
    v = _get_float(section, key)
    if v != int(v):
        raise ConfigError(f"key '{key}' in [{section.name}] must be an integer")
    return int(v)


def load_config(path: Path) -> ScenarioConfig:
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"cannot read config file {path}")
    if "grid" not in parser:
        raise ConfigError("config needs a [grid] section")
    g = parser["grid"]
    try:
        grid = build_grid(
            _get_float(g, "nu_max"),
            _get_int(g, "n_nu"),
            _get_float(g, "e_max"),
            _get_int(g, "n_e"),
        )
    except GridError as exc:
        raise ConfigError(str(exc)) from exc

    kind = None
    if "state" in parser:
        kind = parser["state"].get("kind")
        if kind not in ("resonance", "pure", "mixture"):
            raise ConfigError(
                f"[state] kind must be resonance, pure or mixture, got {kind!r}"
            )

    times = None
    if "times" in parser:
        t = parser["times"]
        start = _get_float(t, "start")
        stop = _get_float(t, "stop")
        count = _get_int(t, "count")
        if count < 2 or not stop > start or start < 0:
            raise ConfigError(
                "[times] needs 0 <= start < stop and count >= 2"
            )
        times = np.linspace(start, stop, count)

    prefix = parser["output"].get("prefix", "") if "output" in parser else ""
    tolerances: dict[str, float] = {}
    if "tolerances" in parser:
        for key in parser["tolerances"]:
            tolerances[key] = _get_float(parser["tolerances"], key)

    echo = {name: dict(parser[name]) for name in parser.sections()}
    return ScenarioConfig(grid, kind, times, prefix, tolerances, echo, parser)


def _build_profile(grid: SpectralGrid, section) -> PureState:
    family = section.get("profile")
    try:
        if family == "indicator":
            return indicator_profile(grid, _get_float(section, "lo"), _get_float(section, "hi"))
        if family == "gaussian":
            return gaussian_profile(grid, _get_float(section, "center"), _get_float(section, "width"))
        if family == "two_bump":
            return two_bump_profile(
                grid,
                _get_float(section, "center1"),
                _get_float(section, "center2"),
                _get_float(section, "width"),
            )
        if family == "exponential":
            return exponential_profile(grid, _get_float(section, "rate"))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    raise ConfigError(
        f"unknown profile family {family!r} (choose indicator, gaussian, two_bump "
        "or exponential)"
    )


def build_state(cfg: ScenarioConfig) -> BuiltState:
    if cfg.state_kind is None:
        raise ConfigError("this command needs a [state] section")
    grid = cfg.grid
    section = cfg.parser["state"]
    if cfg.state_kind == "resonance":
        xi = complex(_get_float(section, "re_xi"), _get_float(section, "im_xi"))
        psi = _build_profile(grid, section)
        try:
            rho = resonance_state(ResonanceSpec(xi, psi.psi), grid)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
        n = rho.norm()
        spectral = SpectralState(grid, rho.values / n)
        note = f"resonance scaled by 1/{n:.6g} to unit Liouville norm"
        return BuiltState(spectral, "resonance", None, None, xi, note, boundary_mass(spectral))
    if cfg.state_kind == "pure":
        psi = _build_profile(grid, section)
        m = embed_pure(psi)
        spectral = kernel_to_spectral(m)
        note = "rank-1 embedding; unit Liouville norm by construction"
        return BuiltState(spectral, "pure", m, psi, None, note, boundary_mass(spectral))
    # mixture
    count = _get_int(section, "components")
    if count < 1:
        raise ConfigError("[state] components must be >= 1")
    vals = np.zeros((grid.n_e, grid.n_e), dtype=np.complex128)
    total = 0.0
    for i in range(1, count + 1):
        name = f"state.{i}"
        if name not in cfg.parser:
            raise ConfigError(f"missing section [{name}] for mixture component {i}")
        comp = cfg.parser[name]
        w = _get_float(comp, "weight")
        if w <= 0:
            raise ConfigError(f"component weight must be positive, got {w!r}")
        total += w
        psi = _build_profile(grid, comp)
        vals += w * np.outer(psi.psi, psi.psi.conj())
    if abs(total - 1.0) > 1e-8:
        raise ConfigError(f"mixture weights must sum to 1, got {total!r}")
    m = EnergyKernel(grid, vals)
    try:
        root = embed_density(m)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    spectral = kernel_to_spectral(root)
    note = "density embedded as its operator square root; unit Liouville norm"
    return BuiltState(spectral, "mixture", m, None, None, note, boundary_mass(spectral))


def _snap_times(grid: SpectralGrid, times: np.ndarray) -> np.ndarray:
    # lattice times keep the projected dynamics exactly monotone
    snapped = np.round(times / grid.d_tau) * grid.d_tau
    return np.unique(snapped)


def _state_meta(cfg: ScenarioConfig, built: BuiltState) -> list[str]:
    g = cfg.grid
    state_echo = " ".join(f"{k}={v}" for k, v in cfg.echo.get("state", {}).items())
    return [
        f"# grid: nu_max={g.nu_max:g} n_nu={g.n_nu} e_max={g.e_max:g} n_e={g.n_e}",
        f"# state: {state_echo}",
        f"# normalization: {built.norm_note}",
        f"# boundary_mass: {built.boundary:.6e}",
    ]


def _write_csv(path: Path, meta: list[str], header: str, columns: list[np.ndarray]) -> None:
    with open(path, "w", newline="") as fh:
        for line in meta:
            fh.write(line + "\n")
        fh.write(header + "\n")
        for row in zip(*columns):
            fh.write(",".join(f"{x:.17g}" for x in row) + "\n")


def _write_json(path: Path, payload: dict) -> None:
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check(check_id: str, passed: bool, measured: float, tolerance: float) -> dict:
    return {
        "id": check_id,
        "pass": bool(passed),
        "measured": float(measured),
        "tolerance": float(tolerance),
    }


def _finish(command: str, cfg: ScenarioConfig, outdir: Path, checks: list[dict], extra: dict | None = None) -> int:
    payload = {"command": command, "config_echo": cfg.echo, "checks": checks}
    if extra:
        payload.update(extra)
    json_path = outdir / f"{cfg.prefix}{command.replace('-', '_')}.json"
    _write_json(json_path, payload)
    failed = [c for c in checks if not c["pass"]]
    for c in checks:
        status = "PASS" if c["pass"] else "FAIL"
        print(f"{c['id']:<36} {status}  measured={c['measured']:.6e} tolerance={c['tolerance']:.6e}")
    print(f"summary written to {json_path}")
    return 1 if failed else 0


def _range_check(values: np.ndarray) -> dict:
    # every emitted probability must lie in [0, 1 + 1e-10]
    excess = float(max(np.max(values - 1.0), np.max(-values), 0.0))
    return _check("probabilities_in_range", excess <= 1e-10, excess, 1e-10)


def run_verify(cfg: ScenarioConfig, outdir: Path, seed: int) -> int:
    results = run_checks(cfg.grid, seed)
    checks = [_check(r.check_id, r.passed, r.measured, r.tolerance) for r in results]
    return _finish("verify", cfg, outdir, checks, {"seed": seed})


def run_survival(cfg: ScenarioConfig, outdir: Path, seed: int) -> int:
    if cfg.times is None:
        raise ConfigError("survival needs a [times] section")
    built = build_state(cfg)
    times = _snap_times(cfg.grid, cfg.times)
    series = survival(built.spectral, times)
    meta = _state_meta(cfg, built)
    meta.append(
        f"# times: snapped to lattice d_tau={cfg.grid.d_tau:.9g}; "
        f"{cfg.times.size} requested, {times.size} emitted"
    )
    columns = [series.times, series.values]
    header = "t,value"
    if built.kind == "pure":
        ref = hilbert_survival(built.psi, times)
        columns.append(ref.values)
        header = "t,value,reference"
        meta.append("# reference: rank-1 Hilbert-space survival for contrast")
    csv_path = outdir / f"{cfg.prefix}survival.csv"
    _write_csv(csv_path, meta, header, columns)
    checks = [_range_check(np.concatenate([c for c in columns[1:]]))]
    slack = float(np.max(np.diff(series.values), initial=0.0))
    checks.append(_check("survival_monotone", slack <= 1e-6, slack, 1e-6))
    print(f"time series written to {csv_path}")
    return _finish("survival", cfg, outdir, checks, {"series_file": csv_path.name})


def run_resonance(cfg: ScenarioConfig, outdir: Path, seed: int) -> int:
    if cfg.times is None:
        raise ConfigError("resonance needs a [times] section")
    built = build_state(cfg)
    if built.kind != "resonance":
        raise ConfigError("resonance command needs [state] kind = resonance")
    grid = cfg.grid
    b = -built.xi.imag
    times = _snap_times(grid, cfg.times)
    series = survival(built.spectral, times)
    ref = np.exp(-2.0 * b * times)
    meta = _state_meta(cfg, built)
    meta.append(f"# reference: exp(-2*|Im xi|*t) with |Im xi|={b:g}")
    meta.append(
        f"# times: snapped to lattice d_tau={grid.d_tau:.9g}; "
        f"{cfg.times.size} requested, {times.size} emitted"
    )
    csv_path = outdir / f"{cfg.prefix}resonance.csv"
    _write_csv(csv_path, meta, "t,value,reference", [times, series.values, ref])

    tol_eig = cfg.tolerances.get("eigenvalue_residual", 1e-2)
    sample = times[times > 0]
    idx = np.unique(np.linspace(0, sample.size - 1, 4).astype(int)) if sample.size else []
    worst = 0.0
    rn = built.spectral.norm()
    for t in sample[idx]:
        w = semigroup_apply(built.spectral, t)
        target = np.exp(-1j * t * built.xi) * built.spectral.values
        worst = max(worst, SpectralState(grid, w.values - target).norm() / rn)
    checks = [_check("eigenvalue_residual", worst <= tol_eig, worst, tol_eig)]

    tol_surv = cfg.tolerances.get("survival_match_analytic", 1e-2)
    dev = float(np.max(np.abs(series.values - ref) / np.maximum(ref, 1e-300)))
    checks.append(_check("survival_match_analytic", dev <= tol_surv, dev, tol_surv))
    checks.append(_range_check(series.values))
    print(f"time series written to {csv_path}")
    return _finish("resonance", cfg, outdir, checks, {"series_file": csv_path.name})


def run_decay_window(cfg: ScenarioConfig, outdir: Path, seed: int) -> int:
    if cfg.times is None:
        raise ConfigError("decay-window needs a [times] section")
    built = build_state(cfg)
    grid = cfg.grid
    times = _snap_times(grid, cfg.times)
    times = times[times > 0]
    if times.size == 0:
        raise ConfigError("[times] must contain positive times for decay windows")
    # window mass accumulates between reflected cuts; compute from one transform
    hat = to_tau(built.spectral)
    weight = grid.d_tau * grid.d_e * np.sum(np.abs(hat.values) ** 2, axis=1)
    tau = grid.tau
    windows = np.array(
        [float(weight[(tau > -t) & (tau <= 0.0)].sum()) for t in times]
    )
    meta = _state_meta(cfg, built)
    meta.append("# value: probability of decay inside ]0, t]")
    csv_path = outdir / f"{cfg.prefix}decay_window.csv"
    _write_csv(csv_path, meta, "t,value", [times, windows])

    checks = [_range_check(windows)]
    neg = float(max(-np.min(windows), 0.0))
    checks.append(_check("window_nonnegative", neg <= 1e-12, neg, 1e-12))
    slack = float(max(np.max(-np.diff(windows), initial=0.0), 0.0))
    checks.append(_check("window_monotone", slack <= 1e-12, slack, 1e-12))
    plus, minus = hardy_decompose(built.spectral)
    defect = minus.norm() ** 2
    if defect < 1e-7:
        p = survival(built.spectral, np.array([times[-1]])).values[0]
        total = windows[-1] + p
        checks.append(_check("complementarity", abs(total - 1.0) <= 1e-6, abs(total - 1.0), 1e-6))
    print(f"time series written to {csv_path}")
    return _finish("decay-window", cfg, outdir, checks, {"series_file": csv_path.name})


def run_uncertainty(cfg: ScenarioConfig, outdir: Path, seed: int) -> int:
    built = build_state(cfg)
    if built.m is None:
        raise ConfigError(
            "uncertainty needs a physical state ([state] kind = pure or mixture); "
            "energy moments require the density matrix"
        )
    stats = time_stats(built.spectral, built.m)
    checks = [
        _check(
            "uncertainty_product_bound",
            stats.product >= UNCERTAINTY_BOUND,
            stats.product,
            UNCERTAINTY_BOUND,
        )
    ]
    extra = {
        "stats": {
            "mean_T": stats.mean_T,
            "delta_T": stats.delta_T,
            "delta_E": stats.delta_E,
            "product": stats.product,
        }
    }
    return _finish("uncertainty", cfg, outdir, checks, extra)


_COMMANDS = {
    "verify": run_verify,
    "survival": run_survival,
    "resonance": run_resonance,
    "decay-window": run_decay_window,
    "uncertainty": run_uncertainty,
}


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="lioutime",
        description="Liouville-space time-operator scenarios: verification and time series.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("verify", "run the invariant suite and print a pass/fail table"),
        ("survival", "survival probability of the undecayed component"),
        ("resonance", "resonance eigenstate checks and its survival curve"),
        ("decay-window", "probability of decay inside ]0, t]"),
        ("uncertainty", "time and energy moments and the uncertainty product"),
    ):
        sp = sub.add_parser(name, help=help_text)
        sp.add_argument("--config", required=True, type=Path, help="INI scenario file")
        sp.add_argument("--out", type=Path, default=Path("."), help="output directory")
        sp.add_argument("--seed", type=int, default=1234, help="seed for randomized checks")
    args = parser.parse_args(argv)
    try:
        cfg = load_config(args.config)
        args.out.mkdir(parents=True, exist_ok=True)
        return _COMMANDS[args.command](cfg, args.out, args.seed)
    except (ConfigError, GridError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
