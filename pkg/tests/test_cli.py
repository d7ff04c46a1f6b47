"""Scenario runner: config parsing, output formats, exit codes."""

import json
import re
from pathlib import Path

import pytest

from lioutime.cli import load_config, main

CONFIG_DIR = Path(__file__).resolve().parent.parent / "configs"

TINY_GRID = """\
[grid]
nu_max = 16
n_nu = 1024
e_max = 1.0
n_e = 32
"""

RES_GRID = """\
[grid]
nu_max = 64
n_nu = 4096
e_max = 2.0
n_e = 64
"""

RES_STATE = """\
[state]
kind = resonance
re_xi = 0.0
im_xi = -0.5
profile = gaussian
center = 1.0
width = 0.16
"""


def write(tmp_path, text, name="scenario.cfg"):
    # configparser reads indented lines as continuations, so flush everything left
    p = tmp_path / name
    p.write_text("\n".join(line.strip() for line in text.splitlines()) + "\n")
    return p


def read_csv(path):
    meta, header, rows = [], None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            meta.append(line)
        elif header is None:
            header = line
        else:
            rows.append([float(x) for x in line.split(",")])
    return meta, header, rows


def test_shipped_configs_parse():
    names = sorted(p.name for p in CONFIG_DIR.glob("*.cfg"))
    assert names == [
        "decay_window.cfg",
        "default.cfg",
        "resonance.cfg",
        "survival_two_bump.cfg",
        "uncertainty.cfg",
    ]
    for name in names:
        cfg = load_config(CONFIG_DIR / name)
        assert cfg.grid.n_nu >= 1024


def test_verify_on_the_shipped_default_config(tmp_path, capsys):
    rc = main(["verify", "--config", str(CONFIG_DIR / "default.cfg"), "--out", str(tmp_path)])
    out = capsys.readouterr().out
    assert rc == 0
    table = [line for line in out.splitlines() if "measured=" in line]
    assert len(table) >= 12
    assert all(" PASS " in line for line in table)
    payload = json.loads((tmp_path / "default_verify.json").read_text())
    assert payload["command"] == "verify"
    assert payload["seed"] == 1234
    assert len(payload["checks"]) == len(table)
    assert all(c["pass"] for c in payload["checks"])
    assert {"id", "pass", "measured", "tolerance"} <= set(payload["checks"][0])


def test_survival_pure_state_emits_reference_column(tmp_path, capsys):
    cfg = write(
        tmp_path,
        TINY_GRID
        + """
        [state]
        kind = pure
        profile = two_bump
        center1 = 0.3
        center2 = 0.6
        width = 0.03

        [times]
        start = 0.0
        stop = 4.0
        count = 9

        [output]
        prefix = p_
        """,
    )
    rc = main(["survival", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 0
    meta, header, rows = read_csv(tmp_path / "p_survival.csv")
    assert header == "t,value,reference"
    assert any(m.startswith("# grid:") for m in meta)
    assert any(m.startswith("# normalization:") for m in meta)
    assert any(m.startswith("# boundary_mass:") for m in meta)
    assert any("snapped to lattice" in m for m in meta)
    values = [r[1] for r in rows]
    assert all(-1e-10 <= v <= 1.0 + 1e-10 for v in values)
    assert all(b <= a + 1e-9 for a, b in zip(values, values[1:]))
    payload = json.loads((tmp_path / "p_survival.json").read_text())
    assert payload["series_file"] == "p_survival.csv"
    assert {c["id"] for c in payload["checks"]} == {"probabilities_in_range", "survival_monotone"}


def test_survival_output_is_deterministic(tmp_path):
    cfg = write(
        tmp_path,
        TINY_GRID
        + """
        [state]
        kind = pure
        profile = gaussian
        center = 0.5
        width = 0.06

        [times]
        start = 0.0
        stop = 3.0
        count = 7
        """,
    )
    outs = []
    for sub in ("a", "b"):
        out = tmp_path / sub
        assert main(["survival", "--config", str(cfg), "--out", str(out)]) == 0
        outs.append((out / "survival.csv").read_bytes() + (out / "survival.json").read_bytes())
    assert outs[0] == outs[1]


def test_mixture_survival_has_no_reference_column(tmp_path):
    cfg = write(
        tmp_path,
        TINY_GRID
        + """
        [state]
        kind = mixture
        components = 2

        [state.1]
        weight = 0.5
        profile = gaussian
        center = 0.3
        width = 0.04

        [state.2]
        weight = 0.5
        profile = gaussian
        center = 0.6
        width = 0.05

        [times]
        start = 0.0
        stop = 3.0
        count = 7
        """,
    )
    assert main(["survival", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    _, header, rows = read_csv(tmp_path / "survival.csv")
    assert header == "t,value"
    assert all(len(r) == 2 for r in rows)


def test_resonance_passes_with_matching_tolerances(tmp_path, capsys):
    cfg = write(
        tmp_path,
        RES_GRID
        + RES_STATE
        + """
        [times]
        start = 0.0
        stop = 4.0
        count = 17

        [tolerances]
        eigenvalue_residual = 0.05
        survival_match_analytic = 0.05
        """,
    )
    rc = main(["resonance", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 0
    meta, header, rows = read_csv(tmp_path / "resonance.csv")
    assert header == "t,value,reference"
    assert any("exp(-2*|Im xi|*t)" in m for m in meta)
    t0 = rows[0]
    assert t0[0] == 0.0 and t0[2] == 1.0
    payload = json.loads((tmp_path / "resonance.json").read_text())
    ids = {c["id"] for c in payload["checks"]}
    assert ids == {"eigenvalue_residual", "survival_match_analytic", "probabilities_in_range"}


def test_resonance_fails_the_default_tolerance_on_a_coarse_grid(tmp_path, capsys):
    # pole at one 128th of the window: the eigenvalue residual is near 2e-2
    cfg = write(
        tmp_path,
        RES_GRID
        + RES_STATE
        + """
        [times]
        start = 0.0
        stop = 4.0
        count = 17
        """,
    )
    rc = main(["resonance", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 1
    payload = json.loads((tmp_path / "resonance.json").read_text())
    failed = [c for c in payload["checks"] if not c["pass"]]
    assert [c["id"] for c in failed] == ["eigenvalue_residual"]


def test_upper_half_plane_pole_is_a_config_error(tmp_path, capsys):
    cfg = write(
        tmp_path,
        RES_GRID
        + RES_STATE.replace("im_xi = -0.5", "im_xi = 0.5")
        + """
        [times]
        start = 0.0
        stop = 4.0
        count = 9
        """,
    )
    rc = main(["survival", "--config", str(cfg), "--out", str(tmp_path)])
    err = capsys.readouterr().err
    assert rc == 2
    assert "config error" in err
    assert "Im(xi) < 0" in err


def test_decay_window_command(tmp_path, capsys):
    cfg = write(
        tmp_path,
        RES_GRID
        + RES_STATE
        + """
        [times]
        start = 0.5
        stop = 4.0
        count = 8
        """,
    )
    rc = main(["decay-window", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 0
    _, header, rows = read_csv(tmp_path / "decay_window.csv")
    assert header == "t,value"
    values = [r[1] for r in rows]
    assert values == sorted(values)
    assert all(0.0 <= v <= 1.0 + 1e-10 for v in values)


def test_uncertainty_on_the_shipped_mixture_config(tmp_path, capsys):
    rc = main(["uncertainty", "--config", str(CONFIG_DIR / "uncertainty.cfg"), "--out", str(tmp_path)])
    assert rc == 0
    payload = json.loads((tmp_path / "mixture_uncertainty.json").read_text())
    stats = payload["stats"]
    assert set(stats) == {"mean_T", "delta_T", "delta_E", "product"}
    assert stats["product"] == pytest.approx(stats["delta_T"] * stats["delta_E"])
    assert stats["product"] >= 1.0 / (2.0 * 2.0**0.5) - 0.01


def test_uncertainty_needs_a_physical_state(tmp_path, capsys):
    cfg = write(tmp_path, RES_GRID + RES_STATE)
    rc = main(["uncertainty", "--config", str(cfg), "--out", str(tmp_path)])
    assert rc == 2
    assert "physical" in capsys.readouterr().err


def test_config_validation_errors(tmp_path, capsys):
    cases = [
        ("missing.cfg", None, "cannot read"),  # file does not exist
        ("nogrid.cfg", "[times]\nstart = 0\nstop = 1\ncount = 3\n", r"\[grid\] section"),
        ("badn.cfg", TINY_GRID.replace("1024", "1000"), "power of two"),
        ("badval.cfg", TINY_GRID.replace("n_e = 32", "n_e = many"), "not a number"),
        (
            "badtimes.cfg",
            TINY_GRID + "[state]\nkind = pure\nprofile = gaussian\ncenter = 0.5\nwidth = 0.05\n"
            "[times]\nstart = 2.0\nstop = 1.0\ncount = 5\n",
            "start < stop",
        ),
        (
            "badkind.cfg",
            TINY_GRID + "[state]\nkind = gamow\n[times]\nstart = 0\nstop = 1\ncount = 3\n",
            "kind must be",
        ),
        (
            "badprofile.cfg",
            TINY_GRID + "[state]\nkind = pure\nprofile = box\n[times]\nstart = 0\nstop = 1\ncount = 3\n",
            "unknown profile",
        ),
        (
            "badweights.cfg",
            TINY_GRID + "[state]\nkind = mixture\ncomponents = 1\n"
            "[state.1]\nweight = 0.7\nprofile = gaussian\ncenter = 0.5\nwidth = 0.05\n"
            "[times]\nstart = 0\nstop = 1\ncount = 3\n",
            "sum to 1",
        ),
    ]
    for name, text, needle in cases:
        path = tmp_path / name if text is None else write(tmp_path, text, name)
        rc = main(["survival", "--config", str(path), "--out", str(tmp_path)])
        err = capsys.readouterr().err
        assert rc == 2, name
        assert "config error" in err, name
        assert re.search(needle, err), (name, err)


def test_output_directory_is_created(tmp_path):
    cfg = write(
        tmp_path,
        TINY_GRID
        + """
        [state]
        kind = pure
        profile = gaussian
        center = 0.5
        width = 0.06

        [times]
        start = 0.0
        stop = 2.0
        count = 5
        """,
    )
    nested = tmp_path / "a" / "b"
    assert main(["survival", "--config", str(cfg), "--out", str(nested)]) == 0
    assert (nested / "survival.csv").exists()
