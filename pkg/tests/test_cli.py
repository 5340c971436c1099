import csv
import json
import math
import subprocess
import sys
from pathlib import Path

import pytest

from dimred.cli import main
from dimred.report import CSV_SCHEMAS

CONFIGS = Path(__file__).resolve().parents[1] / "configs"

COARSE_MESH = """
[mesh]
core_cells = 20
h_r = 0.125
h_ell = 0.125
refine = false
"""


def write(tmp_path, text, name="run.ini"):
    p = tmp_path / name
    p.write_text(text)
    return p


def header(path):
    with open(path, newline="") as fh:
        return tuple(next(csv.reader(fh)))


def run(*args):
    return main([str(a) for a in args])


def test_missing_config_is_a_validation_error(tmp_path, capsys):
    assert run("scatter", "--out", tmp_path) == 1
    assert "configuration" in capsys.readouterr().err
    assert run("scatter", "--config", tmp_path / "none.ini", "--out", tmp_path) == 1


def test_bad_config_names_field(tmp_path, capsys):
    cfg = write(tmp_path, "[potential]\nkind = hard_core\n[geometry]\nr = -0.1\n")
    assert run("bounds", "--config", cfg, "--out", tmp_path) == 1
    assert "geometry" in capsys.readouterr().err


def test_unknown_criterion(tmp_path):
    assert run("accept", "--criteria", "99", "--out", tmp_path) == 1
    assert run("accept", "--criteria", "x", "--out", tmp_path) == 1


def test_transverse(tmp_path):
    assert run("transverse", "--config", CONFIGS / "transverse.ini", "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "transverse.json").read_text())
    res = doc["results"]
    assert doc["schema_version"] == 1
    assert res["e_perp"] == pytest.approx(2.0, abs=1e-6)
    assert res["gap"] == pytest.approx(2.0, abs=1e-6)
    assert res["norm4_4"] == pytest.approx(1 / (2 * math.pi), abs=1e-6)


def test_scatter(tmp_path):
    assert run("scatter", "--config", CONFIGS / "scatter.ini", "--out", tmp_path) == 0
    doc = json.loads((tmp_path / "scatter.json").read_text())
    assert doc["results"]["scattering_length"] == pytest.approx(1.0, rel=1e-6)


def test_periodic_spectrum(tmp_path):
    assert run("ll-spectrum", "--config", CONFIGS / "ll_periodic.ini", "--out", tmp_path) == 0
    res = json.loads((tmp_path / "ll_spectrum.json").read_text())["results"]
    assert [r["g"] for r in res] == [0.0, 1.0, 10.0]
    free = res[0]["energies"]
    assert free[:3] == pytest.approx([0.0, 4 * math.pi**2, 4 * math.pi**2])
    assert header(tmp_path / "spectrum_g0.csv") == CSV_SCHEMAS["spectrum"]


def test_branches(tmp_path):
    cfg = write(tmp_path, "[potential]\nkind = hard_core\n[longitudinal]\ntrap = periodic\n"
                          "[geometry]\nn = 6\nell = 6\ng = 2\n")
    assert run("branches", "--config", cfg, "--out", tmp_path) == 0
    assert header(tmp_path / "branches_g2.csv") == CSV_SCHEMAS["branches"]


def test_bounds(tmp_path):
    cfg = write(tmp_path, (CONFIGS / "bounds.ini").read_text().replace("basis_size = 200", "basis_size = 60"))
    assert run("bounds", "--config", cfg, "--out", tmp_path) == 0
    assert header(tmp_path / "envelope_explicit.csv") == CSV_SCHEMAS["envelope"]
    doc = json.loads((tmp_path / "bounds.json").read_text())["results"]
    assert doc["g"] == pytest.approx(4.0, rel=1e-8)
    assert doc["chains"]["lower"]["vacuous"] == "d_integral"


def test_verify_two_body_is_cached(tmp_path):
    text = ("[potential]\nkind = smooth_barrier\nstrength_v0 = 10\n"
            "[geometry]\nn = 2\nr = 0.1\nell = 1\na = 0.01\n[spectrum]\nk_max = 3\n" + COARSE_MESH)
    cfg = write(tmp_path, text)
    out = tmp_path / "out"
    assert run("verify-2body", "--config", cfg, "--out", out, "--dump-vectors") == 0
    first = json.loads((out / "verify_2body.json").read_text())["results"]
    assert (out / "relative_vectors.npz").exists()
    assert header(out / "oracle_levels.csv") == CSV_SCHEMAS["oracle"]
    assert run("verify-2body", "--config", cfg, "--out", out) == 0
    second = json.loads((out / "verify_2body.json").read_text())["results"]
    assert first == second
    assert first["spectrum"]["g"] == pytest.approx(4.0)


def test_sweep(tmp_path):
    text = ("[potential]\nkind = smooth_barrier\nstrength_v0 = 10\n"
            "[sweep]\ng = 4\na_over_r = 0.1, 0.05\n[spectrum]\nk_max = 2\n" + COARSE_MESH)
    cfg = write(tmp_path, text)
    assert run("sweep", "--config", cfg, "--out", tmp_path, "--no-cache") == 0
    with open(tmp_path / "sweep.csv", newline="") as fh:
        rows = list(csv.DictReader(fh))
    assert tuple(rows[0]) == CSV_SCHEMAS["sweep"]
    assert [float(r["a_over_r"]) for r in rows] == [0.1, 0.05]
    ratios = [abs(float(r["ratio"]) - 1) for r in rows]
    assert ratios[1] < ratios[0]


def test_module_entry_point():
    out = subprocess.run([sys.executable, "-m", "dimred.cli", "--help"], capture_output=True, text=True)
    assert out.returncode == 0 and "verify-2body" in out.stdout
