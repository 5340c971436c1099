import math
from pathlib import Path

import pytest

from dimred.config import ConfigError, load_config, parse_config
from dimred.scattering import PotentialKind

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.mark.parametrize("path", sorted(CONFIGS.glob("*.ini")), ids=lambda p: p.stem)
def test_shipped_configs_load(path):
    cfg = load_config(path)
    assert cfg.potential is not None


def test_calibrated_soft_sphere_by_default():
    cfg = parse_config("[potential]\nkind = smooth_barrier\nstrength_v0 = 10\n")
    assert cfg.potential.range_R0 == pytest.approx(4.2304, rel=1e-3)


def test_geometry_from_coupling():
    cfg = parse_config("[potential]\nkind = hard_core\n[geometry]\nn = 3\nr = 0.1\nell = 2\ng = 4\n")
    assert cfg.coupling == 4.0 and cfg.geometry.n == 3 and cfg.geometry.ell == 2.0
    cfg = parse_config("[potential]\nkind = hard_core\n[geometry]\ng = inf\n")
    assert math.isinf(cfg.coupling)


def test_sweep_rule_geometries():
    from dimred.transverse import TransversePotential, solve_transverse

    cfg = parse_config("[potential]\nkind = hard_core\n[sweep]\ng = 4\na_over_r = 0.1, 0.05\n"
                       "r_over_ell = 0.1\n")
    geoms = cfg.sweep.geometries(2, solve_transverse(TransversePotential()))
    # fixed g = 4 with ||b||_4^4 = 1/(2 pi): r = a/r and a = r^2
    assert [round(g.r, 8) for g in geoms] == [0.1, 0.05]
    assert geoms[1].a == pytest.approx(0.0025, rel=1e-8)
    assert geoms[1].ell == pytest.approx(0.5, rel=1e-8)


@pytest.mark.parametrize("text,field", [
    ("[geometry]\nn = 2\n", "potential"),
    ("[potential]\nkind = lump\n", "potential.kind"),
    ("[potential]\nkind = square_barrier\n", "potential.strength_v0"),
    ("[potential]\nkind = hard_core\n[geometry]\na = 0.1\ng = 1\n", "geometry"),
    ("[potential]\nkind = hard_core\n[geometry]\nr = -1\n", "geometry"),
    ("[potential]\nkind = hard_core\n[geometry]\nr = abc\n", "geometry.r"),
    ("[potential]\nkind = hard_core\n[sweep]\ng = 4\na_over_r = 0.1, x\n", "sweep.a_over_r"),
    ("[potential]\nkind = hard_core\n[mesh]\ncore_cells = 10\n", "mesh.core_cells"),
    ("[potential]\nkind = hard_core\n[mesh]\nbogus = 1\n", "mesh.bogus"),
    ("[potential]\nkind = hard_core\n[schedule]\nfoo = 1\n", "schedule.foo"),
    ("[potential]\nkind = hard_core\n[constants]\nC = -1\n", "constants.C"),
    ("[potential]\nkind = hard_core\n[longitudinal]\ntrap = box\n", "longitudinal.trap"),
    ("[potential]\nkind = hard_core\n[transverse]\ncells = 10\n", "transverse.cells"),
    ("[potential\n", "file"),
])
def test_validation_names_the_field(text, field):
    with pytest.raises(ConfigError) as err:
        parse_config(text)
    assert err.value.field == field


def test_tabulated_potential_from_file(tmp_path):
    (tmp_path / "v.dat").write_text("# t v\n0 1\n0.5 1\n1 0\n")
    cfg = parse_config("[potential]\nkind = tabulated_radial\ntable_file = v.dat\ncalibrate = false\n",
                       tmp_path)
    assert PotentialKind(cfg.potential.kind) is PotentialKind.TABULATED_RADIAL
    assert cfg.potential.table[0] == (0.0, 0.5, 1.0)


def test_fragment_is_a_stable_cache_key():
    from dimred.cache import digest

    text = "[potential]\nkind = hard_core\n[geometry]\nn = 2\nr = 0.1\nell = 1\na = 0.01\n"
    a, b = parse_config(text), parse_config(text)
    assert digest(a.fragment()) == digest(b.fragment())
    assert set(a.fragment("mesh", "trap")) == {"mesh", "trap"}
