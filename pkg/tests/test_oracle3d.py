import json
import math

import numpy as np
import pytest

from dimred.oracle3d import (
    MeshPolicy,
    RelativeOperator,
    TwoBodyConfig,
    build_mesh,
    com_levels,
    com_separation,
    relative_1d_analytic,
    relative_1d_reference,
    run_oracle,
    scaling_check,
    solve_relative,
)
from dimred.reduction import GeometryParams
from dimred.scattering import calibrate_unit_scattering_length, smooth_barrier, solve_zero_energy

COARSE = MeshPolicy(h_r=1 / 8, h_ell=1 / 8, refine=False)


@pytest.fixture(scope="module")
def spec():
    return calibrate_unit_scattering_length(smooth_barrier(10.0))


@pytest.mark.parametrize("g", [0.0, 0.5, 4.0, 50.0])
def test_relative_1d_shooting_matches_weber(g):
    for ell in (1.0, 2.0):
        ref = relative_1d_reference(ell, g, 4)
        np.testing.assert_allclose(ref.levels, relative_1d_analytic(ell, g, 4), rtol=1e-9)


def test_relative_1d_limits():
    # g = 0: even levels (4j + 1) / ell^2; g = inf: odd levels (4j + 3) / ell^2
    np.testing.assert_allclose(relative_1d_reference(1.5, 0.0, 3).levels,
                               np.array([1, 5, 9]) / 1.5**2, rtol=1e-9)
    np.testing.assert_allclose(relative_1d_reference(1.0, math.inf, 3).levels, [3, 7, 11], rtol=1e-8)


def test_relative_1d_wavefunction_normalized():
    ref = relative_1d_reference(1.0, 4.0, 2)
    z = np.linspace(-12, 12, 20001)
    for j in range(2):
        u = ref.wavefunction(j, z)
        norm = np.sum(u**2) * (z[1] - z[0])
        assert norm == pytest.approx(1.0, rel=1e-4)
        # jump condition on the derivative at the contact
        h = 1e-5
        slope = (ref.wavefunction(j, np.array([h]))[0] - ref.wavefunction(j, np.array([0.0]))[0]) / h
        assert slope == pytest.approx(ref.wavefunction(j, np.array([0.0]))[0], rel=1e-3)


def test_com_bookkeeping():
    geom = GeometryParams(2, 0.1, 2.0, 0.0)
    np.testing.assert_allclose(com_levels(geom, 3), 200 + np.array([1, 3, 5]) / 4)


def test_separation_rejects_non_harmonic(spec):
    cfg = TwoBodyConfig(GeometryParams(2, 0.1, 1.0, 0.01), spec)
    with pytest.raises(ValueError):
        com_separation(cfg, v_par="tabulated")
    with pytest.raises(ValueError):
        TwoBodyConfig(GeometryParams(3, 0.1, 1.0, 0.01), spec)


def test_free_two_body_is_separable(spec):
    geom = GeometryParams(2, 0.1, 1.0, 0.0)
    s = run_oracle(TwoBodyConfig(geom, spec, COARSE))
    # relative transverse ground 2/r^2 plus even axial levels (4j + 1)
    np.testing.assert_allclose(s.rel_levels, 200 + np.array([1, 5, 9]), rtol=1e-12)
    np.testing.assert_allclose(s.excess, [2, 4, 6, 6], atol=1e-9)
    np.testing.assert_allclose(s.E_1d, [2, 4, 6, 6], atol=1e-9)
    # product of the discrete transverse mode with sampled 1D states
    assert np.all(np.abs(np.array(s.overlaps) - 1) < 1e-5)


def test_mesh_resolves_interaction_range(spec):
    op = RelativeOperator(0.1, 1.0, 0.01, spec)
    rf, zf = build_mesh(op, MeshPolicy(), spec.range_R0)
    core = 0.01 * spec.range_R0
    assert np.sum(rf <= core * (1 + 1e-12)) - 1 >= 20
    assert np.sum(zf <= core * (1 + 1e-12)) - 1 >= 20
    assert np.all(np.diff(rf) > 0) and np.all(np.diff(zf) > 0)


def test_second_order_refinement(spec):
    op = RelativeOperator(0.1, 1.0, 0.01, spec)
    sols = [solve_relative(op, 2, COARSE, spec.range_R0, 0, refined=k) for k in range(3)]
    d1 = sols[1].shifts - sols[0].shifts
    d2 = sols[2].shifts - sols[1].shifts
    np.testing.assert_allclose(d1 / d2, 4.0, rtol=0.1)
    for s in sols:
        assert np.all(s.residuals <= 1e-9)


def test_repulsion_never_lowers_levels():
    op_levels = []
    for v0 in (0.0, 1.0, 5.0, 25.0):
        spec = smooth_barrier(v0, 2.0)
        op = RelativeOperator(0.1, 1.0, 0.01, spec)
        op_levels.append(solve_relative(op, 2, COARSE, 2.0, 0).levels)
    assert np.all(np.diff(np.array(op_levels), axis=0) >= -1e-9)


def test_spectrum_invariants(spec):
    geom = GeometryParams(2, 0.1, 1.0, 0.01)
    s = run_oracle(TwoBodyConfig(geom, spec, COARSE))
    assert s.g == pytest.approx(4.0)
    assert np.all(np.diff(s.total) >= 0)
    assert s.excess[0] > 0
    assert all(o <= 1 + 1e-9 for o in s.overlaps)
    assert s.flags["window_ok"]
    # the excess is bracketed by the free and hard-core 1D limits
    assert 2.0 < s.excess[0] < 4.0
    doc = json.loads(s.to_json())
    assert doc["schema_version"] == 1 and len(doc["total"]) == 4


def test_scaling_with_longitudinal_length(spec):
    cfg = TwoBodyConfig(GeometryParams(2, 0.1, 2.0, 0.002), spec, COARSE)
    rep = scaling_check(cfg)
    assert max(rep["excess_relative_difference"][:2]) < 1e-4
    assert max(rep["relative_difference"]) < 1e-10


def test_dump_vectors(spec, tmp_path):
    op = RelativeOperator(0.1, 1.0, 0.01, spec)
    sol = solve_relative(op, 2, COARSE, spec.range_R0, 0)
    path = tmp_path / "vec.npz"
    sol.dump(path)
    with np.load(path) as z:
        header = json.loads(str(z["header"]))
        assert header["dims"] == list(sol.shape)
        assert z["vectors"].shape == (*sol.shape, 2)
        np.testing.assert_allclose(z["rho_faces"], sol.rho_faces)


def test_config_digest_is_stable(spec):
    geom = GeometryParams(2, 0.1, 1.0, 0.01)
    a, b = TwoBodyConfig(geom, spec), TwoBodyConfig(geom, spec)
    assert a.digest() == b.digest() and a.rng_seed == b.rng_seed
    assert TwoBodyConfig(geom, spec, k_max=3).digest() != a.digest()


def test_calibrated_oracle_potential(spec):
    assert solve_zero_energy(spec).scattering_length == pytest.approx(1.0, rel=1e-8)
