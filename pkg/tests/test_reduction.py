import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimred.reduction import (
    GeometryParams,
    LowerChainParams,
    a_for_coupling,
    effective_g,
    eta_lower,
    eta_upper,
    explicit_chains,
    lemma2_overlap,
    lower_chain_explicit,
    theorem1_envelope,
    theorem2_bound,
    upper_chain_explicit,
)
from dimred.transverse import TransversePotential, solve_transverse


@pytest.fixture(scope="module")
def mode():
    return solve_transverse(TransversePotential())


def slope(xs, ys):
    return np.polyfit(np.log(xs), np.log(ys), 1)[0]


def test_effective_coupling(mode):
    # ||b||_4^4 = 1/(2 pi) for the Gaussian mode
    assert effective_g(GeometryParams(2, 0.1, 1.0, 0.01), mode) == pytest.approx(4.0, rel=1e-8)
    assert effective_g(GeometryParams(2, 0.1, 1.0, 0.0), mode) == 0.0
    g1 = effective_g(GeometryParams(2, 0.1, 1.0, 0.002), mode)
    assert effective_g(GeometryParams(2, 0.1, 1.0, 0.004), mode) == pytest.approx(2 * g1)
    assert a_for_coupling(4.0, 0.1, mode) == pytest.approx(0.01, rel=1e-8)


def test_geometry_validation():
    for bad in [(0, 1, 1, 0), (2, 0, 1, 0), (2, 1, -1, 0), (2, 1, 1, -1e-3)]:
        with pytest.raises(ValueError):
            GeometryParams(*bad)
    geom = GeometryParams(3, 0.2, 2.0, 0.01)
    assert geom.x == pytest.approx(0.15)
    assert geom.r_over_ell == pytest.approx(0.1)


def test_eta_power_laws():
    assert eta_lower(GeometryParams(2, 1.0, 1.0, 0.0)) == 0.0
    assert eta_lower(GeometryParams(2, 1.0, 1.0, 5e-9)) == pytest.approx(0.104)
    assert eta_upper(GeometryParams(2, 1.0, 1.0, 0.0)) == 0.0
    assert eta_upper(GeometryParams(2, 1.0, 1.0, 5e-4)) == pytest.approx(1e-2)
    assert eta_upper(GeometryParams(2, 1.0, 1.0, 0.5)) == pytest.approx(1.0)
    assert eta_upper(GeometryParams(2, 1.0, 1.0, 5e-4), C=3) == pytest.approx(3e-2)


def test_envelope_collapse_and_gap_edge(mode):
    geom = GeometryParams(2, 1e-6, 1.0, 0.0)
    env = theorem1_envelope([1.0, 2.0], geom, mode, eta_L=0.0, eta_U=0.0)
    np.testing.assert_allclose(env.lower_k, [1.0, 2.0], rtol=1e-10)
    np.testing.assert_allclose(env.upper_k, [1.0, 2.0])
    geom = GeometryParams(2, 0.1, 1.0, 1e-5)
    edge = mode.gap / geom.r**2
    env = theorem1_envelope([edge, 2 * edge], geom, mode)
    assert env.lower_k[0] == pytest.approx(0.0, abs=1e-12)
    assert env.valid_lower == (True, False)


def test_upper_validity_flag(mode):
    env = theorem1_envelope([1.0], GeometryParams(2, 1.0, 1.0, 0.6), mode)
    assert not env.valid_upper
    assert env.upper_k[0] == math.inf


@settings(max_examples=30)
@given(st.floats(1e-9, 1e-3), st.floats(0.0, 0.99))
def test_envelope_ordered_when_valid(x, frac):
    mode = solve_transverse(TransversePotential())
    geom = GeometryParams(2, 0.1, 1.0, x * 0.05)
    E = frac * mode.gap / geom.r**2
    env = theorem1_envelope([E], geom, mode)
    if env.valid_upper and env.eta_L < 1:
        assert env.lower_k[0] <= env.upper_k[0]


def test_upper_chain_limits_and_exponent(mode):
    assert upper_chain_explicit(GeometryParams(2, 0.1, 1.0, 0.0), mode).factor == 1.0
    ars = np.logspace(-2, -4, 5)
    chains = [upper_chain_explicit(GeometryParams(2, 0.1, 1.0, ar * 0.1), mode) for ar in ars]
    assert all(c.K == 0.0 for c in chains)
    excess = np.array([c.excess_factor - 1 for c in chains])
    assert np.all(np.diff(excess) < 0)
    assert slope(ars, excess) == pytest.approx(2 / 3, abs=0.05)
    three = upper_chain_explicit(GeometryParams(3, 0.1, 1.0, 1e-4), mode)
    assert three.K > 0


def test_upper_chain_rejects_cutoff_inside_range(mode):
    with pytest.raises(ValueError):
        upper_chain_explicit(GeometryParams(2, 0.1, 1.0, 0.01), mode, R=0.005)


def test_lower_chain_limits(mode):
    xs = np.logspace(-12, -40, 8)
    chains = [lower_chain_explicit(GeometryParams(2, 1.0, 1.0, x / 2), mode) for x in xs]
    assert all(c.vacuous is None for c in chains)
    ratio_def = np.array([1 - c.ratio for c in chains])
    kin_def = np.array([c.kinetic_deficit for c in chains])
    assert np.all(np.diff(ratio_def) < 0) and np.all(np.diff(kin_def) < 0)
    assert ratio_def[-1] < 1e-4 and kin_def[-1] < 1e-14
    # leading exponents of the two deficits
    assert slope(xs[-4:], ratio_def[-4:]) == pytest.approx(1 / 8, abs=0.01)
    assert slope(xs, kin_def) == pytest.approx(3 / 8, abs=0.01)


def test_lower_chain_vacuous_when_delta_too_large(mode):
    geom = GeometryParams(2, 1.0, 1.0, 1e-20)
    base = LowerChainParams.schedule(geom)
    p = LowerChainParams(base.R, mode.norm4_4 * 1.01, base.eps, base.eta, base.kappa)
    chain = lower_chain_explicit(geom, mode, p)
    assert chain.factors["d_integral"] <= 0
    assert chain.vacuous == "d_integral"
    assert chain.eta_L == math.inf


def test_lower_chain_at_desk_scale_is_vacuous(mode):
    # x^(1/8) exceeds ||b||_4^4 at every x above ~4e-7
    chain = lower_chain_explicit(GeometryParams(2, 0.1, 1.0, 1e-3), mode)
    assert chain.vacuous == "d_integral"
    exact = lower_chain_explicit(GeometryParams(2, 0.1, 1.0, 1e-3), mode, exact_level_set=True)
    assert exact.vacuous is not None


def test_lower_params_validation():
    with pytest.raises(ValueError):
        LowerChainParams(R=1, delta=0.1, eps=0.1, eta=0.5, kappa=0.1)  # (1-eps)(1+eta) > 1
    with pytest.raises(ValueError):
        LowerChainParams(R=1, delta=0.1, eps=1.5, eta=0.5, kappa=0.1)
    with pytest.raises(ValueError):
        LowerChainParams.schedule(GeometryParams(2, 1.0, 1.0, 0.0))


@settings(max_examples=40)
@given(st.floats(-40, -8), st.floats(0.3, 3.0), st.floats(0.3, 3.0))
def test_chain_ordering(logx, sR, sk):
    mode = solve_transverse(TransversePotential())
    geom = GeometryParams(2, 1.0, 1.0, 10**logx / 2)
    base = LowerChainParams.schedule(geom)
    p = LowerChainParams(base.R * sR, base.delta, base.eps, base.eta, base.kappa * sk)
    c = lower_chain_explicit(geom, mode, p)
    if c.vacuous is None:
        assert c.g_dprime <= c.g_prime <= c.g


def test_scaling_consistency(mode):
    geom = GeometryParams(2, 0.1, 1.0, 1e-4)
    other = geom.scaled(7.3)
    u1, u2 = upper_chain_explicit(geom, mode), upper_chain_explicit(other, mode)
    assert u1.factor == pytest.approx(u2.factor, rel=1e-12)
    assert u1.norm == pytest.approx(u2.norm, rel=1e-12)
    small = GeometryParams(2, 0.1, 1.0, 1e-22)
    l1, l2 = lower_chain_explicit(small, mode), lower_chain_explicit(small.scaled(0.2), mode)
    assert l1.ratio == pytest.approx(l2.ratio, rel=1e-10)
    assert l1.kinetic_factor == pytest.approx(l2.kinetic_factor, rel=1e-12)


def test_overlap_bound_examples():
    assert lemma2_overlap([1, 2, 3], 1.0) == 2
    assert lemma2_overlap([1, 2], 1.1) == pytest.approx(0.9)
    assert lemma2_overlap([1, 2, 3], 1.05, l=1) == pytest.approx(0.8)
    with pytest.raises(ValueError):
        lemma2_overlap([1, 2, 2], 1.1)


@given(st.lists(st.floats(0.1, 10), min_size=2, max_size=6, unique=True), st.floats(1.0, 2.0))
def test_overlap_bound_never_exceeds_k(E, eta):
    E = sorted(E)
    assert lemma2_overlap(E, eta) <= len(E) - 1 + 1e-12


def test_group_overlap_bookkeeping(mode):
    geom = GeometryParams(2, 1e-8, 1.0, 0.0)
    ground = theorem2_bound([1.0, 2.0, 2.0, 3.0], 1, geom, mode, eta_L=0.0, eta_U=0.0)
    assert ground.value == pytest.approx(1.0, abs=1e-12)
    pair = theorem2_bound([1.0, 2.0, 2.0, 3.0], 2, geom, mode, eta_L=0.0, eta_U=0.0)
    assert pair.level_group == (2, 4)
    with pytest.raises(ValueError):
        theorem2_bound([1.0, 2.0, 2.0], 2, geom, mode)


def test_group_overlap_invalid_outside_hypotheses(mode):
    geom = GeometryParams(2, 0.1, 1.0, 1e-3)
    bound = theorem2_bound([1.0, 3.0], 1, geom, mode, eta_L=1.2, eta_U=0.1)
    assert not bound.valid and "eta_L" in bound.reason


def test_explicit_chains_raise_upper_cutoff(mode):
    geom = GeometryParams(2, 0.1, 1.0, 0.01)
    upper, lower, notes = explicit_chains(geom, mode, R0=4.0)
    assert upper.R == pytest.approx(1.1 * 0.01 * 4.0)
    assert notes and "raised" in notes[0]
    upper, _, notes = explicit_chains(geom, mode, R0=4.0, schedule={"R_upper": 0.1})
    assert upper.R == 0.1
