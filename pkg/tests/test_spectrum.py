import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from dimred.lieb_liniger import (
    degeneracy_index,
    excitation_branches,
    ll_spectrum_periodic,
    ll_spectrum_trapped,
    tg_levels,
)


def brute_boson_levels(n, ell, count, qmax=4):
    """Free bosons on a circle: multisets of integer momenta."""
    E = sorted(sum(q * q for q in c) for c in itertools.combinations_with_replacement(range(-qmax, qmax + 1), n))
    return np.array(E[:count]) * (2 * math.pi / ell) ** 2


def brute_fermion_levels(n, ell, count, imax=5):
    """Free fermions: distinct momenta, half-odd for even n."""
    shift = 0.5 if n % 2 == 0 else 0.0
    ks = [i + shift for i in range(-imax, imax)]
    E = sorted(sum(k * k for k in c) for c in itertools.combinations(ks, n))
    return np.array(E[:count]) * (2 * math.pi / ell) ** 2


@pytest.mark.parametrize("n,ell", [(2, 1.0), (3, 1.0), (3, 2.5), (4, 1.0)])
def test_free_bosons(n, ell):
    s = ll_spectrum_periodic(n, ell, 0.0, 6)
    assert s.energies[0] == 0.0
    np.testing.assert_allclose(s.energies, brute_boson_levels(n, ell, 6), atol=1e-10)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_fermion_levels_and_hard_core_limit(n):
    ref = brute_fermion_levels(n, 1.0, 6)
    np.testing.assert_allclose(tg_levels(n, 1.0, 6), ref, rtol=1e-12)
    np.testing.assert_allclose(ll_spectrum_periodic(n, 1.0, math.inf, 6).energies, ref, rtol=1e-10)


def test_fermion_ground_values_and_scaling():
    assert tg_levels(2, 1.0, 1)[0] == pytest.approx(2 * math.pi**2)
    assert tg_levels(3, 1.0, 1)[0] == pytest.approx(8 * math.pi**2)
    for ell in (0.5, 3.0):
        assert tg_levels(3, ell, 1)[0] == pytest.approx(tg_levels(3, 1.0, 1)[0] / ell**2)


def test_harmonic_fermions_and_tabulated_single_particle():
    # distinct oscillator levels 1, 3, 5, ...
    np.testing.assert_allclose(tg_levels(2, 1.0, 4, "harmonic"), [4, 6, 8, 8])
    np.testing.assert_allclose(tg_levels(3, 2.0, 2, "harmonic"), np.array([9, 11]) / 4)
    eps = np.array([0.3, 1.0, 1.7, 5.0])
    np.testing.assert_allclose(tg_levels(2, 1.0, 3, single_particle=eps), [1.3, 2.0, 2.7])


@settings(max_examples=15)
@given(st.floats(0.05, 20.0), st.floats(0.0, 20.0))
def test_monotone_in_g_and_fermion_bound(g1, dg):
    a = ll_spectrum_periodic(3, 1.0, g1, 5).energies
    b = ll_spectrum_periodic(3, 1.0, g1 + dg, 5).energies
    assert np.all(a <= b + 1e-9 * np.maximum(1, b))
    assert np.all(b <= tg_levels(3, 1.0, 5) * (1 + 1e-9))


def test_first_order_perturbation():
    g = 1e-3
    # <sum delta> = n(n-1)/(2 ell) in the constant ground state
    assert ll_spectrum_periodic(3, 1.0, g, 1).energies[0] == pytest.approx(3 * g, rel=1e-3)


def test_branches_zero_and_ordering():
    b = excitation_branches(8, 8.0, 5.0)
    assert b.eps_I[0] == pytest.approx(0, abs=1e-12)
    assert b.eps_II[0] == pytest.approx(0, abs=1e-12)
    inner = (b.p > 0) & (b.p < 2 * math.pi * 8 / 8.0)
    assert np.all(b.eps_II[inner] <= b.eps_I[inner] * (1 + 1e-12))
    # one quantum moved: particle and hole moves coincide; strict from two on
    assert b.eps_I[1] == pytest.approx(b.eps_II[1], rel=1e-12)
    assert np.all(b.eps_II[2:-1] < b.eps_I[2:-1])
    # raising every quantum number is a rigid boost by 2 pi / ell
    assert b.eps_II[-1] == pytest.approx(8 * (2 * math.pi / 8.0) ** 2, rel=1e-10)


def test_branches_tonks_limit():
    n, ell = 6, 6.0
    b = excitation_branches(n, ell, 1e7)
    I = np.arange(n) - (n - 1) / 2
    unit = (2 * math.pi / ell) ** 2
    for i, q in enumerate(range(n + 1)):
        top = I[-1] + q
        assert b.eps_I[i] == pytest.approx(unit * (top**2 - I[-1] ** 2), rel=1e-5, abs=1e-9)
        J = I.copy()
        if q:
            J[n - q:] += 1
        assert b.eps_II[i] == pytest.approx(unit * (J @ J - I @ I), rel=1e-5, abs=1e-9)


def test_branches_need_positive_g():
    with pytest.raises(ValueError):
        excitation_branches(3, 1.0, 0.0)


def test_degeneracy_index_examples():
    assert degeneracy_index([1.0, 2.0, 3.0]).k_list == (1, 2, 3, 4)
    di = degeneracy_index([1.0, 2.0, 2.0, 3.0])
    assert di.k_list == (1, 2, 4, 5)
    assert di.group_of(3) == (2, 4)
    assert di.groups(4) == [(1, 2), (2, 4), (4, 5)]
    # relative tolerance groups near-equal large energies
    assert degeneracy_index([1e6, 1e6 * (1 + 1e-10)]).k_list == (1, 3)
    with pytest.raises(ValueError):
        degeneracy_index([2.0, 1.0])


def test_degeneracy_of_periodic_spectrum():
    s = ll_spectrum_periodic(2, 1.0, 3.0, 5)
    # momentum +-p pairs are degenerate
    ks = degeneracy_index(s).k_list
    assert ks[:3] == (1, 2, 4)


def test_trapped_groups_stable_in_tolerance():
    s = ll_spectrum_trapped(2, 1.0, 1.0, basis_size=100, k_max=5)
    lists = {degeneracy_index(s, tol).k_list for tol in (1e-10, 1e-8, 1e-6)}
    assert len(lists) == 1


def test_trapped_free_bosons():
    # two bosons in the trap: sums of (2j+1) with j1 <= j2
    s = ll_spectrum_trapped(2, 1.0, 0.0, basis_size=20, k_max=6)
    np.testing.assert_allclose(s.energies, [2, 4, 6, 6, 8, 8], atol=1e-10)


def test_validation():
    with pytest.raises(ValueError):
        ll_spectrum_periodic(2, 1.0, 1.0, 0)
