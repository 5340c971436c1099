import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import brentq

from dimred.lieb_liniger.bethe import (BetheError, as_doubled, bethe_solve, boson_to_bethe,
                                       ground_quantum_numbers)


def two_body_ground(ell, g):
    """Scalar oracle: symmetric rapidities +-k with k ell + 2 arctan(2k/c) = pi, c = g/2."""
    c = g / 2
    k = brentq(lambda k: k * ell + 2 * math.atan(2 * k / c) - math.pi, 0, math.pi / ell)
    return 2 * k * k


@pytest.mark.parametrize("g", [0.1, 1.0, 10.0, 100.0])
@pytest.mark.parametrize("ell", [1.0, 3.0])
def test_two_body_ground_matches_scalar_oracle(g, ell):
    st_ = bethe_solve(2, ell, g, ground_quantum_numbers(2))
    assert st_.energy == pytest.approx(two_body_ground(ell, g), rel=1e-12)
    assert st_.momentum == pytest.approx(0.0, abs=1e-12)


def test_limits():
    tg = bethe_solve(3, 1.0, math.inf, ground_quantum_numbers(3))
    assert tg.energy == pytest.approx(8 * math.pi**2, rel=1e-14)  # fermions at 0, +-2 pi
    free = bethe_solve(3, 1.0, 0.0, ground_quantum_numbers(3))
    assert free.energy == 0.0
    # one particle: k = 2 pi I / ell independent of g
    one = bethe_solve(1, 2.0, 5.0, (3,))
    assert one.energy == pytest.approx((3 * math.pi) ** 2, rel=1e-12)


def test_small_g_approaches_free_bosons():
    # first order in g: E = g n(n-1) / (2 ell) for the periodic ground state
    for n in (2, 3):
        E = bethe_solve(n, 1.0, 1e-4, ground_quantum_numbers(n)).energy
        assert E == pytest.approx(1e-4 * n * (n - 1) / 2, rel=1e-3)


def test_excited_state_from_boson_map():
    # free bosons (0, 1): one particle at 2 pi / ell; g=0 limit reproduces it
    qn = boson_to_bethe((0, 1))
    assert qn == (-0.5, 1.5)
    E0 = bethe_solve(2, 1.0, 0.0, qn).energy
    assert E0 == pytest.approx((2 * math.pi) ** 2)
    Einf = bethe_solve(2, 1.0, math.inf, qn).energy
    assert Einf == pytest.approx(math.pi**2 + (3 * math.pi) ** 2)


def test_validation():
    with pytest.raises(ValueError):
        as_doubled(2, (0, 1))  # even n needs half-odd integers
    with pytest.raises(ValueError):
        as_doubled(3, (0.5, 1.5, 2.5))
    with pytest.raises(ValueError):
        as_doubled(2, (0.5, 0.5))
    with pytest.raises(ValueError):
        as_doubled(2, (0.5,))
    with pytest.raises(ValueError):
        bethe_solve(2, 1.0, -1.0, (-0.5, 0.5))
    with pytest.raises(ValueError):
        bethe_solve(2, 0.0, 1.0, (-0.5, 0.5))
    assert issubclass(BetheError, RuntimeError)


@given(n=st.integers(1, 12), g=st.floats(0.01, 200.0), ell=st.floats(0.5, 20.0))
def test_bethe_equations_satisfied(n, g, ell):
    s = bethe_solve(n, ell, g, ground_quantum_numbers(n))
    c = g / 2
    k = s.rapidities
    I = np.sort(s.I)
    lhs = k * ell + 2 * np.arctan((k[:, None] - k[None, :]) / c).sum(axis=1)
    np.testing.assert_allclose(lhs, 2 * np.pi * I, atol=1e-9 * max(1, np.abs(2 * np.pi * I).max()))
    # ground state is bounded by free bosons below and free fermions above
    assert 0 <= s.energy <= bethe_solve(n, ell, math.inf, ground_quantum_numbers(n)).energy + 1e-9


@given(g1=st.floats(0.01, 50.0), dg=st.floats(0.01, 50.0))
def test_energy_monotone_in_g(g1, dg):
    qn = ground_quantum_numbers(3)
    assert bethe_solve(3, 1.0, g1, qn).energy <= bethe_solve(3, 1.0, g1 + dg, qn).energy + 1e-12


@given(g=st.floats(0.05, 50.0))
def test_warm_start_same_answer(g):
    qn = ground_quantum_numbers(4)
    cold = bethe_solve(4, 2.0, g, qn)
    warm = bethe_solve(4, 2.0, g * 1.1, qn, k0=cold.rapidities)
    ref = bethe_solve(4, 2.0, g * 1.1, qn)
    assert warm.energy == pytest.approx(ref.energy, rel=1e-10)
