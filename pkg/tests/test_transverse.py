import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from dimred.transverse import TransverseGrid, TransversePotential, scaled_mode, solve_transverse


@pytest.fixture(scope="module")
def harmonic():
    return solve_transverse(TransversePotential())


def test_harmonic_analytics(harmonic):
    # -Delta + |x|^2 in 2D: levels 2(2n_r + |m| + 1); b = e^{-rho^2/2}/sqrt(pi)
    assert harmonic.e_perp == pytest.approx(2.0, abs=1e-6)
    assert harmonic.gap == pytest.approx(2.0, abs=1e-6)
    assert harmonic.norm4_4 == pytest.approx(1 / (2 * math.pi), abs=1e-6)
    assert harmonic.sup_b == pytest.approx(1 / math.sqrt(math.pi), abs=1e-5)
    # |grad b^2| = 2 rho e^{-rho^2} / pi, maximal at rho = 1/sqrt(2)
    assert harmonic.sup_grad_b2 == pytest.approx(math.sqrt(2) * math.exp(-0.5) / math.pi, rel=1e-4)


def test_sector_levels(harmonic):
    assert harmonic.sector_levels[0][0] == pytest.approx(2.0, abs=1e-6)
    assert harmonic.sector_levels[1][0] == pytest.approx(4.0, abs=1e-6)
    assert harmonic.sector_levels[2][0] == pytest.approx(6.0, abs=1e-6)


def test_mode_normalized_and_positive(harmonic):
    rho, b = harmonic.rho, harmonic.b
    h = rho[1] - rho[0]
    assert 2 * math.pi * np.sum(b**2 * rho) * h == pytest.approx(1.0, abs=1e-5)
    assert np.all(b >= 0)
    np.testing.assert_allclose(harmonic(rho[:50]), np.exp(-rho[:50] ** 2 / 2) / math.sqrt(math.pi), atol=1e-5)


def test_tabulated_harmonic_agrees(harmonic):
    rho = np.linspace(0, 10, 4001)
    tab = solve_transverse(TransversePotential("tabulated_radial", (tuple(rho), tuple(rho**2))))
    assert tab.e_perp == pytest.approx(harmonic.e_perp, abs=1e-5)
    assert tab.norm4_4 == pytest.approx(harmonic.norm4_4, abs=1e-5)


def test_bad_profiles():
    with pytest.raises(ValueError):
        TransversePotential("tabulated_radial", ((0.0, 1.0, 0.5), (0.0, 1.0, 2.0)))
    with pytest.raises(ValueError):
        TransversePotential("tabulated_radial", None)
    with pytest.raises(ValueError):
        solve_transverse(TransversePotential(), TransverseGrid(sectors=(1, 2)))


@given(r=st.floats(0.01, 2.0))
def test_scaled_mode(harmonic, r):
    sm = scaled_mode(harmonic, r)
    assert sm.e_perp == pytest.approx(harmonic.e_perp / r**2, rel=1e-12)
    assert sm.gap == pytest.approx(harmonic.gap / r**2, rel=1e-12)
    assert sm.norm4_4 == pytest.approx(harmonic.norm4_4 / r**2, rel=1e-12)
