from fractions import Fraction as F

import pytest

from clustermaps import lax


@pytest.mark.parametrize("name", ["somos4", "somos5"])
def test_lax_check(name):
    rep = lax.lax_check(name, trials=20, seed=1)
    assert rep["lax_ok"] and rep["structure_ok"] and rep["invariant_constant"]
    assert rep["witness"] is None


def test_invariants_at_ones():
    assert lax.lax_check("somos4")["invariant_at_ones"] == "4"
    assert lax.lax_check("somos5")["invariant_at_ones"] == "5"


@pytest.mark.parametrize("fx", [lax.SOMOS4, lax.SOMOS5])
def test_spectral_curve(fx):
    y = [F(3, 2), F(-5, 7)]
    for z in (F(2), F(-1, 3), F(5, 4)):
        tr, det = lax.spectral_data(fx, y, z)
        assert det == fx.det_L(z)
        assert fx.invariant_from_trace(tr, z) == fx.invariant(y)


def test_broken_fixture_is_caught():
    bad = lax.LaxFixture(
        "bad",
        lax.SOMOS4.L,
        lambda y, z: [[F(1), F(0)], [F(0), F(1)]],
        lax.SOMOS4.step,
        lax.SOMOS4.invariant,
        lax.SOMOS4.invariant_from_trace,
        lax.SOMOS4.det_L,
    )
    rep = lax.lax_check(bad, trials=5)
    assert not rep["lax_ok"] and rep["witness"] is not None


def test_invariant_orbit_constant():
    vals = lax.invariant_orbit(lax.SOMOS5, [F(2), F(3)], 15)
    assert len(set(vals)) == 1
