"""Lax pairs for the reduced Somos-4 and Somos-5 maps."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .poisson import _s4_hat, _s5_hat, random_rational


def _mul(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)] for i in range(2)]


def _somos4_L(y, z):
    y1, y2 = y
    return [
        [-(y1 + 1) / (y1 * y2) * z, -y1 * z + (y1 + 1) / (y1 * y2)],
        [z * z / y1 - z, (-y1 * y2 - 1 / y1) * z + 1],
    ]


def _somos4_M(y, z):
    y1, y2 = y
    return [[Fraction(0), Fraction(1)], [-z / (y1 * y2), 1 / (y1 * y2)]]


def _somos4_H(y):
    y1, y2 = y
    return y1 * y2 + 1 / y1 + 1 / y2 + 1 / (y1 * y2)


def _somos5_L(y, z):
    y1, y2 = y
    c0 = [[0, 1], [0, 1]]
    c1 = [[-y1, -(y2 + 1 / y1)], [-y1, -(y2 + 1 / y1 + 1 / y2 + 1 / (y1 * y2))]]
    c2 = [[1, 0], [1 + (y1 + 1) / y2, 1]]
    return [[c0[i][j] + c1[i][j] * z + c2[i][j] * z * z for j in range(2)] for i in range(2)]


def _somos5_M(y, z):
    y1, _ = y
    return [[Fraction(0), Fraction(1)], [-y1 * z, Fraction(1)]]


def _somos5_J(y):
    y1, y2 = y
    return y1 + y2 + 1 / y1 + 1 / y2 + 1 / (y1 * y2)


@dataclass(frozen=True)
class LaxFixture:
    """L(y, zeta), M(y, zeta), the reduced map and the spectral invariant."""

    name: str
    L: Callable
    M: Callable
    step: Callable[[Sequence[Fraction]], list[Fraction]]
    invariant: Callable[[Sequence[Fraction]], Fraction]
    # det(L - xi) = xi^2 - tr(L) xi + det(L); these recover the invariant
    invariant_from_trace: Callable[[Fraction, Fraction], Fraction]
    det_L: Callable[[Fraction], Fraction]


SOMOS4 = LaxFixture(
    "somos4",
    _somos4_L,
    _somos4_M,
    _s4_hat,
    _somos4_H,
    lambda tr, z: (1 - tr) / z,
    lambda z: z**3 + z**2,
)

SOMOS5 = LaxFixture(
    "somos5",
    _somos5_L,
    _somos5_M,
    _s5_hat,
    _somos5_J,
    lambda tr, z: (2 * z * z + 1 - tr) / z,
    lambda z: z**4 + z**3,
)

FIXTURES = {"somos4": SOMOS4, "somos5": SOMOS5}


def spectral_data(fx: LaxFixture, y: Sequence, z) -> tuple[Fraction, Fraction]:
    """(trace, det) of L(y, z)."""
    L = fx.L([Fraction(v) for v in y], Fraction(z))
    return L[0][0] + L[1][1], L[0][0] * L[1][1] - L[0][1] * L[1][0]


def validate_fixture(fx: LaxFixture, point: Sequence, z) -> bool:
    """det L matches the spectral curve and its trace returns the invariant."""
    y = [Fraction(v) for v in point]
    z = Fraction(z)
    tr, det = spectral_data(fx, y, z)
    return det == fx.det_L(z) and fx.invariant_from_trace(tr, z) == fx.invariant(y)


def lax_identity(fx: LaxFixture, point: Sequence, z) -> bool:
    """L(phi_hat(y)) M(y) == M(y) L(y) exactly."""
    y = [Fraction(v) for v in point]
    z = Fraction(z)
    lt = fx.L(fx.step(y), z)
    m = fx.M(y, z)
    return _mul(lt, m) == _mul(m, fx.L(y, z))


def invariant_orbit(fx: LaxFixture, start: Sequence, steps: int) -> list[Fraction]:
    y = [Fraction(v) for v in start]
    out = [fx.invariant(y)]
    for _ in range(steps):
        y = fx.step(y)
        out.append(fx.invariant(y))
    return out


def lax_check(fixture: str | LaxFixture, trials: int = 20, steps: int = 30, seed: int = 1) -> dict:
    """Lax identity at random (y, zeta) and constancy of the invariant along the map."""
    fx = FIXTURES[fixture] if isinstance(fixture, str) else fixture
    rng = random.Random(seed)
    lax_ok = True
    structure_ok = True
    witness = None
    for _ in range(trials):
        y = [random_rational(rng), random_rational(rng)]
        z = random_rational(rng)
        structure_ok &= validate_fixture(fx, y, z)
        if not lax_identity(fx, y, z):
            lax_ok = False
            witness = [str(v) for v in y] + [str(z)]
            break
    start = [Fraction(1), Fraction(1)]
    orbit_vals = invariant_orbit(fx, start, steps)
    rand_start = [random_rational(rng), random_rational(rng)]
    rand_vals = invariant_orbit(fx, rand_start, steps)
    constant = len(set(orbit_vals)) == 1 and len(set(rand_vals)) == 1
    return {
        "fixture": fx.name,
        "trials": trials,
        "lax_ok": lax_ok,
        "structure_ok": structure_ok,
        "invariant_constant": constant,
        "invariant_at_ones": str(orbit_vals[0]),
        "witness": witness,
        "seed": seed,
    }
