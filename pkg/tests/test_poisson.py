import random
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustermaps import fixtures
from clustermaps import intlinalg as il
from clustermaps.laurent import LaurentPoly
from clustermaps.poisson import (
    BracketMatrix,
    Degenerate,
    bracket,
    bracket_by_partials,
    casimir_status,
    invariant_bracket,
    leaf_reduce,
    log_canonical_tensor,
    presymplectic_form,
    random_point,
    reduced_map,
    verify_commuting_diagram,
    verify_form_invariance,
    verify_jacobi,
)
from clustermaps.quiver import QuiverMatrix, primitive
from clustermaps.tropical import zero_entropy_families


def top_row(c):
    return tuple(c.c[0])


def is_toeplitz(c):
    n = c.n
    return all(c.c[i][j] == c.c[i + 1][j + 1] for i in range(n - 1) for j in range(n - 1))


@pytest.mark.parametrize(
    "name, row, scale",
    [("p4142", (0, 1, 1, 2), 2), ("p6163", (0, 0, 1, 0, 1, 1), 1), ("p8184", (0, 1, 0, 0, 1, 1, 0, 1), 1)],
)
def test_composite_brackets_are_toeplitz(name, row, scale):
    c = invariant_bracket(fixtures.quiver(name))
    assert top_row(c) == row and c.scale == scale
    assert is_toeplitz(c)
    b = fixtures.quiver(name).tolist()
    assert il.matmul(c.tolist(), b) == [[scale * int(i == j) for j in range(len(b))] for i in range(len(b))]


@pytest.mark.parametrize("n", [2, 4, 6, 8])
def test_even_primitive_bracket_is_sign_pattern(n):
    c = invariant_bracket(primitive(n, 1))
    for j in range(n):
        for k in range(n):
            expect = int(np.sign(k - j)) if (k - j) % 2 else 0
            assert c.c[j][k] == expect


def test_degenerate_forms():
    assert isinstance(invariant_bracket(fixtures.quiver("s4")), Degenerate)
    form = presymplectic_form(fixtures.quiver("s4"))
    assert form.rank == 2 and form.degenerate
    assert invariant_bracket(primitive(5, 1)).rank == 4


small_polys = st.lists(
    st.tuples(st.tuples(*[st.integers(-2, 2)] * 4), st.integers(-3, 3)), max_size=4
).map(lambda ts: LaurentPoly(4, ts))


@given(small_polys, small_polys)
def test_fast_bracket_matches_partials(f, g):
    c = invariant_bracket(fixtures.quiver("p4142"))
    assert bracket(f, g, c) == bracket_by_partials(f, g, c)


@given(st.lists(st.integers(-3, 3), min_size=3, max_size=3))
def test_constant_log_canonical_brackets_satisfy_jacobi(upper):
    a, b, d = upper
    c = [[0, a, b], [-a, 0, d], [-b, -d, 0]]
    assert verify_jacobi(log_canonical_tensor(c))


def test_bracket_matrix_rejects_non_skew():
    with pytest.raises(ValueError):
        BracketMatrix(((0, 1), (1, 0)))


def test_somos4_leaf_reduction():
    lr = leaf_reduce(fixtures.quiver("s4"))
    assert sorted(lr.v) == [(0, 1, -2, 1), (1, -2, 1, 0)]
    assert [m.terms()[0][0] for m in lr.monomials()] == [tuple(v) for v in lr.v]
    y1, y2 = LaurentPoly.variables(2)
    assert bracket(y1, y2, lr.bracket) == y1 * y2
    assert il.same_lattice(lr.u, [(1, 0, -1, -2), (0, 1, 2, 3)])


def test_reduced_pullback_identity():
    for name in ("s4", "s5", "p31", "p51", "gr6a", "p52"):
        q = fixtures.quiver(name)
        lr = leaf_reduce(q)
        v = [list(r) for r in lr.v]
        assert il.matmul(il.matmul(il.transpose(v), lr.b_hat), v) == [[F(x) for x in r] for r in q.tolist()]


def test_odd_primitive_reduced_bracket():
    lr = leaf_reduce(fixtures.quiver("p51"))
    assert lr.v == tuple(tuple(int(j in (i, i + 1)) for j in range(5)) for i in range(4))
    assert all(lr.bracket.c[i][j] == 1 for i in range(4) for j in range(i + 1, 4))


@pytest.mark.parametrize("name, quiver", [("somos4", "s4"), ("somos5", "s5"), ("p31", "p31"), ("p51", "p51")])
def test_commuting_diagram(name, quiver):
    rm = reduced_map(name)
    assert rm.quiver == fixtures.quiver(quiver)
    assert leaf_reduce(rm.quiver).v == rm.v
    assert verify_commuting_diagram(rm, trials=20).verdict


def test_reduced_bracket_is_invariant_under_reduced_map():
    # {y1', y2'} = y1' y2' at the image point, via the exact Jacobian of phi_hat
    y1, y2 = LaurentPoly.variables(2)
    # Somos-4 reduced map: (y1, y2) -> (y2, (y2 + 1) / (y1 y2^2))
    img1, img2 = y2, (y2 + 1).div_exact(y1 * y2 * y2)
    assert bracket(img1, img2, ((0, 1), (-1, 0))) == img1 * img2


def test_form_invariance_on_zero_entropy_families():
    for _, _, sp in zero_entropy_families(6):
        assert verify_form_invariance(sp.quiver(), sp, trials=5).verdict, sp.m


def test_form_invariance_detects_perturbation():
    b = np.array(fixtures.S4_MATRIX)
    b[0, 1] += 1
    b[1, 0] -= 1
    rep = verify_form_invariance(QuiverMatrix(b), fixtures.spec("s4"), trials=5)
    assert not rep.verdict and rep.witness is not None


def test_casimir_status():
    st4 = casimir_status(invariant_bracket(fixtures.quiver("p4142")), fixtures.spec("p4142"))
    assert st4 == {"casimirs": [], "invariant": True}


def test_random_point_is_seeded():
    assert random_point(4, 7) == random_point(4, random.Random(7))
    assert all(x > 0 for x in random_point(6, 1))
