import itertools
import json

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustermaps import fixtures
from clustermaps.errors import InvalidQuiver, NotPeriodic, ParameterConstraint
from clustermaps.quiver import (
    QuiverMatrix,
    build_period1,
    build_period2,
    decompose_period1,
    detect_period,
    exceptional_period2,
    is_sink_type,
    load_quiver,
    mutate,
    mutate_sequence,
    period2_tuple,
    primitive,
    rotate,
    save_quiver,
)


@st.composite
def skew_matrices(draw, max_n=8, bound=3):
    n = draw(st.integers(2, max_n))
    upper = draw(st.lists(st.integers(-bound, bound), min_size=n * (n - 1) // 2, max_size=n * (n - 1) // 2))
    b = np.zeros((n, n), dtype=np.int64)
    b[np.triu_indices(n, 1)] = upper
    return QuiverMatrix(b - b.T)


@given(skew_matrices(), st.data())
def test_mutation_is_an_involution(q, data):
    k = data.draw(st.integers(1, q.n))
    assert mutate(mutate(q, k), k) == q


@given(skew_matrices())
def test_mutation_preserves_skew_symmetry(q):
    out = mutate(q, 1)
    assert np.array_equal(out.b, -out.b.T)


def test_somos4_mutation_fixture():
    s4 = QuiverMatrix(fixtures.S4_MATRIX)
    assert mutate(s4, 1) == QuiverMatrix(fixtures.S4_MUTATED)
    assert build_period1((1, -2, 1)) == s4


def test_rejects_bad_matrices():
    with pytest.raises(InvalidQuiver):
        QuiverMatrix([[0, 1], [1, 0]])
    with pytest.raises(InvalidQuiver):
        QuiverMatrix([[0, 1, 2], [-1, 0, 3]])
    with pytest.raises(InvalidQuiver):
        QuiverMatrix.from_json({"n": 3, "b": [[0, 1], [-1, 0]]})


def test_period1_builder_output_is_period_one():
    for n in range(2, 7):
        half = (n - 1 + 1) // 2
        for head in itertools.product(range(-2, 3), repeat=half):
            m = head + head[: (n - 1) - half][::-1]
            assert detect_period(build_period1(m), 1) == 1, m


def test_rotation_of_period1_chain():
    q = fixtures.quiver("s5")
    assert mutate(q, 1) == rotate(q)


def test_primitives_are_sink_type():
    for n in range(2, 9):
        for k in range(1, n // 2 + 1):
            p = primitive(n, k)
            assert is_sink_type(p)
            assert detect_period(p, 1) == 1


def test_non_palindromic_tuple_rejected():
    with pytest.raises(ParameterConstraint):
        build_period1((1, 0, 2))


@pytest.mark.parametrize(
    "name, expected",
    [
        ("s4", "P4(1)-2P4(2)+2P2(1)"),
        ("s5", "P5(1)-P5(2)+P3(1)"),
        ("gr6a", "P6(1)-P6(2)+P4(1)"),
        ("gr6b", "P6(1)-2P6(3)+2P4(2)"),
        ("gr6c", "P6(2)-2P6(3)+2P2(1)"),
        ("p4142", "P4(1)-P4(2)+P2(1)"),
        ("p6163", "P6(1)-P6(3)+P4(2)"),
        ("p8184", "P8(1)-P8(4)+P6(3)"),
    ],
)
def test_decompositions(name, expected):
    q = fixtures.quiver(name)
    dec = decompose_period1(q)
    assert str(dec) == expected
    assert dec.reassemble() == q


def test_decompose_rejects_non_periodic():
    with pytest.raises(NotPeriodic):
        decompose_period1(fixtures.quiver("reg4"))


def test_composite_family_matrix():
    assert fixtures.s4gen(2) == fixtures.quiver("s4")
    assert fixtures.s4gen(1) == fixtures.quiver("p4142")


def test_regular_period2_four_nodes_matches_closed_form():
    for r, s, t in [(1, 1, 2), (1, 2, 3), (3, 2, 1)]:
        b1, b2 = build_period2(4, period2_tuple(4, r, s, t))
        assert b1.tolist() == [
            [0, -r, s, -t],
            [r, 0, -t - r * s, s],
            [-s, t + r * s, 0, -r],
            [t, -s, r, 0],
        ]
        assert b2.tolist() == [
            [0, r, -s, t],
            [-r, 0, -t, s],
            [s, t, 0, -r - s * t],
            [-t, -s, r + s * t, 0],
        ]
        assert detect_period(b1, 2) == 2


def test_regular_period2_five_nodes_matches_closed_form():
    for r, t in [(1, 2), (2, 1), (1, 3)]:
        b1, b2 = build_period2(5, period2_tuple(5, r, t=t))
        assert b1.tolist() == [
            [0, -r, 1, 1, -t],
            [r, 0, -r - t, 1 - r, 1],
            [-1, r + t, 0, -r - t, 1],
            [-1, r - 1, r + t, 0, -r],
            [t, -1, -1, r, 0],
        ]
        assert b2.tolist() == [
            [0, r, -1, -1, t],
            [-r, 0, -t, 1, 1],
            [1, t, 0, -r - t, 1 - t],
            [1, -1, r + t, 0, -r - t],
            [-t, -1, t - 1, r + t, 0],
        ]


def test_exceptional_period2():
    for m1 in (1, 2, 3):
        b1, b2 = exceptional_period2(m1)
        assert detect_period(b1, 2) == 2
        a = m1
        assert b2.tolist() == [
            [0, a, 1, a + 1, -1],
            [-a, 0, 1, -a - 1, -1],
            [-1, -1, 0, 1, 0],
            [-a - 1, a + 1, -1, 0, 1],
            [1, 1, 0, -1, 0],
        ]


def test_period2_parameter_constraints():
    with pytest.raises(ParameterConstraint):
        build_period2(4, (1, -1, 1))
    with pytest.raises(ParameterConstraint):
        build_period2(5, (1, -2, -2, 2))
    with pytest.raises(ParameterConstraint):
        build_period2(4, (1, 1, 2))


def test_json_roundtrip(tmp_path):
    q = fixtures.quiver("gr6b")
    path = tmp_path / "q.json"
    save_quiver(q, path)
    assert load_quiver(path) == q
    assert json.loads(path.read_text()) == {"n": 6, "b": q.tolist()}


def test_shipped_data_matches_builders():
    for name in fixtures.names():
        assert fixtures.shipped(name) == fixtures.quiver(name), name


def test_mutate_sequence_period2_returns_rotated():
    b1, _ = build_period2(4, (1, -2, 3))
    assert mutate_sequence(b1, [1, 2]) == rotate(b1, 2)
