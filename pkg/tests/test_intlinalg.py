from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from clustermaps import intlinalg as il
from clustermaps.errors import SingularSystem


def int_matrices(rows, cols, lo=-4, hi=4):
    return st.lists(st.lists(st.integers(lo, hi), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@given(int_matrices(3, 5))
def test_kernel_vectors_are_annihilated_and_complete(a):
    ker = il.integer_kernel(a)
    for v in ker:
        assert all(sum(x * y for x, y in zip(row, v)) == 0 for row in a)
    assert len(ker) == 5 - il.rank(a)


@given(int_matrices(4, 4))
def test_inverse_and_det(a):
    d = il.det(a)
    assert d == round(np.linalg.det(np.array(a, dtype=float)))
    if d == 0:
        with pytest.raises(SingularSystem):
            il.inverse(a)
        return
    inv = il.inverse(a)
    assert il.matmul(a, inv) == [[Fraction(int(i == j)) for j in range(4)] for i in range(4)]


@given(int_matrices(3, 4, -3, 3))
def test_hnf_spans_the_same_lattice(vs):
    h = il.hnf(vs)
    assert il.same_lattice(h, vs)
    assert il.rank(h) == len(h) == il.rank(vs) if any(any(r) for r in vs) else h == []


def test_orthogonal_lattice_of_somos4_kernel():
    u = [(1, 0, -1, -2), (0, 1, 2, 3)]
    v = il.orthogonal_lattice(u, 4)
    assert len(v) == 2
    assert all(sum(a * b for a, b in zip(x, y)) == 0 for x in u for y in v)
    banded = il.banded_basis(v, 4)
    assert sorted(banded) == sorted([(1, -2, 1, 0), (0, 1, -2, 1)])


def test_solve_and_lu():
    a = [[2, 1], [1, 3]]
    assert il.solve(a, [3, 5]) == [Fraction(4, 5), Fraction(7, 5)]
    lu = il.LUSolver(a)
    x, residual = lu.solve([3, 5])
    assert x == [Fraction(4, 5), Fraction(7, 5)] and residual == []
