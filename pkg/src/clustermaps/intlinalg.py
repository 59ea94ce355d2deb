"""Exact integer and rational linear algebra on small dense matrices.

Matrices are lists of lists (or anything convertible with ``int``/``Fraction``).
Entries stay Python ints or Fractions throughout, so nothing overflows.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Sequence

import numpy as np

from .errors import SingularSystem


def to_int_rows(a) -> list[list[int]]:
    return [[int(v) for v in row] for row in np.asarray(a, dtype=object).tolist()]


def _frac_rows(a) -> list[list[Fraction]]:
    return [[Fraction(v) for v in row] for row in a]


def rref(a) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form over Q and the pivot columns."""
    m = _frac_rows(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    piv = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, rows) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(rows):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [vi - f * vr for vi, vr in zip(m[i], m[r])]
        piv.append(c)
        r += 1
        if r == rows:
            break
    return m, piv


def rank(a) -> int:
    a = list(a)
    if not a or not len(a[0]):
        return 0
    return len(rref(a)[1])


def det(a) -> Fraction:
    m = _frac_rows(a)
    n = len(m)
    d = Fraction(1)
    for c in range(n):
        p = next((i for i in range(c, n) if m[i][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            m[c], m[p] = m[p], m[c]
            d = -d
        d *= m[c][c]
        for i in range(c + 1, n):
            if m[i][c] != 0:
                f = m[i][c] / m[c][c]
                m[i] = [vi - f * vc for vi, vc in zip(m[i], m[c])]
    return d


def inverse(a) -> list[list[Fraction]]:
    n = len(a)
    aug = [list(row) + [int(i == j) for j in range(n)] for i, row in enumerate(a)]
    r, piv = rref(aug)
    if piv[:n] != list(range(n)):
        raise SingularSystem("matrix is singular")
    return [row[n:] for row in r]


def solve(a, b) -> list[Fraction]:
    """Unique solution of a x = b over Q (a square or tall with full column rank)."""
    n = len(a[0])
    aug = [list(row) + [bv] for row, bv in zip(a, b)]
    r, piv = rref(aug)
    if n in piv:
        raise SingularSystem("inconsistent system")
    if piv != list(range(n)):
        raise SingularSystem("system does not have a unique solution")
    return [r[i][n] for i in range(n)]


class LUSolver:
    """Factor once over Q, then solve many right-hand sides."""

    def __init__(self, a):
        m = _frac_rows(a)
        self.rows = len(m)
        self.cols = len(m[0]) if m else 0
        # record elimination as row operations on an identity to reuse them
        aug = [row + [Fraction(int(i == j)) for j in range(self.rows)] for i, row in enumerate(m)]
        r, piv = rref(aug)
        self.pivots = [p for p in piv if p < self.cols]
        self.rank = len(self.pivots)
        self._ops = [row[self.cols:] for row in r]

    def solve(self, b: Sequence) -> tuple[list[Fraction], list[Fraction]]:
        """Least-structure solve: returns (x, residual of inconsistent rows)."""
        b = [Fraction(v) for v in b]
        tb = [sum((o * bv for o, bv in zip(op, b) if o), Fraction(0)) for op in self._ops]
        x = [Fraction(0)] * self.cols
        for i, c in enumerate(self.pivots):
            x[c] = tb[i]
        return x, tb[self.rank:]


# ---------------------------------------------------------------------------
# integer lattices


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, int(x))
    return g


def normalize_primitive(v: Sequence[int]) -> tuple[int, ...]:
    """Divide by content and make the first nonzero entry positive."""
    g = content(v)
    if g == 0:
        return tuple(int(x) for x in v)
    out = [int(x) // g for x in v]
    first = next(x for x in out if x)
    if first < 0:
        out = [-x for x in out]
    return tuple(out)


def column_echelon(a) -> tuple[list[list[int]], list[list[int]]]:
    """Return (H, U) with a @ U = H, U unimodular, H in column echelon form."""
    h = to_int_rows(a)
    rows = len(h)
    n = len(h[0]) if rows else 0
    u = [[int(i == j) for j in range(n)] for i in range(n)]

    def colop(dst, src, f):
        # column dst -= f * column src, in both H and U
        for row in h:
            row[dst] -= f * row[src]
        for row in u:
            row[dst] -= f * row[src]

    def swap(c1, c2):
        for row in h:
            row[c1], row[c2] = row[c2], row[c1]
        for row in u:
            row[c1], row[c2] = row[c2], row[c1]

    c = 0
    for r in range(rows):
        if c >= n:
            break
        while True:
            nz = [j for j in range(c, n) if h[r][j] != 0]
            if not nz:
                break
            j = min(nz, key=lambda j: abs(h[r][j]))
            if j != c:
                swap(c, j)
            done = True
            for j in range(c + 1, n):
                if h[r][j]:
                    colop(j, c, h[r][j] // h[r][c])
                    if h[r][j]:
                        done = False
            if done:
                break
        if h[r][c] != 0:
            c += 1
    return h, u


def integer_kernel(a) -> list[tuple[int, ...]]:
    """Z-basis of {x in Z^n : a x = 0}, each vector normalized."""
    rows = to_int_rows(a)
    n = len(rows[0]) if rows else 0
    if not rows:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    h, u = column_echelon(rows)
    zero_cols = [j for j in range(n) if all(row[j] == 0 for row in h)]
    basis = [[u[i][j] for i in range(n)] for j in zero_cols]
    return [normalize_primitive(v) for v in hnf(basis)] if basis else []


def hnf(vectors) -> list[list[int]]:
    """Row Hermite normal form of the lattice spanned by ``vectors`` (zero rows dropped)."""
    rows = [list(map(int, v)) for v in vectors]
    if not rows:
        return []
    ncols = len(rows[0])
    out: list[list[int]] = []
    r = 0
    for c in range(ncols):
        while True:
            nz = [i for i in range(r, len(rows)) if rows[i][c] != 0]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(rows[i][c]))
            rows[r], rows[p] = rows[p], rows[r]
            if rows[r][c] < 0:
                rows[r] = [-x for x in rows[r]]
            done = True
            for i in range(r + 1, len(rows)):
                if rows[i][c]:
                    f = rows[i][c] // rows[r][c]
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
                    if rows[i][c]:
                        done = False
            if done:
                break
        if r < len(rows) and rows[r][c] != 0:
            for i in range(r):
                f = rows[i][c] // rows[r][c]
                if f:
                    rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
            r += 1
            if r == len(rows):
                break
    out = [row for row in rows[:r] if any(row)]
    return out


def same_lattice(a, b) -> bool:
    return hnf(a) == hnf(b)


def orthogonal_lattice(vectors, n: int) -> list[tuple[int, ...]]:
    """Z-basis of {v in Z^n : v . u = 0 for every u in ``vectors``}."""
    vectors = [list(map(int, v)) for v in vectors]
    if not vectors:
        return [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return integer_kernel(vectors)


def banded_basis(lattice, n: int) -> list[tuple[int, ...]] | None:
    """Basis of narrowest vectors supported on consecutive windows, if one generates.

    For each start index j the shortest window [j, j+w) whose sublattice contains
    a vector with nonzero j-th entry contributes that vector. Returns None when the
    collected vectors do not generate ``lattice``.
    """
    target = hnf(lattice)
    dim = len(target)
    if dim == 0:
        return []
    ortho = orthogonal_lattice(lattice, n)  # vectors u with u . v = 0 on the lattice
    chosen: list[tuple[int, ...]] = []
    for j in range(n):
        if len(chosen) == dim:
            break
        for w in range(1, n - j + 1):
            cols = list(range(j, j + w))
            if ortho:
                sub = [[u[c] for c in cols] for u in ortho]
                ker = integer_kernel(sub)
            else:
                ker = [tuple(int(i == k) for k in range(w)) for i in range(w)]
            cand = [v for v in ker if v[0] != 0]
            if cand:
                v = min(cand, key=lambda v: (abs(v[0]), [abs(x) for x in v]))
                full = [0] * n
                for c, x in zip(cols, v):
                    full[c] = x
                vec = normalize_primitive(full)
                if rank(chosen + [vec]) > len(chosen):
                    chosen.append(vec)
                break
    if len(chosen) != dim or not same_lattice(chosen, target):
        return None
    return chosen


def matmul(a, b):
    return [[sum(x * y for x, y in zip(row, col)) for col in zip(*b)] for row in a]


def transpose(a):
    return [list(r) for r in zip(*a)]
