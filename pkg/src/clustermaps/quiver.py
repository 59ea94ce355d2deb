"""Quivers as skew-symmetric integer matrices: mutation, rotation, periodicity,
primitives, and builders for period-1 and period-2 families.

All public node indices are 1-based.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from . import _accel
from .errors import InvalidQuiver, NotPeriodic, ParameterConstraint


class QuiverMatrix:
    """Skew-symmetric integer matrix with zero diagonal."""

    __slots__ = ("_b",)

    def __init__(self, b):
        arr = np.array(b, dtype=np.int64)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise InvalidQuiver("quiver matrix must be square")
        if not np.array_equal(arr, -arr.T):
            raise InvalidQuiver("quiver matrix must be skew-symmetric with zero diagonal")
        arr.setflags(write=False)
        self._b = arr

    @classmethod
    def zero(cls, n: int) -> "QuiverMatrix":
        return cls(np.zeros((n, n), dtype=np.int64))

    @property
    def n(self) -> int:
        return self._b.shape[0]

    @property
    def b(self) -> np.ndarray:
        return self._b

    def entry(self, i: int, j: int) -> int:
        return int(self._b[i - 1, j - 1])

    def column(self, k: int) -> list[int]:
        return [int(v) for v in self._b[:, k - 1]]

    def tolist(self) -> list[list[int]]:
        return self._b.tolist()

    def __eq__(self, other):
        if not isinstance(other, QuiverMatrix):
            return NotImplemented
        return self._b.shape == other._b.shape and bool(np.array_equal(self._b, other._b))

    def __hash__(self):
        return hash(self._b.tobytes())

    def __add__(self, other):
        return QuiverMatrix(self._b + other._b)

    def __sub__(self, other):
        return QuiverMatrix(self._b - other._b)

    def __neg__(self):
        return QuiverMatrix(-self._b)

    def __mul__(self, c: int):
        return QuiverMatrix(self._b * int(c))

    __rmul__ = __mul__

    def __repr__(self):
        return f"QuiverMatrix({self.tolist()})"

    def to_json(self) -> dict:
        return {"n": self.n, "b": self.tolist()}

    @classmethod
    def from_json(cls, data: dict) -> "QuiverMatrix":
        try:
            n = int(data["n"])
            b = data["b"]
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidQuiver(f"malformed quiver record: {exc}") from exc
        if len(b) != n or any(len(row) != n for row in b):
            raise InvalidQuiver("matrix shape does not match n")
        return cls(b)


def load_quiver(path) -> QuiverMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise InvalidQuiver(f"cannot read quiver file {path}: {exc}") from exc
    return QuiverMatrix.from_json(data)


def save_quiver(q: QuiverMatrix, path) -> None:
    Path(path).write_text(json.dumps(q.to_json()) + "\n")


def _node(q: QuiverMatrix, k: int) -> int:
    if not 1 <= k <= q.n:
        raise IndexError(f"node {k} out of range 1..{q.n}")
    return k - 1


def mutate(q: QuiverMatrix, k: int) -> QuiverMatrix:
    """Matrix mutation at node ``k``."""
    return QuiverMatrix(_accel.mutate(q.b, _node(q, k)))


def mutate_sequence(q: QuiverMatrix, nodes: Sequence[int]) -> QuiverMatrix:
    for k in nodes:
        q = mutate(q, k)
    return q


def rotate(q: QuiverMatrix, times: int = 1) -> QuiverMatrix:
    """Conjugation by the cyclic permutation: entry (i, j) moves to (i+1, j+1)."""
    return QuiverMatrix(np.roll(q.b, (times, times), axis=(0, 1)))


def detect_period(q: QuiverMatrix, max_m: int) -> int | None:
    """Smallest m <= max_m with mu_m ... mu_1 q = rho^m q rho^-m, else None."""
    if max_m < 1:
        raise ValueError("max_m must be at least 1")
    m = _accel.periodic_chain(q.b, max_m)
    return m if m > 0 else None


def tau(n: int) -> np.ndarray:
    """Skew-rotation: ones on the subdiagonal and -1 in the top-right corner."""
    t = np.zeros((n, n), dtype=np.int64)
    for r in range(n - 1):
        t[r + 1, r] = 1
    t[0, n - 1] = -1
    return t


def is_sink_type(q: QuiverMatrix) -> bool:
    """Node 1 is a sink and the matrix commutes with the skew-rotation."""
    b = q.b
    if np.any(b[:, 0] < 0):
        return False
    t = tau(q.n)
    return bool(np.array_equal(t @ b, b @ t))


def primitive(n: int, k: int) -> QuiverMatrix:
    """The period-1 primitive P_n^(k)."""
    r = n // 2
    if not 1 <= k <= r:
        raise ValueError(f"k must lie in 1..{r} for n={n}")
    t = tau(n)
    tk = np.linalg.matrix_power(t, k)
    if n == 2 * k:
        return QuiverMatrix(tk)
    return QuiverMatrix(tk - np.linalg.matrix_power(t.T, k))


def embed(q: QuiverMatrix, n: int, offset: int) -> QuiverMatrix:
    """Place ``q`` in rows and columns offset+1 .. offset+q.n of an n x n matrix."""
    out = np.zeros((n, n), dtype=np.int64)
    out[offset : offset + q.n, offset : offset + q.n] = q.b
    return QuiverMatrix(out)


@dataclass(frozen=True)
class PalindromicTuple:
    n: int
    m: tuple[int, ...]

    def __init__(self, m: Sequence[int], n: int | None = None):
        m = tuple(int(v) for v in m)
        n = len(m) + 1 if n is None else int(n)
        if len(m) != n - 1:
            raise ParameterConstraint(f"tuple must have n-1 = {n - 1} entries")
        if n < 2:
            raise ParameterConstraint("order must be at least 2")
        if m != m[::-1]:
            raise ParameterConstraint(f"tuple {m} is not palindromic")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "m", m)

    def eps(self, i: int, j: int) -> int:
        return epsilon(self.m, i, j)


def epsilon(m: Sequence[int], i: int, j: int) -> int:
    """eps_ij = (m_i |m_j| - m_j |m_i|) / 2 with 1-based i, j."""
    a, b = m[i - 1], m[j - 1]
    return (a * abs(b) - b * abs(a)) // 2


def build_period1(t: PalindromicTuple | Sequence[int]) -> QuiverMatrix:
    """Period-1 quiver with first column (0, m_1, ..., m_{N-1})."""
    if not isinstance(t, PalindromicTuple):
        t = PalindromicTuple(t)
    n, m = t.n, t.m
    b = np.zeros((n, n), dtype=np.int64)
    b[1:, 0] = m
    for j in range(2, n + 1):
        for i in range(j + 1, n + 1):
            b[i - 1, j - 1] = b[i - 2, j - 2] + epsilon(m, j - 1, i - 1)
    b = b - b.T
    return QuiverMatrix(b)


@dataclass(frozen=True)
class PrimitiveDecomposition:
    """Nested primitive sums: each level is (offset, size, coefficients)."""

    n: int
    levels: tuple[tuple[int, int, tuple[int, ...]], ...] = field(default_factory=tuple)

    def reassemble(self) -> QuiverMatrix:
        out = QuiverMatrix.zero(self.n)
        for offset, size, coeffs in self.levels:
            for k, c in enumerate(coeffs, start=1):
                if c:
                    out = out + embed(primitive(size, k), self.n, offset) * c
        return out

    def terms(self) -> list[tuple[int, int, int]]:
        """Nonzero (coefficient, size, k) triples, outermost level first."""
        return [(c, size, k) for _, size, coeffs in self.levels for k, c in enumerate(coeffs, start=1) if c]

    def __str__(self) -> str:
        parts = []
        for c, size, k in self.terms():
            mag = "" if abs(c) == 1 else str(abs(c))
            sign = "-" if c < 0 else "+"
            parts.append((sign, f"{mag}P{size}({k})"))
        if not parts:
            return "0"
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        return s + "".join(sign + body for sign, body in parts[1:])


def decompose_period1(q: QuiverMatrix) -> PrimitiveDecomposition:
    """Peel primitive levels off a period-1 quiver."""
    if detect_period(q, 1) != 1:
        raise NotPeriodic("quiver is not period 1")
    n = q.n
    resid = q.b.copy()
    levels = []
    offset = 0
    size = n
    while size >= 2:
        r = size // 2
        col = resid[offset:, offset]
        coeffs = tuple(int(col[k]) for k in range(1, r + 1))
        block = QuiverMatrix.zero(n)
        for k, c in enumerate(coeffs, start=1):
            if c:
                block = block + embed(primitive(size, k), n, offset) * c
        resid = resid - block.b
        levels.append((offset, size, coeffs))
        # the peeled rows and columns must be clean before descending
        if np.any(resid[offset, :]) or np.any(resid[offset + size - 1, :]):
            raise NotPeriodic("residue outside the central block")
        offset += 1
        size -= 2
    if np.any(resid):
        raise NotPeriodic("nonzero residue after peeling all levels")
    return PrimitiveDecomposition(n, tuple(levels))


# ---------------------------------------------------------------------------
# period 2


def _sigma(m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(m)
    return (m[-1],) + m[1:-1] + (m[0],)


def check_period2_params(n: int, m: Sequence[int]) -> tuple[int, ...]:
    m = tuple(int(v) for v in m)
    if n < 3 or len(m) != n - 1:
        raise ParameterConstraint(f"need n >= 3 and n-1 = {n - 1} parameters")
    inner = m[1:-1]
    if inner != inner[::-1]:
        raise ParameterConstraint("m_r = m_{N-r} must hold for 2 <= r <= N-2")
    if m[0] < 0 or m[-1] < 0:
        raise ParameterConstraint("m_1 and m_{N-1} must be nonnegative")
    if m[0] == m[-1]:
        raise ParameterConstraint("m_1 must differ from m_{N-1}")
    if n % 2 == 1 and m[1] != -1:
        raise ParameterConstraint("m_2 = -1 is required for odd N")
    if not any(m[r - 1] < 0 for r in range(2, n - 1, 2)):
        raise ParameterConstraint("some m_r with r even must be negative")
    return m


def period2_tuple(n: int, r: int, s: int | None = None, t: int | None = None) -> tuple[int, ...]:
    """Parameter tuples of the 4-node (r, s, t) and 5-node (r, t) regular examples."""
    if n == 4:
        return (r, -s, t)
    if n == 5:
        return (r, -1, -1, t)
    raise ValueError("named parameters exist only for n = 4, 5")


def build_period2(n: int, params: Sequence[int]) -> tuple[QuiverMatrix, QuiverMatrix]:
    """Regular period-2 pair (B(1), B(2)) with B(2) = mu_1 B(1).

    B(1) = B(m) is built jointly with B(sigma m), where sigma swaps m_1 and
    m_{N-1}, so that mu_1 B(m) = rho B(sigma m) rho^-1.
    """
    m = check_period2_params(n, params)
    sm = _sigma(m)
    a = np.zeros((n, n), dtype=np.int64)
    a2 = np.zeros((n, n), dtype=np.int64)
    a[1:, 0] = m
    a2[1:, 0] = sm
    for j in range(2, n + 1):
        for i in range(j + 1, n + 1):
            a[i - 1, j - 1] = a2[i - 2, j - 2] + epsilon(m, j - 1, i - 1)
            a2[i - 1, j - 1] = a[i - 2, j - 2] + epsilon(sm, j - 1, i - 1)
    if tuple(int(v) for v in a[n - 1, : n - 1]) != sm:
        raise ParameterConstraint(f"boundary condition fails for parameters {m}")
    b1 = QuiverMatrix(a - a.T)
    if detect_period(b1, 2) != 2:
        raise ParameterConstraint(f"parameters {m} do not give a period-2 quiver")
    return b1, mutate(b1, 1)


def sigma_partner(n: int, params: Sequence[int]) -> QuiverMatrix:
    """B(sigma m), satisfying mu_1 B(m) = rho B(sigma m) rho^-1."""
    m = check_period2_params(n, params)
    b1, _ = build_period2(n, _sigma(m))
    return b1


def exceptional_period2(m1: int) -> tuple[QuiverMatrix, QuiverMatrix]:
    """A 5-node period-2 quiver outside the regular family."""
    a = m1
    b1 = QuiverMatrix(
        [
            [0, -a, -1, -a - 1, 1],
            [a, 0, 1, -a - 1, -a - 1],
            [1, -1, 0, 1, -1],
            [a + 1, a + 1, -1, 0, -a],
            [-1, a + 1, 1, a, 0],
        ]
    )
    return b1, mutate(b1, 1)


def first_column_tuple(q: QuiverMatrix) -> tuple[int, ...]:
    return tuple(int(v) for v in q.b[1:, 0])
