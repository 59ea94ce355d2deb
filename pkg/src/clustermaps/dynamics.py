"""Cluster exchange relations, period-1 and period-2 recurrences, and exact
iteration over rationals and over Laurent polynomials.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import (
    LaurentViolationAt,
    NotDivisible,
    NotPeriodic,
    ParameterConstraint,
    ResourceLimit,
    ZeroDivisorAt,
)
from .laurent import LaurentPoly, Monomial
from .quiver import (
    PalindromicTuple,
    QuiverMatrix,
    _sigma,
    build_period1,
    detect_period,
    epsilon,
    mutate,
)


@dataclass(frozen=True)
class RecurrenceSpec:
    """x_{n+N} x_n = prod_{m_j>=0} x_{n+j}^{m_j} + prod_{m_j<=0} x_{n+j}^{-m_j}."""

    n: int
    m: tuple[int, ...]

    def __init__(self, m: Sequence[int] | PalindromicTuple, n: int | None = None):
        t = m if isinstance(m, PalindromicTuple) else PalindromicTuple(m, n)
        object.__setattr__(self, "n", t.n)
        object.__setattr__(self, "m", t.m)

    @property
    def positive(self) -> tuple[int, ...]:
        return tuple(max(v, 0) for v in self.m)

    @property
    def negative(self) -> tuple[int, ...]:
        return tuple(max(-v, 0) for v in self.m)

    def quiver(self) -> QuiverMatrix:
        return build_period1(self.m)

    def to_json(self) -> dict:
        return {"n": self.n, "m": list(self.m)}

    @classmethod
    def from_json(cls, data: dict) -> "RecurrenceSpec":
        return cls(data["m"], data.get("n"))

    def __str__(self) -> str:
        n = self.n

        def mono(exps):
            parts = []
            for j, e in enumerate(exps, start=1):
                if e:
                    parts.append(f"x[n+{j}]" + (f"^{e}" if e != 1 else ""))
            return "*".join(parts) or "1"

        return f"x[n+{n}]*x[n] = {mono(self.positive)} + {mono(self.negative)}"


@dataclass
class Orbit:
    values: list
    error_index: int | None = None


@dataclass
class SymbolicOrbit:
    values: list[LaurentPoly]


@dataclass
class LaurentReport:
    ok: bool
    denominators: list[Monomial] = field(default_factory=list)
    failed_index: int | None = None


def exchange_numerator(q: QuiverMatrix, cluster: Sequence, k: int):
    """Sum of the two monomials in the exchange relation at node ``k`` (1-based)."""
    col = q.b[:, k - 1]
    one = cluster[0] ** 0
    pos, neg = one, one
    for i, c in enumerate(col.tolist()):
        if c > 0:
            pos = pos * cluster[i] ** c
        elif c < 0:
            neg = neg * cluster[i] ** (-c)
    return pos + neg


def exchange_step(q: QuiverMatrix, cluster: Sequence[LaurentPoly], k: int) -> list[LaurentPoly]:
    """Replace cluster entry k by (prod_{b_ik>0} x_i^b_ik + prod_{b_ik<0} x_i^-b_ik) / x_k."""
    if not 1 <= k <= q.n:
        raise IndexError(f"node {k} out of range 1..{q.n}")
    if len(cluster) != q.n:
        raise ValueError("cluster size differs from quiver size")
    xk = cluster[k - 1]
    if xk == 0:
        raise ZeroDivisorAt(k)
    num = exchange_numerator(q, cluster, k)
    out = list(cluster)
    if isinstance(xk, LaurentPoly):
        out[k - 1] = num.div_exact(xk)
    else:
        out[k - 1] = Fraction(num) / xk
    return out


def recurrence_from_quiver(q: QuiverMatrix) -> RecurrenceSpec:
    if detect_period(q, 1) != 1:
        raise NotPeriodic("recurrence needs a period-1 quiver")
    return RecurrenceSpec(tuple(int(v) for v in q.b[1:, 0]))


def _step_value(spec: RecurrenceSpec, window: Sequence):
    pos = neg = window[0] ** 0
    for j, e in enumerate(spec.m, start=1):
        if e > 0:
            pos = pos * window[j] ** e
        elif e < 0:
            neg = neg * window[j] ** (-e)
    return pos + neg


def iterate(spec: RecurrenceSpec, init: Sequence, count: int) -> Orbit:
    """Exact orbit x_1 .. x_count; raises ZeroDivisorAt with the partial orbit."""
    n = spec.n
    if len(init) != n:
        raise ValueError(f"need {n} initial values")
    vals = [Fraction(v) for v in init][:count]
    for idx, v in enumerate(vals, start=1):
        if v == 0:
            raise ZeroDivisorAt(idx, Orbit(vals[:idx], idx))
    while len(vals) < count:
        t = len(vals) - n
        window = vals[t:]
        if window[0] == 0:
            raise ZeroDivisorAt(len(vals) + 1, Orbit(vals, len(vals) + 1))
        vals.append(_step_value(spec, window) / window[0])
    return Orbit(vals)


def iterate_symbolic(
    spec: RecurrenceSpec,
    count: int,
    max_terms: int | None = None,
    max_exponent: int | None = None,
) -> SymbolicOrbit:
    """Laurent polynomial iterates in the initial cluster variables."""
    n = spec.n
    xs = LaurentPoly.variables(n)
    vals = xs[: max(0, min(count, n))]
    while len(vals) < count:
        t = len(vals) - n
        window = vals[t:]
        num = _step_value(spec, window)
        try:
            nxt = num.div_exact(window[0])
        except NotDivisible as exc:
            raise LaurentViolationAt(len(vals) + 1) from exc
        if max_terms is not None and len(nxt) > max_terms:
            raise ResourceLimit(f"term {len(vals) + 1} has {len(nxt)} terms (limit {max_terms})")
        if max_exponent is not None:
            lo, hi = nxt.min_exponents(), nxt.max_exponents()
            if max(max(map(abs, lo)), max(map(abs, hi))) > max_exponent:
                raise ResourceLimit(f"term {len(vals) + 1} exceeds exponent limit {max_exponent}")
        vals.append(nxt)
    return SymbolicOrbit(vals)


def verify_laurent(spec: RecurrenceSpec, count: int, max_terms: int | None = None) -> LaurentReport:
    """Check Laurentness and report denominator exponents d_n^(j) = -min exponent of x_j."""
    try:
        orb = iterate_symbolic(spec, count, max_terms=max_terms)
    except LaurentViolationAt as exc:
        return LaurentReport(False, [], exc.index)
    dens = [Monomial(1, tuple(-e for e in p.min_exponents())) for p in orb.values]
    return LaurentReport(True, dens)


def map_step(spec: RecurrenceSpec, cluster: Sequence):
    """One application of phi: (x_1..x_N) -> (x_2..x_N, x_{N+1})."""
    num = _step_value(spec, cluster)
    if isinstance(cluster[0], LaurentPoly):
        nxt = num.div_exact(cluster[0])
    else:
        if cluster[0] == 0:
            raise ZeroDivisorAt(1)
        nxt = Fraction(num) / cluster[0]
    return list(cluster[1:]) + [nxt]


def cluster_map_step(q: QuiverMatrix, cluster: Sequence):
    """phi = rho^-1 o mu_1 acting on a cluster."""
    new = exchange_step(q, cluster, 1)
    return new[1:] + new[:1]


# ---------------------------------------------------------------------------
# period 2


@dataclass(frozen=True)
class Period2Spec:
    """Regular period-2 recurrence on node count n.

    ``params`` is the first column (m_1, ..., m_{N-1}) of B(1). Equal end
    values are accepted here (the quiver is then period 1, still a valid
    two-step chain).
    """

    n: int
    params: tuple[int, ...]

    def __post_init__(self):
        m = tuple(int(v) for v in self.params)
        object.__setattr__(self, "params", m)
        n = self.n
        if n < 3 or len(m) != n - 1:
            raise ParameterConstraint(f"need n >= 3 and n-1 = {n - 1} parameters")
        if m[1:-1] != m[1:-1][::-1]:
            raise ParameterConstraint("m_r = m_{N-r} must hold for 2 <= r <= N-2")
        if m[0] < 0 or m[-1] < 0:
            raise ParameterConstraint("m_1 and m_{N-1} must be nonnegative")
        if n % 2 == 1 and m[1] != -1:
            raise ParameterConstraint("m_2 = -1 is required for odd N")
        self.quivers()

    @property
    def boundary(self) -> bool:
        return self.n % 2 == 1

    def quivers(self) -> tuple[QuiverMatrix, QuiverMatrix]:
        n, m = self.n, self.params
        sm = _sigma(m)
        a = np.zeros((n, n), dtype=np.int64)
        a2 = np.zeros((n, n), dtype=np.int64)
        a[1:, 0] = m
        a2[1:, 0] = sm
        for j in range(2, n + 1):
            for i in range(j + 1, n + 1):
                a[i - 1, j - 1] = a2[i - 2, j - 2] + epsilon(m, j - 1, i - 1)
                a2[i - 1, j - 1] = a[i - 2, j - 2] + epsilon(sm, j - 1, i - 1)
        b1 = QuiverMatrix(a - a.T)
        if tuple(int(v) for v in a[n - 1, : n - 1]) != sm or detect_period(b1, 2) is None:
            raise ParameterConstraint(f"parameters {m} do not give a period-2 chain")
        return b1, mutate(b1, 1)

    def to_json(self) -> dict:
        return {"period2": {"n": self.n, "params": list(self.params)}}


def iterate_period2(spec: Period2Spec, init: Sequence, count: int) -> Orbit:
    """Run the mutation chain mu_1, mu_2, ... and return the pairs (x_k, y_k).

    Cluster values are labelled z_1, z_2, ... in order of creation, with
    x_k = z_{2k-1} and y_k = z_{2k}; for odd N the first exchange acts as the
    boundary relation supplying the extra initial value.
    """
    n = spec.n
    if len(init) != n:
        raise ValueError(f"need {n} initial values")
    if count <= 0:
        return Orbit([])
    z = [Fraction(v) for v in init]
    for idx, v in enumerate(z, start=1):
        if v == 0:
            raise ZeroDivisorAt(idx)
    cluster = list(z)
    q, _ = spec.quivers()
    step = 0
    while len(z) < 2 * count:
        k = step % n + 1
        if cluster[k - 1] == 0:
            raise ZeroDivisorAt(len(z) + 1, Orbit(_pairs(z)))
        cluster = exchange_step(q, cluster, k)
        q = mutate(q, k)
        z.append(cluster[k - 1])
        step += 1
    return Orbit(_pairs(z)[:count])


def _pairs(z):
    return [(z[i], z[i + 1]) for i in range(0, len(z) - 1, 2)]


def period2_symbolic(spec: Period2Spec, steps: int) -> list[LaurentPoly]:
    """Symbolic chain values z_1, z_2, ... (first N are the variables)."""
    n = spec.n
    cluster = LaurentPoly.variables(n)
    z = list(cluster)
    q, _ = spec.quivers()
    for s in range(steps):
        k = s % n + 1
        try:
            cluster = exchange_step(q, cluster, k)
        except NotDivisible as exc:
            raise LaurentViolationAt(len(z) + 1) from exc
        q = mutate(q, k)
        z.append(cluster[k - 1])
    return z
