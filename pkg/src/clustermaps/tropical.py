"""Max-plus degree recurrences, growth classification, and the zero-entropy
case analysis of period-1 recurrences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _accel
from .dynamics import RecurrenceSpec


@dataclass(frozen=True)
class TropicalSeq:
    values: tuple[int, ...]
    n: int

    def __len__(self):
        return len(self.values)


def tropical_degrees(spec: RecurrenceSpec, count: int, shift: int = 0) -> TropicalSeq:
    """d_{n+N} + d_n = max(sum [m]_+ d, sum [-m]_+ d), seeded d_{1+shift} = -1.

    With ``shift = j - 1`` the sequence is the denominator exponent of x_j.
    """
    n = spec.n
    if count < n:
        raise ValueError(f"need at least N = {n} terms")
    if not 0 <= shift < n:
        raise ValueError("shift must lie in 0..N-1")
    seed = [0] * n
    seed[shift] = -1
    pos = np.array(spec.positive, dtype=np.int64)
    neg = np.array(spec.negative, dtype=np.int64)
    vals, ok = _accel.tropical(pos, neg, np.array(seed, dtype=np.int64), count)
    if ok:
        return TropicalSeq(tuple(int(v) for v in vals), n)
    # overflow of the int64 kernel: redo with Python integers
    out = list(seed)
    p, q = spec.positive, spec.negative
    while len(out) < count:
        w = out[len(out) - n + 1 :]
        a = sum(c * v for c, v in zip(p, w))
        b = sum(c * v for c, v in zip(q, w))
        out.append(max(a, b) - out[len(out) - n])
    return TropicalSeq(tuple(out), n)


# ---------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class Growth:
    kind: str  # Periodic | Linear | Quadratic | Exponential
    period: int | None = None
    estimate: float | None = None

    def __str__(self):
        if self.kind == "Quadratic":
            return f"Quadratic({self.estimate:.4g})"
        if self.kind == "Exponential":
            return f"Exponential({self.estimate:.4g})"
        return self.kind


def _lag_diff(seq: Sequence[int], q: int) -> list[int]:
    return [b - a for a, b in zip(seq, seq[q:])]


def _eventual_period(seq: Sequence[int], min_checks: int) -> int | None:
    """Smallest p with seq[i+p] == seq[i] throughout, backed by >= min_checks equalities."""
    n = len(seq)
    for p in range(1, n - min_checks + 1):
        if all(seq[i] == seq[i + p] for i in range(n - p)):
            return p
    return None


def growth_fit(seq: TropicalSeq | Sequence[int], n: int | None = None) -> Growth:
    """Classify growth by exact finite differences over the tail.

    The tail drops the N seed terms. Degree k (0 periodic, 1 linear,
    2 quadratic) is detected when the k-th lag-Q difference is periodic for
    some lag Q <= N; lags above 1 catch sequences that interleave decoupled
    subsequences.
    """
    if isinstance(seq, TropicalSeq):
        n = seq.n if n is None else n
        vals = list(seq.values)
    else:
        vals = [int(v) for v in seq]
    if n is None:
        raise ValueError("order N is required for a plain sequence")
    if len(vals) < 4 * n:
        raise ValueError(f"need at least 4N = {4 * n} terms, got {len(vals)}")
    tail = vals[n:]
    kinds = ("Periodic", "Linear", "Quadratic")
    for k, kind in enumerate(kinds):
        for q in range(1, n + 1) if k else (1,):
            d = tail
            for _ in range(k):
                d = _lag_diff(d, q)
            p = _eventual_period(d, max(n, 4))
            if p is None:
                continue
            if k == 0:
                return Growth(kind, p)
            # mean of the k-th lag-q difference over one period
            mean = sum(d[-p:]) / p
            if k == 1:
                return Growth(kind, p, mean / q)
            return Growth(kind, p, mean / (2 * q * q))
    nz = [(i, abs(v)) for i, v in enumerate(tail) if v]
    if len(nz) >= 2:
        (i0, a), (i1, b) = nz[len(nz) // 2], nz[-1]
        rate = math.log(b / a) / (i1 - i0) if i1 > i0 else float("nan")
    else:
        rate = float("nan")
    return Growth("Exponential", None, rate)


# ---------------------------------------------------------------------------
# classification


@dataclass(frozen=True)
class EntropyClass:
    verdict: str
    case: str | None
    parameters: dict = field(default_factory=dict)
    conjecture_based: bool = True

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict,
            "case": self.case,
            "parameters": dict(self.parameters),
            "conjecture_based": self.conjecture_based,
        }


def entropy_degree(spec: RecurrenceSpec) -> int:
    return max(sum(spec.positive), sum(spec.negative))


def _monomial_shape(exps: Sequence[int], n: int):
    """Describe a monomial prod x_{n+j}^{e_j} of degree <= 2 by its indices."""
    idx = [j for j, e in enumerate(exps, start=1) for _ in range(e)]
    return idx


def classify_entropy(spec: RecurrenceSpec) -> EntropyClass:
    """Positive entropy iff max(sum m_+, sum m_-) >= 3, else match the four
    zero-entropy recurrence shapes by the degrees of the two monomials."""
    n = spec.n
    if entropy_degree(spec) >= 3:
        return EntropyClass("PositiveEntropy", "positive", {"degree": entropy_degree(spec)})
    a = _monomial_shape(spec.positive, n)
    b = _monomial_shape(spec.negative, n)
    lo, hi = sorted((a, b), key=len)
    shape = (len(lo), len(hi))
    if shape == (0, 0):
        return EntropyClass("Trivial", "trivial", {"N": n})
    if shape == (0, 1) and n % 2 == 0 and hi == [n // 2]:
        return EntropyClass("Periodic_case_i", "case_i", {"N": n, "m": n // 2})
    if shape == (0, 2) and hi[0] + hi[1] == n:
        return EntropyClass("Primitive_case_ii", "case_ii", {"N": n, "q": min(hi)})
    if shape == (1, 2) and n % 2 == 0 and lo == [n // 2] and hi[0] + hi[1] == n and min(hi) < n // 2:
        return EntropyClass("Composite_case_iii", "case_iii", {"N": n, "m": n // 2, "q": min(hi)})
    if shape == (2, 2) and lo[0] + lo[1] == n and hi[0] + hi[1] == n:
        p, q = sorted((min(lo), min(hi)))
        return EntropyClass("GaleRobinson_case_iv", "case_iv", {"N": n, "p": p, "q": q})
    return EntropyClass("UnclassifiedZeroCandidate", None, {"N": n, "m": list(spec.m)})


def family_spec(case: str, n: int, q: int | None = None, p: int | None = None) -> RecurrenceSpec:
    """Recurrence of a zero-entropy family, as an exponent tuple."""
    m = [0] * (n - 1)

    def put(j, v):
        # x_{n+j} x_{n+N-j}, a square when j = N/2
        m[j - 1] += v
        m[n - j - 1] += v

    if case == "case_i":
        if n % 2:
            raise ValueError("case (i) needs even N")
        m[n // 2 - 1] = -1
    elif case == "case_ii":
        if not 1 <= q <= n // 2:
            raise ValueError("need 1 <= q <= N/2")
        put(q, 1)
    elif case == "case_iii":
        if n % 2 or not 1 <= q <= n // 2 - 1:
            raise ValueError("case (iii) needs even N and 1 <= q <= N/2 - 1")
        put(q, 1)
        m[n // 2 - 1] = -1
    elif case == "case_iv":
        if not 1 <= p < q <= n // 2:
            raise ValueError("need 1 <= p < q <= N/2")
        put(p, 1)
        put(q, -1)
    else:
        raise ValueError(f"unknown case {case!r}")
    return RecurrenceSpec(m)


def zero_entropy_families(max_n: int) -> list[tuple[str, dict, RecurrenceSpec]]:
    out = []
    for n in range(2, max_n + 1):
        if n % 2 == 0:
            out.append(("case_i", {"N": n}, family_spec("case_i", n)))
        for q in range(1, n // 2 + 1):
            out.append(("case_ii", {"N": n, "q": q}, family_spec("case_ii", n, q)))
        if n % 2 == 0:
            for q in range(1, n // 2):
                out.append(("case_iii", {"N": n, "q": q}, family_spec("case_iii", n, q)))
        for q in range(1, n // 2 + 1):
            for p in range(1, q):
                out.append(("case_iv", {"N": n, "p": p, "q": q}, family_spec("case_iv", n, q, p)))
    return out
