"""Sparse multivariate Laurent polynomials with big-integer coefficients.

Exponent vectors are packed into a single Python int (32 bits per variable,
offset binary, first variable most significant), so monomial products are key
additions and integer order on keys is lexicographic order on exponents.
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _accel
from .errors import DivisionByZero, NotDivisible, NvarsMismatch, PoleAtPoint

_W = 32
_HALF = 1 << (_W - 1)
_MASK = (1 << _W) - 1
_EXP_LIMIT = 1 << (_W - 2)

# below this many term pairs the plain dict loop wins over the int64 kernel
KERNEL_THRESHOLD = 4096


@lru_cache(maxsize=None)
def _layout(n: int) -> tuple[tuple[int, ...], int]:
    shifts = tuple(_W * (n - 1 - i) for i in range(n))
    zero = sum(_HALF << s for s in shifts)
    return shifts, zero


def _pack(exps: Sequence[int], n: int) -> int:
    shifts, _ = _layout(n)
    key = 0
    for e, s in zip(exps, shifts):
        e = int(e)
        if not -_EXP_LIMIT < e < _EXP_LIMIT:
            raise OverflowError(f"exponent {e} out of range")
        key |= (e + _HALF) << s
    return key


def _unpack(key: int, n: int) -> tuple[int, ...]:
    shifts, _ = _layout(n)
    return tuple(((key >> s) & _MASK) - _HALF for s in shifts)


@dataclass(frozen=True)
class Monomial:
    coefficient: int
    exponents: tuple[int, ...]

    def __post_init__(self):
        if self.coefficient == 0:
            raise ValueError("monomial coefficient must be nonzero")


class LaurentPoly:
    """Immutable sparse Laurent polynomial in ``nvars`` variables over Z."""

    __slots__ = ("nvars", "_t", "_hash", "_arr")

    def __init__(self, nvars: int, terms: Mapping[Sequence[int], int] | Iterable | None = None):
        self.nvars = int(nvars)
        t: dict[int, int] = {}
        if terms is not None:
            items = terms.items() if isinstance(terms, Mapping) else terms
            for exps, c in items:
                if len(exps) != self.nvars:
                    raise NvarsMismatch(f"exponent vector {tuple(exps)} has wrong length for nvars={nvars}")
                c = int(c)
                if c:
                    k = _pack(exps, self.nvars)
                    t[k] = t.get(k, 0) + c
        self._t = {k: c for k, c in t.items() if c}
        self._hash = None
        self._arr = None

    @classmethod
    def _raw(cls, nvars: int, t: dict[int, int]) -> "LaurentPoly":
        obj = cls.__new__(cls)
        obj.nvars = nvars
        obj._t = t
        obj._hash = None
        obj._arr = None
        return obj

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "LaurentPoly":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, c: int) -> "LaurentPoly":
        c = int(c)
        return cls._raw(nvars, {_layout(nvars)[1]: c} if c else {})

    @classmethod
    def one(cls, nvars: int) -> "LaurentPoly":
        return cls.constant(nvars, 1)

    @classmethod
    def var(cls, nvars: int, i: int) -> "LaurentPoly":
        """The variable with 0-based index ``i``."""
        if not 0 <= i < nvars:
            raise IndexError(f"variable index {i} out of range for nvars={nvars}")
        e = [0] * nvars
        e[i] = 1
        return cls._raw(nvars, {_pack(e, nvars): 1})

    @classmethod
    def variables(cls, nvars: int) -> list["LaurentPoly"]:
        return [cls.var(nvars, i) for i in range(nvars)]

    @classmethod
    def monomial(cls, nvars: int, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        if len(exps) != nvars:
            raise NvarsMismatch("exponent vector length differs from nvars")
        return cls._raw(nvars, {_pack(exps, nvars): int(coeff)} if coeff else {})

    # -- inspection --------------------------------------------------------

    def __len__(self) -> int:
        return len(self._t)

    def is_zero(self) -> bool:
        return not self._t

    def is_monomial(self) -> bool:
        return len(self._t) == 1

    def is_constant(self) -> bool:
        return not self._t or (len(self._t) == 1 and next(iter(self._t)) == _layout(self.nvars)[1])

    def constant_term(self) -> int:
        return self._t.get(_layout(self.nvars)[1], 0)

    def terms(self) -> list[tuple[tuple[int, ...], int]]:
        """(exponents, coefficient) pairs in ascending lexicographic order."""
        n = self.nvars
        return [(_unpack(k, n), self._t[k]) for k in sorted(self._t)]

    def coefficient(self, exps: Sequence[int]) -> int:
        return self._t.get(_pack(exps, self.nvars), 0)

    def min_exponents(self) -> tuple[int, ...]:
        if not self._t:
            raise ValueError("zero polynomial has no exponents")
        return tuple(int(v) for v in self._exps().min(axis=0))

    def max_exponents(self) -> tuple[int, ...]:
        if not self._t:
            raise ValueError("zero polynomial has no exponents")
        return tuple(int(v) for v in self._exps().max(axis=0))

    def total_degrees(self) -> tuple[int, int]:
        """(lowest, highest) total degree over the terms."""
        if not self._t:
            raise ValueError("zero polynomial has no degree")
        s = self._exps().sum(axis=1)
        return int(s.min()), int(s.max())

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self._t.values()), default=0)

    def _exps(self) -> np.ndarray:
        if self._arr is None:
            keys = list(self._t)
            n = self.nvars
            if n == 0:
                self._arr = (keys, np.zeros((len(keys), 0), dtype=np.int64))
            else:
                raw = b"".join(k.to_bytes(4 * n, "big") for k in keys)
                u = np.frombuffer(raw, dtype=">u4").reshape(len(keys), n).astype(np.int64)
                self._arr = (keys, u - _HALF)
        return self._arr[1]

    def _coeff_array(self):
        keys = self._arr[0] if self._arr is not None else list(self._t)
        if self._arr is None:
            self._exps()
            keys = self._arr[0]
        return [self._t[k] for k in keys]

    # -- arithmetic --------------------------------------------------------

    def _check(self, other: "LaurentPoly"):
        if self.nvars != other.nvars:
            raise NvarsMismatch(f"nvars {self.nvars} != {other.nvars}")

    def _coerce(self, other) -> "LaurentPoly":
        if isinstance(other, LaurentPoly):
            self._check(other)
            return other
        if isinstance(other, (int, np.integer)):
            return LaurentPoly.constant(self.nvars, int(other))
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if len(other._t) > len(self._t):
            a, b = other._t, self._t
        else:
            a, b = self._t, other._t
        t = dict(a)
        for k, c in b.items():
            v = t.get(k, 0) + c
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return LaurentPoly._raw(self.nvars, t)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly._raw(self.nvars, {k: -c for k, c in self._t.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, np.integer)):
            c = int(other)
            if not c:
                return LaurentPoly.zero(self.nvars)
            return LaurentPoly._raw(self.nvars, {k: v * c for k, v in self._t.items()})
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        self._check(other)
        return LaurentPoly._raw(self.nvars, _mul_terms(self, other))

    __rmul__ = __mul__

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            if not self.is_monomial():
                raise NotDivisible("negative power of a non-monomial")
            ((k, c),) = self._t.items()
            if abs(c) != 1:
                raise NotDivisible("negative power of a monomial with coefficient other than +-1")
            z = _layout(self.nvars)[1]
            return LaurentPoly._raw(self.nvars, {z - (k - z) * (-e): c ** (-e)})
        result = LaurentPoly.one(self.nvars)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, (int, np.integer)):
            other = LaurentPoly.constant(self.nvars, int(other))
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.nvars == other.nvars and self._t == other._t

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self._t.items())))
        return self._hash

    def mul_monomial(self, exps: Sequence[int], coeff: int = 1) -> "LaurentPoly":
        off = _pack(exps, self.nvars) - _layout(self.nvars)[1]
        return LaurentPoly._raw(self.nvars, {k + off: c * coeff for k, c in self._t.items()} if coeff else {})

    def div_exact(self, other: "LaurentPoly") -> "LaurentPoly":
        self._check(other)
        return LaurentPoly._raw(self.nvars, _div_terms(self, other))

    def partial(self, i: int) -> "LaurentPoly":
        if not 0 <= i < self.nvars:
            raise IndexError(f"variable index {i} out of range for nvars={self.nvars}")
        shifts, _ = _layout(self.nvars)
        s = shifts[i]
        step = 1 << s
        t = {}
        for k, c in self._t.items():
            e = ((k >> s) & _MASK) - _HALF
            if e:
                t[k - step] = c * e
        return LaurentPoly._raw(self.nvars, t)

    def gradient(self) -> list["LaurentPoly"]:
        return [self.partial(i) for i in range(self.nvars)]

    def eval(self, point: Sequence) -> Fraction:
        """Exact value at a point of rationals (or ints)."""
        n = self.nvars
        if len(point) != n:
            raise NvarsMismatch(f"point has {len(point)} entries, expected {n}")
        if not self._t:
            return Fraction(0)
        pts = [Fraction(p) for p in point]
        ex = self._exps()
        lo = ex.min(axis=0)
        hi = ex.max(axis=0)
        for i in range(n):
            if lo[i] < 0 and pts[i] == 0:
                raise PoleAtPoint(f"variable x{i + 1} = 0 appears with negative exponent")
        nums = [p.numerator for p in pts]
        dens = [p.denominator for p in pts]
        lo_l = [int(v) for v in lo]
        hi_l = [int(v) for v in hi]
        caches_a: list[dict[int, int]] = [{} for _ in range(n)]
        caches_d: list[dict[int, int]] = [{} for _ in range(n)]
        total = 0
        keys = self._arr[0]
        for row, key in zip(ex.tolist(), keys):
            v = self._t[key]
            for i, e in enumerate(row):
                pa = e - lo_l[i]
                if pa:
                    ca = caches_a[i]
                    w = ca.get(pa)
                    if w is None:
                        w = ca[pa] = nums[i] ** pa
                    v *= w
                pd = hi_l[i] - e
                if pd and dens[i] != 1:
                    cd = caches_d[i]
                    w = cd.get(pd)
                    if w is None:
                        w = cd[pd] = dens[i] ** pd
                    v *= w
            total += v
        result = Fraction(total)
        for i in range(n):
            if lo_l[i] > 0:
                result *= nums[i] ** lo_l[i]
            elif lo_l[i] < 0:
                result /= nums[i] ** (-lo_l[i])
            if hi_l[i] and dens[i] != 1:
                result /= Fraction(dens[i]) ** hi_l[i]
        return result

    def substitute(self, images: Sequence["LaurentPoly"]) -> "LaurentPoly":
        """Compose with ``x_i -> images[i]``; negative powers need monomial images."""
        if len(images) != self.nvars:
            raise NvarsMismatch("need one image per variable")
        if not self._t:
            return LaurentPoly.zero(images[0].nvars if images else 0)
        m = images[0].nvars
        cache: list[dict[int, LaurentPoly]] = [{} for _ in images]
        total: dict[int, int] = {}
        for exps, c in self.terms():
            acc = LaurentPoly.constant(m, c)
            for i, e in enumerate(exps):
                if e:
                    p = cache[i].get(e)
                    if p is None:
                        p = cache[i][e] = images[i] ** e
                    acc = acc * p
            for k, v in acc._t.items():
                w = total.get(k, 0) + v
                if w:
                    total[k] = w
                else:
                    total.pop(k, None)
        return LaurentPoly._raw(m, total)

    def homogeneous_components(self) -> dict[int, "LaurentPoly"]:
        """Split by total degree."""
        parts: dict[int, dict[int, int]] = {}
        if not self._t:
            return {}
        ex = self._exps()
        degs = ex.sum(axis=1).tolist()
        for key, d in zip(self._arr[0], degs):
            parts.setdefault(int(d), {})[key] = self._t[key]
        return {d: LaurentPoly._raw(self.nvars, t) for d, t in sorted(parts.items())}

    def variable_support(self) -> set[int]:
        if not self._t:
            return set()
        ex = self._exps()
        return {i for i in range(self.nvars) if np.any(ex[:, i] != 0)}

    # -- serialization -----------------------------------------------------

    def to_records(self) -> list[dict]:
        return [{"exponents": list(e), "coeff": str(c)} for e, c in self.terms()]

    @classmethod
    def from_records(cls, nvars: int, records: Iterable[Mapping]) -> "LaurentPoly":
        return cls(nvars, [(tuple(int(v) for v in r["exponents"]), int(r["coeff"])) for r in records])

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._t:
            return "0"
        names = names or [f"x{i + 1}" for i in range(self.nvars)]
        out = []
        for exps, c in reversed(self.terms()):
            factors = []
            for nm, e in zip(names, exps):
                if e == 1:
                    factors.append(nm)
                elif e:
                    factors.append(f"{nm}^{e}")
            mono = "*".join(factors)
            if not mono:
                body = str(abs(c))
            elif abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}*{mono}"
            sign = "-" if c < 0 else "+"
            out.append((sign, body))
        s = ("-" if out[0][0] == "-" else "") + out[0][1]
        for sign, body in out[1:]:
            s += f" {sign} {body}"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"LaurentPoly({self.nvars}, {self.to_str()!r})"


# ---------------------------------------------------------------------------
# term-level kernels


def _kernel_eligible(a: LaurentPoly, b: LaurentPoly) -> bool:
    if len(a._t) * len(b._t) < KERNEL_THRESHOLD or a.nvars == 0:
        return False
    bound = a.max_abs_coeff() * b.max_abs_coeff() * min(len(a._t), len(b._t))
    return bound < _accel.INT64_SAFE


def _mul_terms(a: LaurentPoly, b: LaurentPoly) -> dict[int, int]:
    ta, tb = a._t, b._t
    if not ta or not tb:
        return {}
    if _kernel_eligible(a, b):
        out = _mul_via_kernel(a, b)
        if out is not None:
            return out
    if len(ta) > len(tb):
        ta, tb = tb, ta
    z = _layout(a.nvars)[1]
    out: dict[int, int] = {}
    get = out.get
    for ka, ca in ta.items():
        off = ka - z
        for kb, cb in tb.items():
            k = kb + off
            out[k] = get(k, 0) + ca * cb
    return {k: c for k, c in out.items() if c}


def _mul_via_kernel(a: LaurentPoly, b: LaurentPoly) -> dict[int, int] | None:
    ea, eb = a._exps(), b._exps()
    lo_a, lo_b = ea.min(axis=0), eb.min(axis=0)
    widths = (ea.max(axis=0) - lo_a) + (eb.max(axis=0) - lo_b) + 1
    radix = []
    acc = 1
    for w in reversed(widths.tolist()):
        radix.append(acc)
        acc *= int(w)
    if acc >= _accel.INT64_SAFE:
        return None
    radix = np.array(radix[::-1], dtype=np.int64)
    ka = (ea - lo_a) @ radix
    kb = (eb - lo_b) @ radix
    ca = np.array(a._coeff_array(), dtype=np.int64)
    cb = np.array(b._coeff_array(), dtype=np.int64)
    keys, vals = _accel.sparse_mul(ka, ca, kb, cb, 0)
    n = a.nvars
    lo = lo_a + lo_b
    digits = np.empty((keys.shape[0], n), dtype=np.int64)
    rem = keys.copy()
    for i in range(n):
        digits[:, i] = rem // radix[i]
        rem = rem - digits[:, i] * radix[i]
    exps = digits + lo
    raw = (exps + _HALF).astype(">u4").tobytes()
    width = 4 * n
    from_bytes = int.from_bytes
    return {from_bytes(raw[r * width:(r + 1) * width], "big"): int(v) for r, v in enumerate(vals.tolist())}


def _bounds(p: LaurentPoly):
    ex = p._exps()
    return ex.min(axis=0), ex.max(axis=0)


def _div_terms(a: LaurentPoly, b: LaurentPoly) -> dict[int, int]:
    tb = b._t
    if not tb:
        raise DivisionByZero("division by the zero polynomial")
    ta = a._t
    if not ta:
        return {}
    n = a.nvars
    z = _layout(n)[1]
    if len(tb) == 1:
        ((kb, cb),) = tb.items()
        off = kb - z
        out = {}
        for k, c in ta.items():
            q, r = divmod(c, cb)
            if r:
                raise NotDivisible("coefficient not divisible by monomial coefficient")
            out[k - off] = q
        return out
    lo_a, hi_a = _bounds(a)
    lo_b, hi_b = _bounds(b)
    qlo = (lo_a - lo_b).tolist()
    qhi = (hi_a - hi_b).tolist()
    if any(l > h for l, h in zip(qlo, qhi)):
        raise NotDivisible("Newton polytope of divisor does not fit")
    shifts, _ = _layout(n)
    lead = max(tb)
    lc = tb[lead]
    rest = [(k - z, c) for k, c in tb.items() if k != lead]
    r = dict(ta)
    heap = [-k for k in r]
    heapq.heapify(heap)
    q: dict[int, int] = {}
    pop, push = heapq.heappop, heapq.heappush
    while heap:
        k = -pop(heap)
        c = r.pop(k, 0)
        if not c:
            continue
        qc, rem = divmod(c, lc)
        if rem:
            raise NotDivisible("leading coefficient does not divide")
        qk = k - lead + z
        for i, s in enumerate(shifts):
            e = ((qk >> s) & _MASK) - _HALF
            if e < qlo[i] or e > qhi[i]:
                raise NotDivisible("quotient term escapes the Newton box")
        q[qk] = qc
        for off, c2 in rest:
            kk = qk + off
            old = r.get(kk)
            if old is None:
                r[kk] = -qc * c2
                push(heap, -kk)
            else:
                v = old - qc * c2
                if v:
                    r[kk] = v
                else:
                    del r[kk]
    return q


# ---------------------------------------------------------------------------
# functional surface


def lp_mul(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    return a * b


def lp_div_exact(a: LaurentPoly, b: LaurentPoly) -> LaurentPoly:
    """Return q with q*b == a, raising NotDivisible when no such q exists."""
    return a.div_exact(b)


def lp_partial(a: LaurentPoly, i: int) -> LaurentPoly:
    return a.partial(i)


def lp_eval(a: LaurentPoly, point: Sequence) -> Fraction:
    return a.eval(point)


def format_rational(x) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def parse_rational(s: str) -> Fraction:
    return Fraction(s.strip())


def denominator_monomial(p: LaurentPoly) -> Monomial:
    """Monomial M with p = N/M, N a polynomial not divisible by any variable."""
    lo = p.min_exponents()
    return Monomial(1, tuple(-e for e in lo))
