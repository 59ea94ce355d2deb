"""Log-canonical presymplectic forms, Poisson brackets, leaf reduction and
exact invariance checks.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Callable, Sequence

import numpy as np

from . import intlinalg as il
from .dynamics import RecurrenceSpec, _step_value
from .errors import NvarsMismatch, PoleAtPoint
from .laurent import LaurentPoly, _layout
from .quiver import QuiverMatrix, build_period1, primitive

# ---------------------------------------------------------------------------
# forms and log-canonical brackets


def _as_rows(q) -> list[list[int]]:
    if isinstance(q, QuiverMatrix):
        return q.tolist()
    return il.to_int_rows(q)


@dataclass(frozen=True)
class TwoForm:
    """Coefficients b_jk of sum b_jk dlog x_j ^ dlog x_k."""

    b: QuiverMatrix

    @property
    def n(self) -> int:
        return self.b.n

    @property
    def rank(self) -> int:
        return il.rank(self.b.tolist())

    @property
    def degenerate(self) -> bool:
        return self.rank < self.n


def presymplectic_form(q: QuiverMatrix) -> TwoForm:
    return TwoForm(q if isinstance(q, QuiverMatrix) else QuiverMatrix(q))


@dataclass(frozen=True)
class Degenerate:
    """Marker for a singular B: no log-canonical bracket is proportional to B^-1."""

    n: int
    rank: int

    def to_json(self) -> dict:
        return {"degenerate": True, "n": self.n, "rank": self.rank}


@dataclass(frozen=True)
class BracketMatrix:
    """{x_i, x_j} = c_ij x_i x_j, with c = scale * B^-1 when derived from B."""

    c: tuple[tuple[int, ...], ...]
    scale: int = 1

    def __post_init__(self):
        c = tuple(tuple(int(v) for v in row) for row in self.c)
        object.__setattr__(self, "c", c)
        a = np.array(c, dtype=object).reshape(len(c), len(c))
        if not (a == -a.T).all():
            raise ValueError("bracket matrix must be skew-symmetric")

    @property
    def n(self) -> int:
        return len(self.c)

    def entry(self, i: int, j: int) -> int:
        """1-based entry c_ij."""
        return self.c[i - 1][j - 1]

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self.c]

    def to_json(self) -> dict:
        return {"c": self.tolist(), "scale": self.scale}


def invariant_bracket(q) -> BracketMatrix | Degenerate:
    """Smallest positive integer multiple of B^-1, or Degenerate for singular B."""
    b = _as_rows(q)
    n = len(b)
    r = il.rank(b) if n else 0
    if r < n:
        return Degenerate(n, r)
    inv = il.inverse(b)
    lam = 1
    for row in inv:
        for v in row:
            lam = lcm(lam, v.denominator)
    return BracketMatrix(tuple(tuple(int(v * lam) for v in row) for row in inv), lam)


def _exp_matrix(p: LaurentPoly) -> tuple[np.ndarray, list[int], list[int]]:
    ex = p._exps()
    keys = list(p._arr[0])
    return ex, keys, [p._t[k] for k in keys]


def bracket(f: LaurentPoly, g: LaurentPoly, c) -> LaurentPoly:
    """{f, g} for the log-canonical bracket {x_i, x_j} = c_ij x_i x_j.

    Uses {x^a, x^b} = (a^T C b) x^(a+b) termwise.
    """
    if isinstance(c, PoissonTensor):
        return c.bracket(f, g)
    cm = c.c if isinstance(c, BracketMatrix) else il.to_int_rows(c)
    n = f.nvars
    if g.nvars != n or len(cm) != n:
        raise NvarsMismatch("bracket operands and matrix must share the variable count")
    if f.is_zero() or g.is_zero():
        return LaurentPoly.zero(n)
    ea, ka, ca = _exp_matrix(f)
    eb, kb, cb = _exp_matrix(g)
    cmat = np.array(cm, dtype=object)
    pair = (ea.astype(object) @ cmat) @ eb.astype(object).T
    zero = _layout(n)[1]
    out: dict[int, int] = {}
    for i, (k1, c1) in enumerate(zip(ka, ca)):
        row = pair[i]
        for j, (k2, c2) in enumerate(zip(kb, cb)):
            w = row[j]
            if w:
                key = k1 + k2 - zero
                v = out.get(key, 0) + c1 * c2 * int(w)
                if v:
                    out[key] = v
                else:
                    out.pop(key, None)
    return LaurentPoly._raw(n, out)


def bracket_by_partials(f: LaurentPoly, g: LaurentPoly, c) -> LaurentPoly:
    """Reference implementation: sum_ij df/dx_i c_ij x_i x_j dg/dx_j."""
    cm = c.c if isinstance(c, BracketMatrix) else il.to_int_rows(c)
    return log_canonical_tensor(cm).bracket(f, g)


# ---------------------------------------------------------------------------
# general Poisson tensors with polynomial entries


class PoissonTensor:
    """Skew matrix P of Laurent polynomials; {f, g} = grad f . P . grad g."""

    def __init__(self, entries: Sequence[Sequence[LaurentPoly]]):
        self.p = [list(row) for row in entries]
        self.k = len(self.p)
        for i in range(self.k):
            if len(self.p[i]) != self.k:
                raise ValueError("tensor must be square")
            for j in range(self.k):
                if self.p[i][j] != -self.p[j][i]:
                    raise ValueError(f"tensor is not skew at ({i + 1},{j + 1})")

    @property
    def nvars(self) -> int:
        return self.p[0][0].nvars if self.k else 0

    def __getitem__(self, ij):
        i, j = ij
        return self.p[i][j]

    def __add__(self, other: "PoissonTensor") -> "PoissonTensor":
        return PoissonTensor([[a + b for a, b in zip(r, s)] for r, s in zip(self.p, other.p)])

    def __sub__(self, other: "PoissonTensor") -> "PoissonTensor":
        return PoissonTensor([[a - b for a, b in zip(r, s)] for r, s in zip(self.p, other.p)])

    def scale(self, c: int) -> "PoissonTensor":
        return PoissonTensor([[a * c for a in r] for r in self.p])

    def __eq__(self, other):
        return isinstance(other, PoissonTensor) and self.p == other.p

    def apply(self, grad: Sequence[LaurentPoly]) -> list[LaurentPoly]:
        """P . grad."""
        zero = LaurentPoly.zero(self.nvars)
        out = []
        for row in self.p:
            acc = zero
            for pij, gj in zip(row, grad):
                if not pij.is_zero() and not gj.is_zero():
                    acc = acc + pij * gj
            out.append(acc)
        return out

    def bracket(self, f: LaurentPoly, g: LaurentPoly) -> LaurentPoly:
        pg = self.apply(g.gradient())
        acc = LaurentPoly.zero(self.nvars)
        for fi, v in zip(f.gradient(), pg):
            if not fi.is_zero() and not v.is_zero():
                acc = acc + fi * v
        return acc

    def homogeneous_parts(self) -> dict[int, "PoissonTensor"]:
        """Split entrywise by total degree."""
        degs = set()
        for row in self.p:
            for e in row:
                degs.update(e.homogeneous_components())
        zero = LaurentPoly.zero(self.nvars)
        out = {}
        for d in sorted(degs):
            out[d] = PoissonTensor([[e.homogeneous_components().get(d, zero) for e in row] for row in self.p])
        return out

    def tolist(self) -> list[list[str]]:
        return [[str(e) for e in row] for row in self.p]


def log_canonical_tensor(c) -> PoissonTensor:
    cm = c.c if isinstance(c, BracketMatrix) else il.to_int_rows(c)
    n = len(cm)
    xs = LaurentPoly.variables(n)
    return PoissonTensor([[xs[i] * xs[j] * cm[i][j] for j in range(n)] for i in range(n)])


def jacobiator(p: PoissonTensor, i: int, j: int, k: int) -> LaurentPoly:
    """sum_l (P_il d_l P_jk + P_jl d_l P_ki + P_kl d_l P_ij), 0-based indices."""
    acc = LaurentPoly.zero(p.nvars)
    for a, b, c in ((i, j, k), (j, k, i), (k, i, j)):
        target = p[b, c]
        if target.is_zero():
            continue
        for ell in range(p.k):
            pa = p[a, ell]
            if pa.is_zero():
                continue
            d = target.partial(ell)
            if not d.is_zero():
                acc = acc + pa * d
    return acc


def verify_jacobi(p) -> bool:
    """Symbolic Jacobi identity for every triple i < j < k."""
    if isinstance(p, BracketMatrix):
        p = log_canonical_tensor(p)
    for i in range(p.k):
        for j in range(i + 1, p.k):
            for k in range(j + 1, p.k):
                if not jacobiator(p, i, j, k).is_zero():
                    return False
    return True


# ---------------------------------------------------------------------------
# leaf reduction


@dataclass(frozen=True)
class LeafReduction:
    """Kernel vectors u, monomial exponents v (y_a = x^v_a), reduced form and bracket."""

    u: tuple[tuple[int, ...], ...]
    v: tuple[tuple[int, ...], ...]
    b_hat: tuple[tuple[Fraction, ...], ...]
    bracket: BracketMatrix | Degenerate

    @property
    def rank(self) -> int:
        return len(self.v)

    def monomials(self) -> list[LaurentPoly]:
        n = len(self.v[0]) if self.v else len(self.u[0])
        return [LaurentPoly.monomial(n, v) for v in self.v]

    def project(self, point: Sequence) -> list[Fraction]:
        """pi(x) = (x^v_1, ..., x^v_r)."""
        out = []
        for v in self.v:
            acc = Fraction(1)
            for x, e in zip(point, v):
                acc *= Fraction(x) ** e
            out.append(acc)
        return out

    def to_json(self) -> dict:
        return {
            "kernel": [list(u) for u in self.u],
            "monomials": [list(v) for v in self.v],
            "b_hat": [[str(x) for x in row] for row in self.b_hat],
            "bracket": self.bracket.to_json(),
        }


def leaf_reduce(q) -> LeafReduction:
    """Integer kernel of B, a primitive basis v of its orthogonal lattice, and
    the reduced form b_hat with V^T b_hat V = B."""
    b = _as_rows(q)
    n = len(b)
    u = il.integer_kernel(b)
    if not u:
        v = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    else:
        lattice = il.orthogonal_lattice(u, n)
        v = il.banded_basis(lattice, n) or [il.normalize_primitive(w) for w in lattice]
    vt = il.transpose(v)
    gram_inv = il.inverse(il.matmul(v, vt))
    # R = (V V^T)^-1 V, b_hat = R B R^T
    r = il.matmul(gram_inv, v)
    b_hat = il.matmul(il.matmul(r, b), il.transpose(r))
    if il.matmul(il.matmul(vt, b_hat), v) != [[Fraction(x) for x in row] for row in b]:
        raise ArithmeticError("reduced form does not pull back to B")
    b_hat_t = tuple(tuple(Fraction(x) for x in row) for row in b_hat)
    red = _bracket_from_form(b_hat_t)
    return LeafReduction(tuple(u), tuple(tuple(x) for x in v), b_hat_t, red)


def _bracket_from_form(b_hat) -> BracketMatrix | Degenerate:
    k = len(b_hat)
    if k == 0 or il.rank(b_hat) < k:
        return Degenerate(k, il.rank(b_hat) if k else 0)
    inv = il.inverse(b_hat)
    lam = 1
    for row in inv:
        for x in row:
            lam = lcm(lam, x.denominator)
    return BracketMatrix(tuple(tuple(int(x * lam) for x in row) for row in inv), lam)


# ---------------------------------------------------------------------------
# random points and exact invariance


def random_rational(rng: random.Random, bound: int = 97) -> Fraction:
    return Fraction(rng.randint(1, bound), rng.randint(1, bound))


def random_point(n: int, rng: random.Random | int | None = None, bound: int = 97) -> list[Fraction]:
    """Positive rationals with numerator and denominator in 1..bound."""
    if not isinstance(rng, random.Random):
        rng = random.Random(1 if rng is None else rng)
    return [random_rational(rng, bound) for _ in range(n)]


def map_jacobian(spec: RecurrenceSpec, point: Sequence) -> tuple[list[Fraction], list[list[Fraction]]]:
    """phi(x) and its exact Jacobian at a point."""
    n = spec.n
    x = [Fraction(v) for v in point]
    if x[0] == 0:
        raise PoleAtPoint("x1 = 0")
    xs = LaurentPoly.variables(n)
    num = _step_value(spec, xs)
    nv = num.eval(x)
    image = x[1:] + [nv / x[0]]
    jac = [[Fraction(int(j == i + 1)) for j in range(n)] for i in range(n - 1)]
    last = [-nv / x[0] ** 2] + [num.partial(j).eval(x) / x[0] for j in range(1, n)]
    jac.append(last)
    return image, jac


def _form_matrix(b, x) -> list[list[Fraction]]:
    n = len(b)
    return [[Fraction(b[j][k]) / (x[j] * x[k]) for k in range(n)] for j in range(n)]


@dataclass
class CheckReport:
    check: str
    trials: int
    verdict: bool
    witness: list | None = None
    extra: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {
            "check": self.check,
            "trials": self.trials,
            "verdict": self.verdict,
            "witness": [str(v) for v in self.witness] if self.witness else None,
        }
        out.update(self.extra)
        return out


def verify_form_invariance(q, spec: RecurrenceSpec, trials: int = 50, seed: int = 1) -> CheckReport:
    """Check J(x)^T W(phi(x)) J(x) = W(x) with W_jk = b_jk / (x_j x_k), exactly."""
    b = _as_rows(q)
    if len(b) != spec.n:
        raise NvarsMismatch("quiver size differs from recurrence order")
    rng = random.Random(seed)
    done = 0
    while done < trials:
        x = random_point(spec.n, rng)
        try:
            y, jac = map_jacobian(spec, x)
        except (PoleAtPoint, ZeroDivisionError):
            continue
        if any(v == 0 for v in y):
            continue
        lhs = il.matmul(il.matmul(il.transpose(jac), _form_matrix(b, y)), jac)
        done += 1
        if lhs != _form_matrix(b, x):
            return CheckReport("form_invariance", done, False, x)
    return CheckReport("form_invariance", done, True)


def casimir_status(c: BracketMatrix, spec: RecurrenceSpec, trials: int = 10, seed: int = 1) -> dict:
    """Monomial Casimirs x^u (C u = 0) of a log-canonical bracket and whether the map preserves them."""
    ker = il.integer_kernel(c.tolist())
    if not ker:
        return {"casimirs": [], "invariant": True}
    rng = random.Random(seed)
    inv = True
    from .dynamics import map_step

    for _ in range(trials):
        x = random_point(spec.n, rng)
        y = map_step(spec, x)
        for u in ker:
            a = b = Fraction(1)
            for xi, yi, e in zip(x, y, u):
                a *= xi**e
                b *= yi**e
            if a != b:
                inv = False
    return {"casimirs": [list(u) for u in ker], "invariant": inv}


# ---------------------------------------------------------------------------
# reduced maps on symplectic leaves


@dataclass(frozen=True)
class ReducedMap:
    name: str
    quiver: QuiverMatrix
    spec: RecurrenceSpec
    v: tuple[tuple[int, ...], ...]
    phi_hat: Callable[[Sequence[Fraction]], list[Fraction]]

    def project(self, point: Sequence) -> list[Fraction]:
        out = []
        for v in self.v:
            acc = Fraction(1)
            for x, e in zip(point, v):
                acc *= Fraction(x) ** e
            out.append(acc)
        return out


def _s4_hat(y):
    y1, y2 = y
    return [y2, (y2 + 1) / (y1 * y2**2)]


def _s5_hat(y):
    y1, y2 = y
    return [y2, (y2 + 1) / (y1 * y2)]


def _p31_hat(y):
    y1, y2 = y
    return [y2, y2 * (y2 + 1) / y1]


def _p51_hat(y):
    y1, y2, y3, y4 = y
    return [y2, y3, y4, y2 * y4 * (y2 * y4 + y3) / (y1 * y3**2)]


def reduced_map(name: str) -> ReducedMap:
    """Hard-coded reduced maps: somos4, somos5, p31, p51."""
    table = {
        "somos4": ((1, -2, 1), ((1, -2, 1, 0), (0, 1, -2, 1)), _s4_hat),
        "somos5": ((1, -1, -1, 1), ((1, -1, -1, 1, 0), (0, 1, -1, -1, 1)), _s5_hat),
        "p31": ((1, 1), ((1, 1, 0), (0, 1, 1)), _p31_hat),
        "p51": ((1, 0, 0, 1), tuple(tuple(int(j in (i, i + 1)) for j in range(5)) for i in range(4)), _p51_hat),
    }
    if name not in table:
        raise KeyError(f"no reduced map for {name!r}")
    m, v, f = table[name]
    spec = RecurrenceSpec(m)
    return ReducedMap(name, build_period1(m), spec, v, f)


def verify_commuting_diagram(rm: ReducedMap, trials: int = 50, seed: int = 1) -> CheckReport:
    """pi(phi(x)) = phi_hat(pi(x)) exactly at random positive points."""
    from .dynamics import map_step

    rng = random.Random(seed)
    for t in range(trials):
        x = random_point(rm.spec.n, rng)
        lhs = rm.project(map_step(rm.spec, x))
        rhs = rm.phi_hat(rm.project(x))
        if lhs != rhs:
            return CheckReport("commuting_diagram", t + 1, False, x, {"fixture": rm.name})
    return CheckReport("commuting_diagram", trials, True, None, {"fixture": rm.name})


def primitive_bracket(n: int) -> BracketMatrix | Degenerate:
    return invariant_bracket(primitive(n, 1))
