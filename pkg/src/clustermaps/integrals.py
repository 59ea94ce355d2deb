"""Periodic coefficients, monodromy, the recursion operator for the trace
invariant, homogeneous integrals and their Poisson-theoretic checks.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Sequence

from . import intlinalg as il
from .dynamics import RecurrenceSpec, iterate_symbolic, map_step
from .errors import ReexpressionFailure, SingularSystem
from .laurent import LaurentPoly
from .poisson import BracketMatrix, PoissonTensor, bracket, invariant_bracket, random_point
from .tropical import classify_entropy

# ---------------------------------------------------------------------------
# periodic coefficients


@dataclass
class PeriodicCoeffs:
    """J_1..J_p and K_1..K_q as Laurent polynomials in x_1..x_N."""

    family: str
    n: int
    p: int
    q: int
    J: list[LaurentPoly]
    K: list[LaurentPoly] | None = None
    extra: dict = field(default_factory=dict)

    @property
    def m(self) -> int:
        return self.n // 2

    def j(self, i: int) -> LaurentPoly:
        """J_i with cyclic 1-based indexing."""
        return self.J[(i - 1) % self.p]


def family_of(spec: RecurrenceSpec) -> tuple[str, int, int]:
    """(family, p, q) of a linearisable recurrence."""
    cls = classify_entropy(spec)
    if cls.case not in ("case_ii", "case_iii"):
        raise ValueError(f"recurrence {spec.m} is not of linearisable shape (got {cls.verdict})")
    q = cls.parameters["q"]
    return cls.case, spec.n - q, q


def _cramer(x1, x2, r1, y1, y2, r2):
    """Solve a*x2 - b*x1 = r1, a*y2 - b*y1 = r2 exactly; returns (a, b)."""
    d = x1 * y2 - x2 * y1
    if d.is_zero():
        raise SingularSystem("coefficient system is singular")
    a = (x1 * r2 - y1 * r1).div_exact(d)
    b = (x2 * r2 - y2 * r1).div_exact(d)
    return a, b


def compute_JK(spec: RecurrenceSpec, family: str | None = None, periods: int = 1) -> PeriodicCoeffs:
    """Coefficients of the linear relations as Laurent polynomials.

    Case (ii): x_{n+2q} - J_n x_{n+q} + x_n = 0 and x_{n+2p} - K_n x_{n+p} + x_n = 0.
    Case (iii): x_{n+3q} - J_{n+m} x_{n+2q} + J_n x_{n+q} - x_n = 0, solved from
    the instances at n and n+p. With ``periods = 2`` the lists run over two
    periods so that periodicity can be checked.
    """
    fam, p, q = family_of(spec)
    if family is not None and family != fam:
        raise ValueError(f"recurrence has shape {fam}, not {family}")
    n = spec.n
    jcount, kcount = periods * p, periods * q
    if fam == "case_ii":
        count = max(jcount + 2 * q, kcount + 2 * p)
        x = [None] + iterate_symbolic(spec, count).values
        J = [(x[i] + x[i + 2 * q]).div_exact(x[i + q]) for i in range(1, jcount + 1)]
        K = [(x[i] + x[i + 2 * p]).div_exact(x[i + p]) for i in range(1, kcount + 1)]
        return PeriodicCoeffs(fam, n, p, q, J, K)
    count = jcount + p + 3 * q
    x = [None] + iterate_symbolic(spec, count).values
    J, J_shift = [], []
    for i in range(1, jcount + 1):
        a, b = _cramer(
            x[i + q], x[i + 2 * q], x[i + 3 * q] - x[i],
            x[i + p + q], x[i + p + 2 * q], x[i + p + 3 * q] - x[i + p],
        )
        J.append(b)
        J_shift.append(a)
    coeffs = PeriodicCoeffs(fam, n, p, q, J, None)
    m = n // 2
    # consistency of the two unknowns: the second is J_{n+m}
    coeffs.extra["shift_consistent"] = all(J_shift[i] == J[(i + m) % p] for i in range(p))
    if q == 1:
        coeffs.K = [monodromy(J[:p], size=3, m=m).trace]
    return coeffs


def verify_coefficient_periodicity(coeffs: PeriodicCoeffs, spec: RecurrenceSpec, trials: int = 3, seed: int = 1) -> bool:
    """J_{i+p} = J_i symbolically, and J_i(phi(x)) = J_{i+1}(x) at random points."""
    p = coeffs.p
    if len(coeffs.J) >= 2 * p and coeffs.J[p : 2 * p] != coeffs.J[:p]:
        return False
    if coeffs.K is not None and len(coeffs.K) >= 2 * coeffs.q:
        if coeffs.K[coeffs.q : 2 * coeffs.q] != coeffs.K[: coeffs.q]:
            return False
    rng = random.Random(seed)
    for _ in range(trials):
        x = random_point(spec.n, rng)
        y = map_step(spec, x)
        for i in range(p):
            if coeffs.J[i].eval(y) != coeffs.J[(i + 1) % p].eval(x):
                return False
    return True


def pullback_check(f: LaurentPoly, g: LaurentPoly, spec: RecurrenceSpec, trials: int = 3, seed: int = 1) -> bool:
    """f(phi(x)) == g(x) at random points."""
    rng = random.Random(seed)
    for _ in range(trials):
        x = random_point(spec.n, rng)
        if f.eval(map_step(spec, x)) != g.eval(x):
            return False
    return True


# ---------------------------------------------------------------------------
# monodromy


def _mat_mul(a, b):
    return [[sum((a[i][k] * b[k][j] for k in range(len(b))), 0) for j in range(len(b[0]))] for i in range(len(a))]


def _trace(a):
    return sum((a[i][i] for i in range(len(a))), 0)


def _det(a):
    if len(a) == 2:
        return a[0][0] * a[1][1] - a[0][1] * a[1][0]
    return (
        a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1])
        - a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0])
        + a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0])
    )


@dataclass
class MonodromyData:
    L: list
    M: list
    trace: object
    M_hat: list | None = None
    trace_hat: object | None = None

    @property
    def traces_agree(self) -> bool | None:
        if self.M_hat is None:
            return None
        return self.trace == self.trace_hat


def l_matrix(J, i: int, size: int = 2, m: int | None = None):
    """L_i for the 2x2 (case ii) or 3x3 (case iii) linear relation, 1-based cyclic J."""
    p = len(J)
    ji = J[(i - 1) % p]
    if size == 2:
        return [[0, -1], [1, ji]]
    return [[0, 0, 1], [1, 0, -ji], [0, 1, J[(i - 1 + m) % p]]]


def l_hat_matrix(K, i: int, size: int = 2, m: int | None = None):
    q = len(K)
    ki = K[(i - 1) % q]
    if size == 2:
        return [[0, 1], [-1, ki]]
    return [[0, 1, 0], [0, 0, 1], [1, -ki, K[(i - 1 + m) % q]]]


def monodromy(J: Sequence, K: Sequence | None = None, size: int = 2, q: int = 1, start: int = 1, m: int | None = None) -> MonodromyData:
    """M_n = L_n L_{n+q} ... L_{n+(p-1)q}; with K also M_hat_n and its trace."""
    p = len(J)
    if size == 3 and m is None:
        raise ValueError("3x3 monodromy needs m = N/2")
    Ls = [l_matrix(J, start + t * q, size, m) for t in range(p)]
    M = Ls[0]
    for L in Ls[1:]:
        M = _mat_mul(M, L)
    data = MonodromyData(Ls, M, _trace(M))
    if K is not None:
        qq = len(K)
        Mh = None
        for t in range(qq):
            Lh = l_hat_matrix(K, start + t * p, size, m)
            Mh = Lh if Mh is None else _mat_mul(Lh, Mh)
        data.M_hat = Mh
        data.trace_hat = _trace(Mh)
    return data


def j_variables(p: int) -> list[LaurentPoly]:
    return LaurentPoly.variables(p)


def symbolic_trace(p: int, size: int = 2, m: int | None = None) -> LaurentPoly:
    """tr M in abstract variables J_1..J_p (q = 1)."""
    return monodromy(j_variables(p), size=size, m=m).trace


def frieze_dets(values: Sequence, p: int, q: int, size: int = 2, count: int = 20) -> list:
    """det Psi_n (2x2) or det Psi~_n (3x3, case iii) along an orbit x_1, x_2, ..."""
    x = [None] + list(values)
    n_ = p + q
    out = []
    for i in range(1, count + 1):
        if size == 2:
            if i + n_ >= len(x):
                break
            out.append(x[i] * x[i + n_] - x[i + q] * x[i + p])
        else:
            if i + 2 * n_ >= len(x):
                break
            a = [
                [x[i], x[i + q], x[i + 2 * q]],
                [x[i + p], x[i + n_], x[i + n_ + q]],
                [x[i + 2 * p], x[i + n_ + p], x[i + 2 * n_]],
            ]
            out.append(_det(a))
    return out


# ---------------------------------------------------------------------------
# recursion operator and homogeneous integrals


@dataclass(frozen=True)
class KPolynomial:
    """K^(p+1) in the abstract variables J_1..J_p."""

    poly: LaurentPoly
    p: int

    def components(self) -> list[LaurentPoly]:
        return homogeneous_split(self)


def _recursion_step(k: LaurentPoly, p: int) -> LaurentPoly:
    """Apply R^(p): uses J_n = var 0, J_{n+p-1} = var p-1, J_{n+p}, J_{n+p+1}."""
    xs = LaurentPoly.variables(k.nvars)
    a, b = xs[p], xs[p + 1]
    d0 = k.partial(0)
    dl = k.partial(p - 1)
    return a * b * d0.partial(p - 1) - a * d0 - b * dl + k * (a * b - 1)


def K_recursion(p: int, parity: str | None = None) -> KPolynomial:
    """K^(p+1) from the seeds K^(2) = J_1 (odd p) or K^(3) = J_1 J_2 - 2 (even p)."""
    if p < 1:
        raise ValueError("p must be at least 1")
    expected = "odd" if p % 2 else "even"
    if parity is not None and parity != expected:
        raise ValueError(f"p = {p} takes the {expected} seed")
    xs = LaurentPoly.variables(p)
    if p % 2:
        k, cur = xs[0], 1
    else:
        k, cur = xs[0] * xs[1] - 2, 2
    while cur < p:
        k = _recursion_step(k, cur)
        cur += 2
    return KPolynomial(k, p)


def homogeneous_split(k: KPolynomial | LaurentPoly, p: int | None = None) -> list[LaurentPoly]:
    """Integrals I_j with K = sum (-1)^(m+j+1) I_j (odd p = 2m-1, deg I_j = 2j+1)
    or K = sum (-1)^(m+j) I_j (even p = 2m, deg I_j = 2j, I_0 = 2)."""
    if isinstance(k, KPolynomial):
        poly, p = k.poly, k.p
    else:
        poly = k
    comps = poly.homogeneous_components()
    if p is None or poly.is_constant():
        return [comps[d] for d in sorted(comps)] or [poly]
    zero = LaurentPoly.zero(poly.nvars)
    out = []
    if p % 2:
        m = (p + 1) // 2
        for j in range(m):
            out.append(comps.get(2 * j + 1, zero) * (-1) ** (m + j + 1))
    else:
        m = p // 2
        for j in range(m + 1):
            out.append(comps.get(2 * j, zero) * (-1) ** (m + j))
    return out


def reassemble(integrals: Sequence[LaurentPoly], p: int) -> LaurentPoly:
    if p % 2:
        m = (p + 1) // 2
        return sum((c * (-1) ** (m + j + 1) for j, c in enumerate(integrals)), 0 * integrals[0])
    m = p // 2
    return sum((c * (-1) ** (m + j) for j, c in enumerate(integrals)), 0 * integrals[0])


# ---------------------------------------------------------------------------
# brackets of the J functions


def toeplitz_skew(top: Sequence[int]) -> list[list[int]]:
    """Skew matrix with c_ik = top[k-i] for k > i."""
    p = len(top)
    return [[top[k - i] if k > i else (-top[i - k] if i > k else 0) for k in range(p)] for i in range(p)]


def p2_p0_tensors(p: int) -> tuple[PoissonTensor, PoissonTensor]:
    """P^(2)_ik = c2_ik J_i J_k and P^(0)_ik = c0_ik for the even primitives."""
    top2 = [0] + [(-1) ** (d + 1) for d in range(1, p)]
    top0 = [0] * p
    if p > 1:
        top0[1] -= 1
        top0[p - 1] += 1
    c2, c0 = toeplitz_skew(top2), toeplitz_skew(top0)
    js = j_variables(p)
    one = LaurentPoly.one(p)
    P2 = PoissonTensor([[js[i] * js[k] * c2[i][k] for k in range(p)] for i in range(p)])
    P0 = PoissonTensor([[one * c0[i][k] for k in range(p)] for i in range(p)])
    return P2, P0


def _j_monomials(p: int, max_degree: int) -> list[tuple[int, ...]]:
    out = []
    for d in range(max_degree + 1):
        for combo in itertools.combinations_with_replacement(range(p), d):
            e = [0] * p
            for c in combo:
                e[c] += 1
            out.append(tuple(e))
    return out


def _solve_on_points(target, J, basis, rng, bound):
    rows, rhs = [], []
    for _ in range(len(basis) + 4):
        x = random_point(target.nvars, rng, bound)
        jv = [j.eval(x) for j in J]
        row = []
        for e in basis:
            v = Fraction(1)
            for val, k in zip(jv, e):
                if k:
                    v *= val**k
            row.append(v)
        rows.append(row)
        rhs.append(target.eval(x))
    return il.solve(rows, rhs)


def reexpress(target: LaurentPoly, J: Sequence[LaurentPoly], max_degree: int = 3, seed: int = 1) -> LaurentPoly:
    """Write ``target`` as a polynomial in the functions J (degree <= max_degree).

    Coefficients come from an exact solve on values at random points, trying
    degree bounds 0, 1, ... in turn; the candidate is then confirmed as an
    identity of Laurent polynomials.
    """
    p = len(J)
    nv = target.nvars
    rng = random.Random(seed)
    residual = target
    for deg in range(max_degree + 1):
        basis = _j_monomials(p, deg)
        try:
            coeffs = _solve_on_points(target, J, basis, rng, 9)
        except SingularSystem:
            continue
        if any(c.denominator != 1 for c in coeffs):
            continue
        terms = {e: int(c) for e, c in zip(basis, coeffs) if c}
        check = LaurentPoly.zero(nv)
        for e, c in terms.items():
            mono = LaurentPoly.constant(nv, c)
            for val, k in zip(J, e):
                if k:
                    mono = mono * val**k
            check = check + mono
        residual = target - check
        if residual.is_zero():
            return LaurentPoly(p, terms)
    raise ReexpressionFailure(f"no polynomial of degree <= {max_degree} in J matches", residual)


def j_bracket_tensor(
    p: int,
    source: str = "closed_form",
    J: Sequence[LaurentPoly] | None = None,
    c: BracketMatrix | None = None,
    max_degree: int = 3,
) -> PoissonTensor:
    """Poisson tensor of {J_i, J_k} in the abstract J variables.

    closed_form: 2(P^(2) + P^(0)) for the even primitive with N = p + 1.
    derived_from_x: bracket the Laurent J functions with ``c`` and re-express.
    """
    if source == "closed_form":
        P2, P0 = p2_p0_tensors(p)
        return (P2 + P0).scale(2)
    if source != "derived_from_x":
        raise ValueError(f"unknown source {source!r}")
    if J is None:
        from .quiver import primitive

        spec = RecurrenceSpec([1] + [0] * (p - 2) + [1]) if p > 1 else RecurrenceSpec([2])
        J = compute_JK(spec).J
        c = invariant_bracket(primitive(p + 1, 1))
    if c is None:
        raise ValueError("derived_from_x needs a bracket matrix")
    zero = LaurentPoly.zero(len(J))
    rows = [[zero] * len(J) for _ in J]
    for i in range(len(J)):
        for k in range(i + 1, len(J)):
            e = reexpress(bracket(J[i], J[k], c), J, max_degree)
            rows[i][k] = e
            rows[k][i] = -e
    return PoissonTensor(rows)


# ---------------------------------------------------------------------------
# verification


def verify_involution(integrals: Sequence[LaurentPoly], tensor: PoissonTensor) -> list[list[LaurentPoly]]:
    """Full matrix of brackets {I_a, I_b}."""
    k = len(integrals)
    zero = LaurentPoly.zero(tensor.nvars)
    out = [[zero] * k for _ in range(k)]
    for a in range(k):
        for b in range(a + 1, k):
            v = tensor.bracket(integrals[a], integrals[b])
            out[a][b] = v
            out[b][a] = -v
    return out


def is_involutive(matrix) -> bool:
    return all(v.is_zero() for row in matrix for v in row)


def verify_ladder(pa: PoissonTensor, pb: PoissonTensor, integrals: Sequence[LaurentPoly]) -> bool:
    """pa grad I_0 = 0, pa grad I_k = pb grad I_{k-1}, pb grad I_last = 0."""
    grads = [f.gradient() for f in integrals]
    if any(not v.is_zero() for v in pa.apply(grads[0])):
        return False
    for k in range(1, len(integrals)):
        lhs = pa.apply(grads[k])
        rhs = pb.apply(grads[k - 1])
        if lhs != rhs:
            return False
    return all(v.is_zero() for v in pb.apply(grads[-1]))


def verify_casimir(tensor: PoissonTensor, k) -> bool:
    poly = k.poly if isinstance(k, KPolynomial) else k
    if tensor.k == 0:
        return True
    return all(v.is_zero() for v in tensor.apply(poly.gradient()))


@dataclass
class LinearRelation:
    holds: bool
    K: Fraction | None
    form: str
    checked: int = 0

    def to_json(self) -> dict:
        return {"holds": self.holds, "K": None if self.K is None else str(self.K), "form": self.form, "checked": self.checked}


def verify_linear_relation(spec: RecurrenceSpec, p: int, q: int, orbit: Sequence, family: str | None = None) -> LinearRelation:
    """Constant-coefficient relation with step pq.

    case (ii): x_{n+2pq} + x_n = K x_{n+pq};
    case (iii): x_{n+3pq} - K x_{n+2pq} + K x_{n+pq} - x_n = 0.
    """
    fam = family or family_of(spec)[0]
    s = p * q
    x = [Fraction(v) for v in orbit]
    if fam == "case_ii":
        form = f"x[n+{2 * s}] + x[n] = K x[n+{s}]"
        if len(x) < 2 * s + 2:
            raise ValueError(f"orbit too short: need at least {2 * s + 2} terms")
        ks = {(x[i + 2 * s] + x[i]) / x[i + s] for i in range(len(x) - 2 * s)}
        k = ks.pop() if len(ks) == 1 else None
        return LinearRelation(k is not None, k, form, len(x) - 2 * s)
    form = f"x[n+{3 * s}] - K x[n+{2 * s}] + K x[n+{s}] - x[n] = 0"
    if len(x) < 3 * s + 2:
        raise ValueError(f"orbit too short: need at least {3 * s + 2} terms")
    k = None
    for i in range(len(x) - 3 * s):
        den = x[i + 2 * s] - x[i + s]
        if den:
            k = (x[i + 3 * s] - x[i]) / den
            break
    if k is None:
        return LinearRelation(False, None, form, 0)
    ok = all(x[i + 3 * s] - k * x[i + 2 * s] + k * x[i + s] - x[i] == 0 for i in range(len(x) - 3 * s))
    return LinearRelation(ok, k, form, len(x) - 3 * s)


def independence_count(integrals: Sequence[LaurentPoly], point: Sequence) -> int:
    """Rank of the exact Jacobian of the integrals at a point."""
    rows = [[g.eval(point) for g in f.gradient()] for f in integrals]
    return il.rank(rows)


def check_coprime(p: int, q: int) -> bool:
    return gcd(p, q) == 1


def composite_integrals(p: int) -> list[LaurentPoly] | None:
    """Known involutive integrals of the case (iii), q = 1 brackets (p = 3, 5)."""
    J = j_variables(p)
    if p == 3:
        return [J[0] ** 2 + J[1] ** 2 + J[2] ** 2, J[0] * J[1] * J[2]]
    if p == 5:
        zero = LaurentPoly.zero(p)
        h1 = sum((J[i] - J[i] * J[(i + 1) % 5] for i in range(5)), zero)
        h2 = sum(
            (J[i] * J[(i + 1) % 5] * J[(i + 2) % 5] - J[i] * J[(i + 1) % 5] ** 2 * J[(i + 2) % 5] for i in range(5)),
            zero,
        )
        h3 = J[0] * J[1] * J[2] * J[3] * J[4]
        return [h1, h2, h3]
    return None
