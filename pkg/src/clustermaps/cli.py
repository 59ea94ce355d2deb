"""Command-line front end: mutate, analyze, orbit, verify, build, decompose."""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import random
import sys
from fractions import Fraction
from pathlib import Path

from . import fixtures
from . import integrals as ig
from . import intlinalg as il
from .dynamics import (
    Period2Spec,
    RecurrenceSpec,
    iterate,
    iterate_period2,
    iterate_symbolic,
    recurrence_from_quiver,
)
from .errors import ClusterMapsError, ResourceLimit, ZeroDivisorAt
from .laurent import format_rational, parse_rational
from .lax import lax_check
from .poisson import (
    BracketMatrix,
    invariant_bracket,
    leaf_reduce,
    random_point,
    reduced_map,
    verify_commuting_diagram,
    verify_form_invariance,
    verify_jacobi,
)
from .quiver import (
    QuiverMatrix,
    build_period1,
    build_period2,
    decompose_period1,
    detect_period,
    load_quiver,
    mutate_sequence,
)
from .tropical import classify_entropy, growth_fit, tropical_degrees

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# input resolution


def _digest(data: bytes) -> str:
    return hashlib.sha256(data).hexdigest()


def _load_source(ref: str) -> tuple[dict, str]:
    """JSON content and sha256 for a file path or a fixture name."""
    path = Path(ref)
    if path.is_file():
        raw = path.read_bytes()
        try:
            return json.loads(raw), _digest(raw)
        except json.JSONDecodeError as exc:
            raise UsageError(f"{ref}: invalid JSON ({exc})") from exc
    if ref in fixtures.names():
        data = fixtures.quiver(ref).to_json()
        raw = json.dumps(data, sort_keys=True).encode()
        return data, _digest(raw)
    raise UsageError(f"{ref}: no such file or fixture")


def load_quiver_ref(ref: str) -> tuple[QuiverMatrix, str]:
    data, h = _load_source(ref)
    if "b" not in data:
        raise UsageError(f"{ref}: not a quiver file")
    return QuiverMatrix.from_json(data), h


def load_spec_ref(ref: str):
    """RecurrenceSpec, Period2Spec, or a period-1 quiver converted to its recurrence."""
    if ref in fixtures.PERIOD1 and not Path(ref).is_file():
        sp = fixtures.spec(ref)
        return sp, _digest(json.dumps(sp.to_json(), sort_keys=True).encode())
    data, h = _load_source(ref)
    if "period2" in data:
        d = data["period2"]
        return Period2Spec(int(d["n"]), tuple(d["params"])), h
    if "m" in data:
        return RecurrenceSpec.from_json(data), h
    if "b" in data:
        return recurrence_from_quiver(QuiverMatrix.from_json(data)), h
    raise UsageError(f"{ref}: not a recurrence or quiver file")


def _parse_ints(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(",", " ").split()]
    except ValueError as exc:
        raise UsageError(f"expected integers, got {text!r}") from exc


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(obj, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _report(kind: str, inputs: dict, seed: int | None, body: dict) -> dict:
    rep = {"command": kind, "inputs": inputs}
    if seed is not None:
        rep["seed"] = seed
    rep.update(body)
    return rep


# ---------------------------------------------------------------------------
# subcommands


def cmd_mutate(args) -> int:
    q, h = load_quiver_ref(args.quiver)
    nodes = [int(k) for k in args.nodes]
    for k in nodes:
        if not 1 <= k <= q.n:
            raise UsageError(f"node {k} out of range 1..{q.n}")
    out = mutate_sequence(q, nodes)
    text = json.dumps(out.to_json()) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def analyze_quiver(q: QuiverMatrix, max_period: int = 4) -> dict:
    period = detect_period(q, max_period)
    body: dict = {"n": q.n, "period": period}
    rank = il.rank(q.tolist())
    body["rank"] = rank
    if period == 1:
        spec = recurrence_from_quiver(q)
        body["decomposition"] = str(decompose_period1(q))
        body["recurrence"] = {"m": list(spec.m), "text": str(spec)}
        ec = classify_entropy(spec)
        body["entropy"] = ec.case if ec.case else ec.verdict
        body["entropy_class"] = ec.to_json()
    else:
        body["decomposition"] = None
        body["recurrence"] = None
        body["entropy"] = None
    lr = leaf_reduce(q)
    body["leaf"] = lr.to_json()
    br = invariant_bracket(q)
    body["bracket"] = br.to_json()
    return body


def cmd_analyze(args) -> int:
    q, h = load_quiver_ref(args.quiver)
    _emit(_report("analyze", {args.quiver: h}, None, analyze_quiver(q, args.max_period)), args.output)
    return EXIT_OK


def _orbit_rows(values) -> list[list[str]]:
    return [[str(i), format_rational(v)] for i, v in enumerate(values, start=1)]


def cmd_orbit(args) -> int:
    spec, h = load_spec_ref(args.spec)
    n = spec.n
    inputs = {args.spec: h}
    if args.tropical:
        if isinstance(spec, Period2Spec):
            raise UsageError("tropical degrees need a period-1 recurrence")
        seqs = {j: tropical_degrees(spec, args.count, j - 1).values for j in range(1, n + 1)}
        fit = growth_fit(tropical_degrees(spec, max(args.count, 4 * n), 0))
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["index"] + [f"d{j}" for j in range(1, n + 1)])
            for i in range(args.count):
                w.writerow([i + 1] + [seqs[j][i] for j in range(1, n + 1)])
            _write_text(buf.getvalue(), args.output)
        else:
            body = {"degrees": {f"x{j}": list(s) for j, s in seqs.items()}, "growth": str(fit)}
            _emit(_report("orbit", inputs, None, body), args.output)
        return EXIT_OK
    if args.symbolic:
        if isinstance(spec, Period2Spec):
            raise UsageError("symbolic orbits need a period-1 recurrence")
        try:
            orb = iterate_symbolic(spec, args.count, max_terms=args.max_terms)
        except ResourceLimit as exc:
            _emit(_report("orbit", inputs, None, {"error": "ResourceLimit", "message": str(exc)}), args.output)
            return EXIT_FAIL
        except ClusterMapsError as exc:
            _emit(_report("orbit", inputs, None, {"error": type(exc).__name__, "index": getattr(exc, "index", None)}), args.output)
            return EXIT_FAIL
        dens = [[-e for e in p.min_exponents()] for p in orb.values]
        if args.format == "csv":
            buf = io.StringIO()
            w = csv.writer(buf, lineterminator="\n")
            w.writerow(["index", "laurent", "denominator"])
            for i, (p, d) in enumerate(zip(orb.values, dens), start=1):
                w.writerow([i, json.dumps(p.to_records()), " ".join(map(str, d))])
            _write_text(buf.getvalue(), args.output)
        else:
            body = {"values": [p.to_records() for p in orb.values], "denominators": dens}
            _emit(_report("orbit", inputs, None, body), args.output)
        return EXIT_OK
    if args.init:
        init = [parse_rational(t) for t in args.init.replace(",", " ").split()]
    else:
        init = [Fraction(1)] * n
    if len(init) != n:
        raise UsageError(f"need {n} initial values, got {len(init)}")
    try:
        if isinstance(spec, Period2Spec):
            orb = iterate_period2(spec, init, args.count)
            rows = [[str(i), format_rational(a), format_rational(b)] for i, (a, b) in enumerate(orb.values, start=1)]
            header = ["index", "x", "y"]
        else:
            orb = iterate(spec, init, args.count)
            rows = _orbit_rows(orb.values)
            header = ["index", "value"]
    except ZeroDivisorAt as exc:
        body = {"error": "ZeroDivisorAt", "index": exc.index}
        _emit(_report("orbit", inputs, None, body), args.output)
        return EXIT_FAIL
    if args.format == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        w.writerows(rows)
        _write_text(buf.getvalue(), args.output)
    else:
        _emit(_report("orbit", inputs, None, {"header": header, "rows": rows}), args.output)
    return EXIT_OK


def _write_text(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _lp_json(p) -> list[dict]:
    return p.to_records()


def suite_form(q: QuiverMatrix, args) -> list[dict]:
    out = []
    period = detect_period(q, 1)
    if period == 1:
        spec = recurrence_from_quiver(q)
        rep = verify_form_invariance(q, spec, args.trials, args.seed)
        out.append(rep.to_json())
    else:
        out.append({"check": "form_invariance", "verdict": None, "note": "checked for period-1 quivers only"})
    br = invariant_bracket(q)
    if isinstance(br, BracketMatrix):
        out.append({"check": "bracket_jacobi", "verdict": verify_jacobi(br), "bracket": br.to_json()})
    lr = leaf_reduce(q)
    ortho = all(sum(a * b for a, b in zip(u, v)) == 0 for u in lr.u for v in lr.v)
    out.append({"check": "leaf_orthogonality", "verdict": ortho, "leaf": lr.to_json()})
    for name in ("somos4", "somos5", "p31", "p51"):
        rm = reduced_map(name)
        if rm.quiver == q:
            out.append(verify_commuting_diagram(rm, args.trials, args.seed).to_json())
    return out


def suite_integrals(q: QuiverMatrix, args) -> list[dict]:
    if detect_period(q, 1) != 1:
        return [{"check": "integrals", "verdict": None, "note": "needs a period-1 quiver"}]
    spec = recurrence_from_quiver(q)
    try:
        fam, p, qq = ig.family_of(spec)
    except ValueError as exc:
        return [{"check": "integrals", "verdict": None, "note": str(exc)}]
    coeffs = ig.compute_JK(spec, periods=2)
    rep: dict = {"check": "integrals", "family": fam, "N": spec.n, "p": p, "q": qq}
    rep["periodicity_ok"] = ig.verify_coefficient_periodicity(coeffs, spec, 3, args.seed)
    rep["J"] = [_lp_json(j) for j in coeffs.J[:p]]
    c = invariant_bracket(q)
    verdicts = [rep["periodicity_ok"]]
    if fam == "case_ii" and qq == 1 and spec.n % 2 == 0:
        kp = ig.K_recursion(p)
        integ = ig.homogeneous_split(kp)
        tensor = ig.j_bracket_tensor(p, "derived_from_x", J=coeffs.J[:p], c=c)
        P2, P0 = ig.p2_p0_tensors(p)
        rep["closed_form_match"] = tensor == (P2 + P0).scale(2)
        rep["integrals"] = [_lp_json(i) for i in integ]
        rep["bracket_matrix"] = tensor.tolist()
        rep["involution_ok"] = ig.is_involutive(ig.verify_involution(integ, tensor))
        rep["ladder_ok"] = ig.verify_ladder(P0, P2, integ)
        rep["casimir_ok"] = ig.verify_casimir(tensor, kp)
        verdicts += [rep["closed_form_match"], rep["involution_ok"], rep["ladder_ok"], rep["casimir_ok"]]
    elif fam == "case_iii" and qq == 1 and isinstance(c, BracketMatrix):
        tensor = ig.j_bracket_tensor(p, "derived_from_x", J=coeffs.J[:p], c=c)
        k = ig.symbolic_trace(p, 3, spec.n // 2)
        rep["bracket_matrix"] = tensor.tolist()
        rep["K"] = _lp_json(k)
        rep["casimir_ok"] = ig.verify_casimir(tensor, k)
        verdicts.append(rep["casimir_ok"])
        parts = tensor.homogeneous_parts()
        rep["jacobi_by_degree"] = {str(d): verify_jacobi(t) for d, t in parts.items()}
        integ = ig.composite_integrals(p)
        if integ is not None:
            rep["integrals"] = [_lp_json(i) for i in integ]
            rep["involution_ok"] = ig.is_involutive(ig.verify_involution(integ, tensor))
            verdicts.append(rep["involution_ok"])
            if p == 3:
                rep["ladder_ok"] = ig.verify_ladder(parts[1], parts[2], integ)
                verdicts.append(rep["ladder_ok"])
        else:
            rep["involution_ok"] = None
            rep["note"] = "no involutive set is asserted for this quiver"
    else:
        rep["note"] = "bracket checks cover q = 1 only"
    rep["verdict"] = all(verdicts)
    return [rep]


def suite_linear(q: QuiverMatrix, args) -> list[dict]:
    if detect_period(q, 1) != 1:
        return [{"check": "linear_relation", "verdict": None, "note": "needs a period-1 quiver"}]
    spec = recurrence_from_quiver(q)
    try:
        fam, p, qq = ig.family_of(spec)
    except ValueError as exc:
        return [{"check": "linear_relation", "verdict": None, "note": str(exc)}]
    steps = 3 if fam == "case_iii" else 2
    count = steps * p * qq + spec.n + 10
    rng = random.Random(args.seed)
    out = []
    for label, init in (("ones", [Fraction(1)] * spec.n), ("random", random_point(spec.n, rng))):
        orbit = iterate(spec, init, count).values
        lr = ig.verify_linear_relation(spec, p, qq, orbit, fam)
        rep = {"check": "linear_relation", "init": label, "linear_relation": lr.to_json(), "verdict": lr.holds}
        if qq == 1 and lr.K is not None:
            coeffs = ig.compute_JK(spec)
            jv = [j.eval(init) for j in coeffs.J[:p]]
            size = 3 if fam == "case_iii" else 2
            tr = ig.monodromy(jv, size=size, m=spec.n // 2).trace
            rep["trace_K"] = str(tr)
            rep["verdict"] = lr.holds and tr == lr.K
        out.append(rep)
    return out


def suite_lax(q: QuiverMatrix, args) -> list[dict]:
    for name, fx in (("s4", "somos4"), ("s5", "somos5")):
        if fixtures.quiver(name) == q:
            res = lax_check(fx, args.trials, 30, args.seed)
            res["check"] = "lax"
            res["verdict"] = res["lax_ok"] and res["invariant_constant"] and res["structure_ok"]
            return [res]
    return [{"check": "lax", "verdict": None, "note": "Lax pairs ship for Somos-4 and Somos-5 only"}]


SUITES = {"form": suite_form, "integrals": suite_integrals, "linear": suite_linear, "lax": suite_lax}


def cmd_verify(args) -> int:
    q, h = load_quiver_ref(args.quiver)
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        for rep in SUITES[name](q, args):
            rep["suite"] = name
            checks.append(rep)
    failed = any(c.get("verdict") is False for c in checks)
    body = {"trials": args.trials, "checks": checks, "verdict": not failed}
    _emit(_report("verify", {args.quiver: h}, args.seed, body), args.output)
    return EXIT_FAIL if failed else EXIT_OK


def cmd_build(args) -> int:
    if args.kind == "period1":
        q = build_period1(_parse_ints(args.params))
    else:
        if args.n is None:
            raise UsageError("period2 needs --n")
        q, _ = build_period2(args.n, _parse_ints(args.params))
    _write_text(json.dumps(q.to_json()) + "\n", args.output)
    return EXIT_OK


def cmd_decompose(args) -> int:
    q, h = load_quiver_ref(args.quiver)
    dec = decompose_period1(q)
    body = {"decomposition": str(dec), "terms": [list(t) for t in dec.terms()]}
    _emit(_report("decompose", {args.quiver: h}, None, body), args.output)
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="clustermaps", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, seed=False):
        p.add_argument("-o", "--output", help="write to this file instead of stdout")
        if seed:
            p.add_argument("--seed", type=int, default=1)
            p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("mutate", help="apply mutations at the given nodes")
    p.add_argument("quiver")
    p.add_argument("nodes", nargs="+")
    common(p)
    p.set_defaults(func=cmd_mutate)

    p = sub.add_parser("analyze", help="period, decomposition, recurrence, entropy and rank")
    p.add_argument("quiver")
    p.add_argument("--max-period", type=int, default=4)
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("orbit", help="iterate a recurrence")
    p.add_argument("spec")
    p.add_argument("--init", help="comma separated initial values (default all ones)")
    p.add_argument("--count", type=int, default=12)
    p.add_argument("--symbolic", action="store_true")
    p.add_argument("--tropical", action="store_true")
    p.add_argument("--max-terms", type=int, default=None)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    common(p)
    p.set_defaults(func=cmd_orbit)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("quiver")
    p.add_argument("--suite", choices=("form", "integrals", "linear", "lax", "all"), default="all")
    common(p, seed=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("build", help="build a period-1 or period-2 quiver from its first column")
    p.add_argument("kind", choices=("period1", "period2"))
    p.add_argument("params", help="comma separated m_1..m_{N-1}")
    p.add_argument("--n", type=int)
    common(p)
    p.set_defaults(func=cmd_build)

    p = sub.add_parser("decompose", help="primitive decomposition of a period-1 quiver")
    p.add_argument("quiver")
    common(p)
    p.set_defaults(func=cmd_decompose)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ClusterMapsError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_exit() -> None:
    sys.exit(main())


if __name__ == "__main__":  # pragma: no cover
    main_exit()
