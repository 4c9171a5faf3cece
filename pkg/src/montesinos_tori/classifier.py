"""Genus-one candidate surfaces: search, incompressibility, table matching
and census."""

from __future__ import annotations

import ast
import itertools
import operator
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Optional

from .edgepaths import DEFAULT_MAX_LENGTH, UnsupportedError, r_value, segment_slope
from .invariants import SurfaceReport, euler_number_path, surface_report, torus_test
from .knots import (
    KnotParams,
    NotAKnotError,
    canonical_key,
    canonicalize,
    component_count,
    fractional_form,
    parse_knot,
)
from .slopes import boundary_slope
from .solver import INF, CandidateSystem, solve_systems

INCOMPRESSIBLE, COMPRESSIBLE, UNKNOWN = "incompressible", "compressible", "unknown"


class ExcludedKnotError(ValueError):
    pass


# -- incompressibility -------------------------------------------------------


def _sign(x: Fraction) -> int:
    return (x > 0) - (x < 0)


def incompressibility_filter(system: CandidateSystem) -> str:
    """Sufficient conditions for incompressibility, applied in order.

    (a) a constant path;
    (b) the r-value cycle is not (1, 1, r) or (1, 2, r);
    (c) the two r = 1 paths end in segments of equal slope, or all three
        final segments slope the same way;
    (d) pretzel surfaces (u = 1) with cycle (1, 2, r): the r = 1 segment
        must slope against both others and r must be 2 or 4 for a
        compression to be possible.
    Everything else is "unknown"; "compressible" is never asserted.
    """
    if any(p.is_constant for p in system.paths):
        return INCOMPRESSIBLE
    try:
        rs = [r_value(p) for p in system.paths]
        slopes = [segment_slope(p) for p in system.paths]
    except UnsupportedError:
        return UNKNOWN
    ordered = sorted(rs)
    if not (ordered[0] == 1 and ordered[1] <= 2):
        return INCOMPRESSIBLE
    ones = [i for i, r in enumerate(rs) if r == 1]
    if len(ones) >= 2 and slopes[ones[0]] == slopes[ones[1]]:
        return INCOMPRESSIBLE
    signs = {_sign(s) for s in slopes}
    if len(signs) == 1 and 0 not in signs:
        return INCOMPRESSIBLE
    if ordered[:2] == [1, 2] and system.u_bar == 1 and len(ones) == 1:
        i = ones[0]
        others = [j for j in range(3) if j != i]
        opposite = all(_sign(slopes[j]) == -_sign(slopes[i]) for j in others)
        r3 = ordered[2]
        if not (opposite and r3 in (2, 4)):
            return INCOMPRESSIBLE
    return UNKNOWN


# -- exclusions --------------------------------------------------------------


def load_exclusions(path=None) -> frozenset:
    """Canonical representatives of the excluded knots."""
    if path is None:
        text = resources.files("montesinos_tori").joinpath("data/exclusions.txt").read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    out = set()
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.add(canonical_key(parse_knot(line)))
    return frozenset(out)


DEFAULT_EXCLUSIONS = load_exclusions()


# -- classification table ----------------------------------------------------

_OPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
}


def eval_expr(text: str, env: dict) -> Fraction:
    """Exact value of an arithmetic expression in the table's variables."""

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, int):
            return Fraction(node.value)
        if isinstance(node, ast.Name):
            return Fraction(env[node.id])
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
            v = ev(node.operand)
            return -v if isinstance(node.op, ast.USub) else v
        if isinstance(node, ast.BinOp) and type(node.op) in _OPS:
            return _OPS[type(node.op)](ev(node.left), ev(node.right))
        raise ValueError(f"unsupported expression {text!r}")

    return ev(ast.parse(text, mode="eval"))


@dataclass(frozen=True)
class TableRow:
    case: int
    slopes: tuple
    rule: str
    delta_odd: str
    delta_even: str
    u_bar: Fraction

    def admits(self, env: dict) -> bool:
        if self.rule == "none":
            return True
        if self.rule.startswith("pretzel"):
            a, b, c = env["a"], env["b"], env["c"]
            if min(abs(b), abs(c)) < 3 or b % 2 == 0 or c % 2 == 0:
                return False
            if self.rule == "pretzel-odd":
                return a % 2 == 1 and abs(a) >= 3
            return a % 2 == 0 and abs(a) >= 2
        n = env["n"]
        if self.rule == "n!=0,-1":
            return n not in (0, -1)
        if self.rule == "even,n!=0":
            return n % 2 == 0 and n != 0
        if self.rule == "odd,n!=-1":
            return n % 2 == 1 and n != -1
        raise ValueError(f"unknown rule {self.rule!r}")

    def instantiate(self, env: dict) -> tuple[KnotParams, Fraction]:
        knot = KnotParams.of(eval_expr(s, env) for s in self.slopes)
        odd = env.get("n", 1) % 2 == 1
        delta = eval_expr(self.delta_odd if odd else self.delta_even, env)
        return knot, delta


@lru_cache(maxsize=1)
def load_table() -> tuple:
    text = resources.files("montesinos_tori").joinpath("data/classification_table.tsv").read_text()
    rows = []
    header = None
    for line in text.splitlines():
        if not line.strip() or line.startswith("#"):
            continue
        cols = line.split("\t")
        if header is None:
            header = cols
            continue
        rec = dict(zip(header, cols))
        rows.append(
            TableRow(
                int(rec["case"]),
                (rec["t1"], rec["t2"], rec["t3"]),
                rec["rule"],
                rec["delta_odd"],
                rec["delta_even"],
                Fraction(rec["u_bar"]),
            )
        )
    return tuple(rows)


def _pretzel_forms(K: KnotParams):
    """Triples (a, b, c) with K(1/a, 1/b, 1/c) equivalent to K, and the slope sign.

    Fractional parts of a pretzel triple are 1/|q| or 1 - 1/|q|, so the
    denominators of K fix |a|, |b|, |c| and only signs remain to try.
    """
    fracs, _ = fractional_form(K)
    if any(f.numerator != 1 and f.denominator - f.numerator != 1 for f in fracs):
        return
    can = canonicalize(K)
    qs = [f.denominator for f in fracs]
    for signs in itertools.product((1, -1), repeat=3):
        abc = tuple(s * q for s, q in zip(signs, qs))
        other = canonicalize(KnotParams.of(Fraction(1, x) for x in abc))
        if other.knot == can.knot:
            yield abc, (-1 if other.mirrored != can.mirrored else 1)


@lru_cache(maxsize=None)
def _family_index(n_bound: int = 40) -> dict:
    index: dict = {}
    for row in load_table():
        if row.rule.startswith("pretzel"):
            continue
        ns = [None] if row.rule == "none" else range(-n_bound, n_bound + 1)
        for n in ns:
            env = {} if n is None else {"n": n}
            if not row.admits(env):
                continue
            knot, delta = row.instantiate(env)
            can = canonicalize(knot)
            sign = -1 if can.mirrored else 1
            index.setdefault(can.knot, []).append((row.case, sign * delta, row.u_bar))
    return index


def table_matches(K: KnotParams) -> list[tuple]:
    """(case, delta, u_bar) rows predicting slopes of K, in K's own orientation."""
    can = canonicalize(K)
    sign = -1 if can.mirrored else 1
    out = {(c, sign * d, u) for c, d, u in _family_index().get(can.knot, [])}
    rows = {r.case: r for r in load_table()}
    for form, s in _pretzel_forms(K):
        for a, b, c in itertools.permutations(form):
            env = {"a": a, "b": b, "c": c}
            for case in (1, 2):
                row = rows[case]
                if row.admits(env):
                    _, delta = row.instantiate(env)
                    out.add((case, s * delta, row.u_bar))
    return sorted(out)


def match_table(K: KnotParams, delta: Fraction) -> Optional[int]:
    cases = [c for c, d, _ in table_matches(K) if d == delta]
    return min(cases) if cases else None


# -- torus search ------------------------------------------------------------


def torus_prune(K, pieces):
    """Drop pieces that cannot be part of a system with ē >= 0."""
    emax = [[p.e_max for p in ps] for ps in pieces]
    best = [max(es) for es in emax]
    out = []
    for i, (ps, es) in enumerate(zip(pieces, emax)):
        rest = sum(best[j] for j in range(3) if j != i)
        out.append([p for p, e in zip(ps, es) if e + rest >= 0])
    return out


@dataclass(frozen=True)
class ToroidalFinding:
    knot: KnotParams
    delta: Fraction
    u_bar: Fraction
    system: CandidateSystem
    report: SurfaceReport
    incompressibility: str
    table_case: Optional[int] = None
    u_values: tuple = field(default=())


def _family_torus_points(system: CandidateSystem, delta: Fraction):
    """Members of a solution family whose ē hits (b-1)/b."""
    lo, hi = system.family
    b = delta.denominator
    target = Fraction(b - 1, b)
    u0 = system.u_bar
    u1 = lo if lo != u0 else hi
    e0 = sum(euler_number_path(p) for p in system.paths)
    e1 = sum(euler_number_path(p) for p in system.at(u1).paths)
    if e0 == e1:
        return []
    u = u0 + (target - e0) * (u1 - u0) / (e1 - e0)
    if lo < u and (hi == INF or u < hi):
        return [system.at(u)]
    return []


def _torus_denominator(e_bar: Fraction) -> Optional[int]:
    """The b with ē = (b-1)/b, if there is one."""
    if not 0 <= e_bar < 1:
        return None
    b = 1 / (1 - e_bar)
    return b.numerator if b.denominator == 1 else None


def torus_systems(K, u_floor=1, max_length: int = DEFAULT_MAX_LENGTH):
    """(system, slope result, report) for every candidate torus of K.

    At u = 1 every endpoint has e(v) = 1, so ē = 3 - Σ|γ_i|; a torus
    there needs three single edges, which bounds the vertical search.
    """
    out = []
    systems = solve_systems(K, u_floor, max_length, prune=torus_prune, vertical_max_total=3)
    for s in systems:
        candidates = [s]
        if s.family:
            candidates += _family_torus_points(s, boundary_slope(s).delta)
        for c in candidates:
            b = _torus_denominator(sum(euler_number_path(p) for p in c.paths))
            if b is None:
                continue
            r = boundary_slope(c)
            if r.delta.denominator != b:
                continue
            out.append((c, r, surface_report(c, r.delta)))
    return out


def find_toroidal(
    K,
    exclusions=DEFAULT_EXCLUSIONS,
    u_floor=1,
    max_length: int = DEFAULT_MAX_LENGTH,
) -> list[ToroidalFinding]:
    """Genus-one candidate surfaces of K, one finding per boundary slope."""
    if not isinstance(K, KnotParams):
        K = KnotParams.of(tuple(K))
    if component_count(K) != 1:
        raise NotAKnotError(f"{K} is not a knot")
    if exclusions and canonical_key(K) in exclusions:
        raise ExcludedKnotError(f"{K} is on the non-hyperbolic exclusion list")
    by_delta: dict = {}
    for system, res, report in torus_systems(K, u_floor, max_length):
        by_delta.setdefault(res.delta, []).append((system, report))
    findings = []
    for delta in sorted(by_delta):
        entries = sorted(by_delta[delta], key=lambda e: e[0].key())
        verdicts = [incompressibility_filter(s) for s, _ in entries]
        # prefer the smallest u, and among equals a certified surface
        order = sorted(range(len(entries)),
                       key=lambda i: (entries[i][0].u_bar, verdicts[i] != INCOMPRESSIBLE))
        best = order[0]
        system, report = entries[best]
        findings.append(
            ToroidalFinding(
                K, delta, system.u_bar, system, report, verdicts[best],
                match_table(K, delta),
                tuple(sorted({s.u_bar for s, _ in entries})),
            )
        )
    return findings


# -- table verification ------------------------------------------------------


@dataclass(frozen=True)
class VerificationRow:
    case: int
    params: str
    knot: KnotParams
    expected_delta: Fraction
    expected_u: Fraction
    found_delta: Optional[Fraction]
    found_u: tuple
    status: str  # "match", "mismatch" or "excluded"


def _instances(row: TableRow, n_range: int):
    if row.rule == "none":
        yield "", {}
    elif row.rule.startswith("pretzel"):
        qs = [q for q in range(-(n_range + 1), n_range + 2) if abs(q) >= 2]
        for a in qs:
            for b, c in itertools.combinations_with_replacement(qs, 2):
                env = {"a": a, "b": b, "c": c}
                if row.admits(env):
                    yield f"q=({a},{b},{c})", env
    else:
        for n in range(-n_range, n_range + 1):
            env = {"n": n}
            if row.admits(env):
                yield f"n={n}", env


def verify_table(n_range: int = 8, extra_knots=(), exclusions=DEFAULT_EXCLUSIONS) -> list:
    """Instantiate every row for parameters up to n_range and compare."""
    if n_range < 1:
        raise ValueError("n_range must be at least 1")
    rows = []
    for row in load_table():
        for label, env in _instances(row, n_range):
            knot, delta = row.instantiate(env)
            rows.append(_verify_one(row.case, label, knot, delta, row.u_bar, exclusions))
    for K in extra_knots:
        K = K if isinstance(K, KnotParams) else parse_knot(K)
        for case, delta, u in table_matches(K):
            rows.append(_verify_one(case, "extra", K, delta, u, exclusions))
    return rows


def _verify_one(case, label, knot, delta, u_bar, exclusions) -> VerificationRow:
    if exclusions and canonical_key(knot) in exclusions:
        return VerificationRow(case, label, knot, delta, u_bar, None, (), "excluded")
    findings = {f.delta: f for f in find_toroidal(knot, exclusions=None)}
    f = findings.get(delta)
    if f is None:
        return VerificationRow(case, label, knot, delta, u_bar, None, (), "mismatch")
    status = "match" if u_bar in f.u_values else "mismatch"
    return VerificationRow(case, label, knot, delta, u_bar, f.delta, f.u_values, status)


# -- census ------------------------------------------------------------------


def census_knots(max_den: int):
    """Knots with every |t_i| in (0, 1) of denominator <= max_den, up to equivalence.

    Up to mirror image either no tangle slope or exactly one is negative,
    so it suffices to take three fractions in (0, 1) and shift one of
    them down by 1 or not at all.
    """
    fracs = sorted({Fraction(p, q) for q in range(2, max_den + 1) for p in range(1, q)})
    seen = set()
    for triple in itertools.combinations_with_replacement(fracs, 3):
        for shift in (0, -1):
            K = KnotParams(triple[2] + shift, triple[0], triple[1])
            if component_count(K) != 1:
                continue
            key = canonical_key(K)
            if key in seen:
                continue
            seen.add(key)
            yield key


@dataclass
class CensusResult:
    max_den: int
    findings: dict  # canonical knot -> list[ToroidalFinding]
    excluded: list

    def nonintegral(self) -> list[tuple]:
        return sorted(
            ((K, f.delta) for K, fs in self.findings.items() for f in fs if f.delta.denominator != 1),
            key=_pair_key,
        )

    def multi(self, at_least: int = 2) -> list[tuple]:
        out = [(K, tuple(f.delta for f in fs)) for K, fs in self.findings.items() if len(fs) >= at_least]
        return sorted(out, key=_pair_key)

    def boundary_counts(self) -> dict:
        counts: dict = {}
        for fs in self.findings.values():
            for f in fs:
                counts[f.report.boundary_count] = counts.get(f.report.boundary_count, 0) + 1
        return dict(sorted(counts.items()))


def _pair_key(item):
    K, rest = item
    return (tuple(K.ts), rest)


def _census_one(K):
    return K, find_toroidal(K, exclusions=None)


def census(max_den: int, exclusions=DEFAULT_EXCLUSIONS, workers: int = 1) -> CensusResult:
    if max_den < 2:
        raise ValueError("max_den must be at least 2")
    knots = list(census_knots(max_den))
    excluded = [K for K in knots if exclusions and K in exclusions]
    todo = [K for K in knots if not (exclusions and K in exclusions)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            results = list(pool.map(_census_one, todo, chunksize=64))
    else:
        results = [_census_one(K) for K in todo]
    findings = {K: fs for K, fs in results if fs}
    findings = dict(sorted(findings.items(), key=lambda kv: tuple(kv[0].ts)))
    return CensusResult(max_den, findings, excluded)


def cpu_workers() -> int:
    import os

    return max(1, min(8, (os.cpu_count() or 1)))


__all__ = [
    "COMPRESSIBLE",
    "INCOMPRESSIBLE",
    "UNKNOWN",
    "CensusResult",
    "ExcludedKnotError",
    "ToroidalFinding",
    "VerificationRow",
    "census",
    "census_knots",
    "find_toroidal",
    "incompressibility_filter",
    "load_exclusions",
    "load_table",
    "match_table",
    "table_matches",
    "verify_table",
]
