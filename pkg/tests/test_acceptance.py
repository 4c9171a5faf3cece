"""Acceptance criteria 1-9, one test each.

Every test records a single PASS or FAIL line through the ``acceptance``
fixture; the lines are repeated in the terminal summary.
"""

import itertools
import random
from collections import Counter
from fractions import Fraction

import pytest

from montesinos_tori.classifier import DEFAULT_EXCLUSIONS, census_knots, find_toroidal, verify_table
from montesinos_tori.diagram import Edge, interpolate_on_edge
from montesinos_tori.edgepaths import Edgepath, enumerate_skeletons, lcm, path_length
from montesinos_tori.invariants import positivity_region, surface_report
from montesinos_tori.knots import KnotParams, canonical_key, component_count, component_count_oracle
from montesinos_tori.slopes import boundary_slope
from montesinos_tori.solver import solve_systems

from oracles import euler_sign_bruteforce, skeletons_bruteforce

F = Fraction


def K(*ts):
    return KnotParams.of(*(F(t) for t in ts))


def mirror_class(deltas):
    """A set of slopes up to simultaneous negation."""
    plain = tuple(sorted(deltas))
    negated = tuple(sorted(-d for d in deltas))
    return min(plain, negated)


# -- 1 --------------------------------------------------------------------------------


def test_criterion_1_golden_table(acceptance):
    rows = verify_table(8)
    mismatches = [r for r in rows if r.status == "mismatch"]
    by_key = {(r.case, r.params): r for r in rows}
    spot = [
        (by_key[(3, "n=2")], K("-1/2", "1/3", "2/13"), 0, (6,)),
        (by_key[(9, "")], K("-1/2", "2/5", "1/9"), 15, (5,)),
        (by_key[(11, "")], K("-1/2", "1/3", "1/7"), F(37, 2), (F(5, 2),)),
        (by_key[(12, "")], K("-2/3", "1/3", "1/4"), 13, (F(5, 2),)),
    ]
    spot_ok = all(r.knot == k and r.found_delta == d and r.found_u == u for r, k, d, u in spot)
    excluded = sum(r.status == "excluded" for r in rows)
    ok = not mismatches and spot_ok
    acceptance(1, ok, f"{len(rows)} table instances, {len(mismatches)} mismatches, "
                      f"{excluded} excluded as non-hyperbolic, spot rows {'ok' if spot_ok else 'wrong'}")
    assert ok, mismatches[:5]


# -- 2 and 3 --------------------------------------------------------------------------


def test_criterion_2_single_nonintegral_slope(acceptance, shared_census):
    result = shared_census(11)
    found = [(str(k), d) for k, d in result.nonintegral()]
    ok = found == [("K(-1/2,1/7,1/3)", F(37, 2))]
    shown = ", ".join(f"({k}, {d})" for k, d in found)
    acceptance(2, ok, f"non-integral toroidal pairs up to denominator 11: {shown}")
    assert ok


def test_criterion_3_multiple_slopes(acceptance, shared_census):
    result = shared_census(11)
    two = [(k, ds) for k, ds in result.multi() if len(ds) == 2]
    three = [(k, ds) for k, ds in result.multi() if len(ds) >= 3]
    expected_pairs = Counter(mirror_class(p) for p in [(0, -3), (0, 2), (0, 1), (12, 13), (4, 6)])
    got_pairs = Counter(mirror_class(ds) for _, ds in two)
    three_ok = [(canonical_key(k), mirror_class(ds)) for k, ds in three] == [
        (canonical_key(K("-1/2", "1/3", "1/7")), mirror_class((16, F(37, 2), 20)))]
    ok = got_pairs == expected_pairs and three_ok
    shown = ", ".join(f"{k} {tuple(str(d) for d in ds)}" for k, ds in two + three)
    acceptance(3, ok, f"{len(two)} two-slope knots and {len(three)} three-slope knot: {shown}")
    assert ok


# -- 4 --------------------------------------------------------------------------------


def pretzel_samples(count=20, seed=20):
    rng = random.Random(seed)
    odd = [s * q for q in (3, 5, 7, 9) for s in (1, -1)]
    even = [s * q for q in (2, 4, 6, 8) for s in (1, -1)]
    seen, out = set(), []
    while len(out) < count:
        case = rng.choice((1, 2))
        a = rng.choice(odd if case == 1 else even)
        b, c = rng.choice(odd), rng.choice(odd)
        k = K(F(1, a), F(1, b), F(1, c))
        key = canonical_key(k)
        if key in seen or key in DEFAULT_EXCLUSIONS or component_count(k) != 1:
            continue
        seen.add(key)
        out.append((case, (a, b, c), k, 0 if case == 1 else 2 * (b + c)))
    return out


def test_criterion_4_pretzel_families(acceptance):
    bad = []
    samples = pretzel_samples()
    for case, params, k, expected in samples:
        at_one = {f.delta for f in find_toroidal(k) if f.u_bar == 1}
        if expected not in at_one:
            bad.append((params, expected, sorted(at_one)))
    ok = not bad and len(samples) == 20
    acceptance(4, ok, f"{len(samples)} sampled pretzel knots, {len(bad)} with the wrong slope {bad}")
    assert ok


# -- 5 --------------------------------------------------------------------------------


def test_criterion_5_internal_consistency(acceptance):
    knots = systems = 0
    violations = []
    for k in census_knots(9):
        knots += 1
        for s in solve_systems(k):
            systems += 1
            delta = boundary_slope(s).delta
            r = surface_report(s, delta)  # raises on any cross-derivation mismatch
            b = delta.denominator
            checks = {
                "a": sum(s.ys) == 0 and all(p.final_point().u == s.u_bar for p in s.paths),
                "b": r.chi_F == sum(r.chi_tangles) - 4 * r.sheets - r.b_param
                and r.chi_hat == r.chi_F + r.boundary_count
                and r.chi_hat == r.sheets * (r.ebar - F(b - 1, b)),
                "c": r.b_param == r.sheets * (s.u_bar - 1),
                "d": any(p.final_point().locus == "horizontal" for p in s.paths)
                or r.ebar == (4 - s.u_bar) - sum(path_length(p) for p in s.paths),
                "e": r.boundary_count * b in (r.n, 2 * r.n) and r.n == lcm(*r.m_values),
            }
            violations += [(str(k), str(s.paths), c) for c, good in checks.items() if not good]
    ok = not violations
    acceptance(5, ok, f"{systems} systems on {knots} knots, {len(violations)} violations")
    assert ok, violations[:5]


# -- 6 --------------------------------------------------------------------------------


def test_criterion_6_oracles(acceptance):
    slopes = [F(p, q) for q in range(2, 11) for p in range(-q, q) if F(p, q).denominator == q]
    skeleton_bad = [t for t in slopes if set(enumerate_skeletons(t, 1, 8)) != skeletons_bruteforce(t, 8)]
    fracs = sorted({F(p, q) for q in range(2, 8) for p in range(-q + 1, q)} - {F(0)})
    triples = 0
    count_bad = []
    for ts in itertools.product(fracs, repeat=3):
        triples += 1
        k = KnotParams(*ts)
        if component_count(k) != component_count_oracle(k):
            count_bad.append(ts)
    ok = not skeleton_bad and not count_bad
    acceptance(6, ok, f"skeletons of {len(slopes)} slopes ({len(skeleton_bad)} differ), "
                      f"component counts of {triples} triples ({len(count_bad)} differ)")
    assert ok


# -- 7 --------------------------------------------------------------------------------


def period_edges(max_den):
    vs = sorted({F(p, q) for q in range(1, max_den + 1) for p in range(0, q + 1)})
    for a, b in itertools.combinations(vs, 2):
        if a.denominator != b.denominator and abs(a.numerator * b.denominator - b.numerator * a.denominator) == 1:
            yield Edge.between(a, b)


def test_criterion_7_positivity_grid(acceptance):
    grid_u = sorted({1 / (1 - F(i, d)) for d in range(1, 13) for i in range(d)})
    points = 0
    bad = []
    for edge in period_edges(24):
        for u in grid_u:
            if edge.q < u < edge.s:
                points += 1
                got = positivity_region(interpolate_on_edge(edge, u))
                if got != euler_sign_bruteforce("edge", u, edge.q, edge.s):
                    bad.append(("edge", str(edge), u))
    for q in range(1, 13):
        for p in range(q + 1):
            if F(p, q).denominator != q:
                continue
            for u in grid_u:
                if u >= q:
                    points += 1
                    got = positivity_region(Edgepath.constant(F(p, q), u).final_point())
                    if got != euler_sign_bruteforce("horizontal", u, q):
                        bad.append(("horizontal", F(p, q), u))
    ok = not bad
    acceptance(7, ok, f"{points} grid points, {len(bad)} discrepancies")
    assert ok, bad[:5]


# -- 8 --------------------------------------------------------------------------------


@pytest.mark.xfail(strict=True, reason="cases 11 and 13 need m_i = 4 under the sheet-count definition")
def test_criterion_8_sheet_counts(acceptance):
    offenders = []
    case13 = None
    for row in verify_table(2):
        if row.status != "match":
            continue
        for f in find_toroidal(row.knot):
            if f.delta != row.found_delta or f.table_case != row.case:
                continue
            if row.case == 13:
                case13 = f.report.m_values
            elif max(f.report.m_values) > 2:
                offenders.append((row.case, row.params, f.report.m_values))
    case13_ok = case13 is not None and sorted(case13)[-1] == 4 and sorted(case13)[:2] == [2, 2]
    ok = not offenders and case13_ok
    acceptance(8, ok, f"m-values above 2 outside case 13: {offenders}; case 13 m = {case13}")
    assert ok


# -- 9 --------------------------------------------------------------------------------


def random_knots(count=50, seed=9):
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        ts = []
        for _ in range(3):
            q = rng.randint(2, 7)
            p = rng.choice([p for p in range(-2 * q, 2 * q) if p % q])
            ts.append(F(p, q))
        k = KnotParams(*ts)
        if component_count(k) == 1:
            out.append(k)
    return out


def slope_profile(k, sign=1):
    return Counter((s.u_bar, sign * boundary_slope(s).delta) for s in solve_systems(k, max_length=5))


def test_criterion_9_symmetry(acceptance):
    rng = random.Random(99)
    bad = []
    knots = random_knots()
    for k in knots:
        base = slope_profile(k)
        if slope_profile(k.mirror()) != slope_profile(k, -1):
            bad.append(("mirror", str(k)))
        shift = rng.choice([-2, -1, 1, 2])
        t1, t2, t3 = k.ts
        if slope_profile(KnotParams(t1 + shift, t2 - shift, t3)) != base:
            bad.append(("shift", str(k), shift))
    ok = not bad
    acceptance(9, ok, f"{len(knots)} random knots, {len(bad)} failures")
    assert ok, bad[:5]
