from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from montesinos_tori.diagram import DiagramPoint, Edge, farey_parents, interpolate_on_edge
from montesinos_tori.edgepaths import Edgepath, UnsupportedError, lcm, path_length, truncate_at_u
from montesinos_tori.invariants import (
    NO,
    UNDETERMINED,
    YES,
    InvalidMError,
    chi_tangle,
    ebar,
    euler_number_path,
    euler_number_point,
    orientability,
    positivity_region,
    surface_report,
    torus_test,
)
from montesinos_tori.knots import KnotParams, component_count
from montesinos_tori.slopes import boundary_slope
from montesinos_tori.solver import solve_systems

from oracles import euler_sign_bruteforce

F = Fraction


def K(*ts):
    return KnotParams.of(*(F(t) for t in ts))


def system_with(k, *paths):
    for s in solve_systems(k):
        if tuple(str(p) for p in s.paths) == paths:
            return s
    raise LookupError(paths)


CASE_11 = ("const(-1/2 @ 5/2)", "1/3 > 1/2@5/2", "1/7 > 0@5/2")


# -- Euler characteristics and numbers ----------------------------------------------


def test_chi_tangle_examples():
    assert chi_tangle(Edgepath.through([F(1, 3), F(0)]), 1, 1) == (1, 0)
    assert chi_tangle(Edgepath.constant(F(1, 3), 3), 1, 3) == (2, 0)
    with pytest.raises(InvalidMError):
        chi_tangle(Edgepath.constant(F(-1, 2), F(5, 2)), 2, F(5, 2))
    assert chi_tangle(Edgepath.constant(F(-1, 2), F(5, 2)), 4, F(5, 2)) == (9, 1)
    with pytest.raises(InvalidMError):
        chi_tangle(truncate_at_u((F(1, 7), F(0)), F(5, 2)), 2, F(5, 2))


def test_euler_number_point_examples():
    assert euler_number_point(DiagramPoint(F(2, 3), F(7), "horizontal", Edge.horizontal(F(2, 3)))) == F(1, 3)
    assert euler_number_point(DiagramPoint(F(1, 4), F(4), "vertex")) == 0
    assert euler_number_point(DiagramPoint(F(1, 4), F(4), "horizontal", Edge.horizontal(F(1, 4)))) == 0
    for q in range(1, 10):
        assert euler_number_point(DiagramPoint(F(1, q), F(q), "vertex")) == F(4 - q, 3)


@pytest.mark.parametrize("q", range(2, 12))
def test_euler_number_continuous_at_vertices(q):
    """Along an edge, e(v) at the vertex end agrees with the vertex value."""
    edge = Edge.between(F(0), F(1, q))
    assert euler_number_point(interpolate_on_edge(edge, q)) == F(4 - q, 3)
    near = interpolate_on_edge(edge, q - F(1, 1000))
    assert euler_number_point(near) == (4 - near.u) / 3


def test_euler_number_path_examples():
    assert euler_number_path(Edgepath.constant(F(-1, 2), F(5, 2))) == F(3, 4)
    assert euler_number_path(Edgepath.through([F(1, 5), F(1, 4)])) == -1
    assert euler_number_path(truncate_at_u((F(1, 3), F(1, 2)), F(5, 2))) == 0


# -- positivity -----------------------------------------------------------------------


def test_positivity_examples():
    assert positivity_region(Edgepath.constant(F(1, 2), 5).final_point()) == "positive"
    assert positivity_region(truncate_at_u((F(1, 4), F(0)), 3).final_point()) == "zero"
    assert positivity_region(truncate_at_u((F(1, 3), F(1, 2)), F(11, 4)).final_point()) == "positive"
    assert positivity_region(truncate_at_u((F(1, 3), F(1, 2)), F(5, 2)).final_point()) == "zero"
    assert positivity_region(truncate_at_u((F(1, 3), F(1, 2)), F(9, 4)).final_point()) == "negative"
    assert positivity_region(truncate_at_u((F(2, 5), F(1, 2)), 3).final_point()) == "negative"
    with pytest.raises(UnsupportedError):
        positivity_region(DiagramPoint(F(1, 2), F(1), "edge", Edge.between(F(0), F(1))))


@given(st.integers(2, 12), st.integers(1, 11), st.integers(0, 1),
       st.fractions(min_value=0, max_value=1, max_denominator=12))
def test_positivity_matches_direct_sign(s, p, which, frac):
    r = F(p % s or 1, s)
    end = farey_parents(r)[which] if r.denominator > 1 else F(0)
    edge = Edge.between(end, r)
    u = edge.q + frac * (edge.s - edge.q)
    if not edge.q < u < edge.s:
        return
    v = interpolate_on_edge(edge, u)
    assert positivity_region(v) == euler_sign_bruteforce("edge", u, edge.q, edge.s)


# -- torus criterion and orientability --------------------------------------------------


def test_torus_test_examples():
    assert torus_test(0, 1)
    assert torus_test(F(1, 2), 2)
    assert not torus_test(F(1, 3), 1)
    assert not torus_test(0, 2)


def test_pretzel_seifert_surface_is_orientable():
    s = system_with(K("1/3", "1/5", "1/7"), "1/3 > 0", "1/5 > 0", "1/7 > 0")
    assert orientability(s) == YES
    report = surface_report(s, boundary_slope(s).delta)
    assert report.slope == 0 and report.b_param == 0
    assert (report.sheets, report.boundary_count, report.chi_hat, report.torus) == (1, 1, 0, True)
    assert report.genus == 1


def test_case_thirteen_is_one_sheeted():
    """Odd slope numerator: the pinched surface is two-sided, so m = n = 4."""
    s = system_with(K("-1/3", "1/3", "1/7"), "-1/3 > -1/2@5/2", "1/3 > 0@5/2", "1/7 > 0@5/2")
    res = boundary_slope(s)
    assert res.delta == 1
    report = surface_report(s, res.delta)
    assert report.orientable == YES
    assert (report.m_values, report.n, report.sheets, report.boundary_count) == ((2, 4, 4), 4, 4, 4)


def test_case_eleven_report():
    s = system_with(K("-1/2", "1/3", "1/7"), *CASE_11)
    res = boundary_slope(s)
    assert res.delta == F(37, 2)
    r = surface_report(s, res.delta)
    assert r.m_values == (4, 2, 4) and r.n == 4 and r.sheets == 4
    assert r.chi_tangles == (9, 6, 5) and r.extra_E_disks == (1, 0, 0)
    assert (r.chi_F, r.b_param, r.boundary_count, r.chi_hat) == (-2, 6, 2, 0)
    assert r.ebar == F(1, 2) and r.torus and r.orientable == YES
    assert r.sheets % r.slope.denominator == 0


def test_case_three_report():
    s = system_with(K("-1/2", "1/3", "1/7"), "const(-1/2 @ 6)", "const(1/3 @ 6)", "1/7 > 1/6")
    r = surface_report(s, boundary_slope(s).delta)
    assert r.slope == 16 and r.ebar == 0 and r.torus and r.chi_hat == 0


def test_orientability_rules():
    s = system_with(K("-1/2", "1/3", "1/7"), *CASE_11)
    assert orientability(s) == UNDETERMINED
    assert orientability(s, F(37, 2)) == YES  # odd numerator
    assert orientability(s, F(2, 3)) == NO  # 3 does not divide n = 4
    assert orientability(s, F(2)) == UNDETERMINED  # n/b = 4 even
    report = surface_report(s, F(2))
    assert report.sheets == 4 and report.alternate.sheets == 8


def test_nonorientable_surface_doubles():
    k = K("-1/2", "1/3", "1/7")
    for s in solve_systems(k):
        delta = boundary_slope(s).delta
        if orientability(s, delta) == NO:
            r = surface_report(s, delta)
            assert r.sheets == 2 * r.n and r.alternate is None
            return
    pytest.fail("no non-orientable candidate found")


# -- properties over solved systems ---------------------------------------------------------

slopes = st.builds(Fraction, st.integers(-12, 12), st.integers(2, 7)).filter(lambda f: f.denominator > 1)
knots = st.tuples(slopes, slopes, slopes).map(KnotParams.of).filter(lambda k: component_count(k) == 1)


@settings(max_examples=20)
@given(knots)
def test_report_invariants(k):
    for s in solve_systems(k, max_length=5):
        delta = boundary_slope(s).delta
        r = surface_report(s, delta)  # raises on any cross-derivation mismatch
        b = delta.denominator
        assert r.n == lcm(*r.m_values) and r.sheets in (r.n, 2 * r.n)
        assert r.chi_F == sum(r.chi_tangles) - 4 * r.sheets - r.b_param
        assert r.boundary_count * b == r.sheets
        assert r.chi_hat == r.sheets * (r.ebar - F(b - 1, b))
        if all(p.final_point().locus != "horizontal" for p in s.paths):
            assert ebar(s) == (4 - s.u_bar) - sum(path_length(p) for p in s.paths)
