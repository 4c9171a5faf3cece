"""Euler characteristics, Euler numbers, sheet counts and orientability of
candidate surfaces."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .diagram import DiagramPoint, parity_class
from .edgepaths import Edgepath, UnsupportedError, lcm, m_value, path_length
from .knots import forbidden_classes
from .solver import CandidateSystem, InvariantViolation

YES, NO, UNDETERMINED = "yes", "no", "undetermined"


class InvalidMError(ValueError):
    pass


@lru_cache(maxsize=65536)
def chi_tangle(path: Edgepath, m: int, u_bar) -> tuple[int, int]:
    """(χ(F(γ)), number of extra E-disks k) for m sheets."""
    u_bar = Fraction(u_bar)
    if path.kind == "constant":
        ratio = m * u_bar / path.start.denominator
        if ratio.denominator != 1:
            raise InvalidMError(f"m={m} does not clear u/q = {u_bar / path.start.denominator}")
        k = int(ratio) - m
        return 2 * m + k, k
    ml = m * path_length(path)
    if ml.denominator != 1:
        raise InvalidMError(f"m={m} does not clear |γ| = {path_length(path)}")
    return 2 * m - int(ml), 0


def euler_number_point(v: DiagramPoint) -> Fraction:
    if v.locus == "horizontal":
        q = v.y.denominator
        return Fraction(1, 3) + v.u * (Fraction(1, q) - Fraction(1, 3))
    return (4 - v.u) / 3


@lru_cache(maxsize=65536)
def euler_number_path(path: Edgepath) -> Fraction:
    return euler_number_point(path.final_point()) - path_length(path)


def ebar(system: CandidateSystem) -> Fraction:
    return sum(euler_number_path(p) for p in system.paths)


def positivity_region(v: DiagramPoint) -> str:
    """Sign of e(γ) for the path γ with |γ| < 1 ending at v.

    Closed-form trichotomy: positive on horizontal edges with q <= 3, on
    edges <p/1, r/s> with s <= 3, and on <p/2, r/3> right of u = 5/2;
    zero on <p/1, r/4> and at u = 5/2 on <p/2, r/3>; negative elsewhere.
    """
    if v.locus in ("vertex", "horizontal"):
        q = v.y.denominator
        if q <= 3:
            return "positive"
        if q == 4 and v.u == 4:
            return "zero"
        return "negative"
    edge = v.edge
    if edge.is_vertical:
        raise UnsupportedError("no partial paths along vertical edges")
    q, s = edge.q, edge.s
    if q == 1 and s <= 3:
        return "positive"
    if q == 1 and s == 4:
        return "zero"
    if (q, s) == (2, 3):
        half = Fraction(5, 2)
        return "positive" if v.u > half else "zero" if v.u == half else "negative"
    return "negative"


def torus_test(e_bar, b: int) -> bool:
    return Fraction(e_bar) == Fraction(b - 1, b)


def m_values(system: CandidateSystem) -> tuple:
    return tuple(m_value(p, system.u_bar) for p in system.paths)


def _all_vertex_at_one(system: CandidateSystem) -> bool:
    return system.u_bar == 1 and all(p.kind == "vertex" for p in system.paths)


def orientability(system: CandidateSystem, slope=None) -> str:
    """Is the pinched surface F' (one sheet per group of m/n) orientable?

    Decided by, in order:
    * u = 1 with vertex-ended paths: F' is a plumbing of bands, one per
      edge step; it is orientable exactly when every band twists
      compatibly with the knot orientation, i.e. no path passes through
      a vertex whose class pairs the two inward tangle endpoints.
    * slope a/b with a odd: capping F' gives a closed surface in a
      manifold with H1 = Z/a, which cannot be one-sided.
    * with m = n, F = F' would need an integral boundary count, and an
      even one when the slope is non-zero (the boundary curves of an
      orientable surface cancel in homology).  Failing that, F' is not
      orientable.
    Anything else is undetermined.
    """
    if _all_vertex_at_one(system):
        forbidden = forbidden_classes(system.knot)
        for p, f in zip(system.paths, forbidden):
            if any(parity_class(v) == f for v in p.vertices[1:]):
                return NO
        return YES
    if slope is None:
        return UNDETERMINED
    slope = Fraction(slope)
    if slope.numerator % 2:
        return YES
    n = lcm(*m_values(system))
    b = slope.denominator
    if n % b:
        return NO
    if slope != 0 and (n // b) % 2:
        return NO
    return UNDETERMINED


@dataclass(frozen=True)
class SurfaceReport:
    m_values: tuple
    n: int
    sheets: int
    chi_tangles: tuple
    chi_F: int
    b_param: Fraction
    ebar: Fraction
    slope: Fraction
    boundary_count: int
    chi_hat: int
    torus: bool
    orientable: str
    extra_E_disks: tuple
    alternate: Optional["SurfaceReport"] = field(default=None, compare=False)

    @property
    def genus(self) -> Optional[Fraction]:
        return Fraction(2 - self.chi_hat, 2)


def _assemble(system, slope, m, n, mv, e_bar, orient) -> SurfaceReport:
    u = system.u_bar
    chis, ks = zip(*(chi_tangle(p, m, u) for p in system.paths))
    b_param = m * (u - 1)
    if b_param.denominator != 1:
        raise InvariantViolation(f"b = m(u-1) = {b_param} is not an integer")
    chi_F = sum(chis) - 4 * m - int(b_param)
    b = slope.denominator
    if m % b:
        raise InvariantViolation(f"slope denominator {b} does not divide m={m}")
    boundary = m // b
    chi_hat = chi_F + boundary
    if chi_hat != m * (e_bar - Fraction(b - 1, b)):
        raise InvariantViolation(
            f"χ(F^) = {chi_hat} but m(ē - (b-1)/b) = {m * (e_bar - Fraction(b - 1, b))}"
        )
    return SurfaceReport(
        mv, n, m, tuple(chis), chi_F, b_param, e_bar, slope, boundary, chi_hat,
        torus_test(e_bar, b), orient, tuple(ks),
    )


def surface_report(system: CandidateSystem, slope) -> SurfaceReport:
    """All invariants for the surface of ``system`` with boundary slope ``slope``.

    When orientability is undetermined the primary report uses m = n and
    ``alternate`` holds the m = 2n variant; boundary counts are then
    upper bounds.
    """
    slope = Fraction(slope)
    mv = m_values(system)
    n = lcm(*mv)
    e_bar = ebar(system)
    orient = orientability(system, slope)
    if orient == NO:
        return _assemble(system, slope, 2 * n, n, mv, e_bar, orient)
    report = _assemble(system, slope, n, n, mv, e_bar, orient)
    if orient == UNDETERMINED:
        alt = _assemble(system, slope, 2 * n, n, mv, e_bar, orient)
        report = replace(report, alternate=alt)
    return report

