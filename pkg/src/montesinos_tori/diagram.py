"""Exact coordinates and Farey structure of the edgepath diagram.

Vertices <p/q> sit at ((q-1)/q, p/q), ideal vertices <p/q>_0 at (1, p/q)
and <1/0> at (-1, 0).  Positions are usually tracked by the pair (u, y)
where u = 1/(1-x); a vertex <p/q> has u = q.  Along a non-horizontal
edge the product u*y is affine in u, which is what makes every
candidate-system equation linear.

Nothing here is materialized globally: edges and vertices are produced
on demand from Farey arithmetic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union


class _Infinity:
    """The vertex 1/0."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __str__(self):
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()

Slope = Union[Fraction, _Infinity]

_RATIONAL_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class ParseError(ValueError):
    pass


class OutOfRangeError(ValueError):
    pass


def parse_rational(text: str) -> Slope:
    """Parse "p/q", "-p/q", "p" or "inf"."""
    s = text.strip().replace("−", "-")
    if s.lower() in ("inf", "infinity", "1/0", "-1/0"):
        return INFINITY
    m = _RATIONAL_RE.match(s)
    if not m:
        raise ParseError(f"not a rational: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise ParseError(f"zero denominator: {text!r}")
    return Fraction(num, den)


def format_rational(x: Slope) -> str:
    if x is INFINITY:
        return "inf"
    x = Fraction(x)
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _num_den(x: Slope) -> tuple[int, int]:
    if x is INFINITY:
        return 1, 0
    x = Fraction(x)
    return x.numerator, x.denominator


def is_farey_pair(p: Slope, r: Slope) -> bool:
    a, b = _num_den(p)
    c, d = _num_den(r)
    return abs(a * d - c * b) == 1


def parity_class(x: Slope) -> str:
    """Mod-2 class of a slope: "0" (even/odd), "inf" (odd/even), "1" (odd/odd)."""
    p, q = _num_den(x)
    if q % 2 == 0:
        return "inf"
    return "0" if p % 2 == 0 else "1"


def farey_parents(x: Fraction) -> tuple[Fraction, Fraction]:
    """The two Farey neighbours of x with smaller denominator, lower one first.

    Only defined for non-integers.
    """
    p, q = x.numerator, x.denominator
    if q == 1:
        raise ValueError(f"integer {x} has no Farey parents")
    b = pow(p % q, -1, q)  # p*b == 1 (mod q), 0 < b < q
    a = (p * b - 1) // q
    lower = Fraction(a, b)
    upper = Fraction(p - a, q - b)
    return lower, upper


@dataclass(frozen=True)
class DiagramVertex:
    kind: str  # "finite", "ideal" or "infinity"
    slope: Optional[Fraction] = None

    @classmethod
    def finite(cls, y) -> "DiagramVertex":
        return cls("finite", Fraction(y))

    @classmethod
    def ideal(cls, y) -> "DiagramVertex":
        return cls("ideal", Fraction(y))

    @classmethod
    def infinity(cls) -> "DiagramVertex":
        return cls("infinity", None)

    @property
    def u(self) -> Fraction:
        if self.kind != "finite":
            raise ValueError(f"u-coordinate only defined for finite vertices, not {self.kind}")
        return Fraction(self.slope.denominator)


def vertex_coords(v: DiagramVertex) -> tuple[Fraction, Fraction]:
    if v.kind == "infinity":
        return Fraction(-1), Fraction(0)
    if v.kind == "ideal":
        return Fraction(1), v.slope
    q = v.slope.denominator
    return Fraction(q - 1, q), v.slope


def x_from_u(u) -> Fraction:
    u = Fraction(u)
    return (u - 1) / u


def u_from_x(x) -> Fraction:
    return 1 / (1 - Fraction(x))


@dataclass(frozen=True)
class Edge:
    """Non-horizontal edge between Farey neighbours, or horizontal edge L(y).

    Non-horizontal edges store the smaller-denominator endpoint first
    (the leftward end); vertical edges <k, k+1> are ordered by y.  A
    horizontal edge has ``lo == hi == y``.
    """

    kind: str  # "nonhorizontal" or "horizontal"
    lo: Fraction
    hi: Fraction

    @classmethod
    def between(cls, a, b) -> "Edge":
        a, b = Fraction(a), Fraction(b)
        if not is_farey_pair(a, b):
            raise ValueError(f"{a} and {b} are not Farey neighbours")
        if (a.denominator, a) > (b.denominator, b):
            a, b = b, a
        return cls("nonhorizontal", a, b)

    @classmethod
    def horizontal(cls, y) -> "Edge":
        y = Fraction(y)
        return cls("horizontal", y, y)

    @property
    def is_vertical(self) -> bool:
        return self.kind == "nonhorizontal" and self.lo.denominator == self.hi.denominator == 1

    @property
    def q(self) -> int:
        return self.lo.denominator

    @property
    def s(self) -> int:
        return self.hi.denominator

    def __str__(self):
        if self.kind == "horizontal":
            return f"L({format_rational(self.lo)})"
        return f"<{format_rational(self.lo)}, {format_rational(self.hi)}>"


@dataclass(frozen=True)
class DiagramPoint:
    """A point of the diagram with y, u and where it sits.

    For points on a non-horizontal edge ``alpha`` is the weight on the
    larger-denominator endpoint and ``beta`` the weight on the smaller
    one, so u = alpha*s + beta*q.
    """

    y: Fraction
    u: Fraction
    locus: str  # "vertex", "edge" or "horizontal"
    edge: Optional[Edge] = None
    alpha: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    @property
    def x(self) -> Fraction:
        return x_from_u(self.u)


def interpolate_on_edge(edge: Edge, u) -> DiagramPoint:
    """Point of a non-horizontal edge with the given u-coordinate."""
    u = Fraction(u)
    if edge.kind != "nonhorizontal" or edge.is_vertical:
        raise ValueError(f"cannot interpolate by u along {edge}")
    q, s = edge.q, edge.s
    if not q <= u <= s:
        raise OutOfRangeError(f"u={u} outside [{q}, {s}] for {edge}")
    alpha = (u - q) / (s - q)
    beta = (s - u) / (s - q)
    if alpha == 0:
        return DiagramPoint(edge.lo, u, "vertex")
    if beta == 0:
        return DiagramPoint(edge.hi, u, "vertex")
    y = (alpha * edge.hi.numerator + beta * edge.lo.numerator) / u
    return DiagramPoint(y, u, "edge", edge, alpha, beta)


@dataclass(frozen=True)
class CurveSystem:
    """Curve system (a, b, c) on the four-punctured sphere."""

    a: Fraction
    b: Fraction
    c: Fraction

    @classmethod
    def of_vertex(cls, y) -> "CurveSystem":
        y = Fraction(y)
        q = y.denominator
        return cls(Fraction(1), Fraction(q - 1), Fraction(y.numerator))

    def __add__(self, other):
        return CurveSystem(self.a + other.a, self.b + other.b, self.c + other.c)

    def scale(self, k) -> "CurveSystem":
        k = Fraction(k)
        return CurveSystem(self.a * k, self.b * k, self.c * k)

    @property
    def x(self) -> Fraction:
        return self.b / (self.a + self.b)

    @property
    def y(self) -> Fraction:
        return self.c / (self.a + self.b)

    @property
    def u(self) -> Fraction:
        if self.a <= 0:
            raise ValueError("u undefined for a = 0")
        return (self.a + self.b) / self.a
