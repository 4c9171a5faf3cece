"""Allowable edgepaths: representation, validation, enumeration, invariants.

A path starts at the vertex <t> (or anywhere on the horizontal edge
L(t) when it is constant) and moves right to left, i.e. towards smaller
denominators.  Vertical edges <k, k+1> are only available at u = 1.

Skeletons are the vertex sequences of minimal monotone paths.  A path
is obtained from a skeleton by stopping at some u on its last edge
(``truncate_at_u``).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction
from typing import Optional

from .diagram import (
    DiagramPoint,
    Edge,
    ParseError,
    format_rational,
    interpolate_on_edge,
    is_farey_pair,
    parse_rational,
    vertex_coords,
    DiagramVertex,
    farey_parents,
)

DEFAULT_MAX_LENGTH = 8


class InvalidTangleError(ValueError):
    pass


class UnsupportedError(ValueError):
    pass


@dataclass(frozen=True)
class Edgepath:
    """One allowable edgepath.

    ``vertices`` always begins with the start slope and lists every
    vertex reached by a full edge.  ``kind`` is ``"constant"`` (no full
    edges; ``u`` may be None until a system fixes it), ``"vertex"`` or
    ``"partial"``.  A partial path additionally runs a fraction ``beta``
    of the edge from its last vertex towards ``partial_to``.
    """

    start: Fraction
    kind: str
    vertices: tuple
    u: Optional[Fraction] = None
    partial_to: Optional[Fraction] = None
    beta: Optional[Fraction] = None

    def __hash__(self):
        # paths are shared by many systems and used as cache keys
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash((self.start, self.kind, self.vertices, self.u, self.partial_to, self.beta))
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def constant(cls, t, u=None) -> "Edgepath":
        t = Fraction(t)
        return cls(t, "constant", (t,), None if u is None else Fraction(u))

    @classmethod
    def through(cls, vertices) -> "Edgepath":
        vs = tuple(v if type(v) is Fraction else Fraction(v) for v in vertices)
        if len(vs) == 1:
            return cls.constant(vs[0], vs[0].denominator)
        return cls(vs[0], "vertex", vs, Fraction(vs[-1].denominator))

    @property
    def last_vertex(self) -> Fraction:
        return self.vertices[-1]

    @property
    def steps(self) -> list[Edge]:
        return [Edge.between(a, b) for a, b in zip(self.vertices, self.vertices[1:])]

    @property
    def full_edges(self) -> int:
        return len(self.vertices) - 1

    @property
    def is_constant(self) -> bool:
        return self.kind == "constant"

    def final_point(self) -> DiagramPoint:
        point = self.__dict__.get("_final")
        if point is None:
            point = self._final_point()
            object.__setattr__(self, "_final", point)
        return point

    def sort_key(self) -> tuple:
        return (self.vertices, self.kind == "partial", self.partial_to or 0)

    def _final_point(self) -> DiagramPoint:
        if self.kind == "constant":
            if self.u is None:
                raise ValueError("constant path has no position until u is fixed")
            if self.u == self.start.denominator:
                return DiagramPoint(self.start, self.u, "vertex")
            return DiagramPoint(self.start, self.u, "horizontal", Edge.horizontal(self.start))
        if self.kind == "vertex":
            v = self.last_vertex
            return DiagramPoint(v, Fraction(v.denominator), "vertex")
        edge = Edge.between(self.last_vertex, self.partial_to)
        return interpolate_on_edge(edge, self.u)

    @property
    def y(self) -> Fraction:
        return self.final_point().y

    def with_u(self, u) -> "Edgepath":
        if self.kind != "constant":
            raise ValueError("only constant paths have a free u")
        return Edgepath.constant(self.start, u)

    def __str__(self):
        return format_path(self)


@lru_cache(maxsize=65536)
def path_length(path: Edgepath) -> Fraction:
    if path.kind == "constant":
        return Fraction(0)
    n = Fraction(path.full_edges)
    if path.kind == "partial":
        n += path.beta
    return n


def _triangle(a: Fraction, b: Fraction, c: Fraction) -> bool:
    return is_farey_pair(a, b) and is_farey_pair(b, c) and is_farey_pair(a, c)


def _monotone_step(a: Fraction, b: Fraction) -> bool:
    if not is_farey_pair(a, b):
        return False
    if a.denominator == b.denominator == 1:
        return True
    return b.denominator < a.denominator


def validate_allowable(path: Edgepath) -> bool:
    """Minimality and monotonicity of a single path (the Σy = 0 part is system-level)."""
    vs = list(path.vertices)
    if vs[0] != path.start:
        return False
    if path.kind == "constant":
        return len(vs) == 1 and (path.u is None or path.u >= path.start.denominator)
    if path.kind == "partial":
        w = path.partial_to
        if w is None or path.beta is None or not 0 < path.beta < 1:
            return False
        if vs[-1].denominator == w.denominator:
            return False  # no partial motion along vertical edges
        vs = vs + [w]
    elif len(vs) < 2:
        return False
    for a, b in zip(vs, vs[1:]):
        if not _monotone_step(a, b):
            return False
    for a, b, c in zip(vs, vs[1:], vs[2:]):
        if a == c or _triangle(a, b, c):
            return False
    return True


def farey_steps_left(prev: Optional[Fraction], v: Fraction) -> list[Fraction]:
    """Admissible next vertices from ``v`` given the previous vertex ``prev``."""
    if v.denominator == 1:
        options = [v - 1, v + 1]
    else:
        options = list(farey_parents(v))
    out = []
    for w in options:
        if prev is not None and (w == prev or _triangle(prev, v, w)):
            continue
        out.append(w)
    return out


def enumerate_skeletons(
    t, u_floor=1, max_length: int = DEFAULT_MAX_LENGTH, vertical: bool = True
) -> list[tuple]:
    """All minimal monotone vertex sequences from <t>, as tuples of slopes.

    Every non-empty sequence is returned, prefixes included: each one is
    the skeleton of the paths whose endpoint lies on its final edge.
    The empty skeleton ``(t,)`` stands for the constant path on L(t).
    Order is canonical (lexicographic on the slope sequence).
    """
    return list(_skeletons(Fraction(t), Fraction(u_floor), max_length, vertical))


@lru_cache(maxsize=4096)
def _skeletons(t, u_floor, max_length, vertical) -> tuple:
    if t.denominator == 1:
        raise InvalidTangleError(f"tangle slope {t} is an integer")
    out = [(t,)]

    def grow(seq):
        if len(seq) - 1 >= max_length:
            return
        v = seq[-1]
        if v.denominator < u_floor:
            return
        if v.denominator == 1 and not vertical:
            return
        prev = seq[-2] if len(seq) > 1 else None
        for w in farey_steps_left(prev, v):
            nxt = seq + (w,)
            out.append(nxt)
            grow(nxt)

    grow((t,))
    return tuple(sorted(out))


def truncate_at_u(skeleton, u) -> Edgepath:
    """Stop along the last edge of ``skeleton`` at the given u-coordinate."""
    vs = tuple(v if type(v) is Fraction else Fraction(v) for v in skeleton)
    u = u if type(u) is Fraction else Fraction(u)
    if len(vs) == 1:
        if u < vs[0].denominator:
            raise ValueError(f"u={u} is left of <{vs[0]}>")
        return Edgepath.constant(vs[0], u)
    a, b = vs[-2], vs[-1]
    qa, qb = a.denominator, b.denominator
    if qa == qb:
        if u != 1:
            raise ValueError(f"vertical edge only reachable at u = 1, not {u}")
        return Edgepath.through(vs)
    if not qb <= u <= qa:
        raise ValueError(f"u={u} outside [{qb}, {qa}] on final edge of {vs}")
    if u == qb:
        return Edgepath.through(vs)
    if u == qa:
        return Edgepath.through(vs[:-1])
    beta = (qa - u) / (qa - qb)
    return Edgepath(vs[0], "partial", vs[:-1], u, b, beta)


def final_segment(path: Edgepath) -> tuple[Fraction, Fraction]:
    """Endpoints (right, left) of the last segment, as slopes."""
    if path.kind == "constant":
        raise UnsupportedError("constant paths have no final segment")
    if path.kind == "partial":
        return path.last_vertex, path.partial_to
    return path.vertices[-2], path.vertices[-1]


def _coords(y: Fraction):
    return vertex_coords(DiagramVertex.finite(y))


def segment_slope(path: Edgepath) -> Fraction:
    """dy/dx of the final segment in the (x, y) plane."""
    a, b = final_segment(path)
    (xa, ya), (xb, yb) = _coords(a), _coords(b)
    if xa == xb:
        raise UnsupportedError("vertical final segment")
    return (yb - ya) / (xb - xa)


def r_value(path: Edgepath) -> int:
    """Denominator of the height where the extended final segment meets x = 1."""
    a, _ = final_segment(path)
    xa, ya = _coords(a)
    y1 = ya + segment_slope(path) * (1 - xa)
    return y1.denominator


@lru_cache(maxsize=65536)
def m_value(path: Edgepath, u_bar=None) -> int:
    if path.kind == "constant":
        u = path.u if u_bar is None else Fraction(u_bar)
        return (u / path.start.denominator).denominator
    return path_length(path).denominator


def edge_direction(a: Fraction, b: Fraction) -> int:
    """+1 if moving from a to b goes up, -1 if down (b is the leftward end)."""
    return (b > a) - (b < a)


# -- text format ---------------------------------------------------------

_CONST_RE = re.compile(r"^\s*const\(\s*([^@\s)]+)\s*(?:@\s*([^)\s]+))?\s*\)\s*$")


def format_path(path: Edgepath) -> str:
    if path.kind == "constant":
        u = "u" if path.u is None else format_rational(path.u)
        return f"const({format_rational(path.start)} @ {u})"
    parts = [format_rational(v) for v in path.vertices]
    if path.kind == "partial":
        parts.append(f"{format_rational(path.partial_to)}@{format_rational(path.u)}")
    return " > ".join(parts)


def parse_path(text: str) -> Edgepath:
    """Inverse of ``format_path``; also accepts a bare "@u" final token."""
    m = _CONST_RE.match(text)
    if m:
        u = m.group(2)
        return Edgepath.constant(parse_rational(m.group(1)), None if u in (None, "u") else parse_rational(u))
    tokens = [tok.strip() for tok in text.split(">")]
    if not tokens or not tokens[0]:
        raise ParseError(f"empty path: {text!r}")
    vs = []
    for tok in tokens[:-1]:
        vs.append(parse_rational(tok))
    last = tokens[-1]
    if "@" not in last:
        vs.append(parse_rational(last))
        return Edgepath.through(vs)
    target, _, u = last.partition("@")
    u = parse_rational(u)
    if target.strip():
        return truncate_at_u(vs + [parse_rational(target)], u)
    if len(vs) > 1 and vs[-1].denominator < u < vs[-2].denominator:
        # "a > b > @u" with u inside the last listed edge: stop on that edge
        return truncate_at_u(vs, u)
    # "@u" alone: continue the unique admissible way
    options = [w for w in farey_steps_left(vs[-2] if len(vs) > 1 else None, vs[-1])
               if w.denominator < u < vs[-1].denominator or w.denominator == u]
    if len(options) != 1:
        raise ParseError(f"ambiguous partial segment in {text!r}")
    return truncate_at_u(vs + options, u)


def lcm(*values: int) -> int:
    out = 1
    for v in values:
        out = out * v // math.gcd(out, v)
    return out
