"""Candidate systems: three allowable edgepaths ending on one vertical line
with vertical coordinates summing to zero.

Each skeleton contributes one *piece*: the u-interval covered by its last
edge together with the affine function u*y(u) on it.  For a triple of
pieces the condition Σ y_i = 0 is, after multiplying by u, a linear
equation A*u + B = 0 on the intersected interval.  Vertical edges only
live at u = 1 and are handled separately by matching integer endpoints.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .edgepaths import (
    DEFAULT_MAX_LENGTH,
    Edgepath,
    enumerate_skeletons,
    format_path,
    path_length,
    truncate_at_u,
    validate_allowable,
)
from .knots import KnotParams, require_knot

INF = float("inf")


class InvariantViolation(AssertionError):
    """A computed object failed an exact post-hoc check."""


@dataclass(frozen=True)
class Piece:
    skeleton: tuple
    lo: Fraction
    hi: object  # Fraction or INF
    A: Fraction  # u*y = A*u + B on [lo, hi]
    B: Fraction
    full_edges: int
    e_max: object = None  # largest Euler number e(γ) over the piece
    ident: int = -1  # interned id of the skeleton
    parent: int = -1  # interned id of the skeleton minus its last vertex


_IDS: dict = {}


def intern_skeleton(sk) -> int:
    """Small integer standing for a skeleton, stable within the process."""
    return _IDS.setdefault(sk, len(_IDS))


def _piece_e_max(sk, lo, hi):
    """e(γ) is affine in u on a piece, so its maximum sits at an end."""
    if len(sk) == 1:
        q = sk[0].denominator
        return INF if q == 2 else Fraction(4 - q, 3)
    qa, qb = sk[-2].denominator, sk[-1].denominator

    def e_at(u):
        return (4 - u) / 3 - (len(sk) - 2 + Fraction(qa - u, qa - qb))

    return max(e_at(lo), e_at(hi))


@lru_cache(maxsize=4096)
def tangle_pieces(t, u_floor=1, max_length: int = DEFAULT_MAX_LENGTH) -> tuple:
    """Pieces of all non-vertical skeletons from <t> that reach u >= u_floor."""
    t = Fraction(t)
    u_floor = Fraction(u_floor)
    out = []
    for sk in enumerate_skeletons(t, u_floor, max_length, vertical=False):
        if len(sk) == 1:
            lo, hi = Fraction(t.denominator), INF
            A, B = t, Fraction(0)
        else:
            a, b = sk[-2], sk[-1]
            qa, qb = a.denominator, b.denominator
            if qa == qb:
                continue
            lo, hi = Fraction(qb), Fraction(qa)
            A = Fraction(a.numerator - b.numerator, qa - qb)
            B = b.numerator - A * qb
        if hi < u_floor:
            continue
        lo = max(lo, u_floor)
        parent = intern_skeleton(sk[:-1]) if len(sk) > 1 else -1
        out.append(Piece(sk, lo, hi, A, B, len(sk) - 1, _piece_e_max(sk, lo, hi),
                         intern_skeleton(sk), parent))
    return tuple(out)


@dataclass(frozen=True)
class CandidateSystem:
    """Three edgepaths with a common endpoint coordinate u_bar and Σy = 0.

    ``family`` is set when the defining equation vanishes identically on
    an interval; the paths then describe the representative u_bar and
    ``skeletons`` lets callers re-truncate anywhere in the interval.
    """

    knot: KnotParams
    paths: tuple
    u_bar: Fraction
    skeletons: tuple = field(compare=False)
    family: Optional[tuple] = None

    @property
    def ys(self) -> tuple:
        return tuple(p.y for p in self.paths)

    @property
    def lengths(self) -> tuple:
        return tuple(path_length(p) for p in self.paths)

    def at(self, u) -> "CandidateSystem":
        """Member of a solution family at another u in its interval."""
        u = Fraction(u)
        paths = tuple(truncate_at_u(sk, u) for sk in self.skeletons)
        return CandidateSystem(self.knot, paths, u, self.skeletons, self.family)

    def key(self) -> tuple:
        return (self.u_bar, tuple(format_path(p) for p in self.paths))

    def sort_key(self) -> tuple:
        return (self.u_bar, tuple(p.sort_key() for p in self.paths))

    def __str__(self):
        fam = ""
        if self.family:
            lo, hi = self.family
            fam = f" family [{lo}, {hi}]"
        return f"u={self.u_bar}{fam}: " + " | ".join(format_path(p) for p in self.paths)


def check_system(system: CandidateSystem, allowable: bool = False) -> None:
    """Re-verify the common endpoint coordinate and Σy = 0 exactly.

    With ``allowable`` each path is also re-checked for minimality and
    monotonicity (skeleton enumeration guarantees both by construction).
    """
    u = system.u_bar
    for p in system.paths:
        if p.kind == "constant":
            if p.u != u:
                raise InvariantViolation(f"constant path not at u={u}: {p}")
        elif p.final_point().u != u:
            raise InvariantViolation(f"path does not end at u={u}: {p}")
        if allowable and not _allowable(p):
            raise InvariantViolation(f"path not allowable: {p}")
    for p, t in zip(system.paths, system.knot.ts):
        if p.start != t:
            raise InvariantViolation(f"path {p} does not start at {t}")
    if sum(system.ys) != 0:
        raise InvariantViolation(f"Σy = {sum(system.ys)} != 0 for {system}")


@lru_cache(maxsize=65536)
def _allowable_shape(start, kind, vertices, partial_to) -> bool:
    beta = Fraction(1, 2) if kind == "partial" else None
    return validate_allowable(Edgepath(start, kind, vertices, None, partial_to, beta))


def _allowable(p: Edgepath) -> bool:
    if p.kind == "partial" and not 0 < p.beta < 1:
        return False
    if p.kind == "constant" and p.u is not None and p.u < p.start.denominator:
        return False
    return _allowable_shape(p.start, p.kind, p.vertices, p.partial_to)


def _identity(pieces, u) -> tuple:
    """Hashable identity of the truncated paths, without building them.

    A path stopped at the far end of its last edge is the vertex path of
    the parent skeleton, and a partial path is marked by a negative id.
    """
    out = []
    for p in pieces:
        sk = p.skeleton
        if len(sk) == 1 or sk[-1].denominator == u:
            out.append(p.ident)
        elif u == p.hi:
            out.append(p.parent)
        else:
            out.append(-1 - p.ident)
    return tuple(out)


_PATHS: dict = {}


def _shared_path(skeleton, u, ident) -> Edgepath:
    """One Edgepath object per (path identity, u), so per-path caches hit."""
    key = (ident, u)
    path = _PATHS.get(key)
    if path is None:
        if len(_PATHS) > 500_000:
            _PATHS.clear()
        path = _PATHS[key] = truncate_at_u(skeleton, u)
    return path


def _family_representative(lo, hi):
    if hi == INF:
        return lo + 1
    return (lo + hi) / 2


@lru_cache(maxsize=4096)
def _integer_ends(t, max_length: int) -> dict:
    ends: dict = {}
    for sk in enumerate_skeletons(t, 1, max_length, vertical=True):
        if len(sk) > 1 and sk[-1].denominator == 1:
            ends.setdefault(sk[-1], []).append((sk, intern_skeleton(sk)))
    return ends


def _vertical_systems(K: KnotParams, max_length: int, max_total: int):
    """Systems at u = 1 where every path ends at an integer vertex."""
    by_end = [_integer_ends(t, max_length) for t in K.ts]
    for k1, s1 in by_end[0].items():
        for k2, s2 in by_end[1].items():
            s3 = by_end[2].get(-k1 - k2)
            if not s3:
                continue
            for triple in itertools.product(s1, s2, s3):
                if sum(len(sk) - 1 for sk, _ in triple) > max_total:
                    continue
                yield triple


def solve_systems(
    K,
    u_floor=1,
    max_length: int = DEFAULT_MAX_LENGTH,
    prune=None,
    vertical_max_total: Optional[int] = None,
) -> list[CandidateSystem]:
    """All candidate systems of K with u_bar >= u_floor.

    ``max_length`` bounds the total number of full edges over the three
    paths.  ``prune`` optionally filters each tangle's piece list before
    the triple loop, and ``vertical_max_total`` tightens the length bound
    for systems at u = 1 (both used by the torus search).
    """
    if not isinstance(K, KnotParams):
        K = KnotParams.of(tuple(K))
    require_knot(K)
    u_floor = Fraction(u_floor)
    pieces = [list(tangle_pieces(t, u_floor, max_length)) for t in K.ts]
    if prune is not None:
        pieces = prune(K, pieces)

    found: dict = {}

    def emit(skeletons, u, ids, family=None):
        k = (u, ids)
        if k in found and (found[k].family or not family):
            return
        paths = tuple(_shared_path(sk, u, i) for sk, i in zip(skeletons, ids))
        found[k] = CandidateSystem(K, paths, u, tuple(skeletons), family)

    # float copies of the interval ends give a cheap first intersection test
    rows = [
        [(float(p.lo), float(p.hi), p.lo, p.hi, p.A, p.B, p.full_edges, p) for p in ps]
        for ps in pieces
    ]
    for flo1, fhi1, lo1, hi1, A1, B1, e1, p1 in rows[0]:
        for flo2, fhi2, lo2, hi2, A2, B2, e2, p2 in rows[1]:
            flo12 = max(flo1, flo2)
            fhi12 = min(fhi1, fhi2)
            if flo12 > fhi12:
                continue
            e12 = e1 + e2
            A12 = A1 + A2
            B12 = B1 + B2
            for flo3, fhi3, lo3, hi3, A3, B3, e3, p3 in rows[2]:
                if max(flo12, flo3) > min(fhi12, fhi3) or e12 + e3 > max_length:
                    continue
                lo = max(lo1, lo2, lo3)
                hi = min(hi1, hi2, hi3)
                if lo > hi:
                    continue
                A = A12 + A3
                B = B12 + B3
                ps = (p1, p2, p3)
                sks = (p1.skeleton, p2.skeleton, p3.skeleton)
                if A != 0:
                    u = -B / A
                    if lo <= u <= hi:
                        emit(sks, u, _identity(ps, u))
                elif B == 0:
                    if lo == hi:
                        emit(sks, lo, _identity(ps, lo))
                        continue
                    mid = _family_representative(lo, hi)
                    emit(sks, mid, _identity(ps, mid), (lo, hi))
                    emit(sks, lo, _identity(ps, lo))
                    if hi != INF:
                        emit(sks, hi, _identity(ps, hi))

    if u_floor <= 1:
        vmax = max_length if vertical_max_total is None else vertical_max_total
        # every path has at least one edge, so none can exceed vmax - 2
        for triple in _vertical_systems(K, min(vmax - 2, max_length), vmax):
            sks, ids = zip(*triple)
            emit(sks, Fraction(1), ids)

    systems = list(found.values())
    for s in systems:
        check_system(s)
    systems.sort(key=CandidateSystem.sort_key)
    return systems


def solve_systems_bruteforce(K, u_floor=1, max_length: int = DEFAULT_MAX_LENGTH) -> set:
    """Reference solver: every skeleton triple, every cell between breakpoints.

    Within a cell each path is interpolated at two sample points; since
    u*Σy is affine there, its zero is found by linear interpolation.
    Returns the set of (u_bar, formatted paths) keys of point solutions
    plus family representatives.
    """
    if not isinstance(K, KnotParams):
        K = KnotParams.of(tuple(K))
    u_floor = Fraction(u_floor)
    skels = [enumerate_skeletons(t, u_floor, max_length, vertical=True) for t in K.ts]
    out = set()

    def span(sk):
        if len(sk) == 1:
            return Fraction(sk[0].denominator), INF
        qa, qb = sk[-2].denominator, sk[-1].denominator
        if qa == qb:
            return Fraction(1), Fraction(1)
        return Fraction(qb), Fraction(qa)

    def uy(sk, u):
        return truncate_at_u(sk, u).y * u

    for triple in itertools.product(*skels):
        if sum(len(sk) - 1 for sk in triple) > max_length:
            continue
        spans = [span(sk) for sk in triple]
        lo = max([u_floor] + [s[0] for s in spans])
        hi = min(s[1] for s in spans)
        if lo > hi:
            continue
        f_lo = sum(uy(sk, lo) for sk in triple)
        if lo == hi:
            if f_lo == 0:
                out.add(_key(triple, lo))
            continue
        probe = lo + 1 if hi == INF else hi
        f_hi = sum(uy(sk, probe) for sk in triple)
        if f_lo == f_hi:
            if f_lo == 0:
                out.add(_key(triple, _family_representative(lo, hi)))
                out.add(_key(triple, lo))
                if hi != INF:
                    out.add(_key(triple, hi))
            continue
        u = lo - f_lo * (probe - lo) / (f_hi - f_lo)
        if lo <= u <= hi:
            out.add(_key(triple, u))
    return out


def _key(triple, u):
    return (u, tuple(format_path(truncate_at_u(sk, u)) for sk in triple))
