"""Montesinos knot parameters K(t1, t2, t3) and their equivalence moves.

Tangle endpoints are labelled NW, NE, SW, SE.  A tangle of slope p/q
joins them according to the parity class of p/q:

    "0"   (p even, q odd)  NW-NE, SW-SE
    "inf" (p odd, q even)  NW-SW, NE-SE
    "1"   (p odd, q odd)   NW-SE, NE-SW

and the closure glues NE_i to NW_{i+1} and SE_i to SW_{i+1}.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from functools import lru_cache
from fractions import Fraction

from .diagram import ParseError, format_rational, parity_class, parse_rational

MATCHINGS = {
    "0": (("NW", "NE"), ("SW", "SE")),
    "inf": (("NW", "SW"), ("NE", "SE")),
    "1": (("NW", "SE"), ("NE", "SW")),
}
_GLUE = {"NE": "NW", "SE": "SW"}


class NotAKnotError(ValueError):
    pass


@dataclass(frozen=True)
class KnotParams:
    t1: Fraction
    t2: Fraction
    t3: Fraction

    def __post_init__(self):
        for t in self.ts:
            if Fraction(t).denominator == 1:
                raise ValueError(f"tangle slope {t} is an integer; length would drop below 3")

    @classmethod
    def of(cls, *ts) -> "KnotParams":
        if len(ts) == 1:
            ts = tuple(ts[0])
        return cls(*(Fraction(t) for t in ts))

    @property
    def ts(self) -> tuple:
        return (self.t1, self.t2, self.t3)

    def mirror(self) -> "KnotParams":
        return KnotParams(-self.t1, -self.t2, -self.t3)

    def __iter__(self):
        return iter(self.ts)

    def __str__(self):
        return "K(" + ",".join(format_rational(t) for t in self.ts) + ")"


_K_RE = re.compile(r"^\s*K\s*\((.*)\)\s*$", re.IGNORECASE)


def parse_knot(text) -> KnotParams:
    """Parse "K(-1/2,1/3,1/7)" or "-1/2 1/3 1/7" (a list of tokens also works)."""
    if not isinstance(text, str):
        text = " ".join(text)
    text = text.replace("−", "-")
    m = _K_RE.match(text)
    body = m.group(1) if m else text
    tokens = [tok for tok in re.split(r"[,\s]+", body.strip()) if tok]
    if len(tokens) != 3:
        raise ParseError(f"expected three tangle slopes, got {len(tokens)} in {text!r}")
    ts = [parse_rational(tok) for tok in tokens]
    if any(not isinstance(t, Fraction) for t in ts):
        raise ParseError("tangle slopes must be finite")
    try:
        return KnotParams.of(ts)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


# -- strands ----------------------------------------------------------------


def _strand_graph(ts):
    """Adjacency of the 12 tangle endpoints: strand partner and glue partner."""
    strand, glue = {}, {}
    n = len(ts)
    for i, t in enumerate(ts):
        for a, b in MATCHINGS[parity_class(t)]:
            strand[(i, a)] = (i, b)
            strand[(i, b)] = (i, a)
        for right, left in _GLUE.items():
            j = (i + 1) % n
            glue[(i, right)] = (j, left)
            glue[(j, left)] = (i, right)
    return strand, glue


def link_cycles(ts) -> list[list[tuple]]:
    """Each component as its cyclic list of (tangle, entry, exit) traversals."""
    strand, glue = _strand_graph(ts)
    seen = set()
    cycles = []
    for start in sorted(strand):
        if start in seen:
            continue
        cycle = []
        node = start
        while node not in seen:
            end = strand[node]
            seen.add(node)
            seen.add(end)
            cycle.append((node[0], node[1], end[1]))
            node = glue[end]
        cycles.append(cycle)
    return cycles


def component_count_oracle(K) -> int:
    """Components of the closure, by walking the endpoint permutations."""
    return len(link_cycles(tuple(K)))


def component_count(K) -> int:
    """Number of link components from the parities of p_i and q_i."""
    ts = [Fraction(t) for t in K]
    even_q = sum(1 for t in ts if t.denominator % 2 == 0)
    if even_q == 0:
        return 1 if sum(t.numerator for t in ts) % 2 else 2
    if even_q == 1:
        return 1
    return even_q


def forbidden_classes(K) -> tuple:
    """For each tangle, the parity class pairing its two incoming endpoints.

    An orientation of the knot makes two endpoints of each tangle inward
    and two outward; of the three matchings exactly one pairs in with in.
    Edgepaths of a one-sheeted orientable spanning surface avoid it.
    """
    if isinstance(K, KnotParams):
        return _forbidden_classes(K.ts)
    return _forbidden_classes(tuple(Fraction(t) for t in K))


@lru_cache(maxsize=65536)
def _forbidden_classes(ts) -> tuple:
    cycles = link_cycles(ts)
    if len(cycles) != 1:
        raise NotAKnotError(f"{KnotParams.of(ts)} has {len(cycles)} components")
    ins = {i: set() for i in range(len(ts))}
    for i, entry, _exit in cycles[0]:
        ins[i].add(entry)
    out = []
    for i in range(len(ts)):
        for cls, pairs in MATCHINGS.items():
            if any(set(p) == ins[i] for p in pairs):
                out.append(cls)
                break
    return tuple(out)


def require_knot(K) -> None:
    n = component_count(K)
    if n != 1:
        raise NotAKnotError(f"{KnotParams.of(tuple(K))} is a link of {n} components")


# -- equivalence ------------------------------------------------------------


def equivalence_moves(K: KnotParams, shift_window: int = 3, mirror: bool = True) -> set:
    """Global negation, permutations and integer shifts summing to zero."""
    out = set()
    bases = (K.ts, K.mirror().ts) if mirror else (K.ts,)
    for base in bases:
        for perm in itertools.permutations(base):
            for k1 in range(-shift_window, shift_window + 1):
                for k2 in range(-shift_window, shift_window + 1):
                    k3 = -k1 - k2
                    if abs(k3) > shift_window:
                        continue
                    out.add(KnotParams(perm[0] + k1, perm[1] + k2, perm[2] + k3))
    return out


def fractional_form(K) -> tuple[tuple, int]:
    """(sorted fractional parts in (0,1), total integer part)."""
    ts = [Fraction(t) for t in K]
    e = sum(math.floor(t) for t in ts)
    return tuple(sorted(t - math.floor(t) for t in ts)), e


@dataclass(frozen=True)
class Canonical:
    knot: KnotParams
    mirrored: bool


def _representative(fracs, e) -> KnotParams:
    # integer part sits on the largest fractional part
    return KnotParams(fracs[-1] + e, fracs[0], fracs[1])


def canonicalize(K) -> Canonical:
    """Deterministic orbit representative, up to mirror image.

    Integer parts are collected into e = Σ floor(t_i); the mirror has
    fractional parts 1 - f_i and integer total -3 - e, so exactly one of
    the two has e >= -1.  That one is chosen.
    """
    fracs, e = fractional_form(K)
    mirrored = False
    if e <= -2:
        fracs = tuple(sorted(1 - f for f in fracs))
        e = -3 - e
        mirrored = True
    return Canonical(_representative(fracs, e), mirrored)


def canonical_key(K) -> KnotParams:
    return canonicalize(K).knot
