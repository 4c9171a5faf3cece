"""Twist numbers and boundary slopes.

The twist of a system is 2(e_- - e_+), where e_- (e_+) counts the edges
along which the path moves downward (upward) as it runs right to left;
a final partial edge counts with its fraction.  Vertical edges at u = 1
count by their y-direction like any other edge.  The slope is the twist
minus that of a Seifert surface.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .diagram import parity_class
from .edgepaths import Edgepath, edge_direction, farey_steps_left
from .knots import KnotParams, forbidden_classes
from .solver import CandidateSystem


class CalibrationError(RuntimeError):
    pass


@dataclass(frozen=True)
class SlopeResult:
    tau: Fraction
    tau_seifert: Fraction
    delta: Fraction
    e_minus: Fraction
    e_plus: Fraction


@lru_cache(maxsize=65536)
def edge_counts(path: Edgepath) -> tuple[Fraction, Fraction]:
    """(e_-, e_+) of one path."""
    down = up = 0
    vs = path.vertices
    for a, b in zip(vs, vs[1:]):
        # compare b < a without building Fractions
        if b.numerator * a.denominator < a.numerator * b.denominator:
            down += 1
        else:
            up += 1
    down, up = Fraction(down), Fraction(up)
    if path.kind == "partial":
        if edge_direction(path.last_vertex, path.partial_to) < 0:
            down += path.beta
        else:
            up += path.beta
    return down, up


def twist(system) -> Fraction:
    paths = system.paths if isinstance(system, CandidateSystem) else system
    down = up = Fraction(0)
    for p in paths:
        d, u = edge_counts(p)
        down += d
        up += u
    return 2 * (down - up)


def _forced_path(t, f, K) -> list:
    seq = [t]
    while seq[-1].denominator != 1:
        prev = seq[-2] if len(seq) > 1 else None
        options = [w for w in farey_steps_left(prev, seq[-1]) if parity_class(w) != f]
        if len(options) != 1:
            raise CalibrationError(f"no forced Seifert step from {seq[-1]} in {K} (options {options})")
        seq.append(options[0])
    return seq


def seifert_paths(K: KnotParams) -> tuple:
    """Vertex sequences of the Seifert system at u = 1.

    From <t_i> the path avoids vertices of the class that pairs the two
    inward endpoints of tangle i; at every step exactly one leftward
    neighbour qualifies, so the path is forced and ends at an integer.
    If the integers do not sum to zero, vertical edges close the system
    up, again avoiding the forbidden class.  When every denominator is
    odd the forbidden class is always "inf" and vertical steps are free.
    With one even denominator every integer neighbour of an endpoint is
    forbidden: no vertical edge can be added and the paths are returned
    as they are (their twist is still the Seifert twist).
    """
    forbidden = forbidden_classes(K)
    paths = [_forced_path(t, f, K) for t, f in zip(K.ts, forbidden)]
    total = sum(seq[-1] for seq in paths)
    step = -1 if total > 0 else 1
    remaining = abs(int(total))
    blocked = all(parity_class(seq[-1] + d) == f for seq, f in zip(paths, forbidden) for d in (-1, 1))
    if remaining and not blocked:
        for seq, f in zip(paths, forbidden):
            while remaining:
                nxt = seq[-1] + step
                prev = seq[-2]
                if parity_class(nxt) == f or nxt == prev or farey_steps_left(prev, seq[-1]).count(nxt) == 0:
                    break
                seq.append(nxt)
                remaining -= 1
        if remaining:
            raise CalibrationError(f"cannot close the Seifert system of {K} with vertical edges")
    return tuple(tuple(seq) for seq in paths)


@lru_cache(maxsize=None)
def seifert_twist(K: KnotParams) -> Fraction:
    from .invariants import YES, orientability  # avoids an import cycle

    skeletons = seifert_paths(K)
    paths = tuple(Edgepath.through(seq) for seq in skeletons)
    system = CandidateSystem(K, paths, Fraction(1), skeletons)
    if orientability(system) != YES:
        raise CalibrationError(f"Seifert candidate for {K} is not orientable")
    return twist(system)


def boundary_slope(system: CandidateSystem, K: KnotParams = None) -> SlopeResult:
    K = system.knot if K is None else K
    down = up = Fraction(0)
    for p in system.paths:
        d, u = edge_counts(p)
        down += d
        up += u
    tau = 2 * (down - up)
    tau_s = seifert_twist(K)
    return SlopeResult(tau, tau_s, tau - tau_s, down, up)
