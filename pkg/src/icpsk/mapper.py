"""2^N-PSK constellations and side-information-aware labeling.

``algorithm1`` places codewords greedily so that receivers with the most
side information (smallest eta) see well-separated effective codebooks.
Every choice is deterministic:

* realizations with equal overlap: lexicographically smallest wins;
* unmapped codewords of a subcode: smallest codeword first;
* candidate points: ranked by the subcode's best still-reachable minimum
  distance, then its minimum distance to the points already placed, then
  the same two figures for every other prioritized receiver's subcode
  containing the codeword (in priority order), then smallest index.

Looking at the reachable distance rather than only the current one stops a
placement from boxing in the codewords of the subcode that come later.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from . import analysis
from .code import EncodingMatrix
from .problem import IndexCodingProblem


@dataclass(frozen=True, eq=False)
class Constellation:
    N: int
    e_b: float = 1.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1")

    @property
    def order(self) -> int:
        return 2**self.N

    @property
    def energy(self) -> float:
        return self.N * self.e_b

    @property
    def points(self) -> np.ndarray:
        k = np.arange(self.order)
        return np.sqrt(self.energy) * np.exp(2j * np.pi * k / self.order)

    def d2(self, k: int, l: int) -> float:
        """Squared distance between points k and l."""
        return 4.0 * self.energy * math.sin(math.pi * (k - l) / self.order) ** 2

    @property
    def d2_min(self) -> float:
        return self.d2(0, 1)


def make_constellation(N: int, e_b: float = 1.0) -> Constellation:
    return Constellation(N, e_b)


@dataclass(frozen=True, eq=False)
class PskMapping:
    """Bijection codeword (int, y_1 most significant) -> point index."""

    N: int
    point_of: tuple[int, ...]

    def __post_init__(self):
        if sorted(self.point_of) != list(range(2**self.N)):
            raise ValueError("mapping is not a bijection onto the constellation")

    def __eq__(self, other):
        return isinstance(other, PskMapping) and self.point_of == other.point_of

    def __hash__(self):
        return hash(self.point_of)

    @property
    def codeword_of(self) -> tuple[int, ...]:
        inv = [0] * len(self.point_of)
        for c, k in enumerate(self.point_of):
            inv[k] = c
        return tuple(inv)

    def lines(self) -> list[str]:
        return [f"{c:0{self.N}b} {k}" for c, k in enumerate(self.point_of)]


def arbitrary_map(N: int) -> PskMapping:
    return PskMapping(N, tuple(range(2**N)))


def subcode(L: EncodingMatrix, known, realization) -> frozenset[int]:
    return analysis.effective_codebook(L, known, realization)


def _circ(k: int, l: int, M: int) -> int:
    d = abs(k - l) % M
    return min(d, M - d)


def _gap(k: int, placed: Sequence[int], M: int) -> int:
    # squared distance grows with the circular index gap, so gaps are
    # compared as exact integers
    return min((_circ(k, q, M) for q in placed), default=M)


def _fits(placed: Sequence[int], free: Sequence[int], need: int, g: int, M: int) -> bool:
    """Can ``need`` points be added from ``free`` with all circular gaps >= g?"""
    for a_i, a in enumerate(placed):
        for b in placed[a_i + 1 :]:
            if _circ(a, b, M) < g:
                return False
    if need <= 0:
        return True
    cand = [k for k in free if all(_circ(k, q, M) >= g for q in placed)]
    if len(cand) < need:
        return False
    if placed:
        # placed points cut the circle into arcs; a left-to-right greedy is
        # optimal inside each arc
        anchors = sorted(placed)
        count = 0
        for a_i, a in enumerate(anchors):
            span = (anchors[(a_i + 1) % len(anchors)] - a) % M or M
            last = None
            for k in sorted((k for k in cand if 0 < (k - a) % M < span), key=lambda k: (k - a) % M):
                if last is None or (k - last) % M >= g:
                    count += 1
                    last = k
        return count >= need
    for first in cand:
        last, count = first, 1
        for k in sorted(cand, key=lambda k: (k - first) % M)[1:]:
            if (k - last) % M >= g and (first - k) % M >= g:
                count += 1
                last = k
        if count >= need:
            return True
    return False


def potential(placed: Sequence[int], free: Sequence[int], size: int, M: int) -> int:
    """Largest minimum circular gap a subcode of ``size`` codewords can still
    reach, given its points already ``placed`` and the ``free`` points."""
    need = size - len(placed)
    lo, hi = 0, M // size if size else M
    while lo < hi:
        mid = (lo + hi + 1) // 2
        if _fits(placed, free, need, mid, M):
            lo = mid
        else:
            hi = mid - 1
    return lo


def algorithm1(
    p: IndexCodingProblem,
    L: EncodingMatrix,
    priority: Optional[Sequence[int]] = None,
    trace: Optional[list] = None,
) -> PskMapping:
    """Greedy labeling of the 2^N codewords onto 2^N-PSK points.

    ``priority`` (0-based receiver ids) breaks ties between receivers of
    equal eta. ``trace``, if given, collects (receiver, codeword, point)
    for every placement.
    """
    N = L.N
    M = 2**N
    order = analysis.order_receivers(p, L, priority)
    etas = [analysis.eta(p, L, i) for i in range(p.m)]
    if etas[order[0]] >= N:
        return arbitrary_map(N)
    active = [i for i in order if etas[i] < N]
    remaining = {i: analysis.receiver_codebooks(L, p.receivers[i]) for i in active}
    coset_of = {i: {c: C for C in remaining[i] for c in C} for i in active}

    point_of: dict[int, int] = {}
    used: set[int] = set()
    i = 0
    idle = 0  # consecutive steps without a placement
    while len(point_of) < M:
        if idle > sum(len(v) for v in remaining.values()) + len(active):
            break
        r = active[i]
        cands = remaining[r]
        chosen = None
        if cands:
            chosen = max(cands, key=lambda C: sum(c in point_of for c in C))
        if chosen is None or all(c in point_of for c in chosen):
            if chosen is not None:
                cands.remove(chosen)
            i = (i + 1) % len(active)
            idle += 1
            continue
        codeword = min(c for c in chosen if c not in point_of)
        free = [k for k in range(M) if k not in used]
        subcodes = [chosen] + [coset_of[j][codeword] for j in active if j != r]
        placed = [[point_of[c] for c in C if c in point_of] for C in subcodes]
        best_key, k = None, None
        for cand in free:
            rest = [q for q in free if q != cand]
            pots = [potential(pl + [cand], rest, len(C), M) for pl, C in zip(placed, subcodes)]
            gaps = [_gap(cand, pl, M) for pl in placed]
            key = (pots[0], gaps[0], *pots[1:], *gaps[1:])
            if best_key is None or key > best_key:
                best_key, k = key, cand
        point_of[codeword] = k
        used.add(k)
        if trace is not None:
            trace.append((r, codeword, k))
        i = 0
        idle = 0

    if len(point_of) < M:
        # guard: prioritized receivers exhausted with codewords left over
        for c in range(M):
            if c in point_of:
                continue
            placed = list(point_of.values())
            k = max((q for q in range(M) if q not in used), key=lambda q: (_gap(q, placed, M), -q))
            point_of[c] = k
            used.add(k)
    return PskMapping(N, tuple(point_of[c] for c in range(M)))
