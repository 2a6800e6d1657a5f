"""Per-receiver side-information analysis.

Codewords are ints with y_1 as the most significant of N bits, so numeric
order equals lexicographic order of the bit strings.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Optional, Sequence

from . import gf2
from .code import EncodingMatrix
from .problem import IndexCodingProblem, Receiver


class PriorityError(ValueError):
    pass


@dataclass(frozen=True)
class ReceiverAnalysis:
    known_count: int
    s_set: frozenset[int]  # 0-based column indices
    eta: int
    unknown_rank: int
    N: int

    @property
    def gets_sicg(self) -> bool:
        return self.eta < self.N

    @property
    def effective_size(self) -> int:
        return 2**self.unknown_rank


def known_transmissions(L: EncodingMatrix, known) -> frozenset[int]:
    """0-based columns whose support lies inside the known set (1-based)."""
    known = set(known)
    out = set()
    for j in range(L.N):
        support = {k + 1 for k in range(L.n) if L.L[k, j]}
        if support <= known:
            out.add(j)
    return frozenset(out)


def unknown_rank(L: EncodingMatrix, known) -> int:
    rows = L.row_ints()
    return gf2.rank_packed([rows[k] for k in range(L.n) if (k + 1) not in known])


def eta(p: IndexCodingProblem, L: EncodingMatrix, i: int) -> int:
    r = p.receivers[i]
    return min(p.n - len(r.known), L.N - len(known_transmissions(L, r.known)))


def analyze_receiver(p: IndexCodingProblem, L: EncodingMatrix, i: int) -> ReceiverAnalysis:
    r = p.receivers[i]
    s = known_transmissions(L, r.known)
    return ReceiverAnalysis(
        known_count=len(r.known),
        s_set=s,
        eta=min(p.n - len(r.known), L.N - len(s)),
        unknown_rank=unknown_rank(L, r.known),
        N=L.N,
    )


def analyze(p: IndexCodingProblem, L: EncodingMatrix) -> list[ReceiverAnalysis]:
    return [analyze_receiver(p, L, i) for i in range(p.m)]


def parse_priority(spec: str) -> list[int]:
    """'R2,R1' or '2,1' -> 0-based receiver indices [1, 0]."""
    out = []
    for tok in spec.split(","):
        tok = tok.strip()
        if not tok:
            continue
        if tok[:1] in "Rr":
            tok = tok[1:]
        try:
            out.append(int(tok) - 1)
        except ValueError:
            raise PriorityError(f"bad receiver id in priority list: {tok!r}") from None
    return out


def order_receivers(
    p: IndexCodingProblem, L: EncodingMatrix, priority: Optional[Sequence[int]] = None
) -> list[int]:
    """Receivers (0-based) sorted by non-decreasing eta.

    Ties keep input order, except that receivers named in ``priority`` go
    ahead of unnamed ones with the same eta, in the listed order.
    """
    priority = list(priority or [])
    if len(set(priority)) != len(priority):
        raise PriorityError("priority list repeats a receiver")
    bad = [i for i in priority if not 0 <= i < p.m]
    if bad:
        raise PriorityError(f"priority list names unknown receivers: {[f'R{i + 1}' for i in bad]}")
    rank_of = {r: k for k, r in enumerate(priority)}
    etas = [eta(p, L, i) for i in range(p.m)]
    return sorted(range(p.m), key=lambda i: (etas[i], rank_of.get(i, len(priority)), i))


def realizations(known: Sequence[int]) -> list[tuple[int, ...]]:
    """All assignments to the known messages (sorted), lexicographic order."""
    return list(product((0, 1), repeat=len(known)))


def span_packed(vectors: Sequence[int]) -> list[int]:
    """All elements of the span of packed vectors, sorted."""
    elems = {0}
    for v in vectors:
        if v not in elems:
            elems |= {e ^ v for e in elems}
    return sorted(elems)


def effective_codebook(L: EncodingMatrix, known, realization: Sequence[int]) -> frozenset[int]:
    """Codewords xL consistent with the known messages taking ``realization``.

    ``realization`` lists bits for the known indices in increasing order.
    """
    known = sorted(known)
    if len(realization) != len(known):
        raise ValueError("realization must assign one bit to every known message")
    rows = L.row_ints()
    offset = 0
    for j, a in zip(known, realization):
        if a:
            offset ^= rows[j - 1]
    known_set = set(known)
    free = [rows[k] for k in range(L.n) if (k + 1) not in known_set]
    return frozenset(offset ^ c for c in span_packed(free))


def receiver_codebooks(L: EncodingMatrix, r: Receiver) -> list[frozenset[int]]:
    """Distinct effective codebooks of a receiver, ordered by the first
    (lexicographically smallest) realization producing each."""
    known = r.known_sorted()
    seen: dict[frozenset[int], None] = {}
    for a in realizations(known):
        seen.setdefault(effective_codebook(L, known, a), None)
    return list(seen)
