"""Minimum distances, distance spectra and dB gains per receiver."""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional, Sequence

from . import analysis
from .code import EncodingMatrix
from .mapper import Constellation, PskMapping
from .problem import IndexCodingProblem, Receiver

REPORT_DECIMALS = 2


def _pair_gaps(points: Sequence[int], M: int) -> list[int]:
    out = []
    for a, b in combinations(points, 2):
        d = abs(a - b) % M
        out.append(min(d, M - d))
    return out


def dmin_receiver(mapping: PskMapping, const: Constellation, L: EncodingMatrix, r: Receiver) -> float:
    """Squared minimum distance of the receiver's mapped effective codebook,
    minimized over all realizations of its side information."""
    best = math.inf
    M = const.order
    for C in analysis.receiver_codebooks(L, r):
        gaps = _pair_gaps([mapping.point_of[c] for c in C], M)
        if gaps:
            best = min(best, const.d2(0, min(gaps)))
    return best


def dmin_receiver_zero(mapping: PskMapping, const: Constellation, L: EncodingMatrix, r: Receiver) -> float:
    """Same as dmin_receiver but for the all-zeros realization only."""
    C = analysis.effective_codebook(L, r.known_sorted(), (0,) * len(r.known))
    gaps = _pair_gaps([mapping.point_of[c] for c in C], const.order)
    return const.d2(0, min(gaps)) if gaps else math.inf


def distance_distribution(
    mapping: PskMapping, const: Constellation, L: EncodingMatrix, r: Receiver
) -> list[tuple[float, int]]:
    """Sorted (squared distance, pair count) for the all-zeros realization."""
    C = analysis.effective_codebook(L, r.known_sorted(), (0,) * len(r.known))
    counts = Counter(_pair_gaps([mapping.point_of[c] for c in C], const.order))
    return [(const.d2(0, g), counts[g]) for g in sorted(counts)]


def gains(d2_psk: float, d2_noside: float, d2_binary: float, N: int) -> tuple[float, float, float]:
    """(side-information coding gain dB, absolute coding gain dB, bandwidth gain)."""
    if min(d2_psk, d2_noside, d2_binary) <= 0:
        raise ValueError("squared distances must be positive")
    return (
        10 * math.log10(d2_psk / d2_noside),
        10 * math.log10(d2_psk / d2_binary),
        N / 2,
    )


@dataclass
class ReceiverGain:
    receiver: int  # 1-based id
    known_count: int
    s_set: list[int]  # 1-based column ids
    eta: int
    effective_size: int
    gets_sicg: bool
    d2_psk: float
    d2_psk_zero: float
    d2_binary: float
    d2_noside: float
    sicg_db: float
    acg_db: float
    bandwidth_gain: float
    distance_distribution: list[tuple[float, int]] = field(default_factory=list)

    def row(self) -> dict:
        return {
            "receiver": f"R{self.receiver}",
            "known_count": self.known_count,
            "s_set": " ".join(f"y{j}" for j in self.s_set),
            "eta": self.eta,
            "effective_size": self.effective_size,
            "gets_sicg": int(self.gets_sicg),
            "d2_psk": round(self.d2_psk, REPORT_DECIMALS),
            "d2_binary": self.d2_binary,
            "bandwidth_gain": self.bandwidth_gain,
            "sicg_db": round(self.sicg_db, REPORT_DECIMALS),
            "acg_db": round(self.acg_db, REPORT_DECIMALS),
            "distance_distribution": " ".join(
                f"{round(d, REPORT_DECIMALS)}x{c}" for d, c in self.distance_distribution
            ),
        }


@dataclass
class GainReport:
    N: int
    n: int
    e_b: float
    receivers: list[ReceiverGain]

    def to_dict(self) -> dict:
        return {
            "N": self.N,
            "n": self.n,
            "e_b": self.e_b,
            "receivers": [
                {
                    **r.__dict__,
                    "s_set": list(r.s_set),
                    "distance_distribution": [[d, c] for d, c in r.distance_distribution],
                    "d2_psk": _finite(r.d2_psk),
                    "d2_psk_zero": _finite(r.d2_psk_zero),
                }
                for r in self.receivers
            ],
        }


def _finite(x: float) -> Optional[float]:
    return None if math.isinf(x) else x


def gain_report(
    p: IndexCodingProblem, L: EncodingMatrix, mapping: PskMapping, e_b: float = 1.0
) -> GainReport:
    const = Constellation(L.N, e_b)
    d2_noside = const.d2_min
    d2_binary = 4.0 * e_b
    rows = []
    for i, r in enumerate(p.receivers):
        info = analysis.analyze_receiver(p, L, i)
        d2 = dmin_receiver(mapping, const, L, r)
        sicg, acg, bw = gains(d2, d2_noside, d2_binary, L.N)
        rows.append(
            ReceiverGain(
                receiver=i + 1,
                known_count=info.known_count,
                s_set=sorted(j + 1 for j in info.s_set),
                eta=info.eta,
                effective_size=info.effective_size,
                gets_sicg=info.gets_sicg,
                d2_psk=d2,
                d2_psk_zero=dmin_receiver_zero(mapping, const, L, r),
                d2_binary=d2_binary,
                d2_noside=d2_noside,
                sicg_db=sicg,
                acg_db=acg,
                bandwidth_gain=bw,
                distance_distribution=distance_distribution(mapping, const, L, r),
            )
        )
    return GainReport(N=L.N, n=p.n, e_b=e_b, receivers=rows)
