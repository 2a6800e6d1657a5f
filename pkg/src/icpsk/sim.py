"""Seeded Monte-Carlo message-error simulation over complex AWGN.

Random stream contract (fixed so curves are reproducible anywhere):

* trials at grid point g are cut into chunks of ``chunk_size``; chunk c of
  scheme s (0 = psk, 1 = bpsk) draws from
  ``Philox(SeedSequence(seed, spawn_key=(s, g, c)))``;
* each chunk first takes T raw 64-bit words; the low n bits of word t are
  the messages of trial t, with x_1 as bit n-1;
* then it takes 2*T*P more words, P Gaussian pairs per trial (P = 1 for
  psk, ceil(N/2) for bpsk), consumed trial by trial;
* a pair of words (a, b) becomes u1 = ((a >> 11) + 1) * 2^-53 in (0, 1] and
  u2 = (b >> 11) * 2^-53, then Box-Muller:
  r = sqrt(-2 ln u1), z0 = r cos(2 pi u2), z1 = r sin(2 pi u2).

Error counts are integers summed over chunks, so the number of workers does
not change the result.
"""

from __future__ import annotations

import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from . import analysis
from .code import EncodingMatrix, decoding_vector
from .mapper import Constellation, PskMapping
from .problem import IndexCodingProblem

SCHEMA_VERSION = 1
CSV_COLUMNS = ("ebn0_db", "receiver_id", "scheme", "error_rate", "trials", "seed")
SCHEMES = {"psk": 0, "bpsk": 1}
_U53 = 2.0**-53


class SimConfigError(ValueError):
    pass


@dataclass(frozen=True)
class SimConfig:
    ebn0_db_grid: tuple[float, ...]
    trials_per_point: int
    seed: int = 0
    bandwidth_adjust: bool = False
    chunk_size: int = 1 << 16
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "ebn0_db_grid", tuple(float(v) for v in self.ebn0_db_grid))
        g = self.ebn0_db_grid
        if not g:
            raise SimConfigError("Eb/N0 grid is empty")
        if any(b <= a for a, b in zip(g, g[1:])):
            raise SimConfigError("Eb/N0 grid must be strictly increasing")
        if not all(math.isfinite(v) for v in g):
            raise SimConfigError("Eb/N0 grid values must be finite")
        if self.trials_per_point < 1:
            raise SimConfigError("trials_per_point must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise SimConfigError("seed must fit in 64 unsigned bits")
        if self.chunk_size < 1 or self.workers < 1:
            raise SimConfigError("chunk_size and workers must be >= 1")


def parse_grid(spec: str) -> tuple[float, ...]:
    """'start:stop:step' (stop inclusive) -> grid values."""
    try:
        start, stop, step = (float(t) for t in spec.split(":"))
    except ValueError:
        raise SimConfigError(f"expected start:stop:step, got {spec!r}") from None
    if step <= 0 or stop < start:
        raise SimConfigError("need step > 0 and stop >= start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return tuple(round(start + k * step, 10) for k in range(count))


@dataclass
class ErrorCurve:
    receiver_id: int  # 1-based
    scheme: str
    points: list[tuple[float, float, int]] = field(default_factory=list)  # (ebn0_db, rate, trials)
    errors: list[int] = field(default_factory=list)

    @property
    def ebn0_db(self) -> list[float]:
        return [p[0] for p in self.points]

    @property
    def rates(self) -> list[float]:
        return [p[1] for p in self.points]


def ml_decode(received: complex, candidates: Sequence[tuple[int, complex]], point_index: Optional[Sequence[int]] = None) -> int:
    """Nearest candidate codeword; equal distances go to the smaller point index.

    ``candidates`` are (codeword, point) pairs. ``point_index`` gives the
    constellation index of each candidate and defaults to the list position.
    """
    if not candidates:
        raise ValueError("no candidates")
    idx = list(range(len(candidates))) if point_index is None else list(point_index)
    best = min(range(len(candidates)), key=lambda t: (abs(received - candidates[t][1]) ** 2, idx[t]))
    return candidates[best][0]


# --- vectorized core ------------------------------------------------------


@dataclass(frozen=True)
class _Rx:
    known_mask: int  # packed over messages, x_1 = bit n-1
    demand_bit: int
    span: np.ndarray  # codewords reachable by the unknown messages
    upar: np.ndarray  # u . y for every codeword y
    vmask: int  # packed v over the known messages


@dataclass(frozen=True)
class _Plan:
    n: int
    N: int
    scheme: int
    codeword_of_x: np.ndarray  # xL for every packed x
    points: np.ndarray  # psk: complex point per codeword; bpsk: (M, N) antipodal
    labels: np.ndarray  # tie-break key per codeword
    receivers: tuple[_Rx, ...]


def _build_plan(p: IndexCodingProblem, L: EncodingMatrix, scheme: str, mapping: Optional[PskMapping]) -> _Plan:
    n, N = L.n, L.N
    M = 2**N
    rows = L.row_ints()
    cw = np.zeros(2**n, dtype=np.int64)
    for j in range(n):
        bit = 1 << (n - 1 - j)
        sel = (np.arange(2**n) & bit) != 0
        cw[sel] ^= rows[j]
    if scheme == "psk":
        const = Constellation(N, 1.0)
        pts = const.points[np.array(mapping.point_of)]
        labels = np.array(mapping.point_of, dtype=np.int64)
    else:
        bits = (np.arange(M)[:, None] >> np.arange(N - 1, -1, -1)[None, :]) & 1
        pts = 1.0 - 2.0 * bits
        labels = np.arange(M, dtype=np.int64)
    rxs = []
    for r in p.receivers:
        known = r.known_sorted()
        kmask = sum(1 << (n - j) for j in known)
        unknown_rows = [rows[k] for k in range(n) if (k + 1) not in r.known]
        span = np.array(analysis.span_packed(unknown_rows), dtype=np.int64)
        dv = decoding_vector(L, r)
        ybits = (np.arange(M)[:, None] >> np.arange(N - 1, -1, -1)[None, :]) & 1
        upar = (ybits @ dv.u.astype(np.int64)) & 1
        vmask = sum(1 << (n - j) for j, b in zip(known, dv.v) if b)
        rxs.append(_Rx(kmask, 1 << (n - r.demand), span, upar, vmask))
    return _Plan(n, N, SCHEMES[scheme], cw, pts, labels, tuple(rxs))


def _gaussian_pairs(words: np.ndarray) -> np.ndarray:
    a, b = words[0::2], words[1::2]
    u1 = ((a >> np.uint64(11)).astype(np.float64) + 1.0) * _U53
    u2 = (b >> np.uint64(11)).astype(np.float64) * _U53
    rad = np.sqrt(-2.0 * np.log(u1))
    return np.stack([rad * np.cos(2 * np.pi * u2), rad * np.sin(2 * np.pi * u2)], axis=1).reshape(-1)


def _parity(v: np.ndarray) -> np.ndarray:
    v = v.copy()
    out = np.zeros_like(v)
    while np.any(v):
        out ^= v & 1
        v >>= 1
    return out


def _run_chunk(plan: _Plan, seed: int, g: int, c: int, trials: int, sigma: float) -> np.ndarray:
    ss = np.random.SeedSequence(seed, spawn_key=(plan.scheme, g, c))
    bg = np.random.Philox(ss)
    x = (bg.random_raw(trials) & np.uint64((1 << plan.n) - 1)).astype(np.int64)
    pairs = 1 if plan.scheme == 0 else (plan.N + 1) // 2
    z = _gaussian_pairs(bg.random_raw(2 * trials * pairs)).reshape(trials, 2 * pairs) * sigma
    y = plan.codeword_of_x[x]
    if plan.scheme == 0:
        rx = plan.points[y] + (z[:, 0] + 1j * z[:, 1])
    else:
        rx = plan.points[y] + z[:, : plan.N]
    # every candidate has the same energy, so the nearest one is the one with
    # the largest correlation; equal correlations go to the smaller label
    if plan.scheme == 0:
        corr = rx.real[:, None] * plan.points.real[None, :] + rx.imag[:, None] * plan.points.imag[None, :]
    else:
        corr = rx @ plan.points.T
    rows = np.arange(trials)[:, None]
    errors = np.zeros(len(plan.receivers), dtype=np.int64)
    for i, r in enumerate(plan.receivers):
        cands = plan.codeword_of_x[x & r.known_mask][:, None] ^ r.span[None, :]
        m = corr[rows, cands]
        tie = np.where(m == m.max(axis=1, keepdims=True), plan.labels[cands], np.iinfo(np.int64).max)
        yhat = cands[np.arange(trials), np.argmin(tie, axis=1)]
        bit = r.upar[yhat] ^ _parity(x & r.vmask)
        truth = (x & r.demand_bit) != 0
        errors[i] = int(np.count_nonzero(bit.astype(bool) != truth))
    return errors


def _run_task(args):
    return args[2], _run_chunk(*args)


def _simulate(plan: _Plan, cfg: SimConfig, scheme: str, noise_scale: float) -> list[ErrorCurve]:
    tasks = []
    for g, db in enumerate(cfg.ebn0_db_grid):
        n0 = 10 ** (-db / 10)  # E_b = 1
        sigma = math.sqrt(n0 / 2 * noise_scale)
        done, c = 0, 0
        while done < cfg.trials_per_point:
            t = min(cfg.chunk_size, cfg.trials_per_point - done)
            tasks.append((plan, cfg.seed, g, c, t, sigma))
            done += t
            c += 1
    totals = np.zeros((len(cfg.ebn0_db_grid), len(plan.receivers)), dtype=np.int64)
    if cfg.workers > 1:
        with ProcessPoolExecutor(cfg.workers) as ex:
            results = list(ex.map(_run_task, tasks))
    else:
        results = [_run_task(t) for t in tasks]
    for g, errs in results:
        totals[g] += errs
    curves = []
    for i in range(len(plan.receivers)):
        curve = ErrorCurve(i + 1, scheme)
        for g, db in enumerate(cfg.ebn0_db_grid):
            e = int(totals[g, i])
            curve.points.append((db, e / cfg.trials_per_point, cfg.trials_per_point))
            curve.errors.append(e)
        curves.append(curve)
    return curves


def simulate_psk(p: IndexCodingProblem, L: EncodingMatrix, mapping: PskMapping, cfg: SimConfig) -> list[ErrorCurve]:
    if mapping.N != L.N:
        raise SimConfigError("mapping and code lengths differ")
    return _simulate(_build_plan(p, L, "psk", mapping), cfg, "psk", 1.0)


def simulate_bpsk_baseline(p: IndexCodingProblem, L: EncodingMatrix, cfg: SimConfig) -> list[ErrorCurve]:
    scale = L.N / 2 if cfg.bandwidth_adjust else 1.0
    return _simulate(_build_plan(p, L, "bpsk", None), cfg, "bpsk", scale)


# --- output -----------------------------------------------------------------


def curves_to_csv(curves: Sequence[ErrorCurve], seed: int) -> str:
    buf = io.StringIO()
    buf.write(f"# icpsk-sim schema={SCHEMA_VERSION}\n")
    buf.write(",".join(CSV_COLUMNS) + "\n")
    for cv in curves:
        for db, rate, trials in cv.points:
            buf.write(f"{db!r},R{cv.receiver_id},{cv.scheme},{rate!r},{trials},{seed}\n")
    return buf.getvalue()


def read_csv(text: str) -> list[ErrorCurve]:
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    if not lines or tuple(lines[0].split(",")) != CSV_COLUMNS:
        raise ValueError("not a simulation CSV")
    curves: dict[tuple[int, str], ErrorCurve] = {}
    for ln in lines[1:]:
        db, rid, scheme, rate, trials, _ = ln.split(",")
        key = (int(rid[1:]), scheme)
        cv = curves.setdefault(key, ErrorCurve(key[0], scheme))
        cv.points.append((float(db), float(rate), int(trials)))
        cv.errors.append(round(float(rate) * int(trials)))
    return list(curves.values())


def crossing_db(curve: ErrorCurve, target: float) -> Optional[float]:
    """First Eb/N0 where the curve falls to ``target``, interpolating
    log10(rate) linearly between grid points."""
    pts = curve.points
    for (d0, r0, _), (d1, r1, _) in zip(pts, pts[1:]):
        if r0 >= target > r1:
            if r1 <= 0:
                return d1
            l0, l1, lt = math.log10(r0), math.log10(r1), math.log10(target)
            return d0 + (d1 - d0) * (l0 - lt) / (l0 - l1)
    return None


def q_function(x: float) -> float:
    return 0.5 * math.erfc(x / math.sqrt(2))
