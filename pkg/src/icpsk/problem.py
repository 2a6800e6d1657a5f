"""Index coding problem instances: parsing, validation, normalization.

Message indices are 1-based in files and in ``Receiver`` objects, matching
the usual notation x_1..x_n. Helpers that index arrays convert to 0-based.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence


class ProblemError(ValueError):
    """Malformed or inconsistent index coding problem."""


@dataclass(frozen=True)
class Receiver:
    demand: int
    known: frozenset[int] = field(default_factory=frozenset)

    def known_sorted(self) -> tuple[int, ...]:
        return tuple(sorted(self.known))


@dataclass(frozen=True)
class RawReceiver:
    demands: tuple[int, ...]
    known: frozenset[int] = field(default_factory=frozenset)


@dataclass(frozen=True)
class IndexCodingProblem:
    n: int
    receivers: tuple[Receiver, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ProblemError("n must be >= 1")
        if not self.receivers:
            raise ProblemError("at least one receiver is required")
        for i, r in enumerate(self.receivers, start=1):
            _check_indices(self.n, i, (r.demand,), r.known)

    @property
    def m(self) -> int:
        return len(self.receivers)


def _check_indices(n: int, i: int, demands: Iterable[int], known: Iterable[int]) -> None:
    known = set(known)
    for j in list(demands) + sorted(known):
        if not 1 <= j <= n:
            raise ProblemError(f"receiver R{i}: message index {j} out of range 1..{n}")
    for d in demands:
        if d in known:
            raise ProblemError(f"receiver R{i}: demanded message {d} is also in its known set")
    if len(known) == n:
        raise ProblemError(f"receiver R{i}: known set cannot be the full message set")


def normalize(n: int, raw: Sequence[RawReceiver]) -> IndexCodingProblem:
    """Split multi-demand receivers into single-demand ones.

    Receiver i keeps its first demand in place; its further demands become
    new receivers appended after all originals, in demand order.
    """
    if not raw:
        raise ProblemError("at least one receiver is required")
    first: list[Receiver] = []
    extra: list[Receiver] = []
    for i, r in enumerate(raw, start=1):
        if not r.demands:
            raise ProblemError(f"receiver R{i}: empty demand set")
        _check_indices(n, i, r.demands, r.known)
        known = frozenset(r.known)
        first.append(Receiver(r.demands[0], known))
        extra.extend(Receiver(d, known) for d in r.demands[1:])
    return IndexCodingProblem(n, tuple(first + extra))


def from_dict(data: dict) -> IndexCodingProblem:
    try:
        n = data["n"]
        items = data["receivers"]
    except (KeyError, TypeError) as exc:
        raise ProblemError(f"problem must have fields 'n' and 'receivers': {exc}") from None
    if not isinstance(n, int) or isinstance(n, bool):
        raise ProblemError("'n' must be an integer")
    if not isinstance(items, list):
        raise ProblemError("'receivers' must be a list")
    raw = []
    for i, item in enumerate(items, start=1):
        if not isinstance(item, dict) or "demands" not in item:
            raise ProblemError(f"receiver R{i}: expected an object with 'demands'")
        demands = item["demands"]
        knows = item.get("knows", [])
        if isinstance(demands, int):
            demands = [demands]
        if not all(isinstance(v, int) and not isinstance(v, bool) for v in list(demands) + list(knows)):
            raise ProblemError(f"receiver R{i}: indices must be integers")
        if len(set(demands)) != len(demands):
            raise ProblemError(f"receiver R{i}: repeated demand")
        raw.append(RawReceiver(tuple(demands), frozenset(knows)))
    return normalize(n, raw)


def parse_problem(text: str) -> IndexCodingProblem:
    """Parse problem-file content (JSON) into a normalized problem."""
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ProblemError(f"invalid JSON: {exc}") from None
    return from_dict(data)


def load_problem(path) -> IndexCodingProblem:
    return parse_problem(Path(path).read_text())


def to_dict(p: IndexCodingProblem) -> dict:
    return {
        "n": p.n,
        "receivers": [{"demands": [r.demand], "knows": list(r.known_sorted())} for r in p.receivers],
    }


def serialize(p: IndexCodingProblem) -> str:
    return json.dumps(to_dict(p), indent=2) + "\n"


def random_problem(n: int, m: int, seed: int, p_known: float = 0.5) -> IndexCodingProblem:
    """Seeded random single-demand problem, used by tests."""
    rng = random.Random(seed)
    receivers = []
    for _ in range(m):
        demand = rng.randint(1, n)
        known = frozenset(j for j in range(1, n + 1) if j != demand and rng.random() < p_known)
        receivers.append(Receiver(demand, known))
    return IndexCodingProblem(n, tuple(receivers))
