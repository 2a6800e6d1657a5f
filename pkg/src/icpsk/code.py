"""Linear index codes over GF(2): decodability, minrank search, encoding and
per-receiver linear decoders."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator, Optional

import numpy as np

from . import gf2
from .problem import IndexCodingProblem, Receiver

DEFAULT_BUDGET = 10**7


class CodeError(ValueError):
    """Malformed encoding matrix or dimension mismatch."""


class NotDecodableError(ValueError):
    """The encoding matrix does not let some receiver recover its demand."""


class BudgetExceeded(RuntimeError):
    """Minrank search ran out of decodability tests."""

    def __init__(self, tests: int, reached_N: int):
        super().__init__(f"minrank search budget exhausted after {tests} tests (still at N={reached_N})")
        self.tests = tests
        self.reached_N = reached_N


@dataclass(frozen=True, eq=False)
class EncodingMatrix:
    """n x N matrix ``L`` over GF(2); the codeword for messages x is ``xL``."""

    L: np.ndarray

    def __post_init__(self):
        A = gf2.as_bitmatrix(self.L)
        A.setflags(write=False)
        object.__setattr__(self, "L", A)

    @property
    def n(self) -> int:
        return self.L.shape[0]

    @property
    def N(self) -> int:
        return self.L.shape[1]

    def __eq__(self, other):
        return isinstance(other, EncodingMatrix) and np.array_equal(self.L, other.L)

    def __hash__(self):
        return hash((self.L.shape, self.L.tobytes()))

    def column_ints(self) -> list[int]:
        """Columns packed with message 1 as the most significant bit."""
        return [gf2.pack(self.L[:, j]) for j in range(self.N)]

    def row_ints(self) -> list[int]:
        """Rows packed with y_1 as the most significant bit."""
        return [gf2.pack(r) for r in self.L]

    @classmethod
    def from_columns(cls, columns: list[int], n: int) -> "EncodingMatrix":
        return cls(np.stack([gf2.unpack(c, n) for c in columns], axis=1))

    @classmethod
    def identity(cls, n: int) -> "EncodingMatrix":
        return cls(np.eye(n, dtype=np.uint8))


@dataclass(frozen=True, eq=False)
class DecodingVector:
    """Linear decoder: ``x_demand = u . y  xor  v . x_known`` (known sorted)."""

    u: np.ndarray
    v: np.ndarray
    known: tuple[int, ...]

    def apply(self, y, x_known) -> int:
        y = np.asarray(y, dtype=np.int64)
        xk = np.asarray(x_known, dtype=np.int64)
        return int((y @ self.u + xk @ self.v) & 1) if self.v.size else int((y @ self.u) & 1)


def _bit(j: int, n: int) -> int:
    """Packed unit vector for 1-based message index j."""
    return 1 << (n - j)


def _known_mask(r: Receiver, n: int) -> int:
    mask = 0
    for j in r.known:
        mask |= _bit(j, n)
    return mask


def _receiver_decodable(columns: list[int], r: Receiver, n: int) -> bool:
    unknown = ((1 << n) - 1) & ~_known_mask(r, n)
    restricted = [c & unknown for c in columns]
    target = _bit(r.demand, n)
    basis: dict[int, int] = {}
    for v in restricted:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    while target:
        top = target.bit_length() - 1
        if top not in basis:
            return False
        target ^= basis[top]
    return True


def _check_dims(L: EncodingMatrix, p: IndexCodingProblem) -> None:
    if L.n != p.n:
        raise CodeError(f"dimension mismatch: L has {L.n} rows, problem has n={p.n}")


def is_decodable(L: EncodingMatrix, p: IndexCodingProblem) -> bool:
    _check_dims(L, p)
    cols = L.column_ints()
    return all(_receiver_decodable(cols, r, p.n) for r in p.receivers)


def undecodable_receivers(L: EncodingMatrix, p: IndexCodingProblem) -> list[int]:
    """0-based indices of receivers that cannot decode under L."""
    _check_dims(L, p)
    cols = L.column_ints()
    return [i for i, r in enumerate(p.receivers) if not _receiver_decodable(cols, r, p.n)]


def reduced_bases(n: int, N: int) -> Iterator[list[int]]:
    """All N-dimensional subspaces of GF(2)^n, one reduced basis each.

    A basis is reduced when every vector's leading bit is clear in all the
    others. Bases are sorted increasingly and yielded in lexicographic
    order of that sorted tuple of column values.
    """
    top = 1 << n

    def extend(prefix: list[int], pivot_mask: int, start: int):
        if len(prefix) == N:
            yield list(prefix)
            return
        need = N - len(prefix)
        for c in range(start, top):
            lead = c.bit_length() - 1
            # leading bits must strictly increase, so n - lead positions remain
            if n - lead < need:
                break
            if c & pivot_mask:
                continue
            prefix.append(c)
            yield from extend(prefix, pivot_mask | (1 << lead), c + 1)
            prefix.pop()

    yield from extend([], 0, 1)


def find_minrank(
    p: IndexCodingProblem, n_max: Optional[int] = None, budget: int = DEFAULT_BUDGET
) -> tuple[int, EncodingMatrix]:
    """Shortest linear index code by exhaustive search over column spaces.

    Decodability depends only on the column space of L, so each subspace is
    tested once via its reduced basis. Raises BudgetExceeded after
    ``budget`` decodability tests.
    """
    n = p.n
    n_max = n if n_max is None else min(n_max, n)
    tests = 0
    for N in range(1, n_max + 1):
        for cols in reduced_bases(n, N):
            if tests >= budget:
                raise BudgetExceeded(tests, N)
            tests += 1
            if all(_receiver_decodable(cols, r, n) for r in p.receivers):
                return N, EncodingMatrix.from_columns(cols, n)
    # the identity code always works at N = n, so only a capped n_max lands here
    raise CodeError(f"no decodable code of length <= {n_max}")


def find_code(p: IndexCodingProblem, N: int, budget: int = DEFAULT_BUDGET) -> EncodingMatrix:
    """First decodable code of exactly length N in the same enumeration."""
    if not 1 <= N <= p.n:
        raise CodeError(f"code length must be in 1..{p.n}, got {N}")
    tests = 0
    for cols in reduced_bases(p.n, N):
        if tests >= budget:
            raise BudgetExceeded(tests, N)
        tests += 1
        if all(_receiver_decodable(cols, r, p.n) for r in p.receivers):
            return EncodingMatrix.from_columns(cols, p.n)
    raise NotDecodableError(f"no decodable code of length {N}")


def encode(x, L: EncodingMatrix) -> np.ndarray:
    return gf2.mul_vec(x, L.L)


def decoding_vector(L: EncodingMatrix, r: Receiver) -> DecodingVector:
    n, N = L.n, L.N
    known = r.known_sorted()
    basis = [L.L[:, j] for j in range(N)] + [gf2.unpack(_bit(j, n), n) for j in known]
    target = gf2.unpack(_bit(r.demand, n), n)
    c = gf2.solve_in_span(target, basis)
    if c is None:
        raise NotDecodableError(f"receiver demanding x{r.demand} cannot decode under this code")
    return DecodingVector(u=c[:N], v=c[N:], known=known)


def matrix_to_dict(L: EncodingMatrix) -> dict:
    return {"n": L.n, "N": L.N, "rows": ["".join(str(int(b)) for b in row) for row in L.L]}


def matrix_from_dict(data: dict) -> EncodingMatrix:
    try:
        n, N, rows = data["n"], data["N"], data["rows"]
    except (KeyError, TypeError) as exc:
        raise CodeError(f"matrix must have fields 'n', 'N', 'rows': {exc}") from None
    parsed = []
    for row in rows:
        bits = [int(ch) for ch in row] if isinstance(row, str) else list(row)
        if any(b not in (0, 1) for b in bits):
            raise CodeError("matrix entries must be 0 or 1")
        parsed.append(bits)
    if len(parsed) != n or any(len(r) != N for r in parsed):
        raise CodeError(f"matrix shape does not match n={n}, N={N}")
    if N > n:
        raise CodeError(f"code length N={N} exceeds n={n}")
    return EncodingMatrix(np.array(parsed, dtype=np.uint8))


def load_matrix(path) -> EncodingMatrix:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise CodeError(f"invalid JSON: {exc}") from None
    return matrix_from_dict(data)


def save_matrix(L: EncodingMatrix, path) -> None:
    Path(path).write_text(json.dumps(matrix_to_dict(L), indent=2) + "\n")
