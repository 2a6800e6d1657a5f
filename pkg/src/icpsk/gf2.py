"""Dense linear algebra over GF(2).

Vectors and matrices are plain {0,1} sequences (numpy ``uint8`` arrays on
output). Internally rows are packed into Python ints where it pays off.
"""

from __future__ import annotations

from typing import Optional, Sequence

import numpy as np


def as_bitvector(x) -> np.ndarray:
    v = np.asarray(x, dtype=np.uint8).reshape(-1)
    if v.size == 0:
        raise ValueError("bit vector must have length >= 1")
    if np.any(v > 1):
        raise ValueError("bit vector entries must be 0 or 1")
    return v


def as_bitmatrix(M) -> np.ndarray:
    A = np.asarray(M, dtype=np.uint8)
    if A.ndim != 2 or A.shape[0] == 0 or A.shape[1] == 0:
        raise ValueError(f"expected a non-empty 2-D bit matrix, got shape {A.shape}")
    if np.any(A > 1):
        raise ValueError("bit matrix entries must be 0 or 1")
    return A


def pack(bits: Sequence[int]) -> int:
    """Pack bits into an int, first element as the most significant bit."""
    out = 0
    for b in bits:
        out = (out << 1) | int(b)
    return out


def unpack(value: int, length: int) -> np.ndarray:
    return np.array([(value >> (length - 1 - k)) & 1 for k in range(length)], dtype=np.uint8)


def rank_packed(rows: Sequence[int]) -> int:
    """Rank of a set of packed vectors (XOR basis insertion)."""
    basis: dict[int, int] = {}
    for v in rows:
        while v:
            top = v.bit_length() - 1
            if top not in basis:
                basis[top] = v
                break
            v ^= basis[top]
    return len(basis)


def rank(M) -> int:
    """GF(2) rank of a bit matrix."""
    A = as_bitmatrix(M)
    return rank_packed([pack(r) for r in A])


def mul_vec(x, M) -> np.ndarray:
    """Row-vector times matrix over GF(2): returns ``xM``."""
    v = as_bitvector(x)
    A = as_bitmatrix(M)
    if v.size != A.shape[0]:
        raise ValueError(f"dimension mismatch: vector length {v.size}, matrix has {A.shape[0]} rows")
    return ((v.astype(np.int64) @ A.astype(np.int64)) & 1).astype(np.uint8)


def solve_in_span(target, basis: Sequence) -> Optional[np.ndarray]:
    """Coefficients ``c`` with ``sum_k c[k] * basis[k] == target``, or None.

    When several coefficient vectors work, the lexicographically smallest
    one is returned (``c[0]`` is the most significant position).
    """
    t = as_bitvector(target)
    k = len(basis)
    if k == 0:
        return np.zeros(0, dtype=np.uint8) if not t.any() else None
    B = np.array([as_bitvector(b) for b in basis], dtype=np.uint8)
    if B.shape[1] != t.size:
        raise ValueError("target and basis vectors must share one length")

    # Gaussian elimination on the system B^T c = t, tracking which
    # combination of basis vectors produced each reduced row.
    rows = [(pack(B[j]), 1 << (k - 1 - j)) for j in range(k)]
    pivots: dict[int, tuple[int, int]] = {}
    null_vectors: list[int] = []
    for vec, combo in rows:
        while vec:
            top = vec.bit_length() - 1
            if top not in pivots:
                pivots[top] = (vec, combo)
                break
            pv, pc = pivots[top]
            vec ^= pv
            combo ^= pc
        else:
            null_vectors.append(combo)

    rem = pack(t)
    coeff = 0
    while rem:
        top = rem.bit_length() - 1
        if top not in pivots:
            return None
        pv, pc = pivots[top]
        rem ^= pv
        coeff ^= pc

    # Reduce the particular solution by a reduced echelon basis of the
    # null space; zeroing every pivot gives the lexicographic minimum.
    reduced: dict[int, int] = {}
    for v in null_vectors:
        for top, r in reduced.items():
            if (v >> top) & 1:
                v ^= r
        if not v:
            continue
        top = v.bit_length() - 1
        for t2 in list(reduced):
            if (reduced[t2] >> top) & 1:
                reduced[t2] ^= v
        reduced[top] = v
    for top, r in reduced.items():
        if (coeff >> top) & 1:
            coeff ^= r
    return unpack(coeff, k)
