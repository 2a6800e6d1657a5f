from itertools import product

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from icpsk import code, fixtures, gf2, problem
from icpsk.code import EncodingMatrix
from icpsk.problem import IndexCodingProblem, Receiver


def decodable_by_kernel(L, p):
    # linear code fails R_i iff some x with xL = 0 and x_K = 0 has x_demand = 1
    n = L.shape[0]
    for x in product((0, 1), repeat=n):
        if any(gf2.mul_vec(x, L)):
            continue
        for r in p.receivers:
            if x[r.demand - 1] and not any(x[j - 1] for j in r.known):
                return False
    return True


def brute_minrank(p):
    n = p.n
    for N in range(1, n + 1):
        for bits in product((0, 1), repeat=n * N):
            L = np.array(bits, dtype=np.uint8).reshape(n, N)
            if decodable_by_kernel(L, p):
                return N
    raise AssertionError("identity must decode")


def gaussian_binomial(n, k):
    num = den = 1
    for i in range(k):
        num *= 2 ** (n - i) - 1
        den *= 2 ** (i + 1) - 1
    return num // den


@pytest.mark.parametrize("n, N", [(3, 1), (3, 2), (4, 2), (5, 3), (6, 3)])
def test_reduced_bases_enumerate_each_subspace_once(n, N):
    bases = list(code.reduced_bases(n, N))
    assert len(bases) == gaussian_binomial(n, N)
    spans = {frozenset(_span(b)) for b in bases}
    assert len(spans) == len(bases)
    assert bases == sorted(bases)


def _span(vs):
    out = {0}
    for v in vs:
        out |= {e ^ v for e in out}
    return out


@st.composite
def small_problems(draw, max_n=4):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(1, 4))
    rs = []
    for _ in range(m):
        d = draw(st.integers(1, n))
        known = draw(st.sets(st.sampled_from([j for j in range(1, n + 1) if j != d]))) if n > 1 else set()
        rs.append(Receiver(d, frozenset(known)))
    return IndexCodingProblem(n, tuple(rs))


@settings(max_examples=60)
@given(small_problems(max_n=3))
def test_minrank_matches_exhaustive_matrices(p):
    N, L = code.find_minrank(p)
    assert N == brute_minrank(p)
    assert decodable_by_kernel(L.L, p)


@settings(max_examples=60)
@given(small_problems(max_n=5), st.data())
def test_decodability_matches_kernel_oracle(p, data):
    N = data.draw(st.integers(1, p.n))
    bits = data.draw(st.lists(st.integers(0, 1), min_size=p.n * N, max_size=p.n * N))
    L = np.array(bits, dtype=np.uint8).reshape(p.n, N)
    assert code.is_decodable(EncodingMatrix(L), p) == decodable_by_kernel(L, p)


@settings(max_examples=40)
@given(small_problems(max_n=5))
def test_minrank_result_is_minimal(p):
    N, L = code.find_minrank(p)
    assert code.is_decodable(L, p)
    for shorter in range(1, N):
        assert not any(
            all(code._receiver_decodable(cols, r, p.n) for r in p.receivers)
            for cols in code.reduced_bases(p.n, shorter)
        )


@pytest.mark.parametrize("name, N", [("example1", 4), ("example2", 3), ("example3", 4), ("example4", 3), ("example5", 2), ("example6", 3)])
def test_minrank_on_fixtures(name, N):
    assert code.find_minrank(fixtures.problem(name))[0] == N


def test_trivial_problem():
    p = problem.from_dict({"n": 1, "receivers": [{"demands": [1]}]})
    N, L = code.find_minrank(p)
    assert N == 1 and L.L.tolist() == [[1]]


def test_budget_exhaustion():
    with pytest.raises(code.BudgetExceeded) as info:
        code.find_minrank(fixtures.problem("example1"), budget=5)
    assert info.value.tests == 5


def test_find_code_of_each_length(fixture_pair):
    p, _ = fixture_pair
    for N in range(code.find_minrank(p)[0], p.n + 1):
        L = code.find_code(p, N)
        assert L.N == N and code.is_decodable(L, p)


def test_find_code_below_minrank_fails():
    with pytest.raises(code.NotDecodableError):
        code.find_code(fixtures.problem("example1"), 3)


def test_fixture_codes_are_decodable(fixture_pair):
    p, L = fixture_pair
    assert code.is_decodable(L, p)
    assert code.undecodable_receivers(L, p) == []


def test_noiseless_decoding_every_message_vector(fixture_pair):
    p, L = fixture_pair
    dvs = [code.decoding_vector(L, r) for r in p.receivers]
    for x in product((0, 1), repeat=p.n):
        y = code.encode(x, L)
        for r, dv in zip(p.receivers, dvs):
            xk = [x[j - 1] for j in r.known_sorted()]
            assert dv.apply(y, xk) == x[r.demand - 1]


def test_decoding_vector_not_decodable():
    p = fixtures.problem("example1")
    L = EncodingMatrix(np.eye(7, 3, dtype=np.uint8))
    bad = code.undecodable_receivers(L, p)
    assert bad
    with pytest.raises(code.NotDecodableError):
        code.decoding_vector(L, p.receivers[bad[0]])


def test_dimension_mismatch():
    with pytest.raises(code.CodeError):
        code.is_decodable(fixtures.matrix("example4"), fixtures.problem("example1"))


def test_matrix_roundtrip(tmp_path, fixture_pair):
    _, L = fixture_pair
    code.save_matrix(L, tmp_path / "L.json")
    assert code.load_matrix(tmp_path / "L.json") == L


@pytest.mark.parametrize(
    "data",
    [
        {"n": 2, "N": 1, "rows": ["1"]},
        {"n": 1, "N": 1, "rows": ["2"]},
        {"n": 1, "N": 2, "rows": ["11"]},
        {"rows": ["1"]},
    ],
)
def test_bad_matrix(data):
    with pytest.raises(code.CodeError):
        code.matrix_from_dict(data)


def test_identity_code_always_decodes():
    for seed in range(20):
        p = problem.random_problem(5, 4, seed)
        assert code.is_decodable(EncodingMatrix.identity(5), p)
