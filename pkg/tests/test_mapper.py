from itertools import combinations

import pytest
from hypothesis import assume, given, settings, strategies as st

from icpsk import analysis, code, fixtures, mapper, metrics, problem
from icpsk.code import EncodingMatrix
from icpsk.mapper import Constellation, PskMapping
from conftest import PAIRS


@pytest.mark.parametrize("N", [1, 2, 3, 4, 5])
def test_d2_matches_point_coordinates(N):
    c = Constellation(N, e_b=1.3)
    pts = c.points
    for k in range(c.order):
        assert abs(pts[k]) ** 2 == pytest.approx(N * 1.3)
        assert c.d2(0, k) == pytest.approx(abs(pts[0] - pts[k]) ** 2)


def test_known_psk_distances():
    assert Constellation(4).d2_min == pytest.approx(0.6090, abs=1e-4)
    assert Constellation(3).d2_min == pytest.approx(1.7574, abs=1e-4)
    assert Constellation(5).d2_min == pytest.approx(0.1921, abs=1e-4)
    assert Constellation(2).d2_min == pytest.approx(4.0)


def test_mapping_must_be_bijection():
    with pytest.raises(ValueError):
        PskMapping(2, (0, 1, 1, 3))


def test_mapping_lines():
    m = PskMapping(2, (3, 0, 1, 2))
    assert m.lines() == ["00 3", "01 0", "10 1", "11 2"]
    assert m.codeword_of == (1, 2, 3, 0)


def brute_potential(placed, free, size, M):
    need = size - len(placed)
    best = 0
    for extra in combinations(free, need):
        pts = list(placed) + list(extra)
        g = min((min(abs(a - b) % M, M - abs(a - b) % M) for a, b in combinations(pts, 2)), default=M)
        best = max(best, g)
    return best


@settings(max_examples=300)
@given(st.integers(2, 4), st.data())
def test_potential_matches_brute_force(N, data):
    M = 2**N
    pts = data.draw(st.permutations(range(M)))
    n_placed = data.draw(st.integers(0, M - 1))
    placed, rest = list(pts[:n_placed]), list(pts[n_placed:])
    free = data.draw(st.lists(st.sampled_from(rest), unique=True))
    size = n_placed + data.draw(st.integers(0, len(free)))
    assume(size >= 2)
    assert mapper.potential(placed, free, size, M) == brute_potential(placed, free, size, M)


@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_algorithm1_is_a_deterministic_bijection(n, m, seed):
    p = problem.random_problem(n, m, seed)
    _, L = code.find_minrank(p)
    a = mapper.algorithm1(p, L)
    assert sorted(a.point_of) == list(range(2**L.N))
    assert mapper.algorithm1(p, L) == a


@settings(max_examples=40)
@given(st.integers(2, 6), st.integers(1, 6), st.integers(0, 10**6))
def test_top_receiver_first_subcode_is_evenly_spread(n, m, seed):
    p = problem.random_problem(n, m, seed)
    _, L = code.find_minrank(p)
    order = analysis.order_receivers(p, L)
    top = order[0]
    if analysis.eta(p, L, top) >= L.N:
        return
    first = analysis.receiver_codebooks(L, p.receivers[top])[0]
    M = 2**L.N
    mp = mapper.algorithm1(p, L)
    gaps = metrics._pair_gaps([mp.point_of[c] for c in first], M)
    assert min(gaps, default=M) == M // len(first)


def test_arbitrary_map_when_nobody_benefits():
    p = problem.from_dict({"n": 2, "receivers": [{"demands": [1]}, {"demands": [2]}]})
    L = EncodingMatrix.identity(2)
    assert mapper.algorithm1(p, L) == mapper.arbitrary_map(2)


def test_trace_records_every_placement():
    p, L = fixtures.problem("example1"), fixtures.matrix("example1")
    trace = []
    m = mapper.algorithm1(p, L, trace=trace)
    assert len(trace) == 16
    assert {(c, k) for _, c, k in trace} == set(enumerate(m.point_of))


def _d2(name, code_name, priority=None):
    p, L = fixtures.problem(name), fixtures.matrix(code_name)
    m = mapper.algorithm1(p, L, priority)
    c = Constellation(L.N)
    return [round(metrics.dmin_receiver(m, c, L, r), 2) for r in p.receivers]


def test_example4_priority_swaps_top_receivers():
    a = _d2("example4", "example4_L")
    b = _d2("example4", "example4_L", [1])
    assert (a[0], a[1]) == (b[1], b[0]) == (6.0, 1.76)
    assert a[2:] == b[2:]


def test_first_codeword_goes_to_point_zero(fixture_pair):
    p, L = fixture_pair
    m = mapper.algorithm1(p, L)
    order = analysis.order_receivers(p, L)
    if analysis.eta(p, L, order[0]) < L.N:
        first = min(analysis.receiver_codebooks(L, p.receivers[order[0]])[0])
        assert m.point_of[first] == 0


def sandwich_violations():
    out = []
    for ex, c in PAIRS:
        p, L = fixtures.problem(ex), fixtures.matrix(c)
        m = mapper.algorithm1(p, L)
        M = 2**L.N
        for i, r in enumerate(p.receivers):
            eta = analysis.eta(p, L, i)
            if eta >= L.N:
                continue
            gap = min(
                (g for C in analysis.receiver_codebooks(L, r) for g in metrics._pair_gaps([m.point_of[x] for x in C], M)),
                default=M,
            )
            if not M // 2 ** (eta + 1) <= gap <= M // 2**eta:
                out.append((c, f"R{i + 1}"))
    return out


def test_distance_sandwich_holds_except_known_case():
    # 32-PSK, 5 receivers: a receiver with eta = 3 ends up with adjacent
    # points in one of its subcodes once the higher-priority receivers are placed
    assert sandwich_violations() == [("example6_L3", "R3")]


def test_n2_labeling_is_optimal_for_top_receiver():
    from itertools import permutations

    p, L = fixtures.problem("example5"), fixtures.matrix("example5_L1")
    c = Constellation(2)
    best = max(
        metrics.dmin_receiver(PskMapping(2, perm), c, L, p.receivers[0]) for perm in permutations(range(4))
    )
    got = metrics.dmin_receiver(mapper.algorithm1(p, L), c, L, p.receivers[0])
    assert got == pytest.approx(best) == pytest.approx(8.0)
