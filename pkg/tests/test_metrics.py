import json
import math

import pytest
from hypothesis import given, strategies as st

from icpsk import fixtures, mapper, metrics
from icpsk.mapper import Constellation


def report(name, code_name, priority=None):
    p, L = fixtures.problem(name), fixtures.matrix(code_name)
    return metrics.gain_report(p, L, mapper.algorithm1(p, L, priority))


def test_gains_formula():
    sicg, acg, bw = metrics.gains(16.0, Constellation(4).d2_min, 4.0, 4)
    assert sicg == pytest.approx(10 * math.log10(16 / (4 * 4 * math.sin(math.pi / 16) ** 2)))
    assert acg == pytest.approx(10 * math.log10(4))
    assert bw == 2


@given(st.floats(0.01, 100), st.floats(0.01, 100), st.floats(0.01, 100), st.integers(1, 8))
def test_gain_identities(a, b, c, N):
    sicg, acg, bw = metrics.gains(a, b, c, N)
    assert sicg - acg == pytest.approx(10 * math.log10(c / b), abs=1e-9)
    assert bw == N / 2


def test_gains_reject_nonpositive():
    with pytest.raises(ValueError):
        metrics.gains(0.0, 1.0, 4.0, 2)


def test_example1_report_values():
    rows = [r.row() for r in report("example1", "example1_L").receivers]
    assert [r["d2_psk"] for r in rows] == [16.0, 8.0, 8.0, 0.61, 0.61, 0.61, 0.61]
    d16 = 4 * 4 * math.sin(math.pi / 16) ** 2
    sicg = [10 * math.log10(d / d16) for d in (16, 8, 8, d16, d16, d16, d16)]
    assert [r["sicg_db"] for r in rows] == [round(v, 2) for v in sicg]
    assert [r["acg_db"] for r in rows][:3] == [6.02, 3.01, 3.01]
    assert all(r["bandwidth_gain"] == 2.0 and r["d2_binary"] == 4.0 for r in rows)


def test_non_benefiting_receivers_get_zero_sicg(fixture_pair):
    p, L = fixture_pair
    rep = metrics.gain_report(p, L, mapper.algorithm1(p, L))
    for r in rep.receivers:
        assert r.sicg_db >= -1e-12
        if not r.gets_sicg:
            assert r.sicg_db == pytest.approx(0.0, abs=1e-12)


def test_distance_distribution_counts_all_pairs(fixture_pair):
    p, L = fixture_pair
    rep = metrics.gain_report(p, L, mapper.algorithm1(p, L))
    for r in rep.receivers:
        assert sum(c for _, c in r.distance_distribution) == math.comb(r.effective_size, 2)
        assert r.distance_distribution[0][0] >= r.d2_psk - 1e-12


def test_example4_spectra():
    rec = report("example4", "example4_L").receivers
    spectra = [[(round(d, 2), c) for d, c in r.distance_distribution] for r in rec]
    assert spectra[0] == [(6.0, 4), (12.0, 2)]
    for s in spectra[2:]:
        assert s == [(1.76, 8), (6.0, 8), (10.24, 8), (12.0, 4)]


def test_worst_case_not_above_zero_realization(fixture_pair):
    p, L = fixture_pair
    for r in metrics.gain_report(p, L, mapper.algorithm1(p, L)).receivers:
        assert r.d2_psk <= r.d2_psk_zero + 1e-12


def test_report_is_json_serializable():
    data = report("example3", "example3_L").to_dict()
    assert json.loads(json.dumps(data))["N"] == 4


def test_energy_scaling_leaves_gains_unchanged():
    p, L = fixtures.problem("example2"), fixtures.matrix("example2")
    m = mapper.algorithm1(p, L)
    a = metrics.gain_report(p, L, m, e_b=1.0)
    b = metrics.gain_report(p, L, m, e_b=2.5)
    for x, y in zip(a.receivers, b.receivers):
        assert y.d2_psk == pytest.approx(2.5 * x.d2_psk)
        assert (y.sicg_db, y.acg_db) == pytest.approx((x.sicg_db, x.acg_db))
