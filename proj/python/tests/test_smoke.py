import math

import pytest

import upcross


def test_intervals():
    assert upcross.union_size([(1, 3), (2, 5)]) == 5
    assert upcross.blowup(5, 8, 0.25) == (4, 9)
    assert upcross.vitali_select([(1, 4), (3, 6), (5, 8)]) == [(1, 4), (5, 8)]
    covered, witness = upcross.max_disjoint_coverage((1, 10), [(1, 4), (4, 7), (6, 10)])
    assert covered == 9
    assert witness == [(1, 4), (6, 10)]
    assert upcross.is_delta_fill((1, 10), [(1, 4), (4, 7), (6, 10)], 0.15)
    assert not upcross.is_delta_fill((1, 10), [(1, 4), (4, 7), (6, 10)], 0.05)


def test_models():
    pi = upcross.stationary_dist([[0.9, 0.1], [0.2, 0.8]])
    assert pi == pytest.approx([2 / 3, 1 / 3])
    mk = upcross.ProcessModel.from_json('{"type": "markov", "transition": [[0.9, 0.1], [0.2, 0.8]]}')
    assert mk.word_prob([0, 0]) == pytest.approx(0.6)
    assert upcross.ProcessModel.bernoulli(0.5).word_prob([0, 1, 0]) == pytest.approx(0.125)
    with pytest.raises(ValueError):
        upcross.ProcessModel.from_json('{"type": "markov"}')
    symbols, values = upcross.sample(mk, 50, 3)
    assert len(symbols) == 50
    assert upcross.sample(mk, 50, 3) == (symbols, values)


def test_statistics_and_bounds():
    assert upcross.count_upcrossings([-1, 2, -1, 2], 0.0, 1.0) == 2
    assert upcross.lz78_phrase_count([0, 0, 1, 1]) == 3
    assert upcross.lz78_rate([0, 0, 1, 1], 1, 4) == pytest.approx(3 * (math.log2(3) + 1) / 4)
    assert upcross.q_of_delta(0.3) == 27
    assert upcross.ivanov_bound(0.4, 0.6, 3) == pytest.approx(8 / 27)
    assert upcross.t11_bound(5, 0.2) == 1.0
    assert upcross.smb_count_oracle(upcross.ProcessModel.bernoulli(0.5), 8, 50.0, 0.1) == 256
    lo, hi = upcross.wilson_interval(50, 100)
    assert lo == pytest.approx(0.4038, abs=1e-3)
    assert hi == pytest.approx(0.5962, abs=1e-3)


def test_harness():
    hits, phases = upcross.prop21_exact(9, 0.2)
    assert phases == 18
    assert 6 * hits >= phases
    est = upcross.run_experiment('{"type": "iid", "p": 0.5}', "avg", 0.4, 0.6, 0.1, 3, 200, 200, 5, rhs=True)
    assert [e["k"] for e in est] == [1, 2, 3]
    assert all(a["hits"] >= b["hits"] for a, b in zip(est, est[1:]))
    assert est[0]["rhs_hat"] is not None
    suites = upcross.run_suites(20, 1, [0.5])
    assert {s["name"] for s in suites} >= {"vitali_select", "blowup_union", "dichotomy"}
