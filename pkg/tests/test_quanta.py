from fractions import Fraction as F

import numpy as np
import pytest
from scipy import stats

from oracles import compositions
from quanta_stats.occupancy import EnumerationTooLarge, level_pmf, total_configurations
from quanta_stats.quanta import (
    Composition,
    SampleStats,
    _state_index,
    count_states,
    count_states_with_level,
    cross_route_check,
    enumerate_compositions,
    make_rng,
    quanta_pmf,
    sample_state,
    sample_states,
    sample_stats,
)


@pytest.mark.parametrize("N, s, n", [(4, 4, 35), (1, 0, 1), (1, 17, 1), (3, 3, 10)])
def test_count_states_examples(N, s, n):
    assert count_states(N, s) == n


def test_count_states_matches_enumeration():
    for N in range(1, 6):
        for s in range(0, 7):
            assert count_states(N, s) == len(compositions(N, s))


def test_count_states_symmetry():
    for N in range(1, 40):
        for s in range(0, 40):
            assert count_states(N, s) == count_states(s + 1, N - 1)


def test_enumerate_compositions():
    assert [c.quanta for c in enumerate_compositions(2, 2)] == [(0, 2), (1, 1), (2, 0)]
    assert len(enumerate_compositions(4, 4)) == 35
    assert len(enumerate_compositions(3, 2)) == 6
    for N in range(1, 5):
        for s in range(0, 6):
            assert [c.quanta for c in enumerate_compositions(N, s)] == compositions(N, s)


def test_enumerate_compositions_cap():
    with pytest.raises(EnumerationTooLarge):
        enumerate_compositions(30, 30)


def test_composition_type():
    c = Composition((1, 0, 3))
    assert (c.N, c.s) == (3, 4)
    with pytest.raises(ValueError):
        Composition(())
    with pytest.raises(ValueError):
        Composition((1, -1))


@pytest.mark.parametrize("k, n", [(0, 15), (1, 10), (2, 6), (3, 3), (4, 1)])
def test_count_states_with_level_worked_example(k, n):
    assert count_states_with_level(4, 4, k) == n


def test_count_states_with_level_brute_force():
    for N in range(2, 6):
        for s in range(0, 6):
            comps = compositions(N, s)
            for k in range(s + 1):
                assert count_states_with_level(N, s, k) == sum(1 for c in comps if c[0] == k)


def test_count_states_with_level_ranges():
    for args in [(1, 3, 0), (4, 4, 5), (4, 4, -1)]:
        with pytest.raises(ValueError):
            count_states_with_level(*args)


def test_hockey_stick():
    for N in range(2, 61):
        for s in range(0, 61):
            total = sum(count_states_with_level(N, s, k) for k in range(s + 1))
            assert total == count_states(N, s)


def test_quanta_pmf_examples():
    assert quanta_pmf(4, 4).entries == (F(15, 35), F(10, 35), F(6, 35), F(3, 35), F(1, 35))
    assert quanta_pmf(1, 2).entries == (0, 0, 1)
    assert quanta_pmf(5, 3).entries == (F(20, 35), F(10, 35), F(4, 35), F(1, 35))
    assert quanta_pmf(4, 4).route == "quanta"


def test_quanta_pmf_equals_level_pmf():
    for N in range(1, 41):
        for s in range(0, 41):
            assert quanta_pmf(N, s).entries == level_pmf(N, s).entries
            assert total_configurations(N, s) == count_states(N, s)


def test_cross_route_check():
    for N, s in [(4, 4), (1, 9), (1, 0), (40, 40)]:
        rep = cross_route_check(N, s)
        assert rep.passed and rep.failures == ()
    obj = cross_route_check(4, 4).to_json_obj()
    assert obj == {"N": 4, "s": 4, "passed": True, "C_I": "35", "S_II": "35", "failures": []}


def test_sample_state_single_particle():
    rng = make_rng(1)
    assert all(sample_state(1, 6, rng).quanta == (6,) for _ in range(20))


def test_sample_state_returns_valid_compositions():
    rng = make_rng(2)
    for _ in range(200):
        c = sample_state(5, 7, rng)
        assert c.N == 5 and c.s == 7


def test_sample_state_uniform_small():
    rng = make_rng(3)
    draws = 60_000
    counts = {}
    for _ in range(draws):
        q = sample_state(3, 2, rng).quanta
        counts[q] = counts.get(q, 0) + 1
    assert set(counts) == set(compositions(3, 2))
    res = stats.chisquare(list(counts.values()))
    assert res.pvalue > 0.001


def test_batch_sampler_rows_are_compositions():
    out = sample_states(4, 9, 5000, make_rng(4))
    assert out.shape == (5000, 4)
    assert (out >= 0).all() and (out.sum(axis=1) == 9).all()
    assert sample_states(1, 3, 10, make_rng(0)).tolist() == [[3]] * 10


def test_batch_sampler_is_reproducible():
    a = sample_states(4, 4, 1000, make_rng(9))
    b = sample_states(4, 4, 1000, make_rng(9))
    assert np.array_equal(a, b)


def test_state_index_is_lexicographic_rank():
    for N, s in [(2, 3), (4, 4), (3, 6)]:
        comps = np.array(compositions(N, s))
        assert _state_index(N, s)(comps).tolist() == list(range(len(comps)))


def test_slot_one_marginal_matches_pmf():
    st, _, slots = sample_stats(3, 2, 10**6, seed=11)
    p = np.array([float(x) for x in quanta_pmf(3, 2).entries])
    freq = slots[0] / st.draws
    sigma = np.sqrt(p * (1 - p) / st.draws)
    assert np.all(np.abs(freq - p) < 5 * sigma)


def test_marginal_symmetry_across_slots():
    _, _, slots = sample_stats(4, 4, 10**6, seed=12)
    res = stats.chi2_contingency(slots)
    assert res.pvalue > 0.001


def test_sample_stats_bookkeeping():
    st, counts, slots = sample_stats(4, 4, 12345, seed=5, chunk=1000)
    assert st.draws == 12345 and st.seed == 5
    assert sum(st.hist.values()) == st.draws * 4
    assert counts.sum() == 12345
    assert (slots.sum(axis=1) == 12345).all()
    obj = st.to_json_obj()
    assert obj["seed"] == 5 and obj["draws"] == 12345
    assert sum(h["count"] for h in obj["hist"]) == 4 * 12345


def test_sample_stats_merge_associative_commutative():
    a, _, _ = sample_stats(3, 3, 1000, seed=1)
    b, _, _ = sample_stats(3, 3, 2000, seed=2)
    c, _, _ = sample_stats(3, 3, 500, seed=3)
    ab_c = a.merge(b).merge(c)
    a_bc = a.merge(b.merge(c))
    assert ab_c.hist == a_bc.hist == c.merge(b).merge(a).hist
    assert ab_c.draws == 3500
    with pytest.raises(ValueError):
        a.merge(SampleStats(2, 3, 0))
