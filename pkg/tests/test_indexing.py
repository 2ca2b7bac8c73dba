import numpy as np
import pytest

from hermkin.indexing import IndexLayout, index_count, layout


def test_count_trivial():
    assert index_count(0) == 1


def test_count_reference_sizes():
    # expansion sizes used by the cavity benchmark runs
    assert index_count(25) == 3276
    assert index_count(35) == 8436


def test_count_matches_enumeration():
    for m in range(8):
        assert index_count(m) == len(layout(m))


def test_count_rejects_negative():
    with pytest.raises(ValueError):
        index_count(-1)


def test_rank_zero_is_first():
    assert layout(6).rank((0, 0, 0)) == 0


def test_rank_unrank_bijection():
    lay = layout(7)
    for i in range(lay.size):
        assert lay.rank(lay.unrank(i)) == i
    assert lay.unrank(lay.rank((1, 2, 0))) == (1, 2, 0)


def test_rank_preserves_grading():
    lay = layout(9)
    degs = [sum(lay.unrank(i)) for i in range(lay.size)]
    assert degs == sorted(degs)


def test_degree_one_ranks():
    lay = layout(4)
    ranks = {lay.rank(a) for a in [(1, 0, 0), (0, 1, 0), (0, 0, 1)]}
    assert ranks == {1, 2, 3}


def test_truncation_is_prefix():
    small, big = layout(3), layout(6)
    for i in range(small.size):
        assert small.unrank(i) == big.unrank(i)


def test_rank_rejects_overflow_and_negative():
    lay = layout(3)
    with pytest.raises(ValueError):
        lay.rank((2, 1, 1))
    with pytest.raises(ValueError):
        lay.rank((-1, 0, 0))


def test_shift_tables():
    lay = layout(5)
    for i in range(lay.size):
        a = lay.unrank(i)
        for d in range(3):
            up = lay.shift_up[d, i]
            expected = list(a)
            expected[d] += 1
            if sum(expected) <= 5:
                assert lay.unrank(up) == tuple(expected)
            else:
                assert up == -1
            dn = lay.shift_down[d, i]
            if a[d] >= 1:
                expected = list(a)
                expected[d] -= 1
                assert lay.unrank(dn) == tuple(expected)
            else:
                assert dn == -1


def test_layout_cache_shares_instances():
    assert layout(4) is layout(4)
    assert isinstance(layout(4), IndexLayout)
