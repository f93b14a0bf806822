from __future__ import annotations

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from geode.core import (HomogeneousPoly, build_P, compositions, count_compositions,
                        divide_by_simplex, geode_number_oracle, geode_poly, geode_table,
                        hyper_catalan)
from geode.errors import ResourceLimitError
from helpers import catalan, naive_geode, naive_hyper_catalan

multi_index = st.lists(st.integers(0, 12), min_size=1, max_size=5)


@pytest.mark.parametrize("m, expected", [((3,), 5), ((1, 1), 5), ((0, 0, 0), 1), ((1,), 1),
                                         ((0, 1), 1), ((2, 1), 21)])
def test_hyper_catalan_small(m, expected):
    assert hyper_catalan(m) == expected


def test_hyper_catalan_k1_is_catalan():
    assert [hyper_catalan((n,)) for n in range(30)] == [catalan(n) for n in range(30)]


@given(multi_index)
def test_hyper_catalan_matches_factorials(m):
    assert hyper_catalan(m) == naive_hyper_catalan(m)


@pytest.mark.parametrize("bad", [(), (-1, 2), (1.5,), (True,)])
def test_hyper_catalan_rejects_bad_indices(bad):
    with pytest.raises((ValueError, TypeError)):
        hyper_catalan(bad)


def test_compositions_order_and_count():
    comps = list(compositions(4, 3))
    assert comps == sorted(comps, reverse=True)
    assert len(comps) == count_compositions(4, 3) == 15
    assert all(sum(c) == 4 for c in comps)


def test_build_P_examples():
    assert dict(build_P(1, 2).terms) == {(1, 0): 1, (0, 1): 1}
    assert dict(build_P(2, 1).terms) == {(2,): 2}


def test_divide_simplex_examples():
    q, r = divide_by_simplex(build_P(1, 2))
    assert dict(q.terms) == {(0, 0): 1} and r.is_zero()
    q, r = divide_by_simplex(HomogeneousPoly(2, 2, {(2, 0): 1, (0, 2): 1}))
    assert not r.is_zero()
    # quotient * s + remainder reconstructs the dividend
    assert q.times_simplex() + r == HomogeneousPoly(2, 2, {(2, 0): 1, (0, 2): 1})


@pytest.mark.parametrize("k, n_max", [(1, 10), (2, 12), (3, 10), (4, 8), (5, 6)])
def test_quotient_times_simplex_is_P(k, n_max):
    for n in range(n_max):
        assert geode_poly(n, k).times_simplex() == build_P(n + 1, k)


def test_geode_poly_examples():
    assert dict(geode_poly(0, 2).terms) == {(0, 0): 1}
    assert geode_poly(2, 2).coefficient((1, 1)) == 16
    assert geode_poly(3, 3).coefficient((1, 1, 1)) == 319


def test_geode_poly_iterates_lex_descending():
    exps = [e for e, _ in geode_poly(4, 3)]
    assert exps == sorted(exps, reverse=True)


@pytest.mark.parametrize("m, expected", [
    ((1, 1), 16), ((1, 1, 1), 319), ((2, 2, 2), 669123),
    ((4, 7, 8), 11258614474275030033600),
    # frozen from naive long division
    ((3, 3, 3), 2297259900), ((2, 3, 4, 1), 431903085135), ((5, 0, 0), 132),
])
def test_oracle_values(m, expected):
    assert geode_number_oracle(m) == expected


@pytest.mark.parametrize("k, n_max", [(1, 8), (2, 8), (3, 6), (4, 4)])
def test_oracle_matches_long_division(k, n_max):
    for m in itertools.product(range(n_max + 1), repeat=k):
        if sum(m) <= n_max:
            assert geode_number_oracle(m) == naive_geode(m), m


def test_k1_geode_is_shifted_catalan():
    assert [geode_number_oracle((n,)) for n in range(20)] == [catalan(n + 1) for n in range(20)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(0, 6), min_size=2, max_size=4))
def test_oracle_agrees_with_full_quotient(m):
    assert geode_number_oracle(m) == geode_poly(sum(m), len(m)).coefficient(m)


def test_table_contents_and_negative_indices():
    t2 = geode_table(2, 2)
    assert t2[(0, 0)] == 1 and t2[(1, 1)] == 16
    assert t2[(-1, 3)] == 0 and (-1, 3) in t2
    t3 = geode_table(3, 3)
    assert t3[(1, 1, 1)] == 319
    assert len(t3) == sum(count_compositions(n, 3) for n in range(4))
    assert t3.complete_to == 3 and t3.max_total == 3
    assert geode_table(12, 3).diagonal() == {0: 1, 1: 319, 2: 669123, 3: 2297259900,
                                              4: geode_number_oracle((4, 4, 4))}


def test_table_matches_oracle():
    t = geode_table(9, 3)
    for m, v in t.items():
        assert v == geode_number_oracle(m)


def test_resource_cap(monkeypatch):
    with pytest.raises(ResourceLimitError):
        geode_table(40, 4, cap=1000)
    with pytest.raises(ResourceLimitError):
        geode_number_oracle((1, 50, 50), cap=100)
    monkeypatch.setenv("GEODE_TERM_CAP", "10")
    with pytest.raises(ResourceLimitError):
        build_P(5, 3)
    monkeypatch.setenv("GEODE_TERM_CAP", "nonsense")
    with pytest.raises(ValueError):
        build_P(5, 3)
