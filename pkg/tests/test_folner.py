from fractions import Fraction
from math import comb

import pytest
from hypothesis import given
from hypothesis import strategies as st

from jzlab import folner
from jzlab.errors import BudgetExceeded, ValidationError
from jzlab.monoid import IDENTITY, JElement, compose, parse_normal_form, tau_power, theta

FIXTURES = [theta(0), theta(2), JElement.from_map({0: 2}), tau_power(1), tau_power(-1),
            parse_normal_form("th[0] t")]


@pytest.mark.parametrize("n, expected", [(1, 12), (2, 630), (3, 80080)])
def test_card_matches_enumeration(n, expected):
    rep = folner.count_report(n)
    assert rep.exact_count == rep.formula_count == expected
    assert folner.card_Fn_sum(n) == expected


def test_enumeration_order_and_membership():
    elems = list(folner.enumerate_Fn(2))
    assert len(set(elems)) == len(elems)
    keys = [(x.shift,) for x in elems]
    assert keys == sorted(keys)
    assert all(folner.in_Fn(x, 2) for x in elems)
    assert str(elems[0]) == "t^-2"
    g = list(folner.enumerate_Gn(2))
    assert len(set(g)) == 630 and all(folner.in_Gn(x, 2) for x in g)


@given(st.integers(0, 6), st.integers(0, 6))
def test_bounded_vectors_count(length, total):
    vecs = list(folner.bounded_vectors(length, total))
    assert len(vecs) == comb(length + total, total)
    assert vecs == sorted(vecs)


def test_budget_and_validation():
    with pytest.raises(BudgetExceeded):
        list(folner.enumerate_Fn(folner.FolnerParams(4, cap=1000)))
    with pytest.raises(ValidationError):
        folner.FolnerParams(0)


def test_right_ratio_examples():
    assert folner.right_ratio(1, tau_power(1)) == Fraction(2, 3)
    for n in (1, 2):
        assert folner.right_ratio(n, IDENTITY) == 1
    for n in (1, 2, 3):
        assert folner.right_ratio(n, tau_power(1)) == Fraction(2 * n, 2 * n + 1)


@pytest.mark.parametrize("f", FIXTURES, ids=str)
@pytest.mark.parametrize("n", [1, 2])
def test_preimage_ratio_meets_bound(n, f):
    rep = folner.right_report(n, f)
    assert rep.preimage_ratio >= folner.right_ratio_lower_bound(n, f)
    assert rep.ratio <= rep.preimage_ratio


def test_right_translation_not_injective():
    # th[1] th[0] == th[0] th[0] puts two elements of F_1 on one point
    rep = folner.right_report(1, theta(0))
    assert not rep.injective
    assert compose(theta(1), theta(0)) == compose(theta(0), theta(0))


def test_parallel_report_matches_serial():
    f = theta(0)
    assert folner.right_report(2, f, workers=2) == folner.right_report(2, f)


def test_bound_examples():
    n = 3
    expected = Fraction(7 * sum(comb(6 + k, k) for k in range(9)), 7 * comb(16, 9))
    assert folner.right_ratio_lower_bound(n, theta(0)) == expected
    for n in range(1, 8):
        assert folner.right_ratio_lower_bound(n, IDENTITY) == 1
        for f in FIXTURES:
            assert folner.right_ratio_lower_bound(n, f) == folner.right_ratio_lower_bound_sum(n, f)
    assert folner.right_ratio_lower_bound(20, theta(0)) >= Fraction(9, 10)
    assert folner.right_ratio_lower_bound(20, tau_power(1)) >= Fraction(9, 10)
    values = [folner.right_ratio_lower_bound(n, theta(0)) for n in range(1, 41)]
    assert all(a < b for a, b in zip(values, values[1:]))


def test_left_ratio_examples():
    assert folner.left_ratio(1, IDENTITY) == 1
    assert folner.left_ratio(1, tau_power(1)) == Fraction(2, 3)


@pytest.mark.parametrize("j", [1, 0, 5, -7])
def test_klawe(j):
    w = folner.klawe_witness(j, window=20)
    assert w.holds and w.f != w.g and w.fs == w.gs
    if j == 1:
        assert w.fs == JElement.from_map({0: 2})


def test_growth():
    assert [folner.growth_ball(r) for r in range(3)] == [1, 4, 11]
    assert folner.growth_ball(8) >= comb(3, 1)
    with pytest.raises(BudgetExceeded):
        folner.growth_ball(13)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_an_census(n):
    c = folner.an_census(n)
    assert c.count == comb(3 * n, n) == c.formula_count
    assert c.all_distinct and c.words_match
    assert c.word_length == 7 * n + 1
    assert c.length_discrepancy == 1
