import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from jzlab.car import (
    CarOp,
    CarPolynomial,
    _normal_order_rightmost,
    act_index,
    act_transposition,
    annihilate,
    create,
    eval_quasifree,
    format_polynomial,
    grading,
    is_wick_ordered,
    normal_order,
    parity,
    parse_monomial,
    parse_word,
    position,
)
from jzlab.errors import ValidationError
from jzlab.jw import JwWindow, oracle_expectation
from jzlab.monoid import IDENTITY, JElement, tau_power, theta
from jzlab.toeplitz import ToeplitzCovariance

COV = ToeplitzCovariance()
C = COV.scale

ops = st.builds(CarOp, st.integers(-3, 3), st.booleans())


def test_normal_order_examples():
    assert normal_order("a[1]*a+[1]") == CarPolynomial.unit() - parse_monomial("a+[1]*a[1]")
    assert normal_order("a[1]*a[1]") == CarPolynomial()
    assert normal_order([annihilate(2), create(1)]) == CarPolynomial({(create(1), annihilate(2)): -1}, ordered=True)


@given(st.lists(ops, max_size=8))
def test_confluent(word):
    left = CarPolynomial.monomial(word)
    right = _normal_order_rightmost(tuple(word))
    assert left.terms == {k: complex(v) for k, v in right.items()}
    assert all(is_wick_ordered(m) for m in left.terms)
    assert CarPolynomial(left.terms) == left  # idempotent


def test_degree_cap():
    with pytest.raises(ValidationError):
        CarPolynomial.monomial([create(j) for j in range(13)])


def test_eval_examples():
    assert eval_quasifree(CarPolynomial.unit(), COV) == 1
    assert eval_quasifree(parse_monomial("a+[1]*a[1]"), COV) == pytest.approx(C)
    v = eval_quasifree(parse_monomial("a+[1]*a+[2]*a[2]*a[1]"), COV)
    assert v == pytest.approx(C**2 - 9 * C**2 / math.pi**4)
    assert eval_quasifree(position(1) * position(1), COV) == pytest.approx(1)
    assert eval_quasifree(position(1) * position(2), COV) == pytest.approx(-6j * C / math.pi**2)


@pytest.mark.parametrize("j", range(-5, 6))
def test_x_algebra(j):
    assert position(j) * position(j) == CarPolynomial.unit()
    for k in range(-5, 6):
        if k != j:
            assert position(j) * position(k) + position(k) * position(j) == CarPolynomial()


def test_index_actions():
    p = parse_monomial("a+[1]*a[0]")
    assert act_index(p, IDENTITY) == p
    assert act_index(p, tau_power(1)) == parse_monomial("a+[2]*a[1]")
    assert act_index(parse_monomial("a[1]*a+[2]"), theta(0)) == parse_monomial("a[2]*a+[3]")
    q = parse_monomial("a[1]*a+[2]")
    assert act_transposition(q, 1, 2) == parse_monomial("a[2]*a+[1]")
    assert act_transposition(q, 1, 1) == q
    assert act_transposition(act_transposition(q, 1, 2), 1, 2) == q


@given(st.lists(ops, max_size=5), st.lists(ops, max_size=5))
def test_action_is_homomorphism(w1, w2):
    g = JElement.from_map({-1: 2, 2: 1}, 1)
    p, q = CarPolynomial.monomial(w1), CarPolynomial.monomial(w2)
    assert act_index(p * q, g) == act_index(p, g) * act_index(q, g)


@given(st.lists(ops, max_size=6))
def test_stationary_and_even(word):
    p = CarPolynomial.monomial(word)
    assert eval_quasifree(act_index(p, tau_power(1)), COV) == eval_quasifree(p, COV)
    if len(word) % 2:
        assert eval_quasifree(p, COV) == 0


def test_parity_examples():
    even, odd = parity(parse_monomial("a+[1]*a[1]"))
    assert odd == CarPolynomial() and even.terms
    even, odd = parity(position(1))
    assert even == CarPolynomial()
    p = position(1) + parse_monomial("a+[1]*a[2]")
    e, o = parity(p)
    assert e + o == p


@given(st.lists(ops, max_size=3), st.lists(ops, max_size=3))
def test_grading_homomorphism(w1, w2):
    p, q = CarPolynomial.monomial(w1), CarPolynomial.monomial(w2)
    assert grading(p * q) == grading(p) * grading(q)
    flipped = CarPolynomial.monomial(w1, (-1) ** len(w1))
    assert grading(p) == flipped


def test_positivity_spot_check(rng):
    w = JwWindow.range(1, 4)
    for _ in range(25):
        q = CarPolynomial()
        for _ in range(4):
            deg = int(rng.integers(0, 4))
            word = [CarOp(int(rng.integers(1, 5)), bool(rng.integers(0, 2))) for _ in range(deg)]
            q = q + CarPolynomial.monomial(word, complex(*rng.normal(size=2)))
        qq = q.dagger() * q
        v = eval_quasifree(qq, COV)
        assert v.real >= -1e-10 and abs(v.imag) <= 1e-10
        assert v == pytest.approx(oracle_expectation(w, COV, qq), abs=1e-10)


@pytest.mark.parametrize("text", ["a+[1]*a+[3]*a[4]*a[2]", "I", "a[-2]", "x[1]*x[2]"])
def test_parse_format_round_trip(text):
    p = parse_monomial(text)
    again = CarPolynomial()
    for part in format_polynomial(p).split(" + "):
        coeff, _, word = part.partition("*")
        again = again + CarPolynomial.monomial(parse_word(word) if word else (), complex(coeff))
    assert again == p


def test_parse_errors():
    for bad in ("a[1]**a[2]", "b[1]", "a+[x]"):
        with pytest.raises(ValidationError):
            parse_monomial(bad)
    with pytest.raises(ValidationError):
        parse_word("x[1]")
