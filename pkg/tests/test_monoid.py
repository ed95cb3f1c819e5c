import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import elements
from jzlab.errors import ValidationError
from jzlab.monoid import (
    IDENTITY,
    GENERATORS,
    JElement,
    apply,
    compose,
    parse_normal_form,
    parse_word,
    psi,
    tau_power,
    theta,
)


def test_theta_and_psi_points():
    assert apply(theta(0), 0) == 1
    assert apply(theta(0), -1) == -1
    assert apply(psi(0), 1) == 1
    assert apply(psi(0), 0) == -1


def test_tau_powers():
    assert tau_power(0) == IDENTITY
    assert apply(tau_power(2), 3) == 5
    assert compose(tau_power(-1), tau_power(1)) == IDENTITY


def test_compose_examples():
    assert compose(theta(1), theta(0)) == JElement.from_map({0: 2})
    assert compose(tau_power(1), theta(0)) == compose(theta(1), tau_power(1))
    assert apply(compose(theta(0), tau_power(1)), 0) == 2
    assert apply(IDENTITY, 7) == 7


def test_parse_word_examples():
    assert parse_word("s") == theta(0)
    assert parse_word("tT") == IDENTITY
    assert parse_word("tsT") == theta(1)
    assert parse_word(["t", "s", "T"]) == theta(1)


def test_text_round_trip():
    for text in ("id", "th[0]", "th[-2]^3 th[4] t^-1", "t^5"):
        assert str(parse_normal_form(text)) == text
    with pytest.raises(ValidationError):
        parse_normal_form("th[x]")
    with pytest.raises(ValidationError):
        parse_word("tq")


def test_rejects_unsorted_exponents():
    with pytest.raises(ValidationError):
        JElement(((2, 1), (1, 1)), 0)
    with pytest.raises(ValidationError):
        JElement(((0, 0),), 0)


@given(elements(), elements())
def test_soundness(f, g):
    fg = compose(f, g)
    for k in range(-50, 51):
        assert apply(fg, k) == apply(f, apply(g, k))


@given(elements(), elements())
def test_completeness(f, g):
    if f == g:
        return
    bound = max([abs(m) for m in f.support + g.support] + [abs(f.shift), abs(g.shift)]) + f.weight + g.weight
    window = range(-(bound + 2), bound + 3)
    assert any(apply(f, k) != apply(g, k) for k in window)


@given(elements(), elements(), elements())
def test_left_cancellative(s, f, g):
    if compose(s, f) == compose(s, g):
        assert f == g


@given(elements())
def test_cofinite_range(f):
    lo = min(list(f.support) + [0]) - abs(f.shift) - 5
    hi = max(list(f.support) + [0]) + abs(f.shift) + f.weight + 5
    image = {apply(f, k) for k in range(lo - f.weight - 10, hi + 10)}
    missing = [m for m in range(lo, hi) if m not in image]
    assert len(missing) == f.weight
    assert missing == f.range_complement()


@given(elements(), elements(), elements())
def test_associative(f, g, h):
    assert compose(compose(f, g), h) == compose(f, compose(g, h))


@given(st.text(alphabet="tTs", max_size=12), st.data())
def test_bracketing_independent(word, data):
    letters = [GENERATORS[c] for c in word]

    def fold(xs):
        if not xs:
            return IDENTITY
        if len(xs) == 1:
            return xs[0]
        cut = data.draw(st.integers(1, len(xs) - 1))
        return compose(fold(xs[:cut]), fold(xs[cut:]))

    assert fold(letters) == parse_word(word)


@given(st.integers(-20, 20))
def test_psi_is_theta_then_shift_back(h):
    # psi_h agrees pointwise with theta_h composed with t^-1
    target = compose(theta(h), tau_power(-1))
    for k in range(-40, 41):
        assert apply(psi(h), k) == apply(target, k)


@given(elements())
def test_left_form_round_trip(f):
    l, a = f.left_form()
    assert compose(tau_power(l), a) == f
    assert a.shift == 0


@given(st.integers(-10, 10), st.integers(-10, 10))
def test_conjugation_by_shift(m, l):
    assert compose(compose(tau_power(l), theta(m)), tau_power(-l)) == theta(m + l)
