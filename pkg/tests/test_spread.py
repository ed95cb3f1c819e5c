import math
from fractions import Fraction

import pytest

from jzlab import folner, spread
from jzlab.car import parse_monomial
from jzlab.errors import BudgetExceeded, ValidationError
from jzlab.monoid import IDENTITY, apply, tau_power, theta
from jzlab.toeplitz import ToeplitzCovariance

COV = ToeplitzCovariance()
PAIR = -3j * COV.scale / math.pi**2


def enumerated_law(sites, n):
    counts = {}
    for h in folner.enumerate_Fn(n):
        img = [apply(h, j) for j in sites]
        key = tuple(b - a for a, b in zip(img, img[1:]))
        counts[key] = counts.get(key, 0) + 1
    total = sum(counts.values())
    return {k: Fraction(v, total) for k, v in counts.items()}


def test_gap_profile_n1():
    assert spread.gap_profile(1).probabilities == {1: Fraction(11, 12), 2: Fraction(1, 12)}


@pytest.mark.parametrize("n", [1, 2, 3])
def test_gap_profile_matches_enumeration(n):
    g = spread.gap_profile(n)
    assert {(k,): v for k, v in g.probabilities.items()} == enumerated_law((1, 2), n)
    assert sum(g.probabilities.values()) == 1
    assert max(g.probabilities) <= n * n + 1


@pytest.mark.parametrize("sites, n", [((1, 2), 1), ((1, 3), 1), ((0, 1, 2), 2), ((-1, 2), 2), ((1, 2, 4, 5), 2)])
def test_image_law_matches_enumeration(sites, n):
    assert spread.image_law(sites, n) == enumerated_law(sites, n)


def test_image_law_normalized():
    assert sum(spread.image_law((0, 1, 2), 6).values()) == 1


def test_image_law_errors():
    with pytest.raises(ValidationError):
        spread.image_law((2, 1), 2)
    with pytest.raises(BudgetExceeded):
        spread.image_law((1, 2, 3, 4, 5), 2)
    with pytest.raises(BudgetExceeded):
        spread.image_law((1, 2), 61)
    with pytest.raises(BudgetExceeded):
        spread.image_law((1, 2, 3, 4), 30, cap=1000)


@pytest.mark.parametrize("n", range(1, 41))
def test_tail_closed_form(n):
    assert spread.gap_profile(n).tail() == spread.tail_closed_form(n)


def test_published_tail_estimate_fails_beyond_n2():
    # the published bound only counts configurations with h_{2+l} = 1
    holds = [spread.gap_profile(n).tail() <= spread.published_tail_bound(n) for n in range(1, 41)]
    assert holds[:2] == [True] * 2 and not any(holds[2:])


def test_pair_value_n1():
    v = spread.averaged_pair_value(1)
    assert v.rational_profile == Fraction(45, 48)
    assert v.numeric == pytest.approx(Fraction(45, 48) * PAIR)


@pytest.mark.parametrize("n", [1, 2, 5])
def test_averaged_eval_consistent(n):
    p = parse_monomial("a[1]*a+[2]")
    assert spread.averaged_eval(p, n) == pytest.approx(spread.averaged_pair_value(n).numeric, abs=1e-15)
    q = parse_monomial("a[2]*a+[1]")
    # q is the adjoint of p, and both values are purely imaginary
    assert spread.averaged_eval(q, n) == pytest.approx(spread.averaged_eval(p, n).conjugate(), abs=1e-15)
    assert spread.averaged_eval(q, n) == pytest.approx(-spread.averaged_eval(p, n), abs=1e-15)


@pytest.mark.parametrize("text", ["a[1]*a[2]", "a+[1]*a+[2]", "a[3]"])
def test_gauge_zero(text):
    for n in (1, 4, 10):
        assert spread.averaged_eval(parse_monomial(text), n) == 0


def test_averaged_pair_tends_to_zero():
    profiles = [spread.averaged_pair_value(n).rational_profile for n in (5, 10, 20, 40)]
    assert all(a > b for a, b in zip(profiles, profiles[1:]))
    for n in (5, 10, 20, 40):
        assert profiles[0] <= 1
        assert spread.averaged_pair_value(n).rational_profile <= spread.pair_profile_upper_bound(n)


def test_residuals():
    p = parse_monomial("a[1]*a+[2]")
    assert spread.spreadability_residual(p, 5, IDENTITY) == 0
    # a shift changes the edge shifts that see the block, so the residual is small but not 0
    for n in (5, 10):
        r_tau = spread.spreadability_residual(p, n, tau_power(1))
        r_theta = spread.spreadability_residual(p, n, theta(0))
        assert r_tau == pytest.approx(r_theta, abs=1e-15)
        assert r_tau == pytest.approx(float(spread.pair_residual_profile(n, tau_power(1))) * abs(PAIR))
    res = [spread.spreadability_residual(p, n, theta(0)) for n in (5, 10, 20, 40)]
    assert all(a > b for a, b in zip(res, res[1:]))


def test_exact_quadratic_eval():
    assert spread.exact_quadratic_eval(parse_monomial("x[1]*x[2]")) == {"iC/pi^2": -6}
    assert spread.exact_quadratic_eval(parse_monomial("x[1]*x[3]")) == {"iC/pi^2": Fraction(-3, 2)}
    assert spread.exact_quadratic_eval(parse_monomial("a+[2]*a[2]")) == {"C": 1}
    vals = spread.exact_quadratic_eval(parse_monomial("a+[2]*a[1]"))
    assert spread.exact_to_complex(vals) == pytest.approx(COV(2, 1))
    with pytest.raises(ValidationError):
        spread.exact_quadratic_eval(parse_monomial("a+[1]*a+[2]*a[2]*a[1]"))


def test_stationarity_fixtures():
    fixtures = spread.stationarity_fixtures(50)
    assert len(fixtures) == 50
    assert spread.stationarity_defect(fixtures) == 0.0


def test_vacuum_vanishes_on_reduced_words():
    from jzlab.car import eval_quasifree

    for js in spread.reduced_x_words(range(1, 6), 5):
        assert eval_quasifree(spread.x_word(js), spread.vacuum) == 0


def test_witnesses():
    w = spread.classification_witnesses(n_proxy=10)
    first = w["stationary_not_spreadable"]
    assert first["ratio"] == "4" and first["holds"]
    second = w["spreadable_not_symmetric"]
    assert second["omega_n_a1_a2dag"] == pytest.approx(-second["omega_n_a2_a1dag"])
    assert not second["claimed_limit_supported"]
    third = w["c_algebra_not_vacuum"]
    assert third["vacuum_max_on_reduced_words"] == 0
    assert abs(third["omega_n_x1x2"]) <= third["abs_upper_bound_at_n"]


def test_transposition_effect():
    eff = spread.transposition_effect(10)
    assert eff["averaged"] != eff["averaged_swapped"]
    assert eff["vacuum"] == eff["vacuum_swapped"] == 0
