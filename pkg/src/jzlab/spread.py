"""Følner-averaged states omega_n = |F_n|^-1 sum_{h in F_n} omega o alpha_h.

For h = th[-n]^h_-n ... th[n]^h_n t^l and sites j < j',

    h(j') - h(j) = (j' - j) + sum of h_m over m in (j + l, j' + l] ∩ [-n, n].

So for a fixed l the image gaps are sums of exponents over disjoint blocks.
The number of exponent vectors with given block sums s_i and total <= n^2 is

    prod_i binom(s_i + b_i - 1, b_i - 1) * binom(n^2 - sum s + r, r)

(b_i = block sizes, r = indices outside every block).  Counting is exact
with Python integers.  The irrational scale C only enters at the end.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Mapping

import numpy as np

from .car import (
    CarOp,
    CarPolynomial,
    Covariance,
    Monomial,
    act_index,
    act_transposition,
    eval_quasifree,
    parse_monomial,
    position,
    random_word,
    wick_det,
)
from .errors import BudgetExceeded, ValidationError
from .folner import card_Fn
from .monoid import JElement, tau_power, theta
from .toeplitz import ToeplitzCovariance

MAX_SITES = 4
MAX_N = 60
DEFAULT_LAW_CAP = 2_000_000


@dataclass(frozen=True)
class Unit:
    """Symbolic scale factor ``coeff * C`` or ``coeff * C / pi^2``."""

    label: str
    coeff: complex
    over_pi2: bool = True

    def numeric(self, scale: float | None = None) -> complex:
        c = ToeplitzCovariance().scale if scale is None else scale
        return self.coeff * c / (math.pi**2 if self.over_pi2 else 1.0)


ONE = Unit("1", 1.0, over_pi2=False)
C_UNIT = Unit("C", 1.0, over_pi2=False)
I_C_PI2 = Unit("iC/pi^2", 1j)
PAIR_UNIT = Unit("-3iC/pi^2", -3j)


@dataclass(frozen=True)
class GapProfile:
    n: int
    probabilities: Mapping[int, Fraction]

    def tail(self, g: int = 1) -> Fraction:
        """P(gap > g)."""
        return sum((p for k, p in self.probabilities.items() if k > g), Fraction(0))

    def expect(self, f) -> Fraction:
        return sum((p * f(g) for g, p in self.probabilities.items()), Fraction(0))


@dataclass(frozen=True)
class AveragedValue:
    n: int
    rational_profile: Fraction
    unit: Unit
    numeric: complex = field(default=0j)


def _check_n(n: int) -> None:
    if n < 1:
        raise ValidationError("n must be >= 1")
    if n > MAX_N:
        raise BudgetExceeded("averaging index n", n, MAX_N)


def gap_profile(n: int) -> GapProfile:
    """Exact law of h(2) - h(1) for h uniform on F_n."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    N = n * n
    total = card_Fn(n)
    counts: dict[int, int] = {}
    # l in [-n, n-2]: gap = 1 + h_{2+l}; #{h_{2+l} = v, sum <= N} = binom(N - v + 2n, 2n)
    interior = 2 * n - 1
    for v in range(N + 1):
        counts[1 + v] = interior * math.comb(N - v + 2 * n, 2 * n)
    # l in {n-1, n}: index 2+l is outside [-n, n]
    counts[1] += 2 * math.comb(N + 2 * n + 1, 2 * n + 1)
    return GapProfile(n, {g: Fraction(c, total) for g, c in counts.items() if c})


def tail_closed_form(n: int) -> Fraction:
    """P(h(2) - h(1) > 1) = (2n-1)/(2n+1) * n^2/(n+1)^2."""
    return Fraction(2 * n - 1, 2 * n + 1) * Fraction(n * n, (n + 1) ** 2)


def published_tail_bound(n: int) -> Fraction:
    """n^2 (2n+1) / ((n^2+2n+1)(n^2+2n)), the published upper estimate for P(gap > 1)."""
    return Fraction(n * n * (2 * n + 1), (n * n + 2 * n + 1) * (n * n + 2 * n))


def _block_signatures(sites: tuple[int, ...], n: int) -> dict[tuple[tuple[int, ...], int], int]:
    sig: dict[tuple[tuple[int, ...], int], int] = {}
    for l in range(-n, n + 1):
        blocks = []
        for a, b in zip(sites, sites[1:]):
            lo, hi = max(a + l + 1, -n), min(b + l, n)
            blocks.append(max(0, hi - lo + 1))
        key = (tuple(blocks), 2 * n + 1 - sum(blocks))
        sig[key] = sig.get(key, 0) + 1
    return sig


def _law_size(sig, n: int) -> int:
    N = n * n
    return sum(math.comb(N + d, d) for d in {sum(1 for b in blocks if b) for blocks, _ in sig})


@lru_cache(maxsize=256)
def _image_counts(sites: tuple[int, ...], n: int, cap: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    N = n * n
    sig = _block_signatures(sites, n)
    size = _law_size(sig, n)
    if size > cap:
        raise BudgetExceeded(f"image law for sites {sites} at n={n}", size, cap)
    base = tuple(b - a for a, b in zip(sites, sites[1:]))
    counts: dict[tuple[int, ...], int] = {}
    for (blocks, rest), mult in sig.items():
        live = [i for i, b in enumerate(blocks) if b]

        def rec(pos: int, used: int, weight: int, s: list[int]) -> None:
            if pos == len(live):
                w = mult * weight * math.comb(N - used + rest, rest)
                delta = list(base)
                for i, v in zip(live, s):
                    delta[i] += v
                key = tuple(delta)
                counts[key] = counts.get(key, 0) + w
                return
            b = blocks[live[pos]]
            for v in range(N - used + 1):
                s.append(v)
                rec(pos + 1, used + v, weight * math.comb(v + b - 1, b - 1), s)
                s.pop()

        rec(0, 0, 1, [])
    return tuple(sorted(counts.items()))


def image_law(sites, n: int, cap: int = DEFAULT_LAW_CAP) -> dict[tuple[int, ...], Fraction]:
    """Exact joint law of consecutive image differences (h(j2)-h(j1), ...) under uniform F_n."""
    sites = tuple(int(s) for s in sites)
    if not sites:
        raise ValidationError("at least one site required")
    if any(b <= a for a, b in zip(sites, sites[1:])):
        raise ValidationError("sites must be strictly increasing")
    if len(sites) > MAX_SITES:
        raise BudgetExceeded("image law sites", len(sites), MAX_SITES)
    _check_n(n)
    total = card_Fn(n)
    return {k: Fraction(c, total) for k, c in _image_counts(sites, n, cap)}


def _relabelled_value(mono: Monomial, sites: tuple[int, ...], delta: tuple[int, ...], cov: Covariance) -> complex:
    image = {sites[0]: 0}
    acc = 0
    for s, d in zip(sites[1:], delta):
        acc += d
        image[s] = acc
    return wick_det(tuple(CarOp(image[op.site], op.dagger) for op in mono), cov)


def averaged_eval(p: CarPolynomial, n: int, cov: Covariance | None = None,
                  cap: int = DEFAULT_LAW_CAP) -> complex:
    """omega_n(p) for a stationary quasi-free omega with Toeplitz covariance ``cov``.

    Relabeling by an increasing map keeps a Wick-ordered word Wick-ordered, and
    a shift-invariant covariance only sees site differences, so each monomial
    is averaged over the image law of its sites.
    """
    cov = cov or ToeplitzCovariance()
    _check_n(n)
    total = 0j
    for mono, c in p.terms.items():
        n_cre = sum(op.dagger for op in mono)
        if 2 * n_cre != len(mono):
            continue
        if not mono:
            total += c
            continue
        sites = tuple(sorted({op.site for op in mono}))
        if len(sites) > MAX_SITES:
            raise BudgetExceeded("averaged monomial sites", len(sites), MAX_SITES)
        if len(sites) == 1:
            total += c * wick_det(mono, cov)
            continue
        law = image_law(sites, n, cap)
        acc = 0j
        for delta, prob in law.items():
            acc += float(prob) * _relabelled_value(mono, sites, delta, cov)
        total += c * acc
    return total


def pair_profile(j1: int, j2: int, n: int) -> Fraction:
    """Exact E[1/g^2] for g = h(j2) - h(j1) under uniform F_n (j1 < j2)."""
    law = image_law((j1, j2), n)
    return sum((p / (d[0] ** 2) for d, p in law.items()), Fraction(0))


def averaged_pair_value(n: int, scale: float | None = None) -> AveragedValue:
    """omega_n(a_1 a_2^dag) = E[1/g^2] * (-3iC/pi^2), g = h(2) - h(1)."""
    prof = gap_profile(n).expect(lambda g: Fraction(1, g * g))
    return AveragedValue(n, prof, PAIR_UNIT, prof * PAIR_UNIT.numeric(scale))


def pair_profile_upper_bound(n: int) -> Fraction:
    """Certified upper bound on E[1/g^2]; tends to 0 like 1/n.

    Edge shifts contribute 2/(2n+1).  For interior shifts P(g = 1 + v) is
    decreasing in v with maximum (2n+1)/(n+1)^2, and sum 1/(1+v)^2 < 5/3.
    """
    edge = Fraction(2, 2 * n + 1)
    interior = Fraction(2 * n - 1, 2 * n + 1) * Fraction(2 * n + 1, (n + 1) ** 2) * Fraction(5, 3)
    return edge + interior


def spreadability_residual(p: CarPolynomial, n: int, k: JElement, cov: Covariance | None = None) -> float:
    """|omega_n(p) - omega_n(alpha_k p)|."""
    return abs(averaged_eval(p, n, cov) - averaged_eval(act_index(p, k), n, cov))


def pair_residual_profile(n: int, k: JElement) -> Fraction:
    """Exact |omega_n(a_1 a_2^dag) - omega_n(alpha_k(a_1 a_2^dag))| in units of 3C/pi^2."""
    j1, j2 = k(1), k(2)
    return abs(pair_profile(1, 2, n) - pair_profile(j1, j2, n))


# --- exact evaluation of omega on polynomials of degree <= 2 -----------------


def exact_quadratic_eval(p: CarPolynomial) -> dict[str, Fraction]:
    """omega(p) as {unit label: exact coefficient} for integer-coefficient p of degree <= 2.

    Units: ``"1"``, ``"C"`` and ``"iC/pi^2"``.
    """
    out: dict[str, Fraction] = {}

    def add(label: str, v: Fraction) -> None:
        out[label] = out.get(label, Fraction(0)) + v

    for mono, c in p.terms.items():
        c = complex(c)
        if c.imag != 0 or c.real != int(c.real):
            raise ValidationError("exact evaluation needs integer coefficients")
        coeff = Fraction(int(c.real))
        if not mono:
            add(ONE.label, coeff)
        elif len(mono) > 2:
            raise ValidationError("exact evaluation handles degree <= 2")
        elif len(mono) == 2 and mono[0].dagger and not mono[1].dagger:
            m, n = mono[0].site, mono[1].site
            if m == n:
                add(C_UNIT.label, coeff)
            else:
                # cov(m, n) = sign(m - n) * 3i C / (pi^2 (m - n)^2)
                add(I_C_PI2.label, coeff * Fraction(3 if m > n else -3, (m - n) ** 2))
    return {k: v for k, v in out.items() if v}


def _units() -> dict[str, Unit]:
    return {u.label: u for u in (ONE, C_UNIT, I_C_PI2, PAIR_UNIT)}


def exact_to_complex(values: Mapping[str, Fraction], scale: float | None = None) -> complex:
    units = _units()
    return sum((float(v) * units[k].numeric(scale) for k, v in values.items()), 0j)


# --- fixtures and witnesses ---------------------------------------------------


def stationarity_fixtures(count: int = 50, seed: int = 20240611, max_degree: int = 6) -> list[CarPolynomial]:
    """Deterministic random monomials of degree <= max_degree on sites -3..3."""
    rng = np.random.default_rng(seed)
    sites = list(range(-3, 4))
    out = []
    while len(out) < count:
        poly = CarPolynomial.monomial(random_word(rng, sites, max_degree, wick=False))
        if poly.terms:
            out.append(poly)
    return out


def stationarity_defect(polys, cov: Covariance | None = None) -> float:
    """max |omega(alpha_tau p) - omega(p)| over the given polynomials (0.0 exactly expected)."""
    cov = cov or ToeplitzCovariance()
    shift = tau_power(1)
    return max(abs(eval_quasifree(act_index(p, shift), cov) - eval_quasifree(p, cov)) for p in polys)


def reduced_x_words(sites, max_degree: int):
    """Products x_{j1}...x_{jl} over distinct sites, 1 <= l <= max_degree, in every order.

    Orders differ only by a sign, so one increasing representative per subset
    is yielded together with its reversal.
    """
    for size in range(1, max_degree + 1):
        for subset in combinations(sites, size):
            yield subset
            if size > 1:
                yield subset[::-1]


def x_word(js) -> CarPolynomial:
    out = CarPolynomial.unit()
    for j in js:
        out = out * position(j)
    return out


def vacuum(m: int, n: int) -> complex:
    return 0j


def classification_witnesses(n_proxy: int = 40, scale: float | None = None) -> dict:
    """Numbers separating stationary, spreadable and symmetric states."""
    cov = ToeplitzCovariance() if scale is None else ToeplitzCovariance(scale)
    x12 = exact_quadratic_eval(parse_monomial("x[1]*x[2]"))
    x13 = exact_quadratic_eval(parse_monomial("x[1]*x[3]"))
    ratio = x12["iC/pi^2"] / x13["iC/pi^2"]
    fixtures = stationarity_fixtures()

    pair12 = parse_monomial("a[1]*a+[2]")
    pair21 = parse_monomial("a[2]*a+[1]")
    v12 = averaged_eval(pair12, n_proxy, cov)
    v21 = averaged_eval(pair21, n_proxy, cov)
    prof = averaged_pair_value(n_proxy, cov.scale)
    tail = gap_profile(n_proxy).tail()
    x_avg = averaged_eval(x_word((1, 2)), n_proxy, cov)
    unit = PAIR_UNIT.numeric(cov.scale)
    bound = pair_profile_upper_bound(n_proxy)

    vac_max = 0.0
    for js in reduced_x_words(range(1, 7), 6):
        vac_max = max(vac_max, abs(eval_quasifree(x_word(js), vacuum)))

    return {
        "stationary_not_spreadable": {
            "omega_x1x2": {k: str(v) for k, v in x12.items()},
            "omega_x1x3": {k: str(v) for k, v in x13.items()},
            "ratio": str(ratio),
            "omega_x1x2_numeric": exact_to_complex(x12, cov.scale),
            "omega_x1x3_numeric": exact_to_complex(x13, cov.scale),
            "stationarity_defect": stationarity_defect(fixtures, cov),
            "fixture_count": len(fixtures),
            "holds": ratio != 1 and stationarity_defect(fixtures, cov) == 0.0,
        },
        "spreadable_not_symmetric": {
            "n": n_proxy,
            "omega_n_a1_a2dag": v12,
            "omega_n_a2_a1dag": v21,
            "rational_profile": str(prof.rational_profile),
            "unit": PAIR_UNIT.label,
            "sum_exact": "0",
            "tail_gap_gt_1": str(tail),
            "published_tail_bound": str(published_tail_bound(n_proxy)),
            "published_tail_bound_holds": tail <= published_tail_bound(n_proxy),
            "claimed_limit_a1_a2dag": "-3iC/pi^2",
            "claimed_limit_numeric": unit,
            "profile_upper_bound": str(bound),
            "certified_limit_profile": "0",
            "holds_at_finite_n": abs(v12 - v21) > 0,
            "claimed_limit_supported": False,
        },
        "c_algebra_not_vacuum": {
            "n": n_proxy,
            "omega_n_x1x2": x_avg,
            "proxy_nonzero": abs(x_avg) > 0,
            "claimed_limit": "-6iC/pi^2",
            "abs_upper_bound_at_n": 2 * float(bound) * abs(unit),
            "certified_limit": "0",
            "vacuum_max_on_reduced_words": vac_max,
        },
    }


def transposition_effect(n: int = 40, cov: Covariance | None = None) -> dict:
    """Swapping sites 1 and 2 changes the averaged value of a_1 a_2^dag but not the vacuum value."""
    cov = cov or ToeplitzCovariance()
    p = parse_monomial("a[1]*a+[2]")
    q = act_transposition(p, 1, 2)
    return {
        "averaged": averaged_eval(p, n, cov),
        "averaged_swapped": averaged_eval(q, n, cov),
        "vacuum": eval_quasifree(p, vacuum),
        "vacuum_swapped": eval_quasifree(q, vacuum),
    }


DEFAULT_KS = {"tau": tau_power(1), "theta0": theta(0)}
