"""Følner families of J_Z, their counting formulas, and the growth census.

F_n = { th[-n]^h_-n ... th[n]^h_n t^l : sum h_i <= n^2, |l| <= n }   (right Følner)
G_n = { t^l th[-n]^h_-n ... th[n]^h_n : same constraints }          (left Følner)

Membership in either family is decided from the normal form directly, so the
ratio computations never materialize F_n itself, only its translate.
"""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterator

from .errors import BudgetExceeded, ValidationError
from .monoid import (
    GENERATORS,
    IDENTITY,
    JElement,
    apply,
    compose,
    parse_word,
    tau_power,
    theta,
)

log = logging.getLogger(__name__)

DEFAULT_ENUM_CAP = 20_000_000
DEFAULT_GROWTH_CAP = 12


@dataclass(frozen=True)
class FolnerParams:
    n: int
    cap: int = DEFAULT_ENUM_CAP

    def __post_init__(self):
        if self.n < 1:
            raise ValidationError(f"family index must be >= 1, got {self.n}")


@dataclass(frozen=True)
class CountReport:
    n: int
    exact_count: int | None
    formula_count: int


def _params(p: FolnerParams | int) -> FolnerParams:
    return p if isinstance(p, FolnerParams) else FolnerParams(int(p))


def card_Fn(p: FolnerParams | int) -> int:
    """(2n+1) * binom(n^2 + 2n + 1, n^2)."""
    n = _params(p).n
    return (2 * n + 1) * comb(n * n + 2 * n + 1, n * n)


def card_Fn_sum(n: int) -> int:
    """The same count as the unsimplified sum (2n+1) * sum_k binom(2n+k, k)."""
    return (2 * n + 1) * sum(comb(2 * n + k, k) for k in range(n * n + 1))


def count_report(p: FolnerParams | int, enumerate_: bool = True) -> CountReport:
    """Closed-form |F_n| next to the enumerated count (if requested)."""
    p = _params(p)
    exact = sum(1 for _ in enumerate_Fn(p)) if enumerate_ else None
    return CountReport(p.n, exact, card_Fn(p))


def bounded_vectors(length: int, total: int) -> Iterator[tuple[int, ...]]:
    """All nonnegative integer vectors of the given length with sum <= total, lexicographic."""
    if length == 0:
        yield ()
        return
    for v in range(total + 1):
        for rest in bounded_vectors(length - 1, total - v):
            yield (v,) + rest


def _check_budget(p: FolnerParams, what: str) -> None:
    predicted = card_Fn(p)
    if predicted > p.cap:
        raise BudgetExceeded(what, predicted, p.cap)


def _theta_block(n: int, vec: tuple[int, ...]) -> tuple[tuple[int, int], ...]:
    return tuple((i - n, h) for i, h in enumerate(vec) if h)


def _fn_slice(n: int, l: int) -> Iterator[JElement]:
    for vec in bounded_vectors(2 * n + 1, n * n):
        yield JElement(_theta_block(n, vec), l)


def enumerate_Fn(p: FolnerParams | int) -> Iterator[JElement]:
    """Yield every element of F_n once, ordered by (l, exponent vector)."""
    p = _params(p)
    _check_budget(p, f"F_{p.n} enumeration")
    for l in range(-p.n, p.n + 1):
        log.info("F_%d: slice l=%d", p.n, l)
        yield from _fn_slice(p.n, l)


def enumerate_Gn(p: FolnerParams | int) -> Iterator[JElement]:
    """Yield every element of G_n once (stored in right normal form)."""
    p = _params(p)
    _check_budget(p, f"G_{p.n} enumeration")
    for l in range(-p.n, p.n + 1):
        log.info("G_%d: slice l=%d", p.n, l)
        shift = tau_power(l)
        for vec in bounded_vectors(2 * p.n + 1, p.n * p.n):
            yield compose(shift, JElement(_theta_block(p.n, vec), 0))


def in_Fn(x: JElement, n: int) -> bool:
    if abs(x.shift) > n:
        return False
    if x.exponents and (x.exponents[0][0] < -n or x.exponents[-1][0] > n):
        return False
    return x.weight <= n * n


def in_Gn(x: JElement, n: int) -> bool:
    l, block = x.left_form()
    return in_Fn(JElement(block.exponents, l), n)


def _right_slice(args) -> tuple[set[JElement], int]:
    n, l, f = args
    image = set()
    hits = 0
    for x in _fn_slice(n, l):
        y = compose(x, f)
        image.add(y)
        hits += in_Fn(y, n)
    return image, hits


@dataclass(frozen=True)
class RatioReport:
    n: int
    family_size: int
    image_size: int
    intersection: int
    preimage_hits: int

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.intersection, self.family_size)

    @property
    def preimage_ratio(self) -> Fraction:
        """Fraction of family members x whose translate lands back in the family."""
        return Fraction(self.preimage_hits, self.family_size)

    @property
    def injective(self) -> bool:
        return self.image_size == self.family_size

    @property
    def symmetric_difference(self) -> int:
        return self.family_size + self.image_size - 2 * self.intersection


def right_report(p: FolnerParams | int, f: JElement, workers: int = 1) -> RatioReport:
    """Sizes of F_n, F_n f and F_n ∩ F_n f.

    F_n f is materialized because right translation is not injective in
    general (th[j] th[j-1] == th[j-1] th[j-1]).
    """
    p = _params(p)
    _check_budget(p, f"F_{p.n} right translate")
    n = p.n
    jobs = [(n, l, f) for l in range(-n, n + 1)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_right_slice, jobs))
    else:
        parts = []
        for job in jobs:
            log.info("F_%d * %s: slice l=%d", n, f, job[1])
            parts.append(_right_slice(job))
    image: set[JElement] = set().union(*(img for img, _ in parts))
    hits = sum(h for _, h in parts)
    inter = sum(1 for y in image if in_Fn(y, n))
    return RatioReport(n, card_Fn(p), len(image), inter, hits)


def right_ratio(p: FolnerParams | int, f: JElement, workers: int = 1) -> Fraction:
    """|F_n ∩ F_n f| / |F_n| as an exact rational, with F_n f taken as a set."""
    return right_report(p, f, workers).ratio


def right_preimage_ratio(p: FolnerParams | int, f: JElement, workers: int = 1) -> Fraction:
    """|{x in F_n : x f in F_n}| / |F_n|; equals ``right_ratio`` when x -> x f is injective."""
    return right_report(p, f, workers).preimage_ratio


def right_bound_data(f: JElement) -> tuple[int, int]:
    """(N, u) for the intersection lower bound: N = max(|s|, max|i_j|), u = total exponent."""
    big_m = max((abs(m) for m in f.support), default=0)
    return max(abs(f.shift), big_m), f.weight


def right_ratio_lower_bound(p: FolnerParams | int, f: JElement) -> Fraction:
    """(2n - 2N + 1) * sum_{k <= n^2 - u} binom(2n + k, k) / |F_n|, clipped at 0."""
    n = _params(p).n
    big_n, u = right_bound_data(f)
    width = 2 * n - 2 * big_n + 1
    if width <= 0 or n * n - u < 0:
        return Fraction(0)
    # hockey stick: sum_{k=0}^{K} binom(2n+k, k) = binom(K + 2n + 1, K)
    inner = comb(n * n - u + 2 * n + 1, n * n - u)
    return Fraction(width * inner, card_Fn(n))


def right_ratio_lower_bound_sum(n: int, f: JElement) -> Fraction:
    """Unsimplified form of ``right_ratio_lower_bound``; kept as its cross-check."""
    big_n, u = right_bound_data(f)
    width = 2 * n - 2 * big_n + 1
    if width <= 0 or n * n - u < 0:
        return Fraction(0)
    inner = sum(comb(2 * n + k, k) for k in range(n * n - u + 1))
    return Fraction(width * inner, card_Fn(n))


def left_report(p: FolnerParams | int, f: JElement) -> RatioReport:
    """Sizes of G_n, f G_n and f G_n ∩ G_n."""
    p = _params(p)
    _check_budget(p, f"G_{p.n} left translate")
    image = set()
    hits = 0
    for x in enumerate_Gn(p):
        y = compose(f, x)
        image.add(y)
        hits += in_Gn(y, p.n)
    inter = sum(1 for y in image if in_Gn(y, p.n))
    return RatioReport(p.n, card_Fn(p), len(image), inter, hits)


def left_ratio(p: FolnerParams | int, f: JElement) -> Fraction:
    """|f G_n ∩ G_n| / |G_n| as an exact rational."""
    return left_report(p, f).ratio


@dataclass(frozen=True)
class KlaweWitness:
    j: int
    f: JElement
    g: JElement
    s: JElement
    fs: JElement
    gs: JElement
    pointwise_equal: bool
    holds: bool


def klawe_witness(j: int, window: int = 30) -> KlaweWitness:
    """f = th[j], g = s = th[j-1]: fs == gs while f != g.

    Since J_Z is left cancellative, this breaks the Klawe condition for the
    opposite monoid.  ``pointwise_equal`` rechecks fs == gs on [-window, window].
    """
    f, g = theta(j), theta(j - 1)
    s = g
    fs, gs = compose(f, s), compose(g, s)
    pointwise = all(apply(fs, k) == apply(gs, k) for k in range(-window, window + 1))
    return KlaweWitness(j, f, g, s, fs, gs, pointwise, fs == gs and f != g and pointwise)


def growth_spheres(radius: int, cap: int = DEFAULT_GROWTH_CAP) -> list[int]:
    """Number of elements first reached by generator words of each length 0..radius."""
    if radius < 0:
        raise ValidationError("radius must be >= 0")
    if radius > cap:
        raise BudgetExceeded("growth ball radius", radius, cap)
    gens = list(GENERATORS.values())
    seen = {IDENTITY}
    frontier = [IDENTITY]
    spheres = [1]
    for r in range(1, radius + 1):
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
        spheres.append(len(nxt))
        log.info("growth: radius %d, ball %d", r, len(seen))
    return spheres


def growth_ball(radius: int, cap: int = DEFAULT_GROWTH_CAP) -> int:
    """Number of distinct elements expressible by generator words of length <= radius."""
    return sum(growth_spheres(radius, cap))


@dataclass(frozen=True)
class AnCensus:
    n: int
    count: int
    formula_count: int
    word_length: int
    published_word_length: int
    all_distinct: bool
    words_match: bool

    @property
    def length_discrepancy(self) -> int:
        return self.word_length - self.published_word_length


def an_word(n: int, vec: tuple[int, ...]) -> str:
    """Spelling t^-n s^h_-n t s^h_-n+1 ... t s^h_n t^-n over the generators."""
    body = "t".join("s" * h for h in vec)
    return "T" * n + body + "T" * n


def an_census(n: int, check_words: bool = True) -> AnCensus:
    """Enumerate A_n (all h_i >= 1, sum h_i = 3n+1 over indices -n..n)."""
    if not 1 <= n <= 5:
        raise ValidationError("an_census supports 1 <= n <= 5")
    elements = set()
    count = 0
    lengths = set()
    words_ok = True
    for extra in bounded_vectors(2 * n + 1, n):
        if sum(extra) != n:
            continue
        vec = tuple(k + 1 for k in extra)
        x = JElement(_theta_block(n, vec), 0)
        word = an_word(n, vec)
        lengths.add(len(word))
        if check_words and parse_word(word) != x:
            words_ok = False
        elements.add(x)
        count += 1
    if len(lengths) != 1:
        raise AssertionError(f"canonical spellings of A_{n} have lengths {sorted(lengths)}")
    return AnCensus(
        n=n,
        count=count,
        formula_count=comb(3 * n, n),
        word_length=lengths.pop(),
        published_word_length=7 * n,
        all_distinct=len(elements) == count,
        words_match=words_ok,
    )
