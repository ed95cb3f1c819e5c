"""Symbolic CAR algebra over Z: Wick ordering, quasi-free evaluation, index actions.

Canonical (Wick) order puts creators first with increasing sites, then
annihilators with decreasing sites, e.g. ``a+[1] a+[3] a[4] a[2]``.  That is
the pattern ``a+_{i1}..a+_{im} a_{jn}..a_{j1}`` of the determinant formula,
so a canonical monomial is evaluated without extra signs.
"""

from __future__ import annotations

import re
from functools import lru_cache
from typing import Callable, Iterable, Mapping, NamedTuple

import numpy as np

from .errors import ValidationError
from .monoid import JElement, apply

DEGREE_CAP = 12

Covariance = Callable[[int, int], complex]


class CarOp(NamedTuple):
    site: int
    dagger: bool

    def __str__(self) -> str:
        return f"a+[{self.site}]" if self.dagger else f"a[{self.site}]"


Monomial = tuple[CarOp, ...]


def create(j: int) -> CarOp:
    return CarOp(int(j), True)


def annihilate(j: int) -> CarOp:
    return CarOp(int(j), False)


def _key(op: CarOp) -> tuple[int, int]:
    return (0, op.site) if op.dagger else (1, -op.site)


def is_wick_ordered(m: Monomial) -> bool:
    return all(_key(x) < _key(y) for x, y in zip(m, m[1:]))


@lru_cache(maxsize=200_000)
def _normal_order(m: Monomial) -> tuple[tuple[Monomial, int], ...]:
    # leftmost out-of-order adjacent pair: xy = -yx + {x, y}
    for i in range(len(m) - 1):
        x, y = m[i], m[i + 1]
        kx, ky = _key(x), _key(y)
        if kx == ky:
            return ()
        if kx > ky:
            out: dict[Monomial, int] = {}
            swapped = m[:i] + (y, x) + m[i + 2 :]
            for mono, c in _normal_order(swapped):
                out[mono] = out.get(mono, 0) - c
            if x.site == y.site and x.dagger != y.dagger:
                for mono, c in _normal_order(m[:i] + m[i + 2 :]):
                    out[mono] = out.get(mono, 0) + c
            return tuple((k, v) for k, v in out.items() if v)
    return ((m, 1),)


def _normal_order_rightmost(m: Monomial) -> dict[Monomial, int]:
    """Same rewriting with the rightmost redex first; used to test confluence."""
    for i in range(len(m) - 2, -1, -1):
        x, y = m[i], m[i + 1]
        kx, ky = _key(x), _key(y)
        if kx == ky:
            return {}
        if kx > ky:
            out: dict[Monomial, int] = {}
            for mono, c in _normal_order_rightmost(m[:i] + (y, x) + m[i + 2 :]).items():
                out[mono] = out.get(mono, 0) - c
            if x.site == y.site and x.dagger != y.dagger:
                for mono, c in _normal_order_rightmost(m[:i] + m[i + 2 :]).items():
                    out[mono] = out.get(mono, 0) + c
            return {k: v for k, v in out.items() if v}
    return {m: 1}


class CarPolynomial:
    """Finite linear combination of Wick-ordered monomials with complex coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[Monomial, complex] | None = None, *, ordered: bool = False):
        acc: dict[Monomial, complex] = {}
        for mono, c in (terms or {}).items():
            mono = tuple(mono)
            if ordered:
                pieces = ((mono, 1),)
            else:
                if len(mono) > DEGREE_CAP:
                    raise ValidationError(f"degree {len(mono)} exceeds normal-ordering cap {DEGREE_CAP}")
                pieces = _normal_order(mono)
            for w, s in pieces:
                acc[w] = acc.get(w, 0) + s * complex(c)
        self.terms = {k: v for k, v in acc.items() if v != 0}

    @classmethod
    def unit(cls, c: complex = 1.0) -> "CarPolynomial":
        return cls({(): c}, ordered=True)

    @classmethod
    def monomial(cls, ops: Iterable[CarOp], c: complex = 1.0) -> "CarPolynomial":
        return cls({tuple(ops): c})

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, float, complex)):
            other = CarPolynomial.unit(other)
        if not isinstance(other, CarPolynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __add__(self, other) -> "CarPolynomial":
        if isinstance(other, (int, float, complex)):
            other = CarPolynomial.unit(other)
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return CarPolynomial(acc, ordered=True)

    __radd__ = __add__

    def __neg__(self) -> "CarPolynomial":
        return CarPolynomial({k: -v for k, v in self.terms.items()}, ordered=True)

    def __sub__(self, other) -> "CarPolynomial":
        return self + (-other)

    def __rsub__(self, other) -> "CarPolynomial":
        return (-self) + other

    def __mul__(self, other) -> "CarPolynomial":
        if isinstance(other, (int, float, complex)):
            return CarPolynomial({k: v * other for k, v in self.terms.items()}, ordered=True)
        if isinstance(other, CarOp):
            other = CarPolynomial.monomial([other])
        acc: dict[Monomial, complex] = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in other.terms.items():
                acc[k1 + k2] = acc.get(k1 + k2, 0) + v1 * v2
        return CarPolynomial(acc)

    def __rmul__(self, other) -> "CarPolynomial":
        if isinstance(other, (int, float, complex)):
            return self * other
        return NotImplemented

    def dagger(self) -> "CarPolynomial":
        """Adjoint: reverse each word, flip creators and annihilators, conjugate."""
        acc = {}
        for mono, c in self.terms.items():
            rev = tuple(CarOp(op.site, not op.dagger) for op in reversed(mono))
            acc[rev] = complex(c).conjugate()
        return CarPolynomial(acc)

    @property
    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def sites(self) -> list[int]:
        return sorted({op.site for mono in self.terms for op in mono})

    def map_sites(self, relabel: Callable[[int], int]) -> "CarPolynomial":
        acc = {}
        for mono, c in self.terms.items():
            new = tuple(CarOp(relabel(op.site), op.dagger) for op in mono)
            acc[new] = acc.get(new, 0) + c
        return CarPolynomial(acc)

    def is_close(self, other: "CarPolynomial", tol: float = 1e-12) -> bool:
        keys = set(self.terms) | set(other.terms)
        return all(abs(self.terms.get(k, 0) - other.terms.get(k, 0)) <= tol for k in keys)

    def __repr__(self) -> str:
        return f"CarPolynomial({format_polynomial(self)})"


def normal_order(m: Iterable[CarOp] | str) -> CarPolynomial:
    """Unique Wick-ordered polynomial equal to the given word."""
    if isinstance(m, str):
        return parse_monomial(m)
    return CarPolynomial.monomial(m)


def position(j: int) -> CarPolynomial:
    """x_j = a_j + a_j^dag."""
    return CarPolynomial({(annihilate(j),): 1.0, (create(j),): 1.0})


def wick_det(mono: Monomial, cov: Covariance) -> complex:
    """Value of one Wick-ordered monomial: delta_{m,n} det[cov(i_k, j_l)]."""
    cre = [op.site for op in mono if op.dagger]
    ann = [op.site for op in mono if not op.dagger][::-1]
    if len(cre) != len(ann):
        return 0j
    if not cre:
        return 1.0 + 0j
    if len(cre) == 1:
        return complex(cov(cre[0], ann[0]))
    M = np.array([[cov(i, j) for j in ann] for i in cre], dtype=complex)
    return complex(np.linalg.det(M))


def eval_quasifree(p: CarPolynomial, cov: Covariance) -> complex:
    """Gauge-invariant quasi-free expectation, linear in ``p``."""
    return sum((c * wick_det(mono, cov) for mono, c in p.terms.items()), 0j)


class MatrixCovariance:
    """Covariance given by an explicit Hermitian matrix over a list of sites."""

    def __init__(self, sites: Iterable[int], matrix: np.ndarray):
        self.sites = list(sites)
        self.index = {s: i for i, s in enumerate(self.sites)}
        self.matrix = np.asarray(matrix, dtype=complex)

    def __call__(self, m: int, n: int) -> complex:
        try:
            return complex(self.matrix[self.index[m], self.index[n]])
        except KeyError:
            raise ValidationError(f"site outside covariance window: {m}, {n}") from None


def act_index(p: CarPolynomial, g: JElement) -> CarPolynomial:
    """alpha_g: a_j -> a_{g(j)}, a_j^dag -> a_{g(j)}^dag."""
    return p.map_sites(lambda j: apply(g, j))


def act_transposition(p: CarPolynomial, i: int, j: int) -> CarPolynomial:
    def swap(k: int) -> int:
        return j if k == i else i if k == j else k

    return p.map_sites(swap)


def parity(p: CarPolynomial) -> tuple[CarPolynomial, CarPolynomial]:
    """(even part, odd part) by factor count."""
    even = {k: v for k, v in p.terms.items() if len(k) % 2 == 0}
    odd = {k: v for k, v in p.terms.items() if len(k) % 2 == 1}
    return CarPolynomial(even, ordered=True), CarPolynomial(odd, ordered=True)


def grading(p: CarPolynomial) -> CarPolynomial:
    """Parity automorphism: even part minus odd part."""
    even, odd = parity(p)
    return even - odd


# text syntax: a+[j] creator, a[j] annihilator, x[j] position, '*' product
_FACTOR = re.compile(r"\s*(a\+|a|x)\[\s*(-?\d+)\s*\]\s*")


def parse_factors(text: str) -> list[tuple[str, int]]:
    text = text.strip()
    if text in ("", "I", "1"):
        return []
    out = []
    for chunk in text.split("*"):
        m = _FACTOR.fullmatch(chunk)
        if not m:
            raise ValidationError(f"cannot parse factor {chunk.strip()!r}")
        out.append((m.group(1), int(m.group(2))))
    return out


def parse_monomial(text: str) -> CarPolynomial:
    """Parse e.g. ``"a[1]*a+[2]"`` or ``"x[1]*x[2]"`` into a Wick-ordered polynomial."""
    result = CarPolynomial.unit()
    for kind, j in parse_factors(text):
        if kind == "a+":
            factor = CarPolynomial.monomial([create(j)])
        elif kind == "a":
            factor = CarPolynomial.monomial([annihilate(j)])
        else:
            factor = position(j)
        result = result * factor
    return result


def parse_word(text: str) -> Monomial:
    """Parse a word of a/a+ factors without reordering."""
    ops = []
    for kind, j in parse_factors(text):
        if kind == "x":
            raise ValidationError("position operators are sums; use parse_monomial")
        ops.append(CarOp(j, kind == "a+"))
    return tuple(ops)


def format_monomial(m: Monomial) -> str:
    return "*".join(str(op) for op in m) if m else "I"


def _format_coeff(c: complex) -> str:
    c = complex(c)
    if c.imag == 0:
        return f"{c.real:.12g}"
    if c.real == 0:
        return f"{c.imag:.12g}i"
    return f"({c.real:.12g}{c.imag:+.12g}i)"


def format_polynomial(p: CarPolynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono, c in sorted(p.terms.items(), key=lambda kv: (len(kv[0]), [_key(o) for o in kv[0]])):
        parts.append(f"{_format_coeff(c)}*{format_monomial(mono)}" if mono else _format_coeff(c))
    return " + ".join(parts)


def random_word(rng: np.random.Generator, sites: list[int], max_degree: int, wick: bool) -> Monomial:
    deg = int(rng.integers(0, max_degree + 1))
    ops = [CarOp(int(rng.choice(sites)), bool(rng.integers(0, 2))) for _ in range(deg)]
    if wick:
        # drop repeats, then sort into canonical order
        ops = sorted(set(ops), key=_key)
    return tuple(ops)
