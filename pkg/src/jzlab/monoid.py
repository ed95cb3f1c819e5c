"""Normal forms for the monoid J_Z of strictly increasing maps of Z with cofinite range.

Every element is stored as ``th[h_1]^p_1 ... th[h_r]^p_r t^l`` with
``h_1 < ... < h_r`` and ``p_i >= 1``: a product of right partial shifts
followed by a power of the unit shift.  Products are read as composition,
``f * g = f o g`` (``g`` acts first).

The element with exponents ``{m: h_m}`` and shift ``l`` is the map

    k  ->  k + l + sum(h_m for m <= k + l)

Composition uses the rewriting rules

    t^a th[m] t^-a = th[m + a]
    th[k] th[j]    = th[j] th[k - 1]      (j < k)

so it never needs to evaluate maps pointwise.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Mapping

from .errors import ValidationError

__all__ = [
    "JElement",
    "IDENTITY",
    "theta",
    "psi",
    "tau_power",
    "compose",
    "apply",
    "parse_word",
    "parse_normal_form",
    "GENERATORS",
]


@dataclass(frozen=True, order=True)
class JElement:
    """Canonical normal form of an element of J_Z.

    ``exponents`` is a sorted tuple of ``(index, exponent)`` pairs with every
    exponent >= 1; ``shift`` is the power of tau on the right.
    """

    exponents: tuple[tuple[int, int], ...] = ()
    shift: int = 0

    def __post_init__(self):
        prev = None
        for m, p in self.exponents:
            if p < 1:
                raise ValidationError(f"stored exponents must be >= 1, got {p} at {m}")
            if prev is not None and m <= prev:
                raise ValidationError("exponent indices must be strictly increasing")
            prev = m

    @classmethod
    def from_map(cls, exponents: Mapping[int, int], shift: int = 0) -> "JElement":
        """Build from an index -> exponent mapping; zero exponents are dropped."""
        items = []
        for m, p in sorted(exponents.items()):
            if p < 0:
                raise ValidationError(f"negative exponent {p} at index {m}")
            if p:
                items.append((int(m), int(p)))
        return cls(tuple(items), int(shift))

    @property
    def exponent_map(self) -> dict[int, int]:
        return dict(self.exponents)

    @property
    def weight(self) -> int:
        """Total exponent; equals the size of the range complement."""
        return sum(p for _, p in self.exponents)

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(m for m, _ in self.exponents)

    def is_identity(self) -> bool:
        return not self.exponents and self.shift == 0

    def __call__(self, k: int) -> int:
        return apply(self, k)

    def __mul__(self, other: "JElement") -> "JElement":
        if not isinstance(other, JElement):
            return NotImplemented
        return compose(self, other)

    def conjugate(self, a: int) -> "JElement":
        """Return ``t^a * self * t^-a``."""
        return JElement(tuple((m + a, p) for m, p in self.exponents), self.shift)

    def theta_part(self) -> "JElement":
        """The D_Z factor (shift dropped)."""
        return JElement(self.exponents, 0)

    def left_form(self) -> tuple[int, "JElement"]:
        """Return ``(l, A)`` with ``self == t^l * A`` and ``A`` shift-free."""
        l = self.shift
        return l, JElement(tuple((m - l, p) for m, p in self.exponents), 0)

    def range_complement(self) -> list[int]:
        """Integers not hit by the map, listed in increasing order."""
        out = []
        for m, p in self.exponents:
            # values skipped just below the image of the first point x >= m
            top = apply(self, m - self.shift)
            out.extend(range(top - p, top))
        return out

    def __str__(self) -> str:
        if self.is_identity():
            return "id"
        parts = [f"th[{m}]" + (f"^{p}" if p != 1 else "") for m, p in self.exponents]
        if self.shift:
            parts.append(f"t^{self.shift}")
        return " ".join(parts)


IDENTITY = JElement()


def theta(h: int) -> JElement:
    """Right partial shift: fixes k < h, sends k >= h to k + 1."""
    return JElement(((int(h), 1),), 0)


def psi(h: int) -> JElement:
    """Left partial shift: fixes k > h, sends k <= h to k - 1.  Equals th[h] t^-1."""
    return JElement(((int(h), 1),), -1)


def tau_power(l: int) -> JElement:
    return JElement((), int(l))


def _insert_block(exps: dict[int, int], b: int, p: int) -> None:
    # exps * th[b]^p, in place.  Moving th[b] left past th[m] (m > b) turns it
    # into th[m - 1]; after p copies an index m > b lands on max(m - p, b).
    moved: dict[int, int] = {}
    for m in [m for m in exps if m > b]:
        q = exps.pop(m)
        target = max(m - p, b)
        moved[target] = moved.get(target, 0) + q
    for m, q in moved.items():
        exps[m] = exps.get(m, 0) + q
    exps[b] = exps.get(b, 0) + p


def compose(f: JElement, g: JElement) -> JElement:
    """Normal form of ``f o g``."""
    # f g = A t^a B t^b = A (t^a B t^-a) t^(a+b)
    exps = dict(f.exponents)
    for m, p in g.exponents:
        _insert_block(exps, m + f.shift, p)
    return JElement.from_map(exps, f.shift + g.shift)


def apply(f: JElement, k: int) -> int:
    x = k + f.shift
    return x + sum(p for m, p in f.exponents if m <= x)


GENERATORS = {
    "t": tau_power(1),
    "T": tau_power(-1),
    "s": theta(0),
}


def parse_word(word: str | Iterable[str]) -> JElement:
    """Fold composition over a generator word over ``{t, T, s}``.

    ``t`` is tau, ``T`` its inverse, ``s`` is th[0].  Whitespace is ignored;
    the empty word is the identity.
    """
    letters = [c for c in word if not c.isspace()]
    try:
        gens = [GENERATORS[c] for c in letters]
    except KeyError as exc:
        raise ValidationError(f"unknown generator letter {exc.args[0]!r}") from None
    return reduce(compose, gens, IDENTITY)


_TOKEN = re.compile(r"th\[(-?\d+)\](?:\^(\d+))?|t\^(-?\d+)|t\b|id")


def parse_normal_form(text: str) -> JElement:
    """Inverse of ``str(JElement)``; also accepts any product of th[..] and t^.. tokens."""
    text = text.strip()
    pos = 0
    result = IDENTITY
    seen = False
    while pos < len(text):
        if text[pos].isspace() or text[pos] == "*":
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m:
            raise ValidationError(f"cannot parse normal form at {text[pos:]!r}")
        if m.group(1) is not None:
            p = int(m.group(2)) if m.group(2) else 1
            factor = JElement(((int(m.group(1)), p),), 0) if p else IDENTITY
        elif m.group(3) is not None:
            factor = tau_power(int(m.group(3)))
        elif m.group(0) == "t":
            factor = tau_power(1)
        else:
            factor = IDENTITY
        result = compose(result, factor)
        seen = True
        pos = m.end()
    if not seen:
        raise ValidationError("empty normal form (use 'id' for the identity)")
    return result
