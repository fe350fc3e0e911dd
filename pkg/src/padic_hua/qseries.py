"""Exact q-series primitives.

Finite q-Pochhammer symbols (a; q)_n = prod_{j=0}^{n-1} (1 - a*q^j) are
computed as exact rationals.  The infinite product (a; q)_oo is returned as a
certified rational bracket [lower, upper] whose width is controlled by the
caller.  No floating point is used anywhere in this module.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Union

Rational = Union[int, Fraction]


@dataclass(frozen=True)
class Bracket:
    """Closed rational interval certified to contain a real value.

    Width guarantees are documented by the producing operation; every
    arithmetic operation below is outward-correct (the result bracket
    contains every possible combination of points from the operands).
    """

    lower: Fraction
    upper: Fraction

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError(f"empty bracket: [{self.lower}, {self.upper}]")

    @classmethod
    def exact(cls, value: Rational) -> "Bracket":
        v = Fraction(value)
        return cls(v, v)

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> Fraction:
        return (self.lower + self.upper) / 2

    def contains(self, value: Rational) -> bool:
        return self.lower <= value <= self.upper

    def encloses(self, other: "Bracket") -> bool:
        return self.lower <= other.lower and other.upper <= self.upper

    def overlaps(self, other: "Bracket") -> bool:
        return self.lower <= other.upper and other.lower <= self.upper

    def __add__(self, other):
        o = _as_bracket(other)
        return Bracket(self.lower + o.lower, self.upper + o.upper)

    __radd__ = __add__

    def __neg__(self):
        return Bracket(-self.upper, -self.lower)

    def __sub__(self, other):
        return self + (-_as_bracket(other))

    def __rsub__(self, other):
        return _as_bracket(other) + (-self)

    def __mul__(self, other):
        o = _as_bracket(other)
        products = (self.lower * o.lower, self.lower * o.upper,
                    self.upper * o.lower, self.upper * o.upper)
        return Bracket(min(products), max(products))

    __rmul__ = __mul__

    def __abs__(self):
        if self.lower >= 0:
            return self
        if self.upper <= 0:
            return -self
        return Bracket(Fraction(0), max(-self.lower, self.upper))

    def __float__(self):
        return float(self.midpoint)

    def __repr__(self):
        return f"Bracket({self.lower}, {self.upper})"


def _as_bracket(value) -> Bracket:
    if isinstance(value, Bracket):
        return value
    return Bracket.exact(value)


def bracket_sum(items) -> Bracket:
    total = Bracket.exact(0)
    for item in items:
        total = total + item
    return total


# Prefix products (a;q)_0, (a;q)_1, ... cached per (a, q).
_POCHHAMMER_CACHE: dict = {}


def pochhammer(a: Rational, q: Rational, n: int) -> Fraction:
    """(a; q)_n = prod_{j=0}^{n-1} (1 - a*q^j), exactly; (a; q)_0 = 1."""
    if n < 0:
        raise ValueError(f"pochhammer length must be >= 0, got {n}")
    a = Fraction(a)
    q = Fraction(q)
    key = (a, q)
    prefix = _POCHHAMMER_CACHE.get(key)
    if prefix is None:
        prefix = _POCHHAMMER_CACHE[key] = [Fraction(1)]
    while len(prefix) <= n:
        j = len(prefix) - 1
        prefix.append(prefix[-1] * (1 - a * q**j))
    return prefix[n]


def truncation_order(a: Rational, q: Rational, eps: Rational) -> int:
    """Smallest K with a*q^K/(1-q) <= min(eps, 1/2).

    The geometric tail bound sum_{j>=K} a*q^j = a*q^K/(1-q) controls the
    infinite-product remainder via prod_{j>=K}(1 - a*q^j) >= 1 - a*q^K/(1-q).
    """
    a = Fraction(a)
    q = Fraction(q)
    eps = Fraction(eps)
    if eps <= 0:
        raise ValueError(f"eps must be positive, got {eps}")
    target = min(eps, Fraction(1, 2))
    k = 0
    tail = a / (1 - q)
    while tail > target:
        tail *= q
        k += 1
    return k


def pochhammer_inf(a: Rational, q: Rational, eps: Rational) -> Bracket:
    """Certified bracket of width <= eps around (a; q)_oo.

    Requires 0 <= a < 1 and 0 < q < 1.  Truncates at K given by
    truncation_order and brackets the tail by
    1 - a*q^K/(1-q) <= prod_{j>=K}(1 - a*q^j) <= 1.
    """
    a = Fraction(a)
    q = Fraction(q)
    if not 0 < q < 1:
        raise ValueError(f"need 0 < q < 1, got q = {q}")
    if a < 0 or a >= 1:
        raise ValueError(f"need 0 <= a < 1 for a convergent positive product, got a = {a}")
    if a == 0:
        return Bracket.exact(1)
    k = truncation_order(a, q, eps)
    head = pochhammer(a, q, k)
    tail_lower = 1 - a * q**k / (1 - q)
    return Bracket(head * tail_lower, head)
