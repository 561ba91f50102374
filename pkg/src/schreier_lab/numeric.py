"""Exact rationals, certified enclosures and square-root thresholds."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Optional, Union

Rational = Union[Fraction, int]


def format_fraction(q: Rational) -> str:
    """Lowest-terms ``p/q`` (or ``p`` for integers)."""
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def exact_sqrt(q: Rational) -> Optional[Fraction]:
    """The rational square root of ``q`` when it exists."""
    q = Fraction(q)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n == q.numerator and d * d == q.denominator:
        return Fraction(n, d)
    return None


@dataclass(frozen=True)
class Enclosure:
    """A closed rational interval known to contain a real value."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty enclosure [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value: Rational) -> "Enclosure":
        return cls(Fraction(value), Fraction(value))

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    def contains(self, value: Rational) -> bool:
        return self.lo <= value <= self.hi

    def contains_sqrt(self, square: Rational) -> bool:
        """Whether ``sqrt(square)`` lies in the enclosure, decided on squares."""
        return self.lo**2 <= square <= self.hi**2 and self.hi >= 0

    def scale(self, k: Rational) -> "Enclosure":
        k = Fraction(k)
        if k < 0:
            raise ValueError("enclosures scale by nonnegative factors only")
        return Enclosure(self.lo * k, self.hi * k)

    def __str__(self) -> str:
        if self.is_exact:
            return format_fraction(self.lo)
        return f"[{format_fraction(self.lo)}, {format_fraction(self.hi)}]"


def sqrt_enclosure(square: Rational, width: Rational) -> Enclosure:
    """Enclose ``sqrt(square)`` in an interval of width at most ``width``."""
    square = Fraction(square)
    if square < 0:
        raise ValueError(f"cannot take the square root of {square}")
    root = exact_sqrt(square)
    if root is not None:
        return Enclosure.exact(root)
    a, b = square.numerator, square.denominator
    scale = 1
    while Fraction(1, b * scale) > width:
        scale *= 2
    # sqrt(a/b) = sqrt(a*b)/b
    r = isqrt(a * b * scale * scale)
    return Enclosure(Fraction(r, b * scale), Fraction(r + 1, b * scale))


def _squarefree_split(n: int) -> tuple[int, int]:
    """Write ``n = f*f*m`` with ``m`` squarefree."""
    f, m, p = 1, 1, 2
    while p * p <= n:
        while n % (p * p) == 0:
            n //= p * p
            f *= p
        if n % p == 0:
            n //= p
            m *= p
        p += 1
    return f, m * n


@dataclass(frozen=True)
class Threshold:
    """A nonnegative real ``eps`` stored exactly through its square.

    Covers rational thresholds and the ``r/sqrt(m)`` values used for
    l_2-type separation constants.
    """

    square: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "square", Fraction(self.square))
        if self.square < 0:
            raise ValueError("thresholds are nonnegative")

    @classmethod
    def of(cls, value: Union["Threshold", Rational]) -> "Threshold":
        if isinstance(value, Threshold):
            return value
        value = Fraction(value)
        if value < 0:
            raise ValueError(f"thresholds are nonnegative, got {value}")
        return cls(value * value)

    @classmethod
    def over_sqrt(cls, r: Rational, m: int) -> "Threshold":
        """The threshold ``r/sqrt(m)``."""
        if m < 1:
            raise ValueError(f"sqrt argument must be positive, got {m}")
        return cls(Fraction(r) ** 2 / m)

    @property
    def rational(self) -> Optional[Fraction]:
        return exact_sqrt(self.square)

    def scaled(self, k: Rational) -> "Threshold":
        return Threshold(self.square * Fraction(k) ** 2)

    def at_most(self, value: Rational) -> bool:
        """``eps <= value``."""
        value = Fraction(value)
        return value >= 0 and self.square <= value * value

    def exceeds(self, value: Rational) -> bool:
        """``eps > value``."""
        return not self.at_most(value)

    def enclosure(self, width: Rational) -> Enclosure:
        return sqrt_enclosure(self.square, width)

    def __str__(self) -> str:
        root = self.rational
        if root is not None:
            return format_fraction(root)
        u, v = self.square.numerator, self.square.denominator
        f, m = _squarefree_split(u * v)
        r = Fraction(f * m, v)
        head = format_fraction(r)
        return f"{head}/sqrt({m})"
