"""Countable ordinals below epsilon_0 in Cantor normal form.

An ordinal is the sum ``w^{e_1}*c_1 + ... + w^{e_k}*c_k`` with strictly
decreasing exponents (themselves ordinals) and positive integer
coefficients. The empty sum is 0.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Iterable, Union

logger = logging.getLogger(__name__)

MAX_HEIGHT = 64


class OrdinalOverflowError(ArithmeticError):
    """Raised when a result would need an exponent tower beyond the cap."""


class NotALimitError(ValueError):
    """Raised when a fundamental sequence is requested for a non-limit."""


class Order(str, Enum):
    LESS = "less"
    EQUAL = "equal"
    GREATER = "greater"


class Kind(str, Enum):
    ZERO = "zero"
    SUCCESSOR = "successor"
    LIMIT = "limit"


@dataclass(frozen=True)
class Ordinal:
    """An ordinal in Cantor normal form.

    ``terms`` holds ``(exponent, coefficient)`` pairs with strictly
    decreasing exponents. Use :func:`from_terms` or the arithmetic helpers
    rather than building the tuple by hand.
    """

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __lt__(self, other: OrdinalLike) -> bool:
        return _cmp(self, coerce(other)) < 0

    def __le__(self, other: OrdinalLike) -> bool:
        return _cmp(self, coerce(other)) <= 0

    def __gt__(self, other: OrdinalLike) -> bool:
        return _cmp(self, coerce(other)) > 0

    def __ge__(self, other: OrdinalLike) -> bool:
        return _cmp(self, coerce(other)) >= 0

    def __add__(self, other: OrdinalLike) -> "Ordinal":
        return add(self, coerce(other))

    def __radd__(self, other: OrdinalLike) -> "Ordinal":
        return add(coerce(other), self)

    def __mul__(self, other: OrdinalLike) -> "Ordinal":
        return mul(self, coerce(other))

    def __rmul__(self, other: OrdinalLike) -> "Ordinal":
        return mul(coerce(other), self)

    def __hash__(self) -> int:
        # Exponents are ordinals themselves; cache so memo lookups stay flat.
        cached = self.__dict__.get("_hash")
        if cached is None:
            cached = hash(self.terms)
            object.__setattr__(self, "_hash", cached)
        return cached

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)})"

    @property
    def is_finite(self) -> bool:
        return all(not e.terms for e, _ in self.terms)

    @property
    def leading_exponent(self) -> "Ordinal":
        if not self.terms:
            raise ValueError("0 has no leading exponent")
        return self.terms[0][0]

    def __int__(self) -> int:
        if not self.is_finite:
            raise ValueError(f"{self} is not finite")
        return self.terms[0][1] if self.terms else 0


OrdinalLike = Union[Ordinal, int]

ZERO = Ordinal()


def of_int(n: int) -> Ordinal:
    """The finite ordinal ``n``."""
    if n < 0:
        raise ValueError(f"ordinals are nonnegative, got {n}")
    return Ordinal(((ZERO, n),)) if n else ZERO


ONE = of_int(1)
OMEGA = Ordinal(((ONE, 1),))


def coerce(value: OrdinalLike) -> Ordinal:
    if isinstance(value, Ordinal):
        return value
    if isinstance(value, int) and not isinstance(value, bool):
        return of_int(value)
    raise TypeError(f"cannot interpret {value!r} as an ordinal")


def from_terms(terms: Iterable[tuple[OrdinalLike, int]]) -> Ordinal:
    """Build an ordinal from CNF terms, validating the normal form."""
    out: list[tuple[Ordinal, int]] = []
    for exponent, coefficient in terms:
        exponent = coerce(exponent)
        if coefficient < 1:
            raise ValueError(f"coefficient must be positive, got {coefficient}")
        if out and _cmp(out[-1][0], exponent) <= 0:
            raise ValueError("exponents must be strictly decreasing")
        out.append((exponent, coefficient))
    result = Ordinal(tuple(out))
    _check_height(result)
    return result


@lru_cache(maxsize=None)
def height(a: Ordinal) -> int:
    """Depth of the exponent tree; finite ordinals have height at most 1."""
    return max((1 + height(e) for e, _ in a.terms), default=0)


def _check_height(a: Ordinal) -> None:
    if height(a) > MAX_HEIGHT:
        raise OrdinalOverflowError(
            f"exponent tower deeper than {MAX_HEIGHT} is not supported"
        )


@lru_cache(maxsize=None)
def _cmp(a: Ordinal, b: Ordinal) -> int:
    for (ea, ca), (eb, cb) in zip(a.terms, b.terms):
        c = _cmp(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    return (len(a.terms) > len(b.terms)) - (len(a.terms) < len(b.terms))


def compare(a: OrdinalLike, b: OrdinalLike) -> Order:
    c = _cmp(coerce(a), coerce(b))
    return Order.LESS if c < 0 else Order.GREATER if c > 0 else Order.EQUAL


def max_ordinal(*values: OrdinalLike) -> Ordinal:
    return max((coerce(v) for v in values), default=ZERO)


def min_ordinal(*values: OrdinalLike) -> Ordinal:
    return min(coerce(v) for v in values)


@lru_cache(maxsize=None)
def _add(a: Ordinal, b: Ordinal) -> Ordinal:
    if not b.terms:
        return a
    lead, coefficient = b.terms[0]
    kept: list[tuple[Ordinal, int]] = []
    for exponent, c in a.terms:
        order = _cmp(exponent, lead)
        if order > 0:
            kept.append((exponent, c))
        elif order == 0:
            coefficient += c
            break
        else:
            break
    return Ordinal(tuple(kept) + ((lead, coefficient),) + b.terms[1:])


def add(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinal sum; small terms of ``a`` are absorbed by the lead of ``b``."""
    return _add(coerce(a), coerce(b))


@lru_cache(maxsize=None)
def _mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if not a.terms or not b.terms:
        return ZERO
    lead, lead_coefficient = a.terms[0]
    out: list[tuple[Ordinal, int]] = []
    for exponent, c in b.terms:
        if exponent.terms:
            out.append((_add(lead, exponent), c))
        else:
            out.append((lead, lead_coefficient * c))
            out.extend(a.terms[1:])
    return Ordinal(tuple(out))


def mul(a: OrdinalLike, b: OrdinalLike) -> Ordinal:
    """Ordinal product ``a * b`` (``b`` copies of ``a``)."""
    return _mul(coerce(a), coerce(b))


def omega_pow(a: OrdinalLike) -> Ordinal:
    """``w^a``."""
    result = Ordinal(((coerce(a), 1),))
    _check_height(result)
    return result


def pow_nat(a: OrdinalLike, n: int) -> Ordinal:
    """``a^n`` for a natural exponent, by iterated multiplication."""
    if n < 0:
        raise ValueError(f"exponent must be nonnegative, got {n}")
    a = coerce(a)
    result = ONE
    for _ in range(n):
        result = _mul(result, a)
    return result


def classify(a: OrdinalLike) -> Kind:
    a = coerce(a)
    if not a.terms:
        return Kind.ZERO
    return Kind.LIMIT if a.terms[-1][0].terms else Kind.SUCCESSOR


def succ(a: OrdinalLike) -> Ordinal:
    return add(a, ONE)


def pred(a: OrdinalLike) -> Ordinal:
    """Predecessor of a successor ordinal."""
    a = coerce(a)
    if classify(a) is not Kind.SUCCESSOR:
        raise ValueError(f"{a} is not a successor")
    exponent, c = a.terms[-1]
    head = a.terms[:-1]
    return Ordinal(head + ((exponent, c - 1),)) if c > 1 else Ordinal(head)


@lru_cache(maxsize=None)
def _fund_seq(a: Ordinal, n: int) -> Ordinal:
    exponent, c = a.terms[-1]
    head = a.terms[:-1] + (((exponent, c - 1),) if c > 1 else ())
    if classify(exponent) is Kind.SUCCESSOR:
        tail = (pred(exponent), n)
    else:
        tail = (_fund_seq(exponent, n), 1)
    return Ordinal(head + (tail,))


def fund_seq(a: OrdinalLike, n: int) -> Ordinal:
    """The n-th member (n >= 1) of the canonical sequence increasing to ``a``.

    The last term ``w^e*c`` is peeled: a successor exponent ``e = d+1``
    contributes ``w^d*n``, a limit exponent contributes
    ``w^{fund_seq(e, n)}``.
    """
    a = coerce(a)
    if classify(a) is not Kind.LIMIT:
        raise NotALimitError(f"{a} is not a limit ordinal")
    if n < 1:
        raise ValueError(f"fundamental sequences start at n=1, got {n}")
    return _fund_seq(a, n)


def sub(b: OrdinalLike, a: OrdinalLike) -> Ordinal:
    """Left subtraction: the unique ``d`` with ``a + d == b`` (needs a <= b)."""
    a, b = coerce(a), coerce(b)
    if _cmp(a, b) > 0:
        raise ValueError(f"cannot subtract {a} from the smaller {b}")
    for i, ((ea, ca), (eb, cb)) in enumerate(zip(a.terms, b.terms)):
        if ea == eb and ca == cb:
            continue
        if ea == eb:
            return Ordinal(((eb, cb - ca),) + b.terms[i + 1 :])
        return Ordinal(b.terms[i:])
    return Ordinal(b.terms[len(a.terms) :])


def is_additively_indecomposable(a: OrdinalLike) -> bool:
    """True for ordinals of the form ``w^e``."""
    a = coerce(a)
    return len(a.terms) == 1 and a.terms[0][1] == 1


def split_last(a: OrdinalLike) -> tuple[Ordinal, Ordinal]:
    """Split ``a`` as ``beta + gamma`` with ``gamma = w^e`` its last unit term."""
    a = coerce(a)
    if not a.terms:
        raise ValueError("0 has no additive split")
    exponent, c = a.terms[-1]
    head = a.terms[:-1] + (((exponent, c - 1),) if c > 1 else ())
    return Ordinal(head), Ordinal(((exponent, 1),))


def format_ordinal(a: Ordinal) -> str:
    """Print in the ``w^{e}*c+...`` grammar."""
    if not a.terms:
        return "0"
    parts = []
    for exponent, c in a.terms:
        if not exponent.terms:
            parts.append(str(c))
            continue
        base = "w" if exponent == ONE else f"w^{{{format_ordinal(exponent)}}}"
        parts.append(base if c == 1 else f"{base}*{c}")
    return "+".join(parts)
