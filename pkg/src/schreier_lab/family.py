"""Symbolic regular families of finite subsets of N.

Families are immutable expressions built from ``A(n)``, ``S(xi)``,
``Comb(outer, inner)`` (the family ``outer[inner]``), ``Pre(base, m)``
(``base(M^-1)``) and ``Drv(base, eta)`` (the eta-th Cantor-Bendixson
derivative). Finite sets are strictly increasing tuples of positive ints.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

from .config import default_settings
from .ordinal import (
    ONE,
    ZERO,
    Kind,
    Ordinal,
    OrdinalLike,
    add,
    classify,
    coerce,
    format_ordinal,
    fund_seq,
    mul,
    of_int,
    omega_pow,
    pred,
    sub,
    succ,
)

logger = logging.getLogger(__name__)

FinSet = tuple[int, ...]


class FamilyError(ValueError):
    """Raised on invalid family parameters or violated preconditions."""


class EmptyFamilyError(FamilyError):
    """Raised when a family expression denotes the empty family."""


class OracleError(FamilyError):
    """Raised when the rank oracle cannot decide within its limits."""


def as_finset(values: Iterable[int]) -> FinSet:
    """Validate and normalise a finite set of positive integers."""
    items = tuple(values)
    ordered = tuple(sorted(items))
    if len(set(ordered)) != len(ordered):
        raise FamilyError(f"duplicate elements in {items}")
    if ordered and ordered[0] < 1:
        raise FamilyError(f"elements must be positive, got {items}")
    return ordered


def format_finset(e: Sequence[int]) -> str:
    return "[" + ",".join(str(i) for i in e) + "]"


def ext(e: FinSet) -> FinSet:
    """``e`` with the next integer after its maximum appended; ``(1,)`` for empty."""
    return e + ((e[-1] + 1) if e else 1,)


def is_spread(e: Sequence[int], f: Sequence[int]) -> bool:
    """True iff ``f`` dominates ``e`` coordinatewise with the same size."""
    return len(e) == len(f) and all(a <= b for a, b in zip(e, f))


def interval_partitions(e: FinSet) -> Iterator[tuple[FinSet, ...]]:
    """All decompositions of ``e`` into successive nonempty runs."""
    if not e:
        yield ()
        return
    for cut in range(1, len(e) + 1):
        head = e[:cut]
        for rest in interval_partitions(e[cut:]):
            yield (head,) + rest


@dataclass(frozen=True)
class SetGen:
    """The infinite set ``prefix U {start, start+step, ...}``."""

    prefix: FinSet = ()
    start: int = 1
    step: int = 1

    def __post_init__(self) -> None:
        object.__setattr__(self, "prefix", as_finset(self.prefix))
        if self.step < 1:
            raise FamilyError(f"step must be positive, got {self.step}")
        if self.start < 1 or (self.prefix and self.start <= self.prefix[-1]):
            raise FamilyError(
                f"start {self.start} must exceed every prefix element {self.prefix}"
            )

    def nth(self, n: int) -> int:
        """The n-th element, counting from 1."""
        if n < 1:
            raise FamilyError(f"positions start at 1, got {n}")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        return self.start + (n - len(self.prefix) - 1) * self.step

    def index_of(self, value: int) -> Optional[int]:
        if value in self.prefix:
            return self.prefix.index(value) + 1
        offset = value - self.start
        if offset < 0 or offset % self.step:
            return None
        return len(self.prefix) + offset // self.step + 1

    def __contains__(self, value: int) -> bool:
        return self.index_of(value) is not None

    def take(self, count: int) -> FinSet:
        return tuple(self.nth(i) for i in range(1, count + 1))

    def drop(self, count: int) -> "SetGen":
        """The set without its first ``count`` elements."""
        if count <= len(self.prefix):
            return SetGen(self.prefix[count:], self.start, self.step)
        return SetGen((), self.nth(count + 1), self.step)

    def image(self, e: Sequence[int]) -> FinSet:
        """``M(E) = (m_i)_{i in E}``."""
        return tuple(self.nth(i) for i in e)

    def __str__(self) -> str:
        head = f"prefix={format_finset(self.prefix)}," if self.prefix else ""
        return f"gen({head}start={self.start},step={self.step})"


NAT = SetGen(start=1, step=1)
EVENS = SetGen(start=2, step=2)


class Family:
    """Base class of family expressions."""

    def __str__(self) -> str:
        return format_family(self)


@dataclass(frozen=True)
class A(Family):
    n: int

    def __post_init__(self) -> None:
        if self.n < 0:
            raise FamilyError(f"A(n) needs n >= 0, got {self.n}")


@dataclass(frozen=True)
class S(Family):
    xi: Ordinal

    def __post_init__(self) -> None:
        object.__setattr__(self, "xi", coerce(self.xi))
        if classify(self.xi) is Kind.LIMIT:
            violations = containment_check(self.xi)
            if violations:
                raise FamilyError(
                    f"fundamental sequence of {self.xi} fails containment on "
                    f"{format_finset(violations[0][1])} at n={violations[0][0]}"
                )


@dataclass(frozen=True)
class Comb(Family):
    outer: Family
    inner: Family


@dataclass(frozen=True)
class Pre(Family):
    base: Family
    m: SetGen


@dataclass(frozen=True)
class Drv(Family):
    base: Family
    eta: Ordinal = field(default=ONE)

    def __post_init__(self) -> None:
        object.__setattr__(self, "eta", coerce(self.eta))


def format_family(g: Family) -> str:
    if isinstance(g, A):
        return f"A({g.n})"
    if isinstance(g, S):
        return f"S({format_ordinal(g.xi)})"
    if isinstance(g, Comb):
        return f"comb({format_family(g.outer)},{format_family(g.inner)})"
    if isinstance(g, Pre):
        return f"pre({format_family(g.base)},{g.m})"
    if isinstance(g, Drv):
        return f"drv({format_family(g.base)},{format_ordinal(g.eta)})"
    raise TypeError(f"unknown family {g!r}")


def has_derivative(g: Family) -> bool:
    if isinstance(g, Drv):
        return True
    if isinstance(g, Comb):
        return has_derivative(g.outer) or has_derivative(g.inner)
    if isinstance(g, Pre):
        return has_derivative(g.base)
    return False


def _unfold_schreier(xi: Ordinal, e: FinSet) -> Family:
    """The family that decides nonempty ``e`` for ``S(xi)``, xi >= 2."""
    if classify(xi) is Kind.SUCCESSOR:
        return Comb(S(ONE), S(pred(xi)))
    return S(succ(fund_seq(xi, e[0])))


# Membership


def member(g: Family, e: Iterable[int]) -> bool:
    """Decide whether the finite set ``e`` belongs to the family ``g``."""
    return _member(g, as_finset(e))


@lru_cache(maxsize=None)
def _member(g: Family, e: FinSet) -> bool:
    if isinstance(g, A):
        return len(e) <= g.n
    if isinstance(g, S):
        if not e:
            return True
        if not g.xi:
            return len(e) <= 1
        if g.xi == ONE:
            return len(e) <= e[0]
        return _member(_unfold_schreier(g.xi, e), e)
    if isinstance(g, Comb):
        pieces = greedy_pieces(g.inner, e)
        return pieces is not None and _member(g.outer, minima(pieces))
    if isinstance(g, Pre):
        return _member(g.base, g.m.image(e))
    if isinstance(g, Drv):
        return _member(g.base, e) and _rank(g.base, e) >= g.eta
    raise TypeError(f"unknown family {g!r}")


def greedy_pieces(inner: Family, e: FinSet) -> Optional[tuple[FinSet, ...]]:
    """Split ``e`` into maximal initial runs that belong to ``inner``.

    Returns None when some element is not even a singleton of ``inner``.
    """
    pieces = []
    i = 0
    while i < len(e):
        if not _member(inner, e[i : i + 1]):
            return None
        j = i + 1
        while j < len(e) and _member(inner, e[i : j + 1]):
            j += 1
        pieces.append(e[i:j])
        i = j
    return tuple(pieces)


def minima(pieces: Sequence[FinSet]) -> FinSet:
    return tuple(p[0] for p in pieces)


def member_brute(g: Family, e: Iterable[int]) -> bool:
    """Membership by exhaustive enumeration of decompositions and witnesses."""
    if has_derivative(g):
        raise FamilyError(f"brute-force membership does not support {g}")
    return _member_brute(g, as_finset(e))


@lru_cache(maxsize=None)
def _member_brute(g: Family, e: FinSet) -> bool:
    if isinstance(g, A):
        return len(e) <= g.n
    if isinstance(g, Pre):
        return _member_brute(g.base, g.m.image(e))
    if isinstance(g, Comb):
        if not e:
            return _member_brute(g.outer, ())
        return any(
            _member_brute(g.outer, minima(parts))
            and all(_member_brute(g.inner, p) for p in parts)
            for parts in interval_partitions(e)
        )
    if isinstance(g, S):
        if not e:
            return True
        if not g.xi:
            return len(e) <= 1
        if g.xi == ONE:
            return len(e) <= e[0]
        if classify(g.xi) is Kind.SUCCESSOR:
            smaller = S(pred(g.xi))
            return any(
                len(parts) <= e[0] and all(_member_brute(smaller, p) for p in parts)
                for parts in interval_partitions(e)
            )
        return any(
            _member_brute(S(succ(fund_seq(g.xi, n))), e) for n in range(1, e[0] + 1)
        )
    raise TypeError(f"unknown family {g!r}")


# Ranks


def rank(g: Family, e: Iterable[int]) -> Ordinal:
    """The largest eta with ``e`` in the eta-th derivative of ``g``."""
    e = as_finset(e)
    if not _member(g, e):
        raise FamilyError(f"{format_finset(e)} is not a member of {g}")
    return _rank(g, e)


@lru_cache(maxsize=None)
def _rank(g: Family, e: FinSet) -> Ordinal:
    if isinstance(g, A):
        return of_int(g.n - len(e))
    if isinstance(g, S):
        if not e:
            return omega_pow(g.xi)
        if not g.xi:
            return of_int(1 - len(e))
        if g.xi == ONE:
            return of_int(e[0] - len(e))
        return _rank(_unfold_schreier(g.xi, e), e)
    if isinstance(g, Comb):
        # Each fresh inner piece contributes a full copy of the inner rank.
        alpha = _rank(g.inner, ())
        if not e:
            return mul(alpha, _rank(g.outer, ()))
        pieces = greedy_pieces(g.inner, e)
        return add(mul(alpha, _rank(g.outer, minima(pieces))), _rank(g.inner, pieces[-1]))
    if isinstance(g, Pre):
        return _rank(g.base, g.m.image(e))
    if isinstance(g, Drv):
        return sub(_rank(g.base, e), g.eta)
    raise TypeError(f"unknown family {g!r}")


def cb_index(g: Family) -> Ordinal:
    """Cantor-Bendixson index ``rank(g, {}) + 1``."""
    if not _member(g, ()):
        raise EmptyFamilyError(f"{g} denotes the empty family")
    return succ(_rank(g, ()))


def is_maximal(g: Family, e: Iterable[int]) -> bool:
    """True iff ``e`` has no proper extension inside ``g``."""
    e = as_finset(e)
    if not _member(g, e):
        raise FamilyError(f"{format_finset(e)} is not a member of {g}")
    if has_derivative(g):
        return _rank(g, e) == ZERO
    return not _member(g, ext(e))


def derivative_member(g: Family, e: Iterable[int]) -> bool:
    """Decide ``e`` in the first derivative by testing the single extension."""
    return _member(g, ext(as_finset(e)))


# Residuals: what is left of a family once a set has been read. ``step(k)``
# reads the next (larger) element and returns None once the set has left
# the family; it mirrors the decision procedure of ``_member``.


@dataclass(frozen=True)
class _Count:
    """At most ``n`` further elements."""

    n: int

    def step(self, k: int) -> Optional[_Residual]:
        return _Count(self.n - 1) if self.n else None

    @property
    def positional(self) -> bool:
        return False


@dataclass(frozen=True)
class _Fresh:
    """Nothing read yet."""

    g: Family

    def step(self, k: int) -> Optional[_Residual]:
        g = self.g
        if isinstance(g, A):
            return _Count(g.n - 1) if g.n else None
        if isinstance(g, S):
            if not g.xi:
                return _Count(0)
            if g.xi == ONE:
                return _Count(k - 1)
            return _Fresh(_unfold_schreier(g.xi, (k,))).step(k)
        if isinstance(g, Comb):
            outer = _Fresh(g.outer).step(k)
            current = _Fresh(g.inner).step(k)
            if outer is None or current is None:
                return None
            return _Blocks(outer, current, g.inner)
        if isinstance(g, Pre):
            base = _Fresh(g.base).step(g.m.nth(k))
            return None if base is None else _Image(base, g.m)
        raise FamilyError(f"the rank oracle does not support {g}")

    @property
    def positional(self) -> bool:
        return _fresh_positional(self.g)


@dataclass(frozen=True)
class _Blocks:
    """A greedy decomposition in progress: the open piece and the outer residual of the minima."""

    outer: _Residual
    current: _Residual
    inner: Family

    def step(self, k: int) -> Optional[_Residual]:
        extended = self.current.step(k)
        if extended is not None:
            return _Blocks(self.outer, extended, self.inner)
        outer = self.outer.step(k)
        current = _Fresh(self.inner).step(k)
        if outer is None or current is None:
            return None
        return _Blocks(outer, current, self.inner)

    @property
    def positional(self) -> bool:
        if self.current.positional:
            return True
        if self.current.step(1) is not None:
            return False
        if self.outer.positional:
            return True
        return self.outer.step(1) is not None and _fresh_positional(self.inner)


@dataclass(frozen=True)
class _Image:
    """A residual of ``base`` read through the index map ``m``."""

    base: _Residual
    m: SetGen

    def step(self, k: int) -> Optional[_Residual]:
        base = self.base.step(self.m.nth(k))
        return None if base is None else _Image(base, self.m)

    @property
    def positional(self) -> bool:
        return self.base.positional


_Residual = Union[_Count, _Fresh, _Blocks, _Image]


def _fresh_positional(g: Family) -> bool:
    """Whether the first step from ``g`` depends on the element read."""
    if isinstance(g, A):
        return False
    if isinstance(g, S):
        return bool(g.xi)
    if isinstance(g, Comb):
        return _fresh_positional(g.outer) or _fresh_positional(g.inner)
    if isinstance(g, Pre):
        return _fresh_positional(g.base)
    raise FamilyError(f"the rank oracle does not support {g}")


class _RankOracle:
    """Memoised recursion ``mu(e) = sup{mu(e + k) + 1 : k > max e}``.

    Ranks are computed on residuals. A residual of a spreading family is
    spreading, so its rank does not depend on where the next element starts
    and the memo is keyed by residual alone. Residuals whose next step does
    not depend on the element read form chains that are walked in a loop.
    At the others the children ``k = m+1 .. m+cap`` are evaluated until
    their ranks stabilise (successor) or grow along an arithmetic pattern
    (limit).
    """

    def __init__(self, g: Family, cap: int, node_budget: int):
        if has_derivative(g):
            raise FamilyError(f"the rank oracle does not support {g}")
        self.g = g
        self.cap = cap
        self.node_budget = node_budget
        self.memo: dict[_Residual, Ordinal] = {}
        self.nodes = 0

    def residual(self, e: FinSet) -> _Residual:
        state: Optional[_Residual] = _Fresh(self.g)
        for k in e:
            state = state.step(k)
            if state is None:
                raise FamilyError(f"{format_finset(e)} is not a member of {self.g}")
        return state

    def rank(self, e: FinSet) -> Ordinal:
        return self._mu(self.residual(e), e[-1] if e else 0)

    def _tick(self, where: object) -> None:
        self.nodes += 1
        if self.nodes > self.node_budget:
            raise OracleError(f"node budget {self.node_budget} exhausted at {where}")

    def _mu(self, state: _Residual, m: int) -> Ordinal:
        chain: list[_Residual] = []
        end: Optional[_Residual] = state
        while end is not None and end not in self.memo and not end.positional:
            self._tick(end)
            chain.append(end)
            end = end.step(m + 1)
        if end is None:
            # The last residual of the chain admits no further element.
            end = chain.pop()
            self.memo[end] = ZERO
        elif end not in self.memo:
            self.memo[end] = self._from_children(end, m)
        value = self.memo[end]
        for distance, link in enumerate(reversed(chain), start=1):
            self.memo[link] = add(value, of_int(distance))
        return self.memo[state]

    def _from_children(self, state: _Residual, m: int) -> Ordinal:
        self._tick(state)
        values: list[Ordinal] = []
        for k in range(m + 1, m + self.cap + 1):
            child = state.step(k)
            if child is None:
                continue
            values.append(self._mu(child, k))
            if len(values) >= 2 and values[-1] == values[-2]:
                return succ(values[-1])
            if len(values) >= 3:
                limit = _limit_of_progression(values[-3:])
                if limit is not None:
                    return limit
        if not values:
            return ZERO
        raise OracleError(
            f"children of {state} show no stable pattern within cap {self.cap}: "
            + ", ".join(format_ordinal(v) for v in values)
        )


def _limit_of_progression(values: Sequence[Ordinal]) -> Optional[Ordinal]:
    """Limit of three increasing values that agree up to one growing CNF term.

    The growing term either keeps its exponent and raises its coefficient,
    or raises its exponent along a progression of its own.
    """
    a, b, c = values
    if not (a < b < c):
        return None
    common = 0
    while all(len(v.terms) > common for v in values) and (
        a.terms[common] == b.terms[common] == c.terms[common]
    ):
        common += 1
    if any(len(v.terms) <= common for v in values):
        return None
    (ea, ca), (eb, cb), (ec, cc) = (v.terms[common] for v in values)
    prefix = Ordinal(a.terms[:common])
    if ea == eb == ec:
        return add(prefix, omega_pow(succ(ea))) if ca < cb < cc else None
    exponent = _limit_of_progression((ea, eb, ec))
    return None if exponent is None else add(prefix, omega_pow(exponent))


def rank_oracle(
    g: Family,
    e: Iterable[int],
    cap: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> Ordinal:
    """Rank by explicit extension recursion, used to validate :func:`rank`."""
    e = as_finset(e)
    settings = default_settings()
    oracle = _RankOracle(
        g, cap or settings.oracle_cap, node_budget or settings.oracle_node_budget
    )
    value = oracle.rank(e)
    logger.debug(f"rank_oracle({g}, {format_finset(e)}) = {value} in {oracle.nodes} nodes")
    return value


def rank_oracle_table(
    g: Family,
    sets: Iterable[FinSet],
    cap: Optional[int] = None,
    node_budget: Optional[int] = None,
) -> dict[FinSet, Optional[Ordinal]]:
    """Oracle ranks of many members sharing one memo; undecided sets map to None."""
    settings = default_settings()
    oracle = _RankOracle(
        g, cap or settings.oracle_cap, node_budget or settings.oracle_node_budget
    )
    table: dict[FinSet, Optional[Ordinal]] = {}
    for e in sets:
        e = as_finset(e)
        oracle.nodes = 0
        try:
            table[e] = oracle.rank(e)
        except OracleError as exc:
            logger.warning(f"rank oracle undecided on {format_finset(e)}: {exc}")
            table[e] = None
    return table


# Decompositions


def max_decomposition(m: SetGen, xi: OrdinalLike, count: int) -> list[FinSet]:
    """The first ``count`` consecutive maximal ``S(xi)`` blocks of ``m``."""
    if count < 1:
        raise FamilyError(f"count must be positive, got {count}")
    family = S(coerce(xi))
    limit = default_settings().measure_support_limit
    blocks: list[FinSet] = []
    position = 1
    for _ in range(count):
        block: FinSet = (m.nth(position),)
        while _member(family, block + (m.nth(position + len(block)),)):
            block += (m.nth(position + len(block)),)
            if len(block) > limit:
                raise FamilyError(f"block of {family} exceeds {limit} elements")
        blocks.append(block)
        position += len(block)
    return blocks


def comb_split_check(a: Family, b: Family, e: Iterable[int], f: Iterable[int]) -> bool:
    """Either ``e`` lies in ``a'[b]`` or the rest ``f \\ e`` lies in ``b``."""
    e, f = as_finset(e), as_finset(f)
    if len(e) >= len(f) or f[: len(e)] != e:
        raise FamilyError(
            f"{format_finset(e)} is not a proper initial segment of {format_finset(f)}"
        )
    if not _member(Comb(a, b), f):
        raise FamilyError(f"{format_finset(f)} is not a member of {Comb(a, b)}")
    return _member(Comb(Drv(a, ONE), b), e) or _member(b, f[len(e) :])


@lru_cache(maxsize=None)
def containment_check(lam: Ordinal, terms: int = 3, window: int = 7) -> tuple:
    """Sampled violations of ``S(lam_n + 1) <= S(lam_{n+1})`` on subsets of a window."""
    violations = []
    for n in range(1, terms + 1):
        smaller = S(succ(fund_seq(lam, n)))
        larger = S(fund_seq(lam, n + 1))
        for e in subsets(range(1, window + 1)):
            if _member(smaller, e) and not _member(larger, e):
                violations.append((n, e))
    return tuple(violations)


# Finite windows


def subsets(values: Iterable[int]) -> Iterator[FinSet]:
    items = tuple(sorted(values))
    for size in range(len(items) + 1):
        yield from itertools.combinations(items, size)


def window_members(g: Family, window: Sequence[int]) -> list[FinSet]:
    """All members of ``g`` contained in ``window``, pruned by heredity."""
    window = tuple(sorted(window))
    out: list[FinSet] = []

    def extend(current: FinSet, start: int) -> None:
        out.append(current)
        for i in range(start, len(window)):
            candidate = current + (window[i],)
            if _member(g, candidate):
                extend(candidate, i + 1)

    if _member(g, ()):
        extend((), 0)
    return out


def maximal_members(g: Family, window: Sequence[int]) -> list[FinSet]:
    """Members of ``g`` inside ``window`` that no window element extends."""
    members = set(window_members(g, window))
    result = []
    for e in sorted(members, key=lambda s: (len(s), s)):
        if not any(
            tuple(sorted(e + (w,))) in members for w in window if w not in e
        ):
            result.append(e)
    return result


@dataclass(frozen=True)
class WindowFamily:
    """A family of subsets of ``{1..n}`` given by its members."""

    n: int
    members: frozenset

    @classmethod
    def classify(cls, predicate: Callable[[FinSet], bool], n: int) -> "WindowFamily":
        return cls(n, frozenset(e for e in subsets(range(1, n + 1)) if predicate(e)))

    def hereditary_violations(self) -> list[tuple[FinSet, FinSet]]:
        out = []
        for e in sorted(self.members):
            for i in range(len(e)):
                smaller = e[:i] + e[i + 1 :]
                if smaller not in self.members:
                    out.append((e, smaller))
        return out

    def spreading_violations(self) -> list[tuple[FinSet, FinSet]]:
        out = []
        for e in sorted(self.members):
            for i in range(len(e)):
                shifted = e[:i] + (e[i] + 1,) + e[i + 1 :]
                upper = e[i + 1] if i + 1 < len(e) else self.n + 1
                if shifted[i] < upper and shifted not in self.members:
                    out.append((e, shifted))
        return out

    def truncated_rank(self) -> int:
        """Rank of the empty set inside the finite truncation."""
        return max((len(e) for e in self.members), default=0)

    def maximal(self) -> list[FinSet]:
        return sorted(
            e
            for e in self.members
            if not any(
                tuple(sorted(e + (w,))) in self.members
                for w in range(1, self.n + 1)
                if w not in e
            )
        )

    def mismatches(self, g: Family) -> list[FinSet]:
        """Window sets on which this family and ``g`` disagree."""
        return [
            e
            for e in subsets(range(1, self.n + 1))
            if (e in self.members) != _member(g, e)
        ]
