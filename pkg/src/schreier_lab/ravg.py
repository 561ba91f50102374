"""The repeated averages hierarchy of exact probability measures on N."""

from __future__ import annotations

import logging
from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Optional, Sequence

from .config import default_settings
from .family import Family, FinSet, SetGen, format_finset, max_decomposition, member
from .numeric import Rational, format_fraction
from .ordinal import Kind, Ordinal, OrdinalLike, classify, coerce, fund_seq, pred, succ
from .search import max_admissible_weight

logger = logging.getLogger(__name__)


class MeasureError(ValueError):
    """Raised on invalid measures or violated preconditions."""


class MeasureTooLargeError(MeasureError):
    """Raised when a repeated average would exceed the support limit."""


@dataclass(frozen=True)
class ProbMeasure:
    """A finitely supported probability measure with exact rational atoms."""

    atoms: tuple[tuple[int, Fraction], ...]

    def __post_init__(self) -> None:
        atoms = tuple(sorted((int(i), Fraction(w)) for i, w in self.atoms))
        object.__setattr__(self, "atoms", atoms)
        if any(w <= 0 for _, w in atoms):
            raise MeasureError("atom weights must be positive")
        if len({i for i, _ in atoms}) != len(atoms) or (atoms and atoms[0][0] < 1):
            raise MeasureError("atoms must sit on distinct positive integers")
        if sum((w for _, w in atoms), Fraction(0)) != 1:
            raise MeasureError(f"total mass {self.mass} is not 1")

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Rational]) -> "ProbMeasure":
        return cls(tuple(mapping.items()))

    @classmethod
    def dirac(cls, k: int) -> "ProbMeasure":
        return cls(((k, Fraction(1)),))

    @property
    def mass(self) -> Fraction:
        return sum((w for _, w in self.atoms), Fraction(0))

    @property
    def support(self) -> FinSet:
        return tuple(i for i, _ in self.atoms)

    def __call__(self, e: Iterable[int]) -> Fraction:
        """``mu(E)``."""
        e = set(e)
        return sum((w for i, w in self.atoms if i in e), Fraction(0))

    def __str__(self) -> str:
        return "{" + ",".join(f"{i}:{format_fraction(w)}" for i, w in self.atoms) + "}"


def _average(measures: Sequence[ProbMeasure]) -> ProbMeasure:
    total: dict[int, Fraction] = defaultdict(Fraction)
    for mu in measures:
        for i, w in mu.atoms:
            total[i] += w
    k = len(measures)
    return ProbMeasure(tuple((i, w / k) for i, w in total.items()))


class _Hierarchy:
    """The measures ``S^xi_{M,1}, S^xi_{M,2}, ...`` built on demand.

    ``used`` counts the elements of ``M`` covered by the measures built so
    far; their supports are consecutive blocks of ``M``.
    """

    def __init__(self, xi: Ordinal, m: SetGen):
        self.xi = xi
        self.m = m
        self.kind = classify(xi)
        self.measures: list[ProbMeasure] = []
        self.used = 0
        self.consumed = 0

    def get(self, n: int, limit: int) -> ProbMeasure:
        while len(self.measures) < n:
            self._extend(limit)
        mu = self.measures[n - 1]
        if len(mu.atoms) > limit:
            raise MeasureTooLargeError(
                f"S^{self.xi}_{{{self.m},{n}}} has {len(mu.atoms)} atoms, limit {limit}"
            )
        return mu

    def _extend(self, limit: int) -> None:
        p = self.m.nth(self.used + 1)
        if self.kind is Kind.ZERO:
            mu, consumed = ProbMeasure.dirac(p), 0
        elif self.kind is Kind.SUCCESSOR:
            lower = _hierarchy(pred(self.xi), self.m)
            parts, size = [], 0
            for j in range(self.consumed + 1, self.consumed + p + 1):
                part = lower.get(j, limit)
                size += len(part.atoms)
                if size > limit:
                    raise MeasureTooLargeError(
                        f"S^{self.xi}_{{{self.m},{len(self.measures) + 1}}} exceeds {limit} atoms"
                    )
                parts.append(part)
            mu, consumed = _average(parts), p
        else:
            rest = self.m.drop(self.used)
            mu = _hierarchy(succ(fund_seq(self.xi, p)), rest).get(1, limit)
            consumed = 0
        self.measures.append(mu)
        self.used += len(mu.atoms)
        self.consumed += consumed


@lru_cache(maxsize=512)
def _hierarchy(xi: Ordinal, m: SetGen) -> _Hierarchy:
    return _Hierarchy(xi, m)


def repeated_average(
    xi: OrdinalLike, m: SetGen, n: int, support_limit: Optional[int] = None
) -> ProbMeasure:
    """The repeated average ``S^xi_{M,n}``.

    ``S^0_{M,n}`` is the Dirac measure at ``m_n``. At a successor the next
    ``p`` measures of the previous level are averaged, ``p`` being the least
    element of ``M`` not yet covered. At a limit ``xi`` the measure is
    ``S^{xi_p + 1}`` on the uncovered tail of ``M``, started at its least
    element ``p``.

    Args:
        xi: The level.
        m: The infinite set ``M``.
        n: Position, counting from 1.
        support_limit: Largest support allowed (default from settings).

    Raises:
        MeasureTooLargeError: If the support would exceed the limit.
    """
    if n < 1:
        raise MeasureError(f"positions start at 1, got {n}")
    limit = support_limit or default_settings().measure_support_limit
    return _hierarchy(coerce(xi), m).get(n, limit)


def support_check(
    xi: OrdinalLike, m: SetGen, n: int, support_limit: Optional[int] = None
) -> bool:
    """The support of ``S^xi_{M,n}`` is the n-th maximal ``S(xi)`` block of ``M``."""
    mu = repeated_average(xi, m, n, support_limit)
    blocks = max_decomposition(m, xi, n)
    return mu.support == blocks[n - 1]


def permanence_set(
    xi: OrdinalLike, m: SetGen, indices: Sequence[int], start: int, step: int = 1
) -> SetGen:
    """A set ``N`` whose initial segment is the union of the indexed supports."""
    union = sorted(i for r in indices for i in repeated_average(xi, m, r).support)
    return SetGen(tuple(union), max(start, union[-1] + 1), step)


def permanence_check(
    xi: OrdinalLike, m: SetGen, indices: Sequence[int], n2: SetGen
) -> bool:
    """``S^xi_{N,i} == S^xi_{M,r_i}`` when the supports of ``S^xi_{M,r_i}`` start ``N``.

    Raises:
        MeasureError: If the indices are not increasing or the union of the
            supports is not an initial segment of ``n2``.
    """
    indices = tuple(indices)
    if not indices or any(b <= a for a, b in zip(indices, indices[1:])) or indices[0] < 1:
        raise MeasureError(f"indices must be strictly increasing and positive: {indices}")
    measures = [repeated_average(xi, m, r) for r in indices]
    union = tuple(sorted(i for mu in measures for i in mu.support))
    if n2.take(len(union)) != union:
        raise MeasureError(
            f"{format_finset(union)} is not an initial segment of {n2}"
        )
    for i, expected in enumerate(measures, start=1):
        if repeated_average(xi, n2, i) != expected:
            logger.warning(f"permanence fails for xi={xi} at position {i} of {n2}")
            return False
    return True


def measure_max(h: Family, mu: ProbMeasure) -> Fraction:
    """``max mu(E)`` over members ``E`` of ``h`` inside the support of ``mu``."""
    return max_admissible_weight(mu.atoms, lambda e: member(h, e)).value
