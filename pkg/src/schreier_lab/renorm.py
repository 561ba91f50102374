"""Interval-decomposition renormings of a sequence space against an outer space.

For a base space ``X`` (its unit vector basis is the decomposition) and an
outer space ``E`` the vee norm takes the sup, and the wedge bracket the inf,
of ``||sum ||I_i x||_X e_{p_i}||_E`` over decompositions of the support into
consecutive runs ``I_i``. Placements ``p_i`` follow the interval maxima:
runs of the wedge bracket end at their last support point, runs of the vee
norm stretch to just before the next run. Since every implemented space is
right-shift monotone these placements realise the sup and the inf.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Optional, Sequence, Union

from .family import FinSet, SetGen, subsets
from .norms import (
    SpaceSpec,
    UnsupportedSpaceError,
    Vector,
    dual_norm,
    format_spec,
    space_norm,
)
from .numeric import Enclosure

logger = logging.getLogger(__name__)


class BlockSupportError(ValueError):
    """Raised when a block vector leaves its block or is too large."""


@dataclass(frozen=True)
class SequenceSpace:
    """A sequence space whose unit vector basis serves as a bimonotone FDD."""

    spec: SpaceSpec

    def norm(self, x: Vector) -> Enclosure:
        return space_norm(self.spec, x)

    def dual(self) -> "DualSequenceSpace":
        return DualSequenceSpace(self.spec)

    def __str__(self) -> str:
        return format_spec(self.spec)


@dataclass(frozen=True)
class DualSequenceSpace:
    """The dual of a polyhedral sequence space, normed by exact covering LPs."""

    spec: SpaceSpec

    def norm(self, x: Vector) -> Enclosure:
        return Enclosure.exact(dual_norm(self.spec, x))

    def dual(self) -> SequenceSpace:
        return SequenceSpace(self.spec)

    def __str__(self) -> str:
        return f"dual({format_spec(self.spec)})"


Space = Union[SequenceSpace, DualSequenceSpace]
FddBlocking = SequenceSpace


def as_space(value: Union[Space, SpaceSpec]) -> Space:
    if isinstance(value, (SequenceSpace, DualSequenceSpace)):
        return value
    return SequenceSpace(value)


# A placement maps the sorted support and the end ``j`` of a run to the
# index that carries the run's coefficient.
Placement = Callable[[FinSet, int], int]


def _wedge_place(support: FinSet, j: int) -> int:
    return support[j - 1]


def _vee_place(support: FinSet, j: int) -> int:
    return support[j] - 1 if j < len(support) else support[-1]


@dataclass(frozen=True)
class Profile:
    runs: tuple[FinSet, ...]
    lo: Vector
    hi: Vector
    value: Enclosure


@dataclass(frozen=True)
class _Partial:
    """A decomposition of a prefix of the support with its coefficient bounds."""

    runs: tuple[FinSet, ...]
    levels: tuple[tuple[int, Fraction, Fraction], ...]

    def extend(self, run: FinSet, position: int, value: Enclosure) -> "_Partial":
        return _Partial(self.runs + (run,), self.levels + ((position, value.lo, value.hi),))

    def covers(self, other: "_Partial") -> bool:
        """Coordinatewise ``self >= other`` on both coefficient bounds."""
        mine = {position: (lo, hi) for position, lo, hi in self.levels}
        zero = (Fraction(0), Fraction(0))
        return all(
            mine.get(position, zero)[0] >= lo and mine.get(position, zero)[1] >= hi
            for position, lo, hi in other.levels
        )


def _pareto(candidates: list[_Partial], larger: bool) -> list[_Partial]:
    kept: list[_Partial] = []
    for candidate in candidates:
        if any(k.covers(candidate) if larger else candidate.covers(k) for k in kept):
            continue
        kept = [k for k in kept if not (candidate.covers(k) if larger else k.covers(candidate))]
        kept.append(candidate)
    return kept


def _frontier(
    x_space: Space, e_space: Space, x: Vector, place: Placement, larger: bool
) -> list[Profile]:
    """Profiles of the interval decompositions that can attain the sup (or inf).

    Dynamic programming over cut points: ``fronts[j]`` holds the
    decompositions of the first ``j`` support points, scored by the
    ``O(n^2)`` segment norms. Outer norms are lattice norms and later runs
    sit strictly to the right, so a partial profile covered coordinatewise
    by another one at the same cut never wins and is dropped.
    """
    support = x.support
    segments: dict[tuple[int, int], Enclosure] = {}
    fronts: list[list[_Partial]] = [[_Partial((), ())]]
    for j in range(1, len(support) + 1):
        position = place(support, j)
        candidates = []
        for i in range(j):
            if (i, j) not in segments:
                segments[i, j] = x_space.norm(x.restrict(support[i:j]))
            candidates.extend(
                partial.extend(support[i:j], position, segments[i, j]) for partial in fronts[i]
            )
        fronts.append(_pareto(candidates, larger))
    logger.debug(f"{len(fronts[-1])} profiles survive over {len(support)} support points")

    profiles = []
    for partial in fronts[-1]:
        lo = Vector.from_mapping({p: lo for p, lo, _ in partial.levels})
        hi = Vector.from_mapping({p: hi for p, _, hi in partial.levels})
        value = Enclosure(e_space.norm(lo).lo, e_space.norm(hi).hi)
        profiles.append(Profile(partial.runs, lo, hi, value))
    return profiles


def vee_norm(x_space: Space | SpaceSpec, e_space: Space | SpaceSpec, x: Vector) -> Enclosure:
    """Sup over interval decompositions of the outer norm of the block-norm profile."""
    if not x:
        return Enclosure.exact(0)
    profiles = _frontier(as_space(x_space), as_space(e_space), x, _vee_place, larger=True)
    return Enclosure(max(p.value.lo for p in profiles), max(p.value.hi for p in profiles))


def wedge_profile(x_space: Space | SpaceSpec, e_space: Space | SpaceSpec, x: Vector) -> Profile:
    """The interval partition attaining the wedge bracket, with its profile."""
    if not x:
        return Profile((), Vector(), Vector(), Enclosure.exact(0))
    return min(
        _frontier(as_space(x_space), as_space(e_space), x, _wedge_place, larger=False),
        key=lambda p: (p.value.hi, p.value.lo),
    )


def wedge_bracket(x_space: Space | SpaceSpec, e_space: Space | SpaceSpec, x: Vector) -> Enclosure:
    """Inf over interval partitions of the outer norm of the block-norm profile."""
    if not x:
        return Enclosure.exact(0)
    profiles = _frontier(as_space(x_space), as_space(e_space), x, _wedge_place, larger=False)
    return Enclosure(min(p.value.lo for p in profiles), min(p.value.hi for p in profiles))


def set_partitions(items: Sequence[int]) -> Iterator[tuple[FinSet, ...]]:
    """All partitions of ``items`` into nonempty parts, the one-part partition first."""
    items = tuple(items)
    if not items:
        yield ()
        return
    head, rest = items[0], items[1:]
    for partition in set_partitions(rest):
        if not partition:
            yield ((head,),)
            continue
        yield ((head,) + partition[0],) + partition[1:]
        for k in range(1, len(partition)):
            yield partition[:k] + ((head,) + partition[k],) + partition[k + 1 :]
        yield partition + ((head,),)


def _dual_certificate_norm(x_space: Space, e_space: Space, xstar: Vector) -> Fraction:
    """Upper bound for the norm of ``xstar`` as a functional on the wedge space."""
    profiles = _frontier(x_space.dual(), e_space.dual(), xstar, _wedge_place, larger=True)
    return max(p.value.hi for p in profiles)


def _certificates(x: Vector) -> Iterator[Vector]:
    signs = Vector(tuple((i, Fraction(1 if v > 0 else -1)) for i, v in x.coords))
    yield signs
    yield x
    for k in x.support:
        yield Vector.basis(k)
    support = x.support
    for i, j in itertools.combinations(range(len(support) + 1), 2):
        if j - i < len(support):
            window = support[i:j]
            yield signs.restrict(window)
            yield x.restrict(window)


def wedge_norm_bounds(
    x_space: Space | SpaceSpec,
    e_space: Space | SpaceSpec,
    x: Vector,
    budget: int = 64,
) -> Enclosure:
    """Certified bracket of the convexified wedge norm.

    The upper end is the best ``sum [x_j]`` over coordinate decompositions
    ``x = sum x_j`` tried within ``budget`` (the undivided vector first).
    The lower end is the best ``|x*(x)| / D(x*)`` over generated functionals,
    ``D`` bounding the dual wedge norm of ``x*``; it drops to 0 when the
    dual spaces are not polyhedral.
    """
    x_space, e_space = as_space(x_space), as_space(e_space)
    if not x:
        return Enclosure.exact(0)
    if len(x.coords) == 1:
        value = wedge_bracket(x_space, e_space, x)
        return Enclosure(value.lo, value.hi)

    upper: Optional[Fraction] = None
    for partition in itertools.islice(set_partitions(x.support), max(budget, 1)):
        total = sum(
            (wedge_bracket(x_space, e_space, x.restrict(part)).hi for part in partition),
            Fraction(0),
        )
        upper = total if upper is None else min(upper, total)

    lower = Fraction(0)
    try:
        for xstar in _certificates(x):
            bound = _dual_certificate_norm(x_space, e_space, xstar)
            if bound:
                lower = max(lower, abs(xstar.pair(x)) / bound)
    except UnsupportedSpaceError:
        logger.debug(f"no dual certificate over {x_space} and {e_space}")
    return Enclosure(min(lower, upper), upper)


def duality_pairing_check(
    x_space: Space | SpaceSpec, e_space: Space | SpaceSpec, x: Vector, xstar: Vector
) -> bool:
    """``|<x*, x>|`` never exceeds the dual wedge bracket of ``x*`` times the vee norm of ``x``."""
    x_space, e_space = as_space(x_space), as_space(e_space)
    if not x or not xstar:
        return True
    pairing = abs(xstar.pair(x))
    bound = (
        wedge_bracket(x_space.dual(), e_space.dual(), xstar).hi
        * vee_norm(x_space, e_space, x).hi
    )
    if pairing > bound:
        logger.warning(f"pairing {pairing} exceeds {bound} for x={x}, x*={xstar}")
    return pairing <= bound


def block_interval(m: SetGen, i: int) -> tuple[int, int]:
    """The i-th block ``(m_{i-1}, m_i]`` as an inclusive range, ``m_0 = 0``."""
    low = m.nth(i - 1) if i > 1 else 0
    return low + 1, m.nth(i)


def _block_candidates(e_space: Space, lo: int, hi: int, limit: int) -> list[Vector]:
    found = [Vector.basis(k) for k in range(lo, hi + 1)]
    for s in itertools.islice(subsets(range(lo, hi + 1)), limit):
        if len(s) > 1:
            indicator = Vector.indicator(s)
            found.append(indicator.scale(1 / e_space.norm(indicator).hi))
    return found


def block_seminorm_lb(
    e_space: Space | SpaceSpec,
    m: SetGen,
    a: Vector,
    candidates: int = 256,
    extra: Sequence[Sequence[Vector]] = (),
) -> Fraction:
    """Certified lower bound for ``max ||sum a_i x_i||`` over unit block vectors.

    Each ``x_i`` ranges over unit vectors of the i-th block: basis vectors,
    normalised indicators of block subsets and the vectors of the
    ``extra`` systems. At most ``candidates`` combinations are tried.
    """
    e_space = as_space(e_space)
    if not a:
        return Fraction(0)
    indices = a.support
    pools = [
        _block_candidates(e_space, *block_interval(m, i), limit=candidates)
        for i in indices
    ]
    systems = itertools.chain(
        itertools.islice(itertools.product(*pools), candidates),
        (tuple(system[i - 1] for i in indices) for system in extra),
    )
    best = Fraction(0)
    for system in systems:
        total = Vector()
        for i, block in zip(indices, system):
            total = total + block.scale(a[i])
        best = max(best, e_space.norm(total).lo)
    return best


@dataclass(frozen=True)
class TripResult:
    factor_two: bool
    factor_one: bool
    lhs: Fraction
    rhs: Fraction

    def __bool__(self) -> bool:
        return self.factor_two


def trip_inequality_check(
    x_space: Space | SpaceSpec,
    e_space: Space | SpaceSpec,
    m: SetGen,
    a: Vector,
    blocks: Sequence[Vector],
    candidates: int = 256,
) -> TripResult:
    """Compare the wedge bracket of ``sum a_i y_i`` with the block seminorm of ``a``.

    Raises:
        BlockSupportError: If some ``y_i`` leaves ``(m_{i-1}, m_i]`` or has
            wedge bracket above 1.
    """
    x_space, e_space = as_space(x_space), as_space(e_space)
    if a.support and a.support[-1] > len(blocks):
        raise BlockSupportError(f"coefficients {a} need {a.support[-1]} blocks")
    profiles = []
    for i, y in enumerate(blocks, start=1):
        lo, hi = block_interval(m, i)
        if y and (y.support[0] < lo or y.support[-1] > hi):
            raise BlockSupportError(f"block {i} = {y} leaves ({lo - 1}, {hi}]")
        profile = wedge_profile(x_space, e_space, y)
        if profile.value.lo > 1:
            raise BlockSupportError(f"block {i} has wedge bracket {profile.value} > 1")
        profiles.append(profile.hi.scale(1 / max(Fraction(1), profile.value.hi)))

    combined = Vector()
    for i, y in enumerate(blocks, start=1):
        combined = combined + y.scale(a[i])
    lhs = wedge_bracket(x_space, e_space, combined).hi
    rhs = block_seminorm_lb(e_space, m, a, candidates, extra=(profiles,))
    result = TripResult(lhs <= 2 * rhs, lhs <= rhs, lhs, rhs)
    if not result.factor_one:
        logger.warning(f"trip inequality without factor 2 fails: {lhs} > {rhs}")
    return result
