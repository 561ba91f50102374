"""Schreier, Baernstein and mixed Schreier norms on finitely supported vectors.

All evaluators work in exact rational arithmetic. The only irrational
quantities are p=2 Baernstein norms, which are returned as certified
enclosures of their (exact) squares' roots.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Optional, Union

from .config import default_settings
from .family import (
    A,
    Comb,
    Family,
    FinSet,
    S,
    WindowFamily,
    as_finset,
    cb_index,
    format_family,
    maximal_members,
    member,
)
from .lp import solve_lp
from .numeric import Enclosure, Rational, Threshold, format_fraction, sqrt_enclosure
from .ordinal import Kind, Ordinal, classify, coerce, format_ordinal, fund_seq, pred
from .search import SearchResult, max_admissible_weight

logger = logging.getLogger(__name__)

INF = math.inf


class UnsupportedSpaceError(ValueError):
    """Raised when an operation is not available for a space."""


class CertificationError(ArithmeticError):
    """Raised when a p=2 certificate does not reach the requested width."""


@dataclass(frozen=True)
class Vector:
    """A finitely supported rational vector, stored by its nonzero coordinates."""

    coords: tuple[tuple[int, Fraction], ...] = ()

    @classmethod
    def from_mapping(cls, mapping: Mapping[int, Rational]) -> "Vector":
        items = []
        for index, value in sorted(mapping.items()):
            if index < 1:
                raise ValueError(f"coordinates start at 1, got {index}")
            value = Fraction(value)
            if value:
                items.append((index, value))
        return cls(tuple(items))

    @classmethod
    def indicator(cls, indices: Iterable[int], value: Rational = 1) -> "Vector":
        return cls.from_mapping({i: value for i in indices})

    @classmethod
    def basis(cls, k: int) -> "Vector":
        return cls.indicator((k,))

    @property
    def support(self) -> FinSet:
        return tuple(i for i, _ in self.coords)

    def __getitem__(self, index: int) -> Fraction:
        return dict(self.coords).get(index, Fraction(0))

    def __bool__(self) -> bool:
        return bool(self.coords)

    def abs_items(self) -> tuple[tuple[int, Fraction], ...]:
        return tuple((i, abs(v)) for i, v in self.coords)

    def l1(self) -> Fraction:
        return sum((abs(v) for _, v in self.coords), Fraction(0))

    def restrict(self, indices: Iterable[int]) -> "Vector":
        keep = set(indices)
        return Vector(tuple((i, v) for i, v in self.coords if i in keep))

    def restrict_interval(self, lo: int, hi: int) -> "Vector":
        return Vector(tuple((i, v) for i, v in self.coords if lo <= i <= hi))

    def scale(self, k: Rational) -> "Vector":
        return Vector.from_mapping({i: v * k for i, v in self.coords})

    def __add__(self, other: "Vector") -> "Vector":
        total = dict(self.coords)
        for i, v in other.coords:
            total[i] = total.get(i, Fraction(0)) + v
        return Vector.from_mapping(total)

    def pair(self, other: "Vector") -> Fraction:
        mine = dict(self.coords)
        return sum((v * mine[i] for i, v in other.coords if i in mine), Fraction(0))

    def __str__(self) -> str:
        return "[" + ",".join(f"{i}:{format_fraction(v)}" for i, v in self.coords) + "]"


# Space specifications


@dataclass(frozen=True)
class Schreier:
    g: Family


@dataclass(frozen=True)
class Baernstein:
    g: Family
    p: float = 2

    def __post_init__(self) -> None:
        if self.p not in (1, 2, INF):
            raise UnsupportedSpaceError(f"p must be 1, 2 or inf, got {self.p}")


@dataclass(frozen=True)
class ExplicitLayers:
    layers: tuple[tuple[Family, Fraction], ...]

    def __post_init__(self) -> None:
        layers = tuple((g, Fraction(theta)) for g, theta in self.layers)
        object.__setattr__(self, "layers", layers)
        if not layers or layers[0][1] != 1:
            raise ValueError("the first layer must carry theta_0 = 1")
        thetas = [theta for _, theta in layers]
        if any(b >= a for a, b in zip(thetas, thetas[1:])) or thetas[-1] <= 0:
            raise ValueError(f"thetas must be positive and strictly decreasing: {thetas}")


@dataclass(frozen=True)
class GeometricRule:
    """``g_0`` given, ``g_n = base[g_{n-1}]``, ``theta_n = theta^n``."""

    base: Family
    theta: Fraction
    g0: Family = S(0)

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", Fraction(self.theta))
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")


@dataclass(frozen=True)
class LayeredRule:
    """``g_0 = S(beta)``, ``g_n = F_n[S(beta)]`` with ``CB(F_n)`` increasing to ``w^gamma``."""

    beta: Ordinal
    gamma: Ordinal
    theta: Fraction

    def __post_init__(self) -> None:
        object.__setattr__(self, "beta", coerce(self.beta))
        object.__setattr__(self, "gamma", coerce(self.gamma))
        object.__setattr__(self, "theta", Fraction(self.theta))
        if not 0 < self.theta < 1:
            raise ValueError(f"theta must lie in (0, 1), got {self.theta}")
        if not self.gamma:
            raise ValueError("gamma must be positive")

    def outer(self, n: int) -> Family:
        if classify(self.gamma) is Kind.SUCCESSOR:
            return Comb(A(n), S(pred(self.gamma)))
        return S(fund_seq(self.gamma, n))


Rule = Union[ExplicitLayers, GeometricRule, LayeredRule]


@dataclass(frozen=True)
class Mixed:
    rule: Rule

    def __post_init__(self) -> None:
        g0, _ = self.layer(0)
        if not member(g0, (1,)):
            raise ValueError(f"the first layer {g0} must contain all singletons")

    @property
    def finite(self) -> bool:
        return isinstance(self.rule, ExplicitLayers)

    def layer(self, n: int) -> Optional[tuple[Family, Fraction]]:
        """``(g_n, theta_n)``, or None past the last explicit layer."""
        return _layer(self.rule, n)

    def layers(self) -> Iterator[tuple[int, Family, Fraction]]:
        n = 0
        while True:
            layer = self.layer(n)
            if layer is None:
                return
            yield n, layer[0], layer[1]
            n += 1


@lru_cache(maxsize=None)
def _layer(rule: Rule, n: int) -> Optional[tuple[Family, Fraction]]:
    if isinstance(rule, ExplicitLayers):
        return rule.layers[n] if n < len(rule.layers) else None
    if isinstance(rule, GeometricRule):
        if n == 0:
            return rule.g0, Fraction(1)
        previous, _ = _layer(rule, n - 1)
        return Comb(rule.base, previous), rule.theta**n
    if n == 0:
        return S(rule.beta), Fraction(1)
    return Comb(rule.outer(n), S(rule.beta)), rule.theta**n


SpaceSpec = Union[Schreier, Baernstein, Mixed]


def format_spec(spec: SpaceSpec) -> str:
    if isinstance(spec, Schreier):
        return f"schreier({format_family(spec.g)})"
    if isinstance(spec, Baernstein):
        p = "inf" if spec.p == INF else str(int(spec.p))
        return f"baernstein({format_family(spec.g)},p={p})"
    rule = spec.rule
    if isinstance(rule, ExplicitLayers):
        body = ",".join(
            f"({format_family(g)},{format_fraction(theta)})" for g, theta in rule.layers
        )
        return f"mixed(layers=[{body}])"
    if isinstance(rule, GeometricRule):
        tail = "" if rule.g0 == S(0) else f",g0={format_family(rule.g0)}"
        return f"mixed(base={format_family(rule.base)},theta={format_fraction(rule.theta)}{tail})"
    return (
        f"mixed(beta={format_ordinal(rule.beta)},gamma={format_ordinal(rule.gamma)},"
        f"theta={format_fraction(rule.theta)})"
    )


# Norm evaluators


@lru_cache(maxsize=None)
def _best_set(g: Family, items: tuple[tuple[int, Fraction], ...]) -> SearchResult:
    return max_admissible_weight(items, lambda e: member(g, e))


def schreier_norm(g: Family, x: Vector) -> Fraction:
    """``max{ sum_{i in F} |x_i| : F in g }``."""
    return _best_set(g, x.abs_items()).value


def _successive_dp(
    g: Family, items: tuple[tuple[int, Fraction], ...], squared: bool
) -> tuple[Fraction, tuple[FinSet, ...]]:
    """Best sum of (squared) block masses over successive ``g``-sets.

    ``best[t]`` is the optimum over the first ``t`` support points; the last
    block either skips point ``t`` or is the best set inside a window
    ``(u, t]``.
    """
    best: list[tuple[Fraction, tuple[FinSet, ...]]] = [(Fraction(0), ())]
    for t in range(1, len(items) + 1):
        candidate = best[t - 1]
        for u in range(t):
            window = _best_set(g, items[u:t])
            if not window.value:
                continue
            gain = window.value**2 if squared else window.value
            value = best[u][0] + gain
            if value > candidate[0]:
                candidate = (value, best[u][1] + (window.chosen,))
        best.append(candidate)
    return best[-1]


def baernstein_square(g: Family, x: Vector) -> Fraction:
    """Exact square of the p=2 Baernstein norm."""
    return _successive_dp(g, x.abs_items(), squared=True)[0]


def baernstein_system(g: Family, x: Vector) -> tuple[FinSet, ...]:
    """An optimal successive system for the p=2 Baernstein norm of ``x``."""
    return _successive_dp(g, x.abs_items(), squared=True)[1]


def baernstein_norm(
    g: Family, p: float, x: Vector, width: Optional[Rational] = None
) -> Union[Fraction, Enclosure]:
    """Baernstein norm: l_p aggregate of l_1 masses over successive ``g``-sets.

    Exact rationals for p in {1, inf}; for p=2 a certified enclosure of
    width at most ``width`` (default from settings).
    """
    if p == INF:
        return schreier_norm(g, x)
    if p == 1:
        return _successive_dp(g, x.abs_items(), squared=False)[0]
    if p == 2:
        width = width if width is not None else default_settings().enclosure_fraction
        return sqrt_enclosure(baernstein_square(g, x), width)
    raise UnsupportedSpaceError(f"p must be 1, 2 or inf, got {p}")


def mixed_norm(spec: Mixed, x: Vector) -> Fraction:
    """``sup_n theta_n * ||x||_{g_n}``, scanning layers until ``theta_n*||x||_1`` cannot win."""
    total = x.l1()
    best = Fraction(0)
    for n, g, theta in spec.layers():
        if theta * total <= best:
            break
        best = max(best, theta * schreier_norm(g, x))
    return best


def space_norm(spec: SpaceSpec, x: Vector) -> Enclosure:
    """Norm of ``x`` in the space described by ``spec``, always as an enclosure."""
    if isinstance(spec, Schreier):
        return Enclosure.exact(schreier_norm(spec.g, x))
    if isinstance(spec, Baernstein):
        value = baernstein_norm(spec.g, spec.p, x)
        return value if isinstance(value, Enclosure) else Enclosure.exact(value)
    return Enclosure.exact(mixed_norm(spec, x))


# Norming functionals


@dataclass(frozen=True)
class Functional:
    """The functional ``coefficient * sum_{i in support} e_i^*``."""

    coefficient: Fraction
    support: FinSet

    def __call__(self, weights: Mapping[int, Fraction]) -> Fraction:
        return self.coefficient * sum(
            (weights.get(i, Fraction(0)) for i in self.support), Fraction(0)
        )


def _prune(functionals: Iterable[Functional]) -> list[Functional]:
    best: dict[FinSet, Fraction] = {}
    for f in functionals:
        if f.support and f.coefficient > best.get(f.support, Fraction(0)):
            best[f.support] = f.coefficient
    items = sorted(best.items(), key=lambda kv: (-len(kv[0]), kv[0]))
    kept: list[Functional] = []
    for support, coefficient in items:
        cover = set(support)
        if any(
            k.coefficient >= coefficient and cover <= set(k.support) for k in kept
        ):
            continue
        kept.append(Functional(coefficient, support))
    return kept


@lru_cache(maxsize=None)
def _functionals(spec: SpaceSpec, window: FinSet) -> tuple[Functional, ...]:
    if isinstance(spec, Schreier) or (isinstance(spec, Baernstein) and spec.p == INF):
        found = [Functional(Fraction(1), e) for e in maximal_members(spec.g, window)]
    elif isinstance(spec, Baernstein) and spec.p == 1:
        found = [Functional(Fraction(1), tuple(i for i in window if member(spec.g, (i,))))]
    elif isinstance(spec, Baernstein):
        raise UnsupportedSpaceError("p=2 Baernstein norms are not a maximum of linear functionals")
    else:
        found = []
        for n, g, theta in spec.layers():
            if n and theta * len(window) <= 1:
                break
            found.extend(Functional(theta, e) for e in maximal_members(g, window))
    return tuple(_prune(found))


def functionals(spec: SpaceSpec, window: Iterable[int]) -> list[Functional]:
    """Maximal norming functionals of ``spec`` supported inside ``window``.

    Mixed layers with ``theta_n * |window| <= 1`` are dominated by the
    singleton functionals of the first layer and are left out.
    """
    return list(_functionals(spec, as_finset(window)))


def simplex_minimum(spec: SpaceSpec, e: Iterable[int]) -> Fraction:
    """``min`` of the norm over convex combinations of ``e_i``, ``i in e``, by exact LP."""
    e = as_finset(e)
    k = len(e)
    rows, rhs = [], []
    for f in functionals(spec, e):
        members = set(f.support)
        rows.append([f.coefficient if i in members else 0 for i in e] + [-1])
        rhs.append(0)
    result = solve_lp(
        [0] * k + [-1],
        a_ub=rows,
        b_ub=rhs,
        a_eq=[[1] * k + [0]],
        b_eq=[1],
    )
    return -result.value


def bset_member(spec: SpaceSpec, eps: Union[Threshold, Rational], e: Iterable[int]) -> bool:
    """Whether every convex combination of ``(e_i)_{i in e}`` has norm at least ``eps``.

    For Baernstein spaces with ``p = 2`` the simplex minimum is only known
    as an enclosure, and the test accepts when ``eps^2`` is at most its
    upper end. Acceptance is therefore one-sided: a set whose true minimum
    sits just below ``eps`` but inside the enclosure width is accepted.
    Rejections are always correct. Every other space is decided exactly.
    """
    eps = Threshold.of(eps)
    e = as_finset(e)
    if not e or not eps.square:
        return True
    if isinstance(spec, Baernstein) and spec.p == 2:
        from .certify import certified_simplex_square

        enclosure = certified_simplex_square(spec.g, e, target=eps.square)
        return eps.square <= enclosure.hi
    return eps.at_most(simplex_minimum(spec, e))


@dataclass(frozen=True)
class BsetProbe:
    spec: SpaceSpec
    eps: Threshold
    window: WindowFamily

    def report(self) -> dict:
        return {
            "spec": format_spec(self.spec),
            "eps": str(self.eps),
            "window": self.window.n,
            "members": len(self.window.members),
            "hereditary_violations": len(self.window.hereditary_violations()),
            "spreading_violations": len(self.window.spreading_violations()),
            "truncated_rank": self.window.truncated_rank(),
            "maximal": [list(e) for e in self.window.maximal()],
        }


def bset_family_probe(
    spec: SpaceSpec, eps: Union[Threshold, Rational], n: int
) -> BsetProbe:
    """Classify every subset of ``{1..n}`` by :func:`bset_member`."""
    eps = Threshold.of(eps)
    window = WindowFamily.classify(lambda e: bset_member(spec, eps, e), n)
    probe = BsetProbe(spec, eps, window)
    logger.debug(f"bset probe {format_spec(spec)} eps={eps}: {len(window.members)} members")
    return probe


@lru_cache(maxsize=None)
def _dual_norm(spec: SpaceSpec, z: Vector) -> Fraction:
    support = z.support
    rows = []
    for f in functionals(spec, support):
        members = set(f.support)
        rows.append([f.coefficient if i in members else 0 for i in support])
    result = solve_lp(
        [abs(v) for _, v in z.coords], a_ub=rows, b_ub=[1] * len(rows)
    )
    return result.value


def dual_norm(spec: SpaceSpec, z: Vector) -> Fraction:
    """Exact dual norm of ``z``: ``max <|z|, x>`` over nonnegative ``x`` in the unit ball.

    The unit ball of the dual is the solid convex hull of the norming
    functionals, so the maximum is a packing LP over them.
    """
    if isinstance(spec, Baernstein) and spec.p == 2:
        raise UnsupportedSpaceError("dual norms are only available for polyhedral norms")
    if not z:
        return Fraction(0)
    return _dual_norm(spec, z)


def layer_indices(spec: Mixed, eps: Threshold) -> list[int]:
    """Layers whose weight ``theta_n`` is at least ``eps``."""
    out = []
    for n, _, theta in spec.layers():
        if not eps.at_most(theta):
            break
        out.append(n)
    return out


def layer_cb(spec: Mixed, n: int) -> Ordinal:
    """``CB(g_n)``."""
    layer = spec.layer(n)
    if layer is None:
        raise ValueError(f"{format_spec(spec)} has no layer {n}")
    return cb_index(layer[0])
