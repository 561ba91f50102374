"""Ordinal bounds for eps-Szlenk indices of mixed Schreier spaces.

Szlenk quantities are only ever represented by certified bounds assembled
from Cantor-Bendixson indices of the layer families, never as exact values.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Optional, Sequence, Union

from .config import default_settings
from .family import (
    A,
    Family,
    FinSet,
    S,
    WindowFamily,
    as_finset,
    cb_index,
    format_family,
    member,
    subsets,
)
from .norms import (
    GeometricRule,
    LayeredRule,
    Mixed,
    Vector,
    dual_norm,
    format_spec,
    layer_cb,
    layer_indices,
)
from .numeric import Enclosure, Rational, Threshold, format_fraction
from .ordinal import (
    ONE,
    Kind,
    Ordinal,
    OrdinalLike,
    classify,
    coerce,
    format_ordinal,
    max_ordinal,
    min_ordinal,
    mul,
    omega_pow,
    pow_nat,
    pred,
    split_last,
    succ,
)
from .search import SearchLimitError

logger = logging.getLogger(__name__)


class NotWellConstructedError(ValueError):
    """Raised when a space is not well-constructed for any admissible xi."""


class DivergentSeriesError(ArithmeticError):
    """Raised when the factorization constant series diverges."""


class BoundKind(str, Enum):
    LOWER = "lower"
    UPPER = "upper"


@dataclass(frozen=True)
class SzlenkDatum:
    eps: Threshold
    bound: Ordinal
    kind: BoundKind

    def __post_init__(self) -> None:
        if self.bound < ONE:
            raise ValueError("Szlenk bounds are at least 1")

    def __str__(self) -> str:
        return f"{self.kind.value}({self.eps}) = {format_ordinal(self.bound)}"


@dataclass(frozen=True)
class FunctionalFamily:
    """``K = {0} U {theta * sum_{i in F} e_i^* : F in g}`` over its layers."""

    layers: tuple[tuple[Fraction, Family], ...]

    def __post_init__(self) -> None:
        layers = tuple((Fraction(theta), g) for theta, g in self.layers)
        object.__setattr__(self, "layers", layers)
        thetas = [theta for theta, _ in layers]
        if any(not 0 < t <= 1 for t in thetas):
            raise ValueError(f"layer weights must lie in (0, 1]: {thetas}")
        if any(b >= a for a, b in zip(thetas, thetas[1:])):
            raise ValueError(f"layer weights must strictly decrease: {thetas}")

    @classmethod
    def of_spec(cls, spec: Mixed, eps: Union[Threshold, Rational], window: int) -> "FunctionalFamily":
        """The layers of ``spec`` that can reach ``eps`` on sets inside ``{1..window}``."""
        eps = Threshold.of(eps)
        layers = []
        for _, g, theta in spec.layers():
            if not eps.at_most(theta * window):
                break
            layers.append((theta, g))
        return cls(tuple(layers) or ((Fraction(1), spec.layer(0)[0]),))

    def __str__(self) -> str:
        body = ",".join(f"({format_fraction(t)},{format_family(g)})" for t, g in self.layers)
        return f"functionals([{body}])"


# Index bounds


def _first_small_layer(spec: Mixed, eps: Threshold) -> int:
    """Least ``m`` with ``theta_m < 2*eps``."""
    twice = eps.scaled(2)
    for n, _, theta in spec.layers():
        if twice.exceeds(theta):
            return n
    raise NotWellConstructedError(f"{format_spec(spec)} never drops below 2*{eps}")


def szlenk_lower(spec: Mixed, eps: Union[Threshold, Rational]) -> Ordinal:
    """Largest ``CB(g_n)`` over layers whose weight ``theta_n`` is at least ``eps``.

    Functionals of one layer stay ``theta_n``-separated, so such layers
    survive the eps-derivation as long as ``theta_n >= eps``. Returns 1 when
    no layer qualifies.
    """
    eps = Threshold.of(eps)
    qualifying = layer_indices(spec, eps)
    if not qualifying:
        return ONE
    return max_ordinal(*(layer_cb(spec, n) for n in qualifying))


def well_constructed_xi(spec: Mixed) -> Ordinal:
    """The xi for which ``spec`` is xi-well-constructed.

    Raises:
        NotWellConstructedError: For explicit layer lists, geometric rules
            not started at ``S(0)`` or with a base of unsuitable index, and
            layered rules whose ``beta + gamma`` is additively indecomposable.
    """
    rule = spec.rule
    if isinstance(rule, GeometricRule):
        if rule.g0 != S(0):
            raise NotWellConstructedError("geometric rules must start at S(0)")
        cb = cb_index(rule.base)
        if cb.is_finite:
            if int(cb) < 2:
                raise NotWellConstructedError(f"CB({rule.base}) = {cb} must exceed 1")
            return ONE
        zeta = cb.leading_exponent.leading_exponent
        return omega_pow(succ(zeta))
    if isinstance(rule, LayeredRule):
        xi = rule.beta + rule.gamma
        if not (rule.beta < xi and rule.gamma < xi):
            raise NotWellConstructedError(
                f"beta={rule.beta}, gamma={rule.gamma} do not split {xi} into smaller parts"
            )
        return xi
    raise NotWellConstructedError(f"{format_spec(spec)} is an explicit layer list")


def _case_bound(spec: Mixed, m: int) -> Ordinal:
    """Bound on ``Sz(K_n, eps)`` for ``n > m`` once ``theta_m < 2*eps``."""
    well_constructed_xi(spec)
    if isinstance(spec.rule, GeometricRule):
        return layer_cb(spec, m)
    return succ(omega_pow(spec.rule.gamma))


def szlenk_upper(spec: Mixed, eps: Union[Threshold, Rational]) -> Ordinal:
    """Upper bound for ``sup_n Sz(K_n, eps)`` for a well-constructed ``spec``.

    ``m`` is the least index with ``theta_m < 2*eps``. Geometric rules give
    ``CB(g_m)``; layered rules give the larger of ``max_{n <= m} CB(g_n)``
    and ``w^gamma + 1``.

    Raises:
        NotWellConstructedError: If ``spec`` is not well-constructed.
    """
    eps = Threshold.of(eps)
    if not eps.square:
        raise ValueError("eps must be positive")
    well_constructed_xi(spec)
    m = _first_small_layer(spec, eps)
    if isinstance(spec.rule, GeometricRule):
        return layer_cb(spec, m)
    head = max_ordinal(*(layer_cb(spec, n) for n in range(m + 1)))
    return max_ordinal(head, _case_bound(spec, m))


def layer_upper_bounds(
    spec: Mixed, eps: Union[Threshold, Rational], count: int
) -> list[tuple[int, Ordinal]]:
    """Per-layer bounds ``Sz(K_n, eps)`` for ``n < count``.

    Every layer is bounded by ``CB(g_n)``; past the first small layer ``m``
    the case bound applies as well and the smaller of the two is kept.
    """
    eps = Threshold.of(eps)
    try:
        m = _first_small_layer(spec, eps)
        well_constructed_xi(spec)
    except NotWellConstructedError:
        m = None
    out = []
    for n in range(count):
        if spec.layer(n) is None:
            break
        bound = layer_cb(spec, n)
        if m is not None and m < n:
            bound = min_ordinal(bound, _case_bound(spec, m))
        out.append((n, bound))
    return out


def jointly_covered(spec: Mixed, eps: Union[Threshold, Rational]) -> bool:
    """Whether the layer behind :func:`szlenk_lower` sits at or before ``m``."""
    eps = Threshold.of(eps)
    qualifying = layer_indices(spec, eps)
    if not qualifying:
        return True
    return qualifying[-1] <= _first_small_layer(spec, eps)


def szlenk_bounds(spec: Mixed, eps: Union[Threshold, Rational]) -> list[SzlenkDatum]:
    eps = Threshold.of(eps)
    out = [SzlenkDatum(eps, szlenk_lower(spec, eps), BoundKind.LOWER)]
    try:
        out.append(SzlenkDatum(eps, szlenk_upper(spec, eps), BoundKind.UPPER))
    except NotWellConstructedError as exc:
        logger.debug(f"no upper bound: {exc}")
    return out


# H-families


def _block_intervals(e: FinSet) -> list[tuple[int, ...]]:
    previous = 0
    blocks = []
    for k in e:
        blocks.append(tuple(range(previous + 1, k + 1)))
        previous = k
    return blocks


@lru_cache(maxsize=None)
def _qualifying_sets(
    spec: Mixed, theta: Fraction, eps: Threshold, block: Sequence[int]
) -> list[FinSet]:
    """Minimal ``S`` inside ``block`` with ``theta * ||sum_{i in S} e_i^*|| >= eps``."""
    limit = default_settings().search_node_limit
    if 2 ** len(block) > limit:
        raise SearchLimitError(f"block of {len(block)} points exceeds the search limit")
    found: list[FinSet] = []
    for s in subsets(block):
        if not s or any(set(f) <= set(s) for f in found):
            continue
        if eps.at_most(theta * dual_norm(spec, Vector.indicator(s))):
            found.append(s)
    return found


def h_member(
    spec: Mixed,
    k: FunctionalFamily,
    eps: Union[Threshold, Rational],
    e: Iterable[int],
) -> bool:
    """Whether ``e = (k_1 < ... < k_n)`` lies in the H-family of ``K`` at level ``eps``.

    Some functional ``theta * sum_{i in F} e_i^*`` of ``K`` must pair to at
    least ``eps`` with a unit vector of every block ``(k_{i-1}, k_i]``. Per
    block that is ``theta * ||1_{F cap block}||_* >= eps``, decided by the
    exact dual-norm LP; ``F`` is found by branch and bound over blocks.
    """
    eps = Threshold.of(eps)
    e = as_finset(e)
    if not e:
        return True
    if eps.exceeds(1):
        return False
    blocks = _block_intervals(e)
    for theta, g in k.layers:
        if eps.exceeds(theta * min(len(b) for b in blocks)):
            continue
        options = [_qualifying_sets(spec, theta, eps, block) for block in blocks]
        if any(not o for o in options):
            continue

        def extend(i: int, union: FinSet) -> bool:
            if i == len(options):
                return True
            return any(
                member(g, union + s) and extend(i + 1, union + s) for s in options[i]
            )

        if extend(0, ()):
            return True
    return False


@dataclass(frozen=True)
class HProbe:
    spec: Mixed
    k: FunctionalFamily
    eps: Threshold
    window: WindowFamily
    lower_5eps: Ordinal
    upper_twice: Optional[Ordinal]

    def report(self) -> dict:
        return {
            "spec": format_spec(self.spec),
            "functionals": str(self.k),
            "eps": str(self.eps),
            "window": self.window.n,
            "members": len(self.window.members),
            "hereditary_violations": len(self.window.hereditary_violations()),
            "spreading_violations": len(self.window.spreading_violations()),
            "truncated_rank": self.window.truncated_rank(),
            "szlenk_lower_5eps": format_ordinal(self.lower_5eps),
            "twice_szlenk_upper_half_eps": (
                format_ordinal(self.upper_twice) if self.upper_twice is not None else "n/a"
            ),
        }


def h_sandwich_probe(
    spec: Mixed,
    k: FunctionalFamily,
    eps: Union[Threshold, Rational],
    window: int,
) -> HProbe:
    """Classify subsets of ``{1..window}`` by :func:`h_member` next to the symbolic bounds."""
    eps = Threshold.of(eps)
    classified = WindowFamily.classify(lambda e: h_member(spec, k, eps, e), window)
    try:
        upper = mul(szlenk_upper(spec, eps.scaled(Fraction(1, 2))), 2)
    except NotWellConstructedError:
        upper = None
    probe = HProbe(spec, k, eps, classified, szlenk_lower(spec, eps.scaled(5)), upper)
    logger.debug(f"H probe {format_spec(spec)} eps={eps}: {len(classified.members)} members")
    return probe


# Factorization


class Regime(str, Enum):
    NONE = "none"
    POWER = "power"
    UNCONDITIONAL = "unconditional"


def factorization_regime(xi: OrdinalLike) -> Regime:
    """Which factorization criterion applies to operators of Szlenk index ``w^xi``.

    ``xi = w^zeta`` with ``zeta`` a limit admits none; ``xi = 1`` and
    ``xi = w^{zeta+1}`` need the ``gamma^n`` growth condition; every
    additively decomposable ``xi`` factors unconditionally.
    """
    xi = coerce(xi)
    if not xi:
        raise ValueError("xi must be positive")
    if xi == ONE:
        return Regime.POWER
    if len(xi.terms) == 1 and xi.terms[0][1] == 1:
        zeta = xi.leading_exponent
        return Regime.NONE if classify(zeta) is Kind.LIMIT else Regime.POWER
    return Regime.UNCONDITIONAL


def well_constructed_spec(xi: OrdinalLike, theta: Rational = Fraction(1, 2)) -> Mixed:
    """A canonical xi-well-constructed mixed Schreier space.

    Raises:
        NotWellConstructedError: If ``xi = w^zeta`` with ``zeta`` a limit.
    """
    xi = coerce(xi)
    regime = factorization_regime(xi)
    if regime is Regime.NONE:
        raise NotWellConstructedError(f"no well-constructed space for xi={xi}")
    if xi == ONE:
        return Mixed(GeometricRule(A(2), theta))
    if regime is Regime.POWER:
        # xi = w^{z+1}: CB(S(w^z + 1)) lies strictly between w^{w^z} and w^{w^{z+1}}
        z = pred(xi.leading_exponent)
        return Mixed(GeometricRule(S(succ(omega_pow(z))), theta))
    beta, gamma = split_last(xi)
    return Mixed(LayeredRule(beta, gamma, theta))


def factorization_condition(
    xi: OrdinalLike, gamma: OrdinalLike, sz_values: Iterable[tuple[int, OrdinalLike]]
) -> bool:
    """``gamma < w^xi`` and every supplied ``Sz(A, 1/2^n)`` bound is at most ``gamma^n``."""
    xi, gamma = coerce(xi), coerce(gamma)
    if not xi:
        raise ValueError("xi must be at least 1")
    if not gamma < omega_pow(xi):
        return False
    return all(coerce(bound) <= pow_nat(gamma, n) for n, bound in sz_values)


def _iroot(n: int, k: int) -> int:
    """``floor(n ** (1/k))`` by integer Newton iteration."""
    if n < 2:
        return n
    x = 1 << ((n.bit_length() + k - 1) // k)
    while True:
        y = ((k - 1) * x + n // x ** (k - 1)) // k
        if y >= x:
            break
        x = y
    while x**k > n:
        x -= 1
    while (x + 1) ** k <= n:
        x += 1
    return x


def _power(base: int, exponent: Fraction, bits: int) -> Enclosure:
    """Dyadic enclosure of ``base ** exponent`` with ``bits`` fractional bits."""
    a, b = exponent.numerator, exponent.denominator
    if a < 0:
        inverse = _power(base, -exponent, bits)
        return Enclosure(1 / inverse.hi, 1 / inverse.lo)
    root = _iroot(base**a << (bits * b), b)
    return Enclosure(Fraction(root, 1 << bits), Fraction(root + 1, 1 << bits))


def _series(m: int, l: int, beta: Fraction, s: Fraction, terms: int, bits: int, upper: bool) -> Optional[Fraction]:
    pick = (lambda e: e.hi) if upper else (lambda e: e.lo)
    r1 = pick(_power(2, -1 / beta, bits))
    r2 = pick(_power(2, 1 / s - 1 / beta, bits))
    c2 = pick(_power(2 * l, 1 / s, bits))
    if r1 >= 1 or r2 >= 1:
        return None
    head = sum(
        (n * r1 ** (n - 1) + c2 * r2 ** (n - 1) for n in range(1, terms + 1)),
        Fraction(0),
    )
    tail = r1**terms * ((terms + 1) - terms * r1) / (1 - r1) ** 2 + c2 * r2**terms / (1 - r2)
    return 2**m * (head + tail)


def factorization_constant_bounds(
    m: int, l: int, beta: Rational, s: Rational, tol: Rational, terms: int = 16
) -> Enclosure:
    """Certified enclosure of ``C = sum_n 2^m n / 2^{(n-1)/beta} + 2^m (l 2^n)^{1/s} / 2^{(n-1)/beta}``.

    Partial sums up to ``terms`` plus the closed geometric tails, evaluated
    with outward dyadic rounding; precision doubles until the width is at
    most ``tol``.

    Raises:
        DivergentSeriesError: If ``s <= beta``.
    """
    beta, s, tol = Fraction(beta), Fraction(s), Fraction(tol)
    if beta <= 1 or s < 1 or tol <= 0 or m < 0 or l < 1:
        raise ValueError(f"invalid parameters m={m}, l={l}, beta={beta}, s={s}, tol={tol}")
    if s <= beta:
        raise DivergentSeriesError(f"the series diverges for s={s} <= beta={beta}")
    bits = 32
    while True:
        hi = _series(m, l, beta, s, terms, bits, upper=True)
        lo = _series(m, l, beta, s, terms, bits, upper=False)
        if hi is not None and lo is not None and hi - lo <= tol:
            logger.debug(f"factorization constant at {bits} bits: [{float(lo)}, {float(hi)}]")
            return Enclosure(lo, hi)
        bits *= 2
        if bits > 1 << 14:
            raise ArithmeticError("factorization constant precision exhausted")


def factorization_constant(
    m: int, l: int, beta: Rational, s: Rational, tol: Rational
) -> Fraction:
    """A rational upper bound on the factorization constant, within ``tol`` of it."""
    return factorization_constant_bounds(m, l, beta, s, tol).hi


def schreier_factor_constant(m: int) -> Fraction:
    """``2^m sum_n n / 2^{n-1} = 2^{m+2}``."""
    return Fraction(2) ** (m + 2)


def geometric_factor_constant(m: int) -> Fraction:
    """``2^{m+1} sum_n (n / 2^{n-1} + (3/4)^n) = 7 * 2^{m+1}``."""
    return 7 * Fraction(2) ** (m + 1)
