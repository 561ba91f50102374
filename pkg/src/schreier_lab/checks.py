"""Seeded property suites, one per acceptance target of the library.

Each suite draws its instances from ``numpy.random.default_rng(seed)`` and
returns a :class:`SuiteResult` listing counterexamples; nothing raises on a
violated property. Observations that are reported but not asserted go to notes.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional

import numpy as np

from .family import (
    A,
    EVENS,
    Comb,
    Family,
    FamilyError,
    Pre,
    S,
    SetGen,
    cb_index,
    comb_split_check,
    format_finset,
    member,
    member_brute,
    rank,
    rank_oracle_table,
    subsets,
    window_members,
)
from .norms import (
    INF,
    Baernstein,
    ExplicitLayers,
    GeometricRule,
    Mixed,
    Schreier,
    Vector,
    baernstein_norm,
    bset_family_probe,
    format_spec,
    schreier_norm,
)
from .numeric import Threshold
from .ordinal import (
    OMEGA,
    ONE,
    Kind,
    Ordinal,
    add,
    classify,
    from_terms,
    fund_seq,
    mul,
    of_int,
    omega_pow,
    pow_nat,
    succ,
)
from .ravg import (
    MeasureTooLargeError,
    permanence_check,
    permanence_set,
    repeated_average,
    support_check,
)
from .renorm import block_interval, trip_inequality_check, vee_norm, wedge_bracket
from .szlenk import (
    FunctionalFamily,
    NotWellConstructedError,
    factorization_condition,
    h_member,
    h_sandwich_probe,
    jointly_covered,
    szlenk_lower,
    szlenk_upper,
    well_constructed_spec,
)

logger = logging.getLogger(__name__)

MAX_FAILURES = 20


@dataclass
class SuiteResult:
    """Outcome of one suite run."""

    name: str
    seed: int
    cases: int = 0
    failures: list[str] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, message: str) -> None:
        if len(self.failures) < MAX_FAILURES:
            self.failures.append(message)
        elif len(self.failures) == MAX_FAILURES:
            self.failures.append("further failures omitted")

    def report(self) -> dict:
        return {
            "suite": self.name,
            "seed": self.seed,
            "cases": self.cases,
            "status": "pass" if self.passed else "fail",
            "failures": list(self.failures),
            "notes": list(self.notes),
        }


Rng = np.random.Generator
Suite = Callable[[Rng, SuiteResult, Optional[int]], None]


def _half_units(rng: Rng, low: int = -2, high: int = 2) -> Fraction:
    return Fraction(int(rng.integers(low, high + 1)), 2)


def _random_vector(rng: Rng, window: range) -> Vector:
    coords = {}
    for i in window:
        value = _half_units(rng)
        if value and rng.random() < 0.6:
            coords[i] = value
    return Vector.from_mapping(coords)


def random_ordinal(rng: Rng, depth: int = 2) -> Ordinal:
    """A random ordinal with exponent towers at most ``depth`` high."""
    if depth == 0:
        return of_int(int(rng.integers(0, 4)))
    exponents = {random_ordinal(rng, depth - 1) for _ in range(int(rng.integers(0, 4)))}
    terms = [(e, int(rng.integers(1, 4))) for e in sorted(exponents, reverse=True)]
    return from_terms(terms)


# Families


CB_FAMILIES: list[tuple[Family, Ordinal]] = (
    [(A(n), of_int(n + 1)) for n in range(9)]
    + [(S(1), succ(OMEGA)), (S(2), succ(omega_pow(2)))]
    + [(Comb(A(m), S(1)), succ(mul(OMEGA, m))) for m in range(1, 6)]
)


def cb_closed_forms(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    for g, expected in CB_FAMILIES:
        result.cases += 1
        got = cb_index(g)
        if got != expected:
            result.fail(f"cb_index({g}) = {got}, expected {expected}")


ORACLE_FAMILIES: list[Family] = [g for g, _ in CB_FAMILIES] + [
    Pre(S(1), EVENS),
    Pre(S(2), EVENS),
    Comb(S(1), Pre(S(1), EVENS)),
    Comb(A(2), Comb(A(2), S(1))),
]


def rank_oracle_agreement(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    window = range(1, 13)
    for g in ORACLE_FAMILIES:
        members = window_members(g, window)
        for e, oracle in rank_oracle_table(g, members, cap=16).items():
            result.cases += 1
            if oracle is None:
                result.fail(f"rank oracle undecided on {format_finset(e)} in {g}")
            elif rank(g, e) != oracle:
                result.fail(f"rank({g}, {format_finset(e)}) = {rank(g, e)}, oracle {oracle}")


def member_oracle_agreement(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    families = [S(1), S(2), A(4), Comb(A(2), S(1)), Pre(S(1), EVENS)]
    for g in families:
        for e in subsets(range(1, 11)):
            result.cases += 1
            if member(g, e) != member_brute(g, e):
                result.fail(f"member({g}, {format_finset(e)}) disagrees with brute force")


# Norms


def _brute_mass(g: Family, x: Vector) -> Fraction:
    weights = dict(x.abs_items())
    return max(
        (sum((weights[i] for i in e), Fraction(0)) for e in subsets(x.support) if member(g, e)),
        default=Fraction(0),
    )


def _brute_successive(g: Family, x: Vector, power: int) -> Fraction:
    """Best sum of ``mass(F_i)**power`` over successive members ``F_1 < F_2 < ...``."""
    weights = dict(x.abs_items())
    support = x.support
    best: dict[int, Fraction] = {len(support): Fraction(0)}
    for start in range(len(support) - 1, -1, -1):
        value = best[start + 1]
        for e in subsets(support[start:]):
            if not e or e[0] != support[start] or not member(g, e):
                continue
            mass = sum((weights[i] for i in e), Fraction(0))
            after = support.index(e[-1]) + 1
            value = max(value, mass**power + best[after])
        best[start] = value
    return best[0]


def norm_brute(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    families = [S(1), A(2), Comb(A(2), S(0)), S(2)]
    width = Fraction(1, 10**9)
    for t in range(cases or 500):
        g = families[t % len(families)]
        x = _random_vector(rng, range(1, 9))
        result.cases += 1
        mass = _brute_mass(g, x)
        if schreier_norm(g, x) != mass:
            result.fail(f"schreier_norm({g}, {x}) = {schreier_norm(g, x)}, brute {mass}")
        if baernstein_norm(g, INF, x) != mass:
            result.fail(f"baernstein_norm({g}, p=inf, {x}) differs from {mass}")
        total = _brute_successive(g, x, 1)
        if baernstein_norm(g, 1, x) != total:
            result.fail(f"baernstein_norm({g}, p=1, {x}) differs from {total}")
        square = _brute_successive(g, x, 2)
        enclosure = baernstein_norm(g, 2, x, width=width)
        if enclosure.width > width or not enclosure.contains_sqrt(square):
            result.fail(f"baernstein_norm({g}, p=2, {x}) = {enclosure} misses sqrt({square})")


def door(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    spec = Baernstein(S(0), 2)
    for m in (2, 3, 4):
        result.cases += 1
        probe = bset_family_probe(spec, Threshold.over_sqrt(1, m), 10)
        wrong = probe.window.mismatches(A(m))
        if wrong:
            shown = ", ".join(format_finset(e) for e in wrong[:5])
            result.fail(f"eps=1/sqrt({m}): window differs from A({m}) on {shown}")


# Repeated averages


def _random_setgen(rng: Rng, first: Optional[int] = None) -> SetGen:
    prefix: tuple[int, ...] = ()
    if first is not None:
        prefix = (first,)
    start = (prefix[-1] if prefix else 0) + int(rng.integers(1, 4))
    return SetGen(prefix, start, int(rng.integers(1, 3)))


def repeated_averages(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    limit = 60
    levels = [ONE, of_int(2), OMEGA]
    skipped = 0
    for t in range(cases or 200):
        xi = levels[t % len(levels)]
        if xi == OMEGA:
            # S^w needs m_1 = 1 to stay inside a desk-sized window
            m, n = _random_setgen(rng, first=1), 1
        else:
            m, n = _random_setgen(rng), int(rng.integers(1, 4))
        try:
            measures = [repeated_average(xi, m, r, support_limit=limit) for r in range(1, n + 1)]
        except MeasureTooLargeError:
            skipped += 1
            continue
        if max(i for mu in measures for i in mu.support) > limit:
            skipped += 1
            continue
        result.cases += 1
        label = f"xi={xi}, M={m}"
        for r, mu in enumerate(measures, start=1):
            if mu.mass != 1:
                result.fail(f"{label}: S_{r} has mass {mu.mass}")
            if not support_check(xi, m, r, support_limit=limit):
                result.fail(f"{label}: support of S_{r} is not the {r}-th block")
        chosen = sorted(
            int(r) for r in rng.choice(np.arange(1, n + 1), size=int(rng.integers(1, n + 1)), replace=False)
        )
        n2 = permanence_set(
            xi, m, chosen, start=int(rng.integers(1, 70)), step=int(rng.integers(1, 3))
        )
        if not permanence_check(xi, m, chosen, n2):
            result.fail(f"{label}: permanence fails for indices {chosen} in {n2}")
    if skipped:
        result.notes.append(f"{skipped} instances left the support window")


# Renormings


SPACE_PAIRS = [
    (Schreier(S(0)), Schreier(S(1))),
    (Schreier(S(1)), Schreier(S(1))),
    (Baernstein(S(1), 1), Schreier(S(1))),
    (Schreier(S(0)), Mixed(GeometricRule(A(2), Fraction(1, 2)))),
]


def opposition(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    for t in range(cases or 300):
        x_space, e_space = SPACE_PAIRS[t % len(SPACE_PAIRS)]
        x = _random_vector(rng, range(1, 7))
        lo, hi = sorted(int(v) for v in rng.integers(1, 8, size=2))
        part = x.restrict_interval(lo, hi)
        result.cases += 1
        for name, functional in (("vee", vee_norm), ("wedge", wedge_bracket)):
            whole, restricted = functional(x_space, e_space, x), functional(x_space, e_space, part)
            if restricted.lo > whole.hi:
                result.fail(f"{name} grows on [{lo},{hi}] for x={x}: {restricted} > {whole}")


def _block_vector(rng: Rng, lo: int, hi: int) -> Vector:
    coords = {}
    for i in range(lo, hi + 1):
        if rng.random() < 0.7:
            coords[i] = Fraction(int(rng.choice([-2, -1, 1, 2])), 2)
    if not coords:
        coords[int(rng.integers(lo, hi + 1))] = Fraction(1)
    return Vector.from_mapping(coords)


def trip(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    spaces = [Schreier(S(1)), well_constructed_spec(1)]
    factor_one_failures = 0
    for t in range(cases or 200):
        spec = spaces[t % len(spaces)]
        m = SetGen((), int(rng.integers(1, 4)), int(rng.integers(1, 4)))
        count = int(rng.integers(2, 4))
        blocks = []
        for i in range(1, count + 1):
            y = _block_vector(rng, *block_interval(m, i))
            size = wedge_bracket(spec, spec, y).hi
            blocks.append(y.scale(1 / size))
        a = _random_vector(rng, range(1, count + 1))
        outcome = trip_inequality_check(spec, spec, m, a, blocks)
        result.cases += 1
        if not outcome.factor_two:
            result.fail(f"{spec}: {outcome.lhs} > 2*{outcome.rhs} for a={a} over {m}")
        if not outcome.factor_one:
            factor_one_failures += 1
    result.notes.append(f"factor-one bound failed on {factor_one_failures} systems")


# Szlenk bounds


WW_EPS = [Fraction(1, 8), Fraction(1, 4), Fraction(1, 2), Fraction(1)]
COMB_PAIRS = [(A(2), S(1)), (A(3), S(1)), (A(2), A(2)), (S(1), S(0)), (S(1), A(2))]


def ww(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    for base, theta in itertools.product(
        (A(2), A(3), S(1)), (Fraction(1, 2), Fraction(2, 3))
    ):
        spec = Mixed(GeometricRule(base, theta))
        for eps in WW_EPS:
            if not jointly_covered(spec, eps):
                result.notes.append(f"{base}, theta={theta}, eps={eps}: report only")
                continue
            try:
                lower, upper = szlenk_lower(spec, eps), szlenk_upper(spec, eps)
            except NotWellConstructedError as exc:
                result.notes.append(f"{base}, theta={theta}, eps={eps}: {exc}")
                continue
            result.cases += 1
            if lower > upper:
                result.fail(f"{base}, theta={theta}, eps={eps}: lower {lower} > upper {upper}")

    done, attempts = 0, 0
    target = cases or 1000
    while done < target and attempts < 50 * target:
        attempts += 1
        a, b = COMB_PAIRS[attempts % len(COMB_PAIRS)]
        size = int(rng.integers(1, 7))
        f = tuple(sorted(int(v) for v in rng.choice(np.arange(1, 13), size=size, replace=False)))
        if not member(Comb(a, b), f):
            continue
        e = f[: int(rng.integers(0, len(f)))]
        done += 1
        result.cases += 1
        try:
            ok = comb_split_check(a, b, e, f)
        except FamilyError as exc:
            result.fail(f"comb_split_check({a}, {b}, {format_finset(e)}, {format_finset(f)}): {exc}")
            continue
        if not ok:
            result.fail(f"neither {format_finset(e)} in {a}'[{b}] nor the rest of {format_finset(f)} in {b}")


H_SPECS = [
    Mixed(GeometricRule(A(2), Fraction(1, 2))),
    Mixed(ExplicitLayers(((S(0), Fraction(1)), (A(2), Fraction(1, 2))))),
    Mixed(ExplicitLayers(((S(1), Fraction(1)), (A(3), Fraction(1, 3))))),
]
H_EPS = [Fraction(1, 4), Fraction(1, 3), Fraction(1, 2), Fraction(2, 3), Fraction(1), Fraction(3, 2)]


def hfamily(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    window = 5
    for _ in range(cases or 50):
        spec = H_SPECS[int(rng.integers(0, len(H_SPECS)))]
        eps = H_EPS[int(rng.integers(0, len(H_EPS)))]
        k = FunctionalFamily.of_spec(spec, eps, window)
        probe = h_sandwich_probe(spec, k, eps, window)
        label = f"{format_spec(spec)}, eps={eps}"
        result.cases += 1
        if not h_member(spec, k, eps, ()):
            result.fail(f"{label}: the empty set is not a member")
        if eps > 1 and probe.window.members != frozenset({()}):
            result.fail(f"{label}: eps > 1 admits nonempty sets")
        for e, smaller in probe.window.hereditary_violations()[:3]:
            result.fail(f"{label}: {format_finset(e)} in H but not {format_finset(smaller)}")
        for e, shifted in probe.window.spreading_violations()[:3]:
            result.fail(f"{label}: {format_finset(e)} in H but not its spread {format_finset(shifted)}")


def factorization(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    w2, w3, w5 = omega_pow(2), omega_pow(3), omega_pow(5)
    tagged = [
        (OMEGA, w2, [(1, OMEGA), (2, w3), (3, w5)], True),
        (OMEGA, omega_pow(OMEGA), [], False),
        (OMEGA, w2, [], True),
    ]
    for xi, gamma, values, expected in tagged:
        result.cases += 1
        if factorization_condition(xi, gamma, values) != expected:
            result.fail(f"factorization_condition({xi}, {gamma}, {values}) != {expected}")

    levels = [ONE, of_int(2), OMEGA]
    for t in range(cases or 500):
        xi = levels[t % len(levels)]
        g1, g2 = sorted((random_ordinal(rng, 1), random_ordinal(rng, 1)))
        if not g2 < omega_pow(xi):
            continue
        values = [(int(rng.integers(1, 4)), random_ordinal(rng, 1)) for _ in range(3)]
        result.cases += 1
        if factorization_condition(xi, g1, values) and not factorization_condition(xi, g2, values):
            result.fail(f"xi={xi}: condition holds at {g1} but not at {g2} for {values}")


def ordinal_algebra(rng: Rng, result: SuiteResult, cases: Optional[int]) -> None:
    for _ in range(cases or 10_000):
        a, b, c = (random_ordinal(rng) for _ in range(3))
        result.cases += 1
        broken: list[str] = []
        if add(add(a, b), c) != add(a, add(b, c)):
            broken.append("addition is not associative")
        if mul(mul(a, b), c) != mul(a, mul(b, c)):
            broken.append("multiplication is not associative")
        if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
            broken.append("left distributivity fails")
        if b < c:
            if not add(a, b) < add(a, c):
                broken.append("a + b < a + c fails")
            if a and not mul(a, b) < mul(a, c):
                broken.append("a * b < a * c fails")
        if b <= c and not (add(b, a) <= add(c, a) and mul(b, a) <= mul(c, a)):
            broken.append("right monotonicity fails")
        # Labels are only formatted for failing triples.
        for message in broken:
            result.fail(f"{message} at a={a}, b={b}, c={c}")
        m, n = int(rng.integers(0, 3)), int(rng.integers(0, 3))
        if pow_nat(a, m + n) != mul(pow_nat(a, m), pow_nat(a, n)):
            result.fail(f"a^{m + n} != a^{m} * a^{n} at a={a}")
        if classify(a) is Kind.LIMIT:
            seq = [fund_seq(a, k) for k in range(1, 5)]
            if any(x >= y for x, y in zip(seq, seq[1:])) or seq[-1] >= a:
                result.fail(f"fundamental sequence of {a} is not strictly increasing below it")


SUITES: dict[str, Suite] = {
    "cb-closed-forms": cb_closed_forms,
    "rank-oracle": rank_oracle_agreement,
    "member-oracle": member_oracle_agreement,
    "norm-brute": norm_brute,
    "door": door,
    "ravg": repeated_averages,
    "opposition": opposition,
    "trip": trip,
    "ww": ww,
    "hfamily": hfamily,
    "factorization": factorization,
    "ordinal": ordinal_algebra,
}


def run_suite(name: str, seed: int = 0, cases: Optional[int] = None) -> SuiteResult:
    """Run one named suite; ``cases`` overrides its default instance count."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    result = SuiteResult(name, seed)
    logger.info(f"running suite {name} with seed {seed}")
    SUITES[name](np.random.default_rng(seed), result, cases)
    logger.info(f"suite {name}: {result.cases} cases, {len(result.failures)} failures")
    return result


def run_suites(names: list[str], seed: int = 0, cases: Optional[int] = None) -> list[SuiteResult]:
    """Run suites in order; ``all`` expands to every suite."""
    expanded = list(SUITES) if "all" in names else names
    return [run_suite(name, seed, cases) for name in expanded]
