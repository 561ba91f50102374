"""Certified minimisation of the squared p=2 Baernstein norm over a simplex.

The squared norm is the maximum over successive systems of ``g``-sets of a
convex quadratic, so it is convex on the simplex. Upper bounds come from
exact evaluation at rational points; lower bounds from an exact LP over
tangent cuts of the quadratics met so far. SLSQP supplies good points.
"""

import logging
from fractions import Fraction
from typing import Optional

import numpy as np
from scipy.optimize import minimize

from .config import default_settings
from .family import Family, FinSet, as_finset
from .lp import solve_lp
from .numeric import Enclosure, Rational
from .norms import CertificationError, Vector, baernstein_square, baernstein_system

logger = logging.getLogger(__name__)

System = tuple[FinSet, ...]


def _incidence(system: System, e: FinSet) -> np.ndarray:
    position = {i: k for k, i in enumerate(e)}
    matrix = np.zeros((len(system), len(e)))
    for row, block in enumerate(system):
        for i in block:
            matrix[row, position[i]] = 1.0
    return matrix


def _block_sums(system: System, point: dict[int, Fraction]) -> list[Fraction]:
    return [sum((point[i] for i in block), Fraction(0)) for block in system]


def _rationalise(values: np.ndarray, e: FinSet) -> dict[int, Fraction]:
    raw = [max(Fraction(float(v)).limit_denominator(10**12), Fraction(0)) for v in values]
    total = sum(raw, Fraction(0))
    if not total:
        return {i: Fraction(1, len(e)) for i in e}
    return {i: v / total for i, v in zip(e, raw)}


def _slsqp_point(systems: list[System], e: FinSet, start: np.ndarray) -> np.ndarray:
    """Numerical minimiser of the max of the known quadratics (epigraph form)."""
    k = len(e)
    matrices = [_incidence(s, e) for s in systems]
    grams = [m.T @ m for m in matrices]

    def constraint(gram: np.ndarray) -> dict:
        return {
            "type": "ineq",
            "fun": lambda z, g=gram: z[-1] - z[:k] @ g @ z[:k],
            "jac": lambda z, g=gram: np.concatenate([-2.0 * (g @ z[:k]), [1.0]]),
        }

    initial_t = max(float(start @ g @ start) for g in grams)
    result = minimize(
        lambda z: z[-1],
        np.concatenate([start, [initial_t]]),
        jac=lambda z: np.concatenate([np.zeros(k), [1.0]]),
        method="SLSQP",
        bounds=[(0.0, 1.0)] * k + [(0.0, None)],
        constraints=[constraint(g) for g in grams]
        + [{"type": "eq", "fun": lambda z: np.sum(z[:k]) - 1.0}],
        options={"ftol": 1e-15, "maxiter": 500},
    )
    return result.x[:k] if result.success else start


def _tangent_lower_bound(
    cuts: list[tuple[System, dict[int, Fraction]]], e: FinSet
) -> tuple[Fraction, dict[int, Fraction]]:
    """Exact ``min_a max_cuts`` of the tangent planes, with its minimiser."""
    k = len(e)
    rows, rhs = [], []
    for system, point in cuts:
        sums = _block_sums(system, point)
        slope = {i: Fraction(0) for i in e}
        for block, s in zip(system, sums):
            for i in block:
                slope[i] += 2 * s
        rows.append([slope[i] for i in e] + [-1])
        rhs.append(sum((s * s for s in sums), Fraction(0)))
    result = solve_lp(
        [0] * k + [-1], a_ub=rows, b_ub=rhs, a_eq=[[1] * k + [0]], b_eq=[1]
    )
    return -result.value, dict(zip(e, result.x[:k]))


def certified_simplex_square(
    g: Family,
    e: FinSet,
    target: Optional[Rational] = None,
    width: Optional[Rational] = None,
    rounds: Optional[int] = None,
) -> Enclosure:
    """Enclose ``min`` over the simplex on ``e`` of the squared p=2 norm.

    Refinement stops once the enclosure of the square root is at most
    ``width`` wide, or as soon as ``target`` (a squared threshold) is on a
    definite side of the enclosure.

    Raises:
        CertificationError: If neither happens within ``rounds`` refinements.
    """
    settings = default_settings()
    e = as_finset(e)
    width = Fraction(width) if width is not None else settings.enclosure_fraction
    rounds = rounds or settings.certify_rounds
    target = Fraction(target) if target is not None else None

    point = {i: Fraction(1, len(e)) for i in e}
    upper = baernstein_square(g, Vector.from_mapping(point))
    systems = [baernstein_system(g, Vector.from_mapping(point))]
    cuts = [(systems[0], point)]
    lower = Fraction(0)

    for round_ in range(1, rounds + 1):
        start = np.array([float(point[i]) for i in e])
        numeric = _slsqp_point(systems, e, start)
        for candidate in (_rationalise(numeric, e), None):
            if candidate is None:
                # Kelley step: the minimiser of the current cutting-plane model
                lower, candidate = _tangent_lower_bound(cuts, e)
            x = Vector.from_mapping(candidate)
            value = baernstein_square(g, x)
            system = baernstein_system(g, x)
            if system not in systems:
                systems.append(system)
            cuts.append((system, candidate))
            if value < upper:
                upper, point = value, candidate
        lower = min(lower, upper)
        logger.debug(f"certify round {round_} on {e}: [{float(lower)}, {float(upper)}]")
        if target is not None and (target <= lower or target > upper):
            break
        if (upper - lower) ** 2 <= width * width * upper:
            break
    else:
        raise CertificationError(
            f"p=2 minimum on {e} not certified after {rounds} rounds: "
            f"[{float(lower)}, {float(upper)}]"
        )
    return Enclosure(lower, upper)
