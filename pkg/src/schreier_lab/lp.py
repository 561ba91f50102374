"""Exact linear programming over the rationals.

Dense two-phase tableau simplex with Bland's rule, so every pivot is exact
and cycling cannot occur.
"""

import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

logger = logging.getLogger(__name__)

Row = Sequence[Fraction | int]


class LPError(ArithmeticError):
    """Raised for infeasible or unbounded programs."""


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]


class _Tableau:
    def __init__(self, rows: list[list[Fraction]], basis: list[int], columns: int):
        self.rows = rows
        self.basis = basis
        self.columns = columns

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        factor = row[c]
        self.rows[r] = row = [v / factor for v in row]
        for i, other in enumerate(self.rows):
            if i != r and other[c]:
                scale = other[c]
                self.rows[i] = [a - scale * b for a, b in zip(other, row)]
        self.basis[r] = c

    def optimise(self, cost: list[Fraction], allowed: set[int]) -> None:
        """Maximise ``cost . x`` from the current basic feasible solution."""
        order = sorted(allowed)
        while True:
            reduced = list(cost[: self.columns])
            for b, row in zip(self.basis, self.rows):
                weight = cost[b]
                if weight:
                    for j, v in enumerate(row[: self.columns]):
                        if v:
                            reduced[j] -= weight * v
            basic = set(self.basis)
            entering = next(
                (j for j in order if j not in basic and reduced[j] > 0), None
            )
            if entering is None:
                return
            leaving = None
            best = None
            for i, row in enumerate(self.rows):
                if row[entering] > 0:
                    ratio = row[-1] / row[entering]
                    if (
                        best is None
                        or ratio < best
                        or (ratio == best and self.basis[i] < self.basis[leaving])
                    ):
                        best, leaving = ratio, i
            if leaving is None:
                raise LPError("linear program is unbounded")
            self.pivot(leaving, entering)

    def value_of(self, column: int) -> Fraction:
        for b, row in zip(self.basis, self.rows):
            if b == column:
                return row[-1]
        return Fraction(0)


def solve_lp(
    c: Row,
    a_ub: Sequence[Row] = (),
    b_ub: Row = (),
    a_eq: Sequence[Row] = (),
    b_eq: Row = (),
) -> LPResult:
    """Maximise ``c . x`` subject to ``a_ub x <= b_ub``, ``a_eq x = b_eq``, ``x >= 0``.

    Args:
        c: Objective coefficients.
        a_ub: Inequality rows.
        b_ub: Inequality right-hand sides.
        a_eq: Equality rows.
        b_eq: Equality right-hand sides.

    Returns:
        The optimal value and one optimal point.

    Raises:
        LPError: If the program is infeasible or unbounded.
    """
    n = len(c)
    ub = [([Fraction(v) for v in row], Fraction(b)) for row, b in zip(a_ub, b_ub)]
    eq = [([Fraction(v) for v in row], Fraction(b)) for row, b in zip(a_eq, b_eq)]
    if any(len(row) != n for row, _ in ub + eq):
        raise ValueError("constraint rows must match the objective length")

    # Columns: originals, one slack per inequality, then artificials.
    slack_start = n
    artificial_start = n + len(ub)
    specs = []
    artificial_count = 0
    for k, (row, b) in enumerate(ub):
        slack = [Fraction(0)] * len(ub)
        slack[k] = Fraction(1)
        if b < 0:
            specs.append(([-v for v in row], [-s for s in slack], -b, True))
            artificial_count += 1
        else:
            specs.append((row, slack, b, False))
    for row, b in eq:
        zero = [Fraction(0)] * len(ub)
        if b < 0:
            specs.append(([-v for v in row], zero, -b, True))
        else:
            specs.append((row, zero, b, True))
        artificial_count += 1

    columns = artificial_start + artificial_count
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    next_artificial = artificial_start
    for k, (row, slack, b, needs_artificial) in enumerate(specs):
        artificial = [Fraction(0)] * artificial_count
        if needs_artificial:
            artificial[next_artificial - artificial_start] = Fraction(1)
            basis.append(next_artificial)
            next_artificial += 1
        else:
            basis.append(slack_start + k)
        rows.append(list(row) + list(slack) + artificial + [b])

    tableau = _Tableau(rows, basis, columns)
    artificials = set(range(artificial_start, columns))
    if artificials:
        phase_one = [Fraction(0)] * columns
        for j in artificials:
            phase_one[j] = Fraction(-1)
        tableau.optimise(phase_one, set(range(columns)))
        if any(tableau.value_of(j) != 0 for j in artificials):
            raise LPError("linear program is infeasible")
        for i in range(len(tableau.rows) - 1, -1, -1):
            if tableau.basis[i] not in artificials:
                continue
            pivot_column = next(
                (
                    j
                    for j in range(artificial_start)
                    if tableau.rows[i][j] != 0
                ),
                None,
            )
            if pivot_column is None:
                del tableau.rows[i]
                del tableau.basis[i]
            else:
                tableau.pivot(i, pivot_column)

    cost = [Fraction(v) for v in c] + [Fraction(0)] * (columns - n)
    tableau.optimise(cost, set(range(artificial_start)))
    x = tuple(tableau.value_of(j) for j in range(n))
    value = sum((a * b for a, b in zip(cost, x)), Fraction(0))
    logger.debug(f"LP with {n} variables and {len(specs)} rows: optimum {value}")
    return LPResult(value, x)
