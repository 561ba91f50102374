"""Tests for the branch-and-bound search and the exact LP solver."""

from fractions import Fraction

import pytest

from schreier_lab.family import S, member
from schreier_lab.lp import LPError, solve_lp
from schreier_lab.search import SearchLimitError, max_admissible_weight


class TestBranchAndBound:
    """Test max_admissible_weight."""

    def test_size_bounded(self):
        """Test the best two weights are chosen under |E| <= 2."""
        result = max_admissible_weight(
            [(1, 3), (2, 1), (3, 2)], lambda e: len(e) <= 2
        )
        assert result.value == 5
        assert result.chosen == (1, 3)

    def test_schreier_admissible(self):
        """Test the best S(1) set among 1..4 with unit weights."""
        result = max_admissible_weight(
            [(i, Fraction(1)) for i in range(1, 5)], lambda e: member(S(1), e)
        )
        assert result.value == 2

    def test_zero_weights_ignored(self):
        """Test an all-zero vector has value 0 on the empty set."""
        result = max_admissible_weight([(1, 0), (2, 0)], lambda e: True)
        assert result.value == 0
        assert result.chosen == ()

    def test_negative_weights(self):
        """Test negative weights are rejected."""
        with pytest.raises(ValueError):
            max_admissible_weight([(1, -1)], lambda e: True)

    def test_node_limit(self):
        """Test the node guard."""
        with pytest.raises(SearchLimitError):
            max_admissible_weight([(1, 1), (2, 1)], lambda e: True, node_limit=1)


class TestLinearProgramming:
    """Test solve_lp."""

    def test_two_constraints(self):
        """Test max x+y with x+2y <= 4 and 3x+y <= 6."""
        result = solve_lp([1, 1], a_ub=[[1, 2], [3, 1]], b_ub=[4, 6])
        assert result.value == Fraction(14, 5)
        assert result.x == (Fraction(8, 5), Fraction(6, 5))

    def test_equality(self):
        """Test max x with x+y = 1."""
        result = solve_lp([1, 0], a_eq=[[1, 1]], b_eq=[1])
        assert result.value == 1
        assert result.x == (Fraction(1), Fraction(0))

    def test_infeasible(self):
        """Test x <= -1 with x >= 0."""
        with pytest.raises(LPError):
            solve_lp([1], a_ub=[[1]], b_ub=[-1])

    def test_unbounded(self):
        """Test an unconstrained maximisation."""
        with pytest.raises(LPError):
            solve_lp([1])

    def test_shape_mismatch(self):
        """Test rows must match the objective."""
        with pytest.raises(ValueError):
            solve_lp([1, 1], a_ub=[[1]], b_ub=[1])
