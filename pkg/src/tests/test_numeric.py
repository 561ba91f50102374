"""Tests for numeric module."""

from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from schreier_lab.numeric import (
    Enclosure,
    Threshold,
    exact_sqrt,
    format_fraction,
    sqrt_enclosure,
)


class TestFractions:
    """Test exact helpers."""

    def test_format_fraction(self):
        """Test lowest terms and integers."""
        assert format_fraction(Fraction(6, 4)) == "3/2"
        assert format_fraction(3) == "3"
        assert format_fraction(Fraction(-1, 2)) == "-1/2"

    def test_exact_sqrt(self):
        """Test rational square roots."""
        assert exact_sqrt(Fraction(9, 4)) == Fraction(3, 2)
        assert exact_sqrt(2) is None
        assert exact_sqrt(-1) is None


class TestEnclosure:
    """Test Enclosure."""

    def test_empty_rejected(self):
        """Test lo must not exceed hi."""
        with pytest.raises(ValueError):
            Enclosure(2, 1)

    def test_str(self):
        """Test exact and interval rendering."""
        assert str(Enclosure.exact(Fraction(1, 2))) == "1/2"
        assert str(Enclosure(1, 2)) == "[1, 2]"

    def test_scale(self):
        """Test nonnegative scaling."""
        assert Enclosure(1, 2).scale(3) == Enclosure(3, 6)
        with pytest.raises(ValueError):
            Enclosure(1, 2).scale(-1)

    @given(
        st.fractions(min_value=Fraction(1, 1000), max_value=1000),
        st.sampled_from([Fraction(1, 10), Fraction(1, 1000), Fraction(1, 10**9)]),
    )
    def test_sqrt_enclosure(self, square, width):
        """Test square-root enclosures contain the root and are narrow."""
        box = sqrt_enclosure(square, width)
        assert box.contains_sqrt(square)
        assert box.width <= width


class TestThreshold:
    """Test Threshold."""

    def test_rational(self):
        """Test a rational threshold."""
        eps = Threshold.of(Fraction(1, 2))
        assert str(eps) == "1/2"
        assert eps.rational == Fraction(1, 2)
        assert eps.at_most(Fraction(1, 2))
        assert not eps.exceeds(Fraction(1, 2))

    def test_over_sqrt(self):
        """Test r/sqrt(m) rendering and comparisons."""
        eps = Threshold.over_sqrt(1, 3)
        assert str(eps) == "1/sqrt(3)"
        assert eps.rational is None
        assert eps.exceeds(Fraction(1, 2))
        assert eps.at_most(Fraction(3, 5))
        assert str(Threshold.over_sqrt(2, 8)) == "1/sqrt(2)"

    def test_scaled(self):
        """Test scaling keeps the square exact."""
        assert str(Threshold.over_sqrt(1, 3).scaled(2)) == "2/sqrt(3)"

    def test_negative(self):
        """Test negative thresholds are rejected."""
        with pytest.raises(ValueError):
            Threshold.of(-1)
