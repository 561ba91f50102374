"""Tests for ordinal module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schreier_lab.ordinal import (
    OMEGA,
    ONE,
    ZERO,
    Kind,
    NotALimitError,
    Order,
    OrdinalOverflowError,
    add,
    classify,
    compare,
    format_ordinal,
    from_terms,
    fund_seq,
    is_additively_indecomposable,
    mul,
    of_int,
    omega_pow,
    pow_nat,
    pred,
    split_last,
    sub,
    succ,
)


def _cnf(exponents):
    return st.dictionaries(exponents, st.integers(1, 3), max_size=3).map(
        lambda terms: from_terms(sorted(terms.items(), key=lambda t: t[0], reverse=True))
    )


ordinals = _cnf(_cnf(st.integers(0, 3).map(of_int)))


class TestArithmetic:
    """Test sums, products and powers."""

    def test_finite_absorbed_on_the_left(self):
        """Test that 1 + w = w but w + 1 is larger."""
        assert add(1, OMEGA) == OMEGA
        assert add(OMEGA, 1) > OMEGA
        assert format_ordinal(add(OMEGA, 1)) == "w+1"

    def test_products_are_not_commutative(self):
        """Test 2*w = w while w*2 is printed w*2."""
        assert mul(2, OMEGA) == OMEGA
        assert format_ordinal(mul(OMEGA, 2)) == "w*2"
        assert mul(succ(OMEGA), 2) == add(mul(OMEGA, 2), 1)

    def test_pow_nat(self):
        """Test (w+1)^2 = w^2 + w + 1."""
        square = pow_nat(succ(OMEGA), 2)
        assert square == add(add(omega_pow(2), OMEGA), 1)
        assert pow_nat(OMEGA, 0) == ONE

    def test_sums_merge_coefficients(self):
        """Test (w^2 + w) + (w*2 + 1) = w^2 + w*3 + 1."""
        left = add(omega_pow(2), OMEGA)
        right = add(mul(OMEGA, 2), 1)
        assert format_ordinal(add(left, right)) == "w^{2}+w*3+1"

    def test_left_subtraction(self):
        """Test sub returns the d with a + d = b."""
        assert sub(add(OMEGA, 3), OMEGA) == of_int(3)
        assert sub(omega_pow(2), 1) == omega_pow(2)
        with pytest.raises(ValueError):
            sub(1, OMEGA)

    def test_overflow_guard(self):
        """Test towers beyond the height cap are rejected."""
        x = ONE
        with pytest.raises(OrdinalOverflowError):
            for _ in range(70):
                x = omega_pow(x)

    def test_invalid_normal_form(self):
        """Test increasing exponents are rejected."""
        with pytest.raises(ValueError):
            from_terms([(1, 1), (2, 1)])


class TestStructure:
    """Test classification, fundamental sequences and splits."""

    def test_classify(self):
        """Test zero, successor and limit ordinals."""
        assert classify(ZERO) is Kind.ZERO
        assert classify(3) is Kind.SUCCESSOR
        assert classify(OMEGA) is Kind.LIMIT
        assert classify(add(OMEGA, 2)) is Kind.SUCCESSOR

    def test_fund_seq(self):
        """Test canonical fundamental sequences."""
        assert fund_seq(OMEGA, 4) == of_int(4)
        assert fund_seq(omega_pow(2), 3) == mul(OMEGA, 3)
        assert fund_seq(omega_pow(OMEGA), 2) == omega_pow(2)
        assert fund_seq(mul(OMEGA, 2), 5) == add(OMEGA, 5)

    def test_fund_seq_of_successor(self):
        """Test fundamental sequences need a limit."""
        with pytest.raises(NotALimitError):
            fund_seq(5, 1)

    def test_pred(self):
        """Test predecessors of successors only."""
        assert pred(succ(OMEGA)) == OMEGA
        with pytest.raises(ValueError):
            pred(OMEGA)

    def test_split_last(self):
        """Test w^2 + w*2 splits as (w^2 + w) + w."""
        beta, gamma = split_last(add(omega_pow(2), mul(OMEGA, 2)))
        assert beta == add(omega_pow(2), OMEGA)
        assert gamma == OMEGA
        assert is_additively_indecomposable(omega_pow(2))
        assert not is_additively_indecomposable(succ(OMEGA))

    def test_compare_and_int(self):
        """Test comparisons and integer conversion."""
        assert compare(OMEGA, 5) is Order.GREATER
        assert compare(3, 3) is Order.EQUAL
        assert int(of_int(5)) == 5
        with pytest.raises(ValueError):
            int(OMEGA)


class TestAlgebraProperties:
    """Property tests of the ordinal laws."""

    @given(ordinals, ordinals, ordinals)
    @settings(max_examples=200, deadline=None)
    def test_associativity(self, a, b, c):
        """Test both operations are associative."""
        assert add(add(a, b), c) == add(a, add(b, c))
        assert mul(mul(a, b), c) == mul(a, mul(b, c))

    @given(ordinals, ordinals, ordinals)
    @settings(max_examples=200, deadline=None)
    def test_left_distributivity(self, a, b, c):
        """Test a(b + c) = ab + ac."""
        assert mul(a, add(b, c)) == add(mul(a, b), mul(a, c))

    @given(ordinals, ordinals, ordinals)
    @settings(max_examples=200, deadline=None)
    def test_strict_monotonicity_on_the_right(self, a, b, c):
        """Test b < c implies a + b < a + c and, for a > 0, ab < ac."""
        if b < c:
            assert add(a, b) < add(a, c)
            if a:
                assert mul(a, b) < mul(a, c)

    @given(ordinals, st.integers(0, 2), st.integers(0, 2))
    @settings(max_examples=100, deadline=None)
    def test_pow_nat_homomorphism(self, a, m, n):
        """Test a^(m+n) = a^m a^n."""
        assert pow_nat(a, m + n) == mul(pow_nat(a, m), pow_nat(a, n))

    @given(ordinals)
    @settings(max_examples=200, deadline=None)
    def test_fund_seq_increases_to_limit(self, a):
        """Test fundamental sequences increase strictly below their limit."""
        if classify(a) is Kind.LIMIT:
            seq = [fund_seq(a, n) for n in range(1, 5)]
            assert all(x < y for x, y in zip(seq, seq[1:]))
            assert seq[-1] < a
