"""Tests for grammar module."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schreier_lab.family import EVENS, NAT, A, Comb, Drv, Pre, S, SetGen, format_family
from schreier_lab.grammar import (
    GrammarError,
    parse_family,
    parse_finset,
    parse_functionals,
    parse_measure,
    parse_mixed,
    parse_ordinal,
    parse_rational,
    parse_setgen,
    parse_space,
    parse_threshold,
    parse_vector,
)
from schreier_lab.norms import (
    Baernstein,
    ExplicitLayers,
    GeometricRule,
    LayeredRule,
    Mixed,
    Schreier,
    Vector,
    format_spec,
)
from schreier_lab.numeric import Threshold
from schreier_lab.ordinal import OMEGA, ZERO, add, format_ordinal, from_terms, mul, of_int, omega_pow
from schreier_lab.ravg import ProbMeasure


def _cnf(exponents):
    return st.dictionaries(exponents, st.integers(1, 3), max_size=3).map(
        lambda terms: from_terms(sorted(terms.items(), key=lambda t: t[0], reverse=True))
    )


ordinals = _cnf(_cnf(st.integers(0, 3).map(of_int)))


class TestOrdinals:
    """Test the ordinal grammar."""

    def test_forms(self):
        """Test every term shape."""
        assert parse_ordinal("0") == ZERO
        assert parse_ordinal("w") == OMEGA
        assert parse_ordinal("w*3+1") == add(mul(OMEGA, 3), 1)
        assert parse_ordinal("w^2") == omega_pow(2)
        assert parse_ordinal("w^{w}+w^{2}*2") == add(omega_pow(OMEGA), mul(omega_pow(2), 2))

    def test_non_normal_sums_are_evaluated(self):
        """Test 1+w is read as an ordinal sum."""
        assert parse_ordinal("1+w") == OMEGA

    @given(ordinals)
    @settings(max_examples=100, deadline=None)
    def test_printer_is_parsed_back(self, a):
        """Test printed ordinals parse to themselves."""
        assert parse_ordinal(format_ordinal(a)) == a

    def test_error_column(self):
        """Test parse errors carry a column."""
        with pytest.raises(GrammarError) as info:
            parse_ordinal("w+")
        assert info.value.column >= 1


class TestFamilies:
    """Test family and set grammars."""

    @pytest.mark.parametrize(
        "family",
        [
            A(3),
            S(OMEGA),
            Comb(A(2), S(1)),
            Pre(S(1), EVENS),
            Drv(S(2), 3),
            Pre(A(1), SetGen((1, 4), start=9, step=2)),
        ],
    )
    def test_printed_families(self, family):
        """Test printed families parse to themselves."""
        assert parse_family(format_family(family)) == family

    def test_sets(self):
        """Test finite and infinite sets."""
        assert parse_finset("[5,2]") == (2, 5)
        assert parse_finset("[]") == ()
        assert parse_setgen("nat") == NAT
        assert parse_setgen("gen(start=3)") == SetGen(start=3)

    def test_invalid_family(self):
        """Test invalid parameters surface as GrammarError."""
        with pytest.raises(GrammarError):
            parse_family("S(")
        with pytest.raises(GrammarError):
            parse_finset("[1,1]")


class TestValues:
    """Test vectors, measures, thresholds and rationals."""

    def test_vector(self):
        """Test a signed rational vector."""
        assert parse_vector("[1:1/2,4:-2]") == Vector.from_mapping({1: Fraction(1, 2), 4: -2})
        assert parse_vector("[]") == Vector()

    def test_measure(self):
        """Test measures and their validation."""
        mu = parse_measure("{3:1/3,4:1/3,5:1/3}")
        assert mu == ProbMeasure.from_mapping({i: Fraction(1, 3) for i in (3, 4, 5)})
        with pytest.raises(GrammarError):
            parse_measure("{1:1/2}")

    def test_threshold(self):
        """Test rational and square-root thresholds."""
        assert parse_threshold("1/2") == Threshold.of(Fraction(1, 2))
        assert parse_threshold("1/sqrt(3)") == Threshold.over_sqrt(1, 3)
        assert parse_rational("-3/4") == Fraction(-3, 4)


class TestSpaces:
    """Test space grammars."""

    @pytest.mark.parametrize(
        "spec",
        [
            Schreier(S(1)),
            Baernstein(S(1), 2),
            Baernstein(S(0), math.inf),
            Mixed(GeometricRule(A(2), Fraction(1, 2))),
            Mixed(GeometricRule(A(2), Fraction(1, 3), g0=S(1))),
            Mixed(ExplicitLayers(((S(0), 1), (S(1), Fraction(3, 4))))),
            Mixed(LayeredRule(OMEGA, 1, Fraction(1, 2))),
        ],
    )
    def test_printed_spaces(self, spec):
        """Test printed spaces parse to themselves."""
        assert parse_space(format_spec(spec)) == spec

    def test_default_p(self):
        """Test p defaults to 2."""
        assert parse_space("baernstein(S(1))") == Baernstein(S(1), 2)

    def test_parse_mixed(self):
        """Test only mixed spaces pass parse_mixed."""
        assert isinstance(parse_mixed("mixed(base=A(2),theta=1/2)"), Mixed)
        with pytest.raises(GrammarError):
            parse_mixed("schreier(S(1))")

    def test_invalid_theta(self):
        """Test theta outside (0, 1) is rejected."""
        with pytest.raises(GrammarError):
            parse_space("mixed(base=A(2),theta=3/2)")

    def test_functionals(self):
        """Test functional families."""
        k = parse_functionals("functionals([(1,S(1)),(1/2,A(2))])")
        assert k.layers == ((Fraction(1), S(1)), (Fraction(1, 2), A(2)))
