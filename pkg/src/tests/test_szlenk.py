"""Tests for szlenk module."""

from fractions import Fraction

import pytest

from schreier_lab.family import A, S
from schreier_lab.norms import GeometricRule, Mixed, format_spec
from schreier_lab.numeric import Threshold
from schreier_lab.ordinal import OMEGA, ONE, add, of_int, omega_pow
from schreier_lab.szlenk import (
    BoundKind,
    DivergentSeriesError,
    FunctionalFamily,
    NotWellConstructedError,
    Regime,
    SzlenkDatum,
    factorization_condition,
    factorization_constant,
    factorization_constant_bounds,
    factorization_regime,
    geometric_factor_constant,
    h_member,
    h_sandwich_probe,
    jointly_covered,
    layer_upper_bounds,
    schreier_factor_constant,
    szlenk_bounds,
    szlenk_lower,
    szlenk_upper,
    well_constructed_spec,
    well_constructed_xi,
)

QUARTER = Fraction(1, 4)


class TestIndexBounds:
    """Test lower and upper Szlenk bounds."""

    def test_lower(self, geometric_space):
        """Test the largest CB index among layers with theta_n >= eps."""
        assert szlenk_lower(geometric_space, QUARTER) == of_int(5)
        assert szlenk_lower(geometric_space, 1) == of_int(2)
        assert szlenk_lower(geometric_space, 2) == ONE

    def test_upper(self, geometric_space):
        """Test CB(g_m) for the first layer with theta_m < 2 eps."""
        assert szlenk_upper(geometric_space, QUARTER) == of_int(5)
        assert jointly_covered(geometric_space, QUARTER)

    def test_upper_needs_positive_eps(self, geometric_space):
        """Test eps = 0 is rejected."""
        with pytest.raises(ValueError):
            szlenk_upper(geometric_space, 0)

    def test_explicit_layers_have_no_upper_bound(self, two_layer_space):
        """Test explicit layer lists are not well-constructed."""
        with pytest.raises(NotWellConstructedError):
            szlenk_upper(two_layer_space, QUARTER)
        bounds = szlenk_bounds(two_layer_space, QUARTER)
        assert [b.kind for b in bounds] == [BoundKind.LOWER]

    def test_layer_upper_bounds(self, geometric_space):
        """Test per-layer bounds cap at CB(g_m) past m."""
        bounds = layer_upper_bounds(geometric_space, QUARTER, 4)
        assert bounds == [(0, of_int(2)), (1, of_int(3)), (2, of_int(5)), (3, of_int(5))]

    def test_layered_rule(self):
        """Test lower never exceeds upper for xi = w + 1."""
        spec = well_constructed_spec(add(OMEGA, 1))
        assert well_constructed_xi(spec) == add(OMEGA, 1)
        assert szlenk_lower(spec, QUARTER) <= szlenk_upper(spec, QUARTER)

    def test_datum(self):
        """Test bounds are at least 1 and print their kind."""
        datum = SzlenkDatum(Threshold.of(QUARTER), of_int(5), BoundKind.UPPER)
        assert str(datum) == "upper(1/4) = 5"
        with pytest.raises(ValueError):
            SzlenkDatum(Threshold.of(QUARTER), of_int(0), BoundKind.LOWER)


class TestWellConstructed:
    """Test regimes and canonical well-constructed spaces."""

    def test_regimes(self):
        """Test the three factorization regimes."""
        assert factorization_regime(1) is Regime.POWER
        assert factorization_regime(OMEGA) is Regime.POWER
        assert factorization_regime(omega_pow(OMEGA)) is Regime.NONE
        assert factorization_regime(add(OMEGA, 1)) is Regime.UNCONDITIONAL

    def test_canonical_spaces(self):
        """Test the canonical spaces for xi = 1 and xi = w."""
        assert format_spec(well_constructed_spec(1)) == "mixed(base=A(2),theta=1/2)"
        spec = well_constructed_spec(OMEGA)
        assert format_spec(spec) == "mixed(base=S(2),theta=1/2)"
        assert well_constructed_xi(spec) == OMEGA

    def test_power_base_sits_above_the_lower_level(self):
        """Test xi = w^2 uses S(w+1), whose index lies between w^w and w^{w^2}."""
        spec = well_constructed_spec(omega_pow(2))
        assert format_spec(spec) == "mixed(base=S(w+1),theta=1/2)"
        assert well_constructed_xi(spec) == omega_pow(2)

    def test_no_space_at_limit_exponent(self):
        """Test xi = w^w has no well-constructed space."""
        with pytest.raises(NotWellConstructedError):
            well_constructed_spec(omega_pow(OMEGA))

    def test_base_index_too_small(self):
        """Test a geometric base of index 1 is refused."""
        with pytest.raises(NotWellConstructedError):
            well_constructed_xi(Mixed(GeometricRule(A(0), Fraction(1, 2))))


class TestHFamily:
    """Test H-family membership and the sandwich report."""

    def test_functional_family(self, geometric_space):
        """Test layers are kept while eps <= theta * window."""
        k = FunctionalFamily.of_spec(geometric_space, QUARTER, 5)
        assert len(k.layers) == 5
        assert str(FunctionalFamily(((1, S(1)),))) == "functionals([(1,S(1))])"

    def test_functional_weights_decrease(self):
        """Test equal weights are rejected."""
        with pytest.raises(ValueError):
            FunctionalFamily(((Fraction(1, 2), S(1)), (Fraction(1, 2), S(0))))

    def test_h_member(self, geometric_space):
        """Test a single block at eps = 1 and eps above 1."""
        k = FunctionalFamily(((1, S(1)),))
        assert h_member(geometric_space, k, 1, (1,))
        assert not h_member(geometric_space, k, Fraction(3, 2), (1,))
        assert h_member(geometric_space, k, Fraction(3, 2), ())

    def test_sandwich_above_one(self, geometric_space):
        """Test only the empty set survives eps = 3/2."""
        k = FunctionalFamily(((1, S(1)),))
        report = h_sandwich_probe(geometric_space, k, Fraction(3, 2), 3).report()
        assert report["members"] == 1
        assert report["truncated_rank"] == 0

    def test_sandwich_bounds(self, geometric_space):
        """Test the symbolic bounds printed next to the window."""
        k = FunctionalFamily.of_spec(geometric_space, Fraction(1, 2), 4)
        report = h_sandwich_probe(geometric_space, k, Fraction(1, 2), 4).report()
        assert report["szlenk_lower_5eps"] == "1"
        assert report["twice_szlenk_upper_half_eps"] == "10"


class TestFactorization:
    """Test the factorization condition and constants."""

    def test_condition(self):
        """Test Sz(A, 1/2^n) <= gamma^n with gamma < w^xi."""
        assert factorization_condition(1, 2, [(1, 1), (2, 4)])
        assert not factorization_condition(1, 2, [(2, 5)])
        assert not factorization_condition(1, OMEGA, [])

    def test_closed_forms(self):
        """Test the two closed-form constants."""
        assert schreier_factor_constant(0) == 4
        assert geometric_factor_constant(1) == 28

    def test_constant_bounds(self):
        """Test a certified enclosure of the series for beta=2, s=3."""
        box = factorization_constant_bounds(0, 1, 2, 3, Fraction(1, 10**6))
        assert box.width <= Fraction(1, 10**6)
        assert 23 < box.lo <= box.hi < 24
        assert factorization_constant(0, 1, 2, 3, Fraction(1, 10**6)) == box.hi

    def test_divergent(self):
        """Test s <= beta diverges."""
        with pytest.raises(DivergentSeriesError):
            factorization_constant_bounds(0, 1, 2, 2, Fraction(1, 100))

    def test_invalid_parameters(self):
        """Test beta must exceed 1."""
        with pytest.raises(ValueError):
            factorization_constant_bounds(0, 1, 1, 3, Fraction(1, 100))
