"""Tests for family module."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from schreier_lab.family import (
    EVENS,
    NAT,
    A,
    Comb,
    Drv,
    EmptyFamilyError,
    FamilyError,
    Pre,
    S,
    SetGen,
    WindowFamily,
    as_finset,
    cb_index,
    comb_split_check,
    derivative_member,
    ext,
    format_family,
    is_maximal,
    is_spread,
    max_decomposition,
    maximal_members,
    member,
    member_brute,
    rank,
    rank_oracle,
    rank_oracle_table,
    window_members,
)
from schreier_lab.ordinal import OMEGA, add, mul, of_int, omega_pow, succ

small_sets = st.sets(st.integers(1, 12), max_size=6).map(lambda s: tuple(sorted(s)))


class TestFinSets:
    """Test finite set helpers and generated sets."""

    def test_as_finset_sorts(self):
        """Test normalisation of an unordered input."""
        assert as_finset([3, 1]) == (1, 3)

    def test_as_finset_rejects_duplicates_and_zero(self):
        """Test invalid sets raise FamilyError."""
        with pytest.raises(FamilyError):
            as_finset([1, 1])
        with pytest.raises(FamilyError):
            as_finset([0, 2])

    def test_ext(self):
        """Test the one-step extension."""
        assert ext(()) == (1,)
        assert ext((2, 5)) == (2, 5, 6)

    def test_is_spread(self):
        """Test domination of same-size sets."""
        assert is_spread((1, 3), (2, 3))
        assert not is_spread((1, 3), (2,))
        assert not is_spread((2, 3), (1, 4))

    def test_setgen(self):
        """Test enumeration of a set with a prefix."""
        m = SetGen((1, 4), start=7, step=3)
        assert m.nth(3) == 7
        assert m.take(4) == (1, 4, 7, 10)
        assert m.index_of(10) == 4
        assert m.index_of(8) is None
        assert 4 in m
        assert m.image((2, 4)) == (4, 10)
        assert m.drop(1) == SetGen((4,), 7, 3)
        assert m.drop(3) == SetGen((), 10, 3)
        assert str(m) == "gen(prefix=[1,4],start=7,step=3)"

    def test_setgen_start_after_prefix(self):
        """Test the start must exceed the prefix."""
        with pytest.raises(FamilyError):
            SetGen((5,), start=3)


class TestMembership:
    """Test symbolic membership."""

    def test_schreier_one(self):
        """Test |E| <= min E."""
        assert member(S(1), (3, 4, 5))
        assert not member(S(1), (2, 3, 4))
        assert member(S(1), ())

    def test_schreier_zero(self):
        """Test S(0) holds singletons only."""
        assert member(S(0), (9,))
        assert not member(S(0), (1, 2))

    def test_comb(self):
        """Test the composed family A(2)[S(1)]."""
        g = Comb(A(2), S(1))
        assert member(g, (2, 3, 10, 11))
        assert member(g, (2, 3, 4, 10))
        assert not member(g, (1, 2, 3, 4))

    def test_pre(self):
        """Test the pre-image under the even numbers."""
        g = Pre(S(1), EVENS)
        assert member(g, (2, 3))
        assert not member(g, (1, 2, 3))

    def test_derivative(self):
        """Test the first derivative of S(1)."""
        assert member(Drv(S(1)), (3, 4))
        assert not member(Drv(S(1)), (3, 4, 5))
        assert derivative_member(S(1), (3, 4))
        assert not derivative_member(S(1), (3, 4, 5))

    def test_brute_rejects_derivatives(self):
        """Test the brute-force path has no derivative support."""
        with pytest.raises(FamilyError):
            member_brute(Drv(S(1)), (1,))

    @given(small_sets)
    @settings(max_examples=200, deadline=None)
    def test_symbolic_matches_brute(self, e):
        """Test symbolic and exhaustive membership agree."""
        for g in (S(2), Comb(A(2), S(1)), Pre(S(1), EVENS)):
            assert member(g, e) == member_brute(g, e)

    @given(small_sets, st.lists(st.integers(0, 3), min_size=6, max_size=6))
    @settings(max_examples=200, deadline=None)
    def test_spreading(self, e, shifts):
        """Test members stay members when spread to the right."""
        total = 0
        spread = []
        for x, s in zip(e, shifts):
            total += s
            spread.append(x + total)
        if member(S(2), e):
            assert member(S(2), spread)


class TestRanks:
    """Test ranks and Cantor-Bendixson indices."""

    def test_cb_closed_forms(self):
        """Test CB(A(n)) = n+1 and CB(S(xi)) = w^xi + 1."""
        assert cb_index(A(3)) == of_int(4)
        assert cb_index(S(1)) == succ(OMEGA)
        assert cb_index(S(2)) == succ(omega_pow(2))
        assert cb_index(S(OMEGA)) == succ(omega_pow(OMEGA))

    def test_cb_of_comb(self):
        """Test CB(A(3)[S(1)]) = w*3 + 1."""
        assert cb_index(Comb(A(3), S(1))) == succ(mul(OMEGA, 3))

    def test_cb_of_derivative(self):
        """Test derivatives lower the index."""
        assert cb_index(Drv(A(3))) == of_int(3)

    def test_rank(self):
        """Test rank of a singleton in S(1)."""
        assert rank(S(1), (3,)) == of_int(2)
        assert rank(Comb(A(2), S(1)), (2,)) == add(OMEGA, 1)

    def test_rank_of_non_member(self):
        """Test rank is only defined on members."""
        with pytest.raises(FamilyError):
            rank(S(1), (1, 2))

    def test_empty_family(self):
        """Test a derivative beyond the index is empty."""
        with pytest.raises(EmptyFamilyError):
            cb_index(Drv(A(2), 5))

    def test_is_maximal(self):
        """Test maximality in S(1)."""
        assert is_maximal(S(1), (3, 4, 5))
        assert not is_maximal(S(1), (3, 4))

    def test_oracle(self):
        """Test the extension oracle on small families."""
        assert rank_oracle(S(1), ()) == OMEGA
        assert rank_oracle(A(3), ()) == of_int(3)

    def test_oracle_table(self):
        """Test the shared-memo oracle agrees with the symbolic rank."""
        table = rank_oracle_table(S(1), [(), (3,), (3, 4)])
        assert table == {(): OMEGA, (3,): of_int(2), (3, 4): of_int(1)}

    def test_oracle_depth_two(self):
        """Test the oracle decides the empty set of depth-two families."""
        assert rank_oracle(S(2), ()) == omega_pow(2)
        assert rank_oracle(Comb(A(2), S(1)), (), cap=16) == mul(OMEGA, 2)
        assert rank_oracle(Pre(S(2), EVENS), ()) == omega_pow(2)
        assert rank_oracle(Comb(A(2), Comb(A(2), S(1))), ()) == mul(OMEGA, 4)

    def test_oracle_inside_a_block(self):
        """Test ranks of sets that leave room in their last block."""
        assert rank_oracle(S(1), (4, 7), cap=8) == of_int(2)
        assert rank_oracle(Comb(A(2), S(1)), (4, 7)) == add(OMEGA, 2)
        assert rank_oracle(S(2), (2,)) == succ(OMEGA)

    def test_oracle_limit_level(self):
        """Test the oracle reads exponent progressions at a limit level."""
        assert rank_oracle(S(OMEGA), ()) == omega_pow(OMEGA)

    def test_oracle_rejects_non_members(self):
        """Test non-members and derivatives are refused."""
        with pytest.raises(FamilyError):
            rank_oracle(S(1), (1, 2))
        with pytest.raises(FamilyError):
            rank_oracle(Drv(S(1)), ())

    @pytest.mark.parametrize(
        "g",
        [S(2)]
        + [Comb(A(m), S(1)) for m in range(2, 6)]
        + [Pre(S(2), EVENS), Comb(S(1), Pre(S(1), EVENS)), Comb(A(2), Comb(A(2), S(1)))],
        ids=str,
    )
    def test_oracle_table_decides_window(self, g):
        """Test every member of a window is decided and matches the closed form."""
        members = window_members(g, range(1, 11))
        table = rank_oracle_table(g, members, cap=16)
        assert None not in table.values()
        assert all(table[e] == rank(g, e) for e in members)

    @given(small_sets)
    @settings(max_examples=100, deadline=None)
    def test_oracle_matches_rank(self, e):
        """Test oracle and closed-form ranks agree on depth-two families."""
        for g in (S(2), Comb(A(3), S(1)), Comb(S(1), Pre(S(1), EVENS))):
            if member(g, e):
                assert rank_oracle(g, e) == rank(g, e)


class TestDecompositions:
    """Test maximal decompositions and comb splits."""

    def test_max_decomposition(self):
        """Test the first two maximal S(1) blocks from 3."""
        blocks = max_decomposition(SetGen(start=3), 1, 2)
        assert blocks == [(3, 4, 5), (6, 7, 8, 9, 10, 11)]

    def test_max_decomposition_count(self):
        """Test count must be positive."""
        with pytest.raises(FamilyError):
            max_decomposition(NAT, 1, 0)

    def test_comb_split(self):
        """Test the split of a comb member."""
        assert comb_split_check(A(2), S(1), (2, 10), (2, 10, 11))

    def test_comb_split_needs_prefix(self):
        """Test e must be a proper initial segment."""
        with pytest.raises(FamilyError):
            comb_split_check(A(2), S(1), (2, 11), (2, 10, 11))


class TestWindows:
    """Test finite window views."""

    def test_window_members(self):
        """Test members of A(1) in {1,2,3}."""
        assert window_members(A(1), range(1, 4)) == [(), (1,), (2,), (3,)]

    def test_maximal_members(self):
        """Test maximal members of A(1) in a window."""
        assert maximal_members(A(1), range(1, 4)) == [(1,), (2,), (3,)]

    def test_classified_schreier_is_regular(self):
        """Test S(1) restricted to {1..6} is hereditary and spreading."""
        window = WindowFamily.classify(lambda e: member(S(1), e), 6)
        assert window.hereditary_violations() == []
        assert window.spreading_violations() == []
        assert window.mismatches(S(1)) == []

    def test_hereditary_violation(self):
        """Test a family missing a subset is flagged."""
        window = WindowFamily(3, frozenset({(), (1, 2)}))
        assert ((1, 2), (2,)) in window.hereditary_violations()

    def test_format(self):
        """Test the printed grammar."""
        assert format_family(Comb(A(2), Pre(S(1), EVENS))) == (
            "comb(A(2),pre(S(1),gen(start=2,step=2)))"
        )
