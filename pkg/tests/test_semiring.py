from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from troprank import (
    INF,
    FormatError,
    format_scalar,
    ghost,
    ghost_surpasses,
    parse_scalar,
    st_add,
    st_mul,
    tangible,
    tropicalize,
)
from oracles import existential_ghost_surpasses

values = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=6
)
scalars = st.one_of(
    st.just(INF),
    values.map(tangible),
    values.map(ghost),
)


class TestAddition:
    def test_equal_tangibles_become_ghost(self):
        assert st_add(tangible(2), tangible(2)) == ghost(2)

    def test_infinity_is_neutral(self):
        assert st_add(INF, ghost(5)) == ghost(5)
        assert st_add(ghost(5), INF) == ghost(5)
        assert st_add(INF, INF) == INF

    def test_smaller_value_wins(self):
        assert st_add(tangible(2), ghost(3)) == tangible(2)
        assert st_add(ghost(3), tangible(2)) == tangible(2)

    def test_equal_values_mixed_flavors_go_ghost(self):
        assert st_add(tangible(1), ghost(1)) == ghost(1)
        assert st_add(ghost(4), ghost(4)) == ghost(4)


class TestMultiplication:
    def test_tangible_times_tangible(self):
        assert st_mul(tangible(1), tangible(2)) == tangible(3)

    def test_ghost_contaminates(self):
        assert st_mul(tangible(1), ghost(2)) == ghost(3)
        assert st_mul(ghost(1), ghost(2)) == ghost(3)

    def test_infinity_absorbs(self):
        assert st_mul(INF, ghost(7)) == INF
        assert st_mul(tangible(0), INF) == INF


class TestProjection:
    def test_values(self):
        assert tropicalize(ghost(Fraction(3, 2))) == Fraction(3, 2)
        assert tropicalize(INF) is None
        assert tropicalize(tangible(0)) == 0


class TestAlgebraicLaws:
    @settings(max_examples=200)
    @given(scalars, scalars)
    def test_add_commutative(self, a, b):
        assert st_add(a, b) == st_add(b, a)

    @settings(max_examples=200)
    @given(scalars, scalars)
    def test_mul_commutative(self, a, b):
        assert st_mul(a, b) == st_mul(b, a)

    @settings(max_examples=200)
    @given(scalars, scalars, scalars)
    def test_add_associative(self, a, b, c):
        assert st_add(st_add(a, b), c) == st_add(a, st_add(b, c))

    @settings(max_examples=200)
    @given(scalars, scalars, scalars)
    def test_mul_associative(self, a, b, c):
        assert st_mul(st_mul(a, b), c) == st_mul(a, st_mul(b, c))

    @settings(max_examples=300)
    @given(scalars, scalars, scalars)
    def test_distributive(self, a, b, c):
        assert st_mul(a, st_add(b, c)) == st_add(st_mul(a, b), st_mul(a, c))

    @settings(max_examples=200)
    @given(scalars, scalars)
    def test_projection_is_homomorphism(self, a, b):
        def vmin(x, y):
            if x is None:
                return y
            if y is None:
                return x
            return min(x, y)

        def vadd(x, y):
            if x is None or y is None:
                return None
            return x + y

        assert tropicalize(st_add(a, b)) == vmin(tropicalize(a), tropicalize(b))
        assert tropicalize(st_mul(a, b)) == vadd(tropicalize(a), tropicalize(b))


class TestGhostSurpassing:
    def test_pinned_cases(self):
        assert ghost_surpasses(tangible(2), tangible(2)) is True
        assert ghost_surpasses(ghost(1), tangible(3)) is True
        assert ghost_surpasses(tangible(1), tangible(3)) is False

    def test_infinity_target(self):
        assert ghost_surpasses(INF, INF) is True
        assert ghost_surpasses(ghost(7), INF) is True
        assert ghost_surpasses(tangible(7), INF) is False

    @settings(max_examples=400)
    @given(scalars, scalars)
    def test_closed_form_matches_existential_definition(self, c, d):
        assert ghost_surpasses(c, d) == existential_ghost_surpasses(c, d)

    @settings(max_examples=200)
    @given(scalars)
    def test_reflexive(self, a):
        assert ghost_surpasses(a, a)

    @settings(max_examples=300)
    @given(scalars, scalars, scalars)
    def test_transitive(self, a, b, c):
        if ghost_surpasses(a, b) and ghost_surpasses(b, c):
            assert ghost_surpasses(a, c)


class TestTextFormat:
    @pytest.mark.parametrize(
        "text,value",
        [
            ("t:3", tangible(3)),
            ("t:3/1", tangible(3)),
            ("g:1/2", ghost(Fraction(1, 2))),
            ("t:-7/2", tangible(Fraction(-7, 2))),
            ("inf", INF),
        ],
    )
    def test_parse(self, text, value):
        assert parse_scalar(text) == value

    @settings(max_examples=200)
    @given(scalars)
    def test_round_trip(self, a):
        assert parse_scalar(format_scalar(a)) == a

    @pytest.mark.parametrize("bad", ["", "x:3", "t:", "t:1/0", "ghost:2", "t:one"])
    def test_rejects_malformed(self, bad):
        with pytest.raises(FormatError):
            parse_scalar(bad)

    def test_decimal_notation_parses_exactly(self):
        assert parse_scalar("t:1.5") == tangible(Fraction(3, 2))
