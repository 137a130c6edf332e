from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pqg.scalars import (
    DegenerateRadicandError, NotInvertibleError, Scalar, ScalarError, ScalarParseError,
    UnknownColorError, UnsupportedRadicandError, adjoin_sqrt, as_scalar, format_scalar,
    from_sympy, gaussian_i, parse_scalar, podles_shift_field, shift, sqrt, to_sympy,
    RATIONALS,
)

rationals = st.fractions(max_denominator=50).filter(lambda f: abs(f.numerator) < 10 ** 4)
radicands = st.sampled_from([1, 2, 3, 5, 6, 10, -1])


@st.composite
def tower_elements(draw):
    """Short sums of rational multiples of square roots of small integers."""
    n = draw(st.integers(1, 3))
    total = Scalar(0)
    for _ in range(n):
        total = total + Scalar(draw(rationals)) * sqrt(draw(radicands))
    return total


class TestArithmetic:
    def test_radicals_normalize(self):
        assert sqrt(2) * sqrt(2) == 2
        assert sqrt(8) == 2 * sqrt(2)
        assert sqrt(Fraction(5, 4)) == sqrt(5) / 2

    def test_tower_inverse_rationalizes(self):
        assert (1 + sqrt(2)).inverse() == sqrt(2) - 1
        assert (sqrt(2) + sqrt(3)).inverse() == sqrt(3) - sqrt(2)

    def test_gaussian_unit(self):
        i = gaussian_i()
        assert i * i == -1
        assert (1 + i).conjugate() == 1 - i
        assert not i.is_real()

    def test_zero_has_no_inverse(self):
        with pytest.raises(NotInvertibleError):
            Scalar(0).inverse()

    def test_sign_of_real_radical_expression(self):
        assert (sqrt(2) - 1).sign() == 1
        assert (sqrt(2) - sqrt(3)).sign() == -1

    def test_sqrt_of_symbol_halves_exponent(self):
        f = parse_scalar("F(l)")
        assert sqrt(f) * sqrt(f) == f
        assert str(sqrt(4 * f)) == "2*F(l)^(1/2)"

    def test_sqrt_outside_tower_is_refused(self):
        with pytest.raises(UnsupportedRadicandError):
            sqrt(1 + sqrt(2))

    def test_adjoin_zero_root_is_degenerate(self):
        with pytest.raises(DegenerateRadicandError):
            adjoin_sqrt(RATIONALS, 0)

    def test_adjoin_extends_generators(self):
        fld = adjoin_sqrt(RATIONALS, 12)
        assert fld.contains(sqrt(3))
        assert not fld.contains(sqrt(2))
        assert adjoin_sqrt(fld, 3) is fld


class TestLiterals:
    @pytest.mark.parametrize("text", ["0", "5/4", "-3/2*sqrt(5)", "1+sqrt(2)",
                                      "3/2*sqrt(5)-F(l+1)^(1/2)", "F(r-1)^-1"])
    def test_round_trip(self, text):
        x = parse_scalar(text)
        assert parse_scalar(format_scalar(x)) == x

    @pytest.mark.parametrize("text", ["1.25", "sqrt(", "1/0", "2**", "@"])
    def test_malformed_literals(self, text):
        with pytest.raises(ScalarParseError):
            parse_scalar(text)

    def test_floats_are_refused(self):
        with pytest.raises(ScalarParseError):
            as_scalar(1.5)
        with pytest.raises(ScalarParseError):
            as_scalar(True)

    def test_sympy_bridge(self):
        x = 1 + sqrt(2)
        assert from_sympy(to_sympy(x)) == x


class TestShifts:
    def test_translation_by_color(self):
        fld = podles_shift_field()
        f = parse_scalar("F(l)*F(r)")
        assert shift(f, "+", fld) == parse_scalar("F(l+1)*F(r+1)")
        assert shift(f, "-", fld, "l") == parse_scalar("F(l-1)*F(r)")

    def test_unknown_color(self):
        with pytest.raises(UnknownColorError):
            shift(parse_scalar("F(l)"), "*", podles_shift_field())

    def test_bad_side(self):
        with pytest.raises(ScalarError):
            shift(parse_scalar("F(l)"), "+", podles_shift_field(), "left")

    def test_evaluation_at_lattice_points(self):
        f = parse_scalar("F(l+1)^(1/2)")
        val = f.evaluate({"l": 0}, lambda name, k: Scalar(Fraction(k + 3, 4)))
        assert val == 1


@settings(max_examples=60, deadline=None)
@given(tower_elements(), tower_elements(), tower_elements())
def test_field_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0


@settings(max_examples=60, deadline=None)
@given(tower_elements())
def test_inverse_and_conjugate(a):
    if a:
        assert a * a.inverse() == 1
    assert a.conjugate().conjugate() == a


@settings(max_examples=60, deadline=None)
@given(tower_elements())
def test_literal_round_trip(a):
    assert parse_scalar(format_scalar(a)) == a
    assert hash(parse_scalar(format_scalar(a))) == hash(a)


@settings(max_examples=60, deadline=None)
@given(rationals.filter(lambda f: f > 0))
def test_sqrt_squares_back(f):
    assert sqrt(f) * sqrt(f) == f
