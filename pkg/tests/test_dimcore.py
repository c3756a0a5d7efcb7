import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dimcheck.dimcore import (
    DimensionSyntaxError,
    DimensionSystem,
    DivisionByZero,
    MixedSystems,
    NonEquidimensional,
    Quantity,
    as_rational,
    dim_mul,
    dim_pow,
    format_dimension,
    is_dimensionless,
    quantity_add,
    quantity_div,
    quantity_mul,
)
from strategies import SYSTEM, dimensions, exponents, quantities


class TestSystem:
    def test_duplicate_names_rejected(self):
        with pytest.raises(ValueError):
            DimensionSystem(["T", "T"])

    def test_bad_identifier_rejected(self):
        with pytest.raises(ValueError):
            DimensionSystem(["T", "2x"])

    def test_case_sensitive(self):
        s = DimensionSystem(["t", "T"])
        assert s.base("t") != s.base("T")

    def test_unknown_base(self, econ):
        with pytest.raises((KeyError, ValueError)):
            econ.base("Z")


class TestMul:
    def test_income_term(self, econ):
        wl = econ.parse("QK/QL")
        labour = econ.parse("QL/T")
        assert dim_mul(wl, labour) == econ.parse("QK/T")

    def test_identity(self, econ):
        x = econ.parse("QK^(2/3)*T^(-1)")
        assert dim_mul(x, econ.one) == x

    def test_half_powers(self, econ):
        half = econ.base("T") ** Fraction(1, 2)
        assert dim_mul(half, half) == econ.base("T")

    def test_mixed_systems(self, econ):
        other = DimensionSystem(["T", "QK"])
        with pytest.raises(MixedSystems):
            dim_mul(econ.base("T"), other.base("T"))


class TestPow:
    def test_cube_root(self, econ):
        got = dim_pow(econ.parse("QK/QP"), Fraction(1, 3))
        assert got.exponents == {"QK": Fraction(1, 3), "QP": Fraction(-1, 3)}

    def test_inverse(self, econ):
        a = econ.parse("QK*T^(-1)")
        assert is_dimensionless(dim_mul(dim_pow(a, -1), a))

    @given(exponents)
    def test_one_stays_one(self, e):
        assert dim_pow(SYSTEM.one, e) == SYSTEM.one

    def test_string_exponent(self, econ):
        assert econ.base("T") ** "2/4" == econ.base("T") ** Fraction(1, 2)


def test_is_dimensionless(econ):
    assert is_dimensionless(econ.one)
    assert is_dimensionless(dim_mul(econ.base("QK"), econ.base("QK").inverse()))
    assert not is_dimensionless(econ.parse("QK/T"))


class TestFormatting:
    def test_declaration_order(self, econ):
        d = econ.dimension(T=-1, QP=Fraction(-2, 3), QK=Fraction(2, 3))
        assert format_dimension(d) == "T^(-1)*QK^(2/3)*QP^(-2/3)"

    def test_one(self, econ):
        assert str(econ.one) == "1"

    def test_plain_exponent(self, econ):
        assert str(econ.parse("QK*U")) == "QK*U"

    @given(dimensions)
    def test_format_parse_roundtrip(self, d):
        assert SYSTEM.parse(format_dimension(d)) == d

    @pytest.mark.parametrize("text", ["QK^", "QK**2", "(QK", "QK/", "Z", "QK^(1/0)"])
    def test_syntax_errors(self, econ, text):
        with pytest.raises((DimensionSyntaxError, KeyError, ValueError, ZeroDivisionError)):
            econ.parse(text)


class TestQuantity:
    def test_add_same(self, econ):
        got = quantity_add(Quantity(3, econ.base("QK")), Quantity(4, econ.base("QK")))
        assert got.value == 7 and got.dim == econ.base("QK")

    def test_add_mismatch(self, econ):
        with pytest.raises(NonEquidimensional) as info:
            quantity_add(Quantity(1, econ.base("QK")), Quantity(1, econ.parse("QK/T")))
        assert info.value.left_dim == econ.base("QK")
        assert info.value.right_dim == econ.parse("QK/T")

    def test_dimensionless_add(self, econ):
        assert (Quantity(1.5, econ.one) + Quantity(2, econ.one)).value == 3.5

    def test_mul(self, econ):
        got = quantity_mul(Quantity(2, econ.parse("QK/QL")), Quantity(3, econ.parse("QL/T")))
        assert got.value == 6 and got.dim == econ.parse("QK/T")

    def test_scalar(self, econ):
        got = 2.5 * Quantity(2, econ.base("U"))
        assert got.value == 5 and got.dim == econ.base("U")

    def test_ratio(self, econ):
        got = quantity_div(Quantity(3, econ.base("QK")), Quantity(4, econ.base("QK")))
        assert got.value == 0.75 and got.dim.is_dimensionless

    def test_divide_by_zero(self, econ):
        with pytest.raises(DivisionByZero):
            Quantity(1, econ.one) / Quantity(0, econ.base("T"))

    @pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
    def test_non_finite(self, econ, bad):
        with pytest.raises(ValueError):
            Quantity(bad, econ.one)

    def test_comparison_across_dims_is_error(self, econ):
        with pytest.raises(NonEquidimensional):
            Quantity(1, econ.base("T")) < Quantity(2, econ.base("QK"))
        with pytest.raises(NonEquidimensional):
            Quantity(1, econ.base("T")) == Quantity(1, econ.base("QK"))

    def test_comparison_same_dims(self, econ):
        assert Quantity(1, econ.base("T")) < Quantity(2, econ.base("T"))
        assert Quantity(2, econ.base("T")) == Quantity(2, econ.base("T"))


def test_as_rational():
    assert as_rational("1/3") == Fraction(1, 3)
    assert as_rational(0.1) == Fraction(1, 10)
    assert as_rational(2) == 2


# -- group laws ------------------------------------------------------------


@given(dimensions, dimensions, dimensions)
def test_associative(a, b, c):
    assert (a * b) * c == a * (b * c)


@given(dimensions, dimensions)
def test_commutative(a, b):
    assert a * b == b * a


@given(dimensions)
def test_identity_and_inverse(a):
    assert a * SYSTEM.one == a
    assert (a * a.inverse()).is_dimensionless


@given(dimensions, exponents, exponents)
def test_pow_composition(a, p, q):
    assert (a**p) ** q == a ** (p * q)
    assert a**0 == SYSTEM.one


@given(dimensions)
def test_no_zero_exponents_stored(a):
    assert all(e != 0 for _, e in a.items)
    assert SYSTEM.from_vector(a.vector()) == a


@given(quantities, quantities)
def test_add_defined_iff_equidimensional(a, b):
    if a.dim == b.dim:
        assert quantity_add(a, b).dim == a.dim
    else:
        with pytest.raises(NonEquidimensional):
            quantity_add(a, b)


@given(st.lists(exponents, min_size=4, max_size=4), st.lists(exponents, min_size=4, max_size=4))
def test_equality_is_vector_equality(u, v):
    assert (SYSTEM.from_vector(u) == SYSTEM.from_vector(v)) == (u == v)
