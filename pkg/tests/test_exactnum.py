from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from psistirling.exactnum import (
    ONE,
    X,
    Poly,
    TruncatedSeries,
    as_rational,
    format_rational,
    newton_coefficients,
    newton_to_poly,
    parse_rational,
    poly_mul,
    poly_root_product,
    series_compose,
    series_exp,
)

big = st.integers(min_value=-(2 ** 63), max_value=2 ** 63)
rationals = st.builds(Fraction, big, st.integers(min_value=1, max_value=2 ** 63))
small_rationals = st.builds(Fraction, st.integers(-50, 50), st.integers(1, 12))


def test_parse_and_format():
    assert parse_rational("3/6") == Fraction(1, 2)
    assert parse_rational("-4") == -4
    assert format_rational(Fraction(6, 3)) == "2"
    assert format_rational(Fraction(-3, 9)) == "-1/3"
    for bad in ("", "1/0", "x", "1.5"):
        with pytest.raises(ValueError):
            parse_rational(bad)


def test_as_rational_refuses_floats():
    with pytest.raises(TypeError):
        as_rational(0.5)
    with pytest.raises(TypeError):
        as_rational(True)
    assert as_rational("2/4") == Fraction(1, 2)


@given(rationals, rationals, rationals)
def test_field_axioms_exact(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c


@given(small_rationals)
def test_format_roundtrip(x):
    assert parse_rational(format_rational(x)) == x


def test_poly_mul_examples():
    assert poly_mul(X, X - 1) == Poly([0, -1, 1])
    p = Poly([3, 0, Fraction(1, 2)])
    assert poly_mul(p, ONE) == p
    assert poly_mul(X + 1, X - 1) == Poly([-1, 0, 1])


def test_poly_basics():
    assert Poly([1, 2, 0, 0]).coeffs == (Fraction(1), Fraction(2))
    assert Poly().degree == -1
    assert Poly([1, 2, 3])(2) == 17
    assert str(Poly([0, -1, 1])) == "x^2 - x"
    assert Poly.from_json(Poly([1, Fraction(-2, 3)]).to_json()) == Poly([1, Fraction(-2, 3)])


def test_root_product():
    assert poly_root_product([]) == ONE
    assert poly_root_product([0, 1]) == Poly([0, -1, 1])
    assert poly_root_product([0, 1, 3]) == Poly([0, 3, -4, 1])


def test_newton_examples():
    assert newton_coefficients(Poly.monomial(2), [0, 1]) == [0, 1, 1]
    r = Fraction(5, 3)
    assert newton_coefficients(Poly.monomial(2), [0, r]) == [0, r, 1]
    assert newton_coefficients(Poly.monomial(3), [0, 1, 3]) == [0, 1, 4, 1]


def test_newton_needs_enough_nodes():
    with pytest.raises(ValueError, match="basis too small"):
        newton_coefficients(Poly.monomial(3), [0, 1])


def test_newton_repeated_nodes():
    # Taylor expansion at 1
    p = Poly([1, 2, 3])
    coords = newton_coefficients(p, [1, 1])
    assert newton_to_poly(coords, [1, 1]) == p


@settings(max_examples=60)
@given(st.lists(small_rationals, min_size=0, max_size=13), st.data())
def test_newton_left_inverse(coeffs, data):
    p = Poly(coeffs)
    d = max(p.degree, 0)
    nodes = data.draw(st.lists(small_rationals, min_size=d, max_size=d, unique=True))
    assert newton_to_poly(newton_coefficients(p, nodes), nodes) == p


def test_series_exp_examples():
    e = series_exp(TruncatedSeries([0, 1], 3))
    assert [e[i] for i in range(4)] == [1, 1, Fraction(1, 2), Fraction(1, 6)]
    z = series_exp(TruncatedSeries([0], 5))
    assert [z[i] for i in range(6)] == [1, 0, 0, 0, 0, 0]
    bell = series_exp(TruncatedSeries.exp_x(4) - TruncatedSeries([1], 4))
    assert bell[4] == Fraction(5, 8)


def test_series_exp_rejects_constant():
    with pytest.raises(ValueError):
        series_exp(TruncatedSeries([1, 1], 3))


def test_series_compose_examples():
    c = series_compose(TruncatedSeries([1, 1], 4), TruncatedSeries([0, 0, 1], 4))
    assert [c[i] for i in range(5)] == [1, 0, 1, 0, 0]
    outer = TruncatedSeries([2, Fraction(1, 3), 5, -1], 3)
    assert series_compose(outer, TruncatedSeries([0, 1], 3)) == outer
    e = series_compose(TruncatedSeries.exp_x(2), TruncatedSeries([0, 1, Fraction(1, 2)], 2))
    assert [e[i] for i in range(3)] == [1, 1, 1]


@settings(max_examples=40)
@given(st.lists(small_rationals, min_size=1, max_size=16))
def test_exp_of_negation_is_inverse(tail):
    N = len(tail)
    s = TruncatedSeries([0] + tail, N)
    prod = series_exp(s) * series_exp(-s)
    assert [prod[i] for i in range(N + 1)] == [1] + [0] * N


@settings(max_examples=40)
@given(st.lists(small_rationals, min_size=1, max_size=10))
def test_exp_agrees_with_composition(tail):
    N = len(tail)
    s = TruncatedSeries([0] + tail, N)
    assert series_exp(s) == series_compose(TruncatedSeries.exp_x(N), s)
