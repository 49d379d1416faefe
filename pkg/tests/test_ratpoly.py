from fractions import Fraction

import pytest
from conftest import affine_polynomials, points, polynomials, rationals
from hypothesis import given
from hypothesis import strategies as st

from darbouxkit.ratpoly import (
    X,
    Y,
    Z,
    DegreeError,
    Polynomial,
    PolynomialSyntaxError,
    UnboundIdentifier,
    ZeroDenominator,
    affine_substitute,
    evaluate,
    format_polynomial,
    homogeneous_component,
    monomials_up_to,
    parse_polynomial,
    partial_derivative,
    ring_op,
)

A_, C_, Ra_ = Fraction(1), Fraction(1), Fraction(3)


class TestParse:
    def test_gd_first_component(self):
        p = parse_polynomial("A*y*z + C*z - sigma*x", {"A": 1, "C": 1, "sigma": 2})
        assert p == Y * Z + Z - 2 * X

    def test_zero(self):
        p = parse_polynomial("0", {})
        assert p.is_zero() and dict(p.terms) == {}

    def test_rational_parameter(self):
        p = parse_polynomial("x^2 - A*z^2", {"A": Fraction(1, 25)})
        assert p == X**2 - Fraction(1, 25) * Z**2

    def test_syntax_error_has_position(self):
        with pytest.raises(PolynomialSyntaxError) as info:
            parse_polynomial("x + * y")
        assert info.value.position == 4

    def test_trailing_garbage(self):
        with pytest.raises(PolynomialSyntaxError):
            parse_polynomial("x y")

    def test_unbound(self):
        with pytest.raises(UnboundIdentifier) as info:
            parse_polynomial("Ra - y")
        assert info.value.name == "Ra"

    def test_zero_denominator(self):
        with pytest.raises(ZeroDenominator):
            parse_polynomial("3/0*x")

    def test_unary_minus_and_parentheses(self):
        assert parse_polynomial("-(x - y)*-2") == 2 * X - 2 * Y
        assert parse_polynomial("(x + z)^2") == X**2 + 2 * X * Z + Z**2

    def test_whitespace_insignificant(self):
        assert parse_polynomial(" x ^ 2+ 1 / 2 ") == X**2 + Fraction(1, 2)


class TestFormat:
    def test_zero(self):
        assert format_polynomial(Polynomial()) == "0"

    def test_sum_of_squares(self):
        assert format_polynomial(Polynomial({(0, 2, 0): 1, (0, 0, 2): 1})) == "y^2 + z^2"

    def test_sign_normalization(self):
        assert format_polynomial(-2 * X) == "-2*x"

    def test_descending_grlex(self):
        p = Z + X**2 + 3 + Y * Z + X
        assert format_polynomial(p) == "x^2 + y*z + x + z + 3"


class TestRing:
    def test_add(self):
        assert ring_op(Y**2, Z**2, "add") == Y**2 + Z**2

    def test_mul_difference_of_squares(self):
        assert ring_op(X + Z, X - Z, "mul") == X**2 - Z**2

    def test_mul_degree_four(self):
        p = ring_op(Y**2 + Z**2, X**2 - Z**2, "mul")
        assert p.degree == 4 and len(p) == 4
        assert p == X**2 * Y**2 + X**2 * Z**2 - Y**2 * Z**2 - Z**4

    def test_coefficients_stay_reduced(self):
        p = Polynomial({(1, 0, 0): Fraction(2, 4)}) + Polynomial({(1, 0, 0): Fraction(-1, 2)})
        assert p.is_zero()
        assert Polynomial({(0, 0, 0): Fraction(6, -4)}).coefficient((0, 0, 0)) == Fraction(-3, 2)


class TestDerivative:
    def test_simple(self):
        assert partial_derivative(Y**2 + Z**2, "y") == 2 * Y

    def test_with_parameter(self):
        assert partial_derivative(X**2 - 3 * Z**2, "z") == -6 * Z

    def test_gd_component(self):
        A, C, s = Fraction(2, 3), Fraction(-5), Fraction(7)
        assert partial_derivative(A * Y * Z + C * Z - s * X, "z") == A * Y + C


class TestHomogeneous:
    def test_components(self):
        p = X**2 + 5 * Y**2 + 3
        assert homogeneous_component(p, 2) == X**2 + 5 * Y**2
        assert homogeneous_component(p, 0) == Polynomial.constant(3)

    def test_quadratic_part_of_gd(self):
        p = 2 * Y * Z + Z - 4 * X
        assert homogeneous_component(p, 2) == 2 * Y * Z

    def test_beyond_degree(self):
        assert homogeneous_component(X + 1, 5).is_zero()


class TestEvaluate:
    def test_values(self):
        assert evaluate(Y**2 + Z**2, (0, 3, 4)) == 25
        assert evaluate(X**2 - Fraction(7, 3) * Z**2, (1, 0, 0)) == 1

    def test_equilibrium_of_gd(self):
        p = Fraction(1, 25) * Y * Z + Z - 4 * X
        assert evaluate(p, (0, 250, 0)) == 0


class TestAffineSubstitute:
    def test_scaling(self):
        assert affine_substitute(X**2, [X / 2, Y, Z]) == X**2 / 4

    def test_shift(self):
        Ra = Fraction(3)
        got = affine_substitute(Y**2 + Z**2, {"x": X, "y": Ra - Z, "z": Y})
        assert got == (Ra - Z) ** 2 + Y**2

    def test_identity(self):
        p = X**3 * Y - Z + 2
        assert affine_substitute(p, [X, Y, Z]) == p

    def test_degree_error(self):
        with pytest.raises(DegreeError):
            affine_substitute(X, [X * Y, Y, Z])


def test_monomial_counts():
    from math import comb

    for n in range(6):
        assert len(monomials_up_to(n)) == comb(n + 3, 3)


# -- properties ----------------------------------------------------------------

@given(polynomials())
def test_round_trip(p):
    assert parse_polynomial(format_polynomial(p)) == p


@given(polynomials())
def test_canonical_output_is_stable(p):
    text = format_polynomial(p)
    assert format_polynomial(parse_polynomial(text)) == text


@given(polynomials(), polynomials(), polynomials())
def test_ring_laws(p, q, r):
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p + q == q + p
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert (p - q) + q == p


@given(polynomials(), polynomials(), st.sampled_from("xyz"), rationals, rationals)
def test_derivative_linear_and_leibniz(p, q, v, a, b):
    assert (a * p + b * q).diff(v) == a * p.diff(v) + b * q.diff(v)
    assert (p * q).diff(v) == p * q.diff(v) + q * p.diff(v)


@given(polynomials(), polynomials())
def test_degree_of_product(p, q):
    if not p.is_zero() and not q.is_zero():
        assert (p * q).degree == p.degree + q.degree


@given(polynomials(max_terms=8))
def test_homogeneous_partition(p):
    parts = [homogeneous_component(p, d) for d in range(p.degree + 2)] if not p.is_zero() else []
    total = Polynomial()
    for part in parts:
        assert part.is_zero() or part.is_homogeneous()
        total = total + part
    assert total == p


@given(polynomials(), polynomials(), points)
def test_evaluation_homomorphism(p, q, pt):
    assert evaluate(p + q, pt) == evaluate(p, pt) + evaluate(q, pt)
    assert evaluate(p * q, pt) == evaluate(p, pt) * evaluate(q, pt)
    assert evaluate(Polynomial.constant(7), pt) == 7


@given(polynomials(), affine_polynomials(), affine_polynomials(), affine_polynomials(), points)
def test_affine_substitute_commutes_with_evaluation(p, a, b, c, pt):
    inner = tuple(evaluate(im, pt) for im in (a, b, c))
    assert evaluate(affine_substitute(p, [a, b, c]), pt) == evaluate(p, inner)
