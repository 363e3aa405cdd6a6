import math
import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from largen4.scalars import (
    LaurentElem, NonInvertible, Scalar, ScalarFieldTooSmall, binomial, cyclotomic_polynomial,
    laurent_divexact, laurent_divided_derivative, laurent_gcd, parse_laurent, root_of_unity,
)
from strategies import N, laurents, scalars

x = sympy.Symbol("x")


def _sympy_coeffs(poly) -> tuple:
    return tuple(Fraction(int(c.p), int(c.q)) for c in reversed(sympy.Poly(poly, x).all_coeffs()))


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5, 6, 8, 12, 15, 24, 30])
def test_cyclotomic_polynomial_matches_sympy(n):
    assert cyclotomic_polynomial(n) == _sympy_coeffs(sympy.cyclotomic_poly(n, x))


def test_cyclotomic_examples():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    # divide x^12 - 1 by the proper-divisor factors with sympy's division
    q, r = sympy.div(x**12 - 1, sympy.prod(sympy.cyclotomic_poly(d, x) for d in (1, 2, 3, 4, 6)), x)
    assert r == 0
    assert cyclotomic_polynomial(12) == _sympy_coeffs(q)


def test_imaginary_unit_squares_to_minus_one():
    i = Scalar.imag_unit(4)
    assert i * i == -1
    assert i ** 4 == 1
    with pytest.raises(ScalarFieldTooSmall):
        Scalar.imag_unit(6)


def test_field_inverses_of_random_nonzero_scalars():
    rng = random.Random(7)
    for n in (4, 8, 12):
        for _ in range(1000 if n == 4 else 150):
            a = Scalar([Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(4)], n)
            if not a:
                continue
            assert a * a.inverse() == 1


def test_zero_has_no_inverse():
    with pytest.raises(ZeroDivisionError):
        Scalar(0, 4).inverse()


@given(scalars(), scalars(), scalars())
def test_field_laws(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == 0


@given(scalars(nonzero=True), scalars())
def test_division_inverts_multiplication(a, b):
    assert (b * a) / a == b


def test_roots_of_unity():
    assert root_of_unity(4, 4) == Scalar.imag_unit(4)
    assert root_of_unity(2, 4) == -1
    z = root_of_unity(3, 12)
    assert z ** 3 == 1 and z != 1
    with pytest.raises(ScalarFieldTooSmall):
        root_of_unity(3, 4)


@pytest.mark.parametrize("n,q,exists", [
    (4, -4, True), (4, 2, False), (8, 2, True), (8, -2, True), (3, -3, True), (12, 3, True),
    (5, 5, True), (4, 7, False), (24, 6, True), (4, Fraction(-9, 4), True),
])
def test_rational_square_roots(n, q, exists):
    r = Scalar(q, n).sqrt()
    assert (r is not None) == exists
    if r is not None:
        assert r * r == q


def test_gaussian_square_roots():
    i = Scalar.imag_unit(4)
    r = (i * 2).sqrt()
    assert r is not None and r * r == i * 2
    assert (Scalar([3, 4], 4)).sqrt() ** 2 == Scalar([3, 4], 4)


def test_scalar_json_round_trip():
    a = Scalar([Fraction(1, 3), Fraction(-5, 2)], 4)
    assert a.to_json() == ["1/3", "-5/2"]
    assert Scalar.from_json(a.to_json(), 4) == a


# ---------------------------------------------------------------------------
# Laurent ring

def test_laurent_canonical_form():
    f = LaurentElem({1: 1, Fraction(1, 2): 0, 2: 3}, N)
    assert f.exponents() == [1, 2]
    assert (f - f).is_zero()
    assert LaurentElem({Fraction(2, 2): 1}, N) == LaurentElem.t(N)


def test_laurent_mixed_denominators_compare_exactly():
    a = LaurentElem.monomial(Fraction(1, 2), 1, N) * LaurentElem.monomial(Fraction(1, 3), 1, N)
    assert a == LaurentElem.monomial(Fraction(5, 6), 1, N)
    assert a.denom == 6


def test_units_have_one_term():
    assert LaurentElem.monomial(3, 2, N).is_unit()
    assert not parse_laurent("1 + t", N).is_unit()
    with pytest.raises(NonInvertible):
        parse_laurent("1 + t", N).inverse()
    u = LaurentElem.monomial(Fraction(-1, 2), Scalar.imag_unit(N), N)
    assert u * u.inverse() == 1


@given(laurents(), laurents(), laurents())
def test_ring_laws(f, g, h):
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f


@given(laurents(denom=2), laurents(denom=3))
def test_leibniz(f, g):
    assert (f * g).derivative() == f.derivative() * g + f * g.derivative()


def _divided_derivative_oracle(j: int, q: Fraction) -> tuple[Fraction, Fraction]:
    t = sympy.Symbol("t", positive=True)
    expr = sympy.diff(t ** sympy.Rational(q.numerator, q.denominator), t, j) / sympy.factorial(j)
    coeff, rest = sympy.simplify(expr).as_coeff_Mul()
    exp = rest.as_base_exp()[1] if rest != 1 else 0
    return Fraction(int(coeff.p), int(coeff.q)), Fraction(str(exp))


def test_divided_derivative_examples():
    assert laurent_divided_derivative(1, LaurentElem.t(N)) == 1
    f = LaurentElem.monomial(Fraction(5, 2), 1, N)
    assert laurent_divided_derivative(2, f) == LaurentElem.monomial(Fraction(1, 2), Fraction(15, 8), N)
    assert laurent_divided_derivative(3, LaurentElem.const(7, N)).is_zero()


@pytest.mark.parametrize("j", [1, 2, 3, 4])
@pytest.mark.parametrize("q", [Fraction(5, 2), Fraction(-1, 3), Fraction(7), Fraction(-4)])
def test_divided_derivative_matches_sympy(j, q):
    c, e = _divided_derivative_oracle(j, q)
    got = laurent_divided_derivative(j, LaurentElem.monomial(q, 1, N))
    want = LaurentElem.monomial(e, c, N) if c else LaurentElem(N=N)
    assert got == want


@pytest.mark.parametrize("q", [Fraction(7, 2), Fraction(-3), Fraction(4), Fraction(2, 3)])
def test_divided_power_composition(q):
    mono = LaurentElem.monomial(q, 1, N)
    for i in range(4):
        for j in range(7 - i):
            lhs = laurent_divided_derivative(i, laurent_divided_derivative(j, mono))
            rhs = laurent_divided_derivative(i + j, mono) * binomial(i + j, i)
            assert lhs == rhs


def test_generalized_binomial():
    assert binomial(Fraction(5, 2), 2) == Fraction(15, 8)
    assert binomial(-1, 3) == -1
    assert binomial(4, 5) == 0


@pytest.mark.parametrize("text,terms", [
    ("t + t^-1", {1: 1, -1: 1}),
    ("1/2*t^(5/2)", {Fraction(5, 2): Fraction(1, 2)}),
    ("0", {}),
    ("3", {0: 3}),
])
def test_parse_laurent(text, terms):
    assert parse_laurent(text, N) == LaurentElem(terms, N)


def test_parse_laurent_imaginary_coefficient():
    assert parse_laurent("2*i*t", N) == LaurentElem({1: Scalar.imag_unit(N) * 2}, N)
    with pytest.raises(ValueError):
        parse_laurent("sin(t)", N)


def test_gcd_and_exact_division():
    f, g = parse_laurent("t^2 - 1", N), parse_laurent("t^3 - t^2", N)
    d = laurent_gcd([f, g])
    assert laurent_divexact(f, d) * d == f
    assert laurent_divexact(g, d) * d == g
    assert d.exponents()[-1] - d.exponents()[0] == 1


@given(laurents(denom=2))
def test_laurent_json_round_trip(f):
    assert LaurentElem.from_json(f.to_json(), N) == f


@given(st.integers(0, 5), laurents())
def test_derivative_is_iterated_divided_derivative(j, f):
    g = f
    for _ in range(j):
        g = g.derivative()
    assert g == laurent_divided_derivative(j, f) * math.factorial(j)
