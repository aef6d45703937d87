from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from cliffatlas.cyclo import (
    ONE,
    ZERO,
    ZETA,
    Cyclo8,
    Dyadic,
    I,
    hash_key,
    inv_sqrt2,
    multiplicative_order,
    root_of_unity,
    sqrt2,
)

x = sp.Symbol("x")
small = st.integers(-50, 50)
cyclos = st.builds(lambda a, b, c, d, e: Cyclo8((a, b, c, d), e), small, small, small, small, st.integers(0, 4))


def as_poly(c: Cyclo8):
    """Independent model: a polynomial in x with rational coefficients, reduced mod x^4 + 1."""
    expr = sum(sp.Rational(n, 2**c.exp) * x**k for k, n in enumerate(c.nums))
    return sp.Poly(expr, x, domain="QQ")


def reduce(p):
    return p.rem(sp.Poly(x**4 + 1, x, domain="QQ"))


@given(cyclos, cyclos)
def test_mul_matches_polynomial_model(a, b):
    assert as_poly(a * b) == reduce(as_poly(a) * as_poly(b))


@given(cyclos, cyclos)
def test_add_matches_polynomial_model(a, b):
    assert as_poly(a + b) == as_poly(a) + as_poly(b)


@given(cyclos, cyclos, cyclos)
def test_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a + (-a) == ZERO
    assert a * ONE == a


@given(cyclos, cyclos)
def test_conjugation_is_multiplicative_involution(a, b):
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert a.conjugate().conjugate() == a


@given(cyclos)
def test_norm_is_real_and_nonnegative(a):
    n = a * a.conjugate()
    w = complex(n)
    assert abs(w.imag) < 1e-9 and w.real > -1e-9


@given(cyclos)
def test_equal_values_have_equal_keys(a):
    b = Cyclo8([2 * v for v in a.nums], a.exp + 1)
    assert a == b and hash(a) == hash(b) and hash_key(a) == hash_key(b)


def test_zeta_powers():
    assert ZETA**8 == ONE
    assert ZETA**4 == -ONE
    assert ZETA**2 == I
    assert [multiplicative_order(root_of_unity(k)) for k in (1, 2, 4, 8)] == [1, 2, 4, 8]


def test_root_of_unity_out_of_field():
    with pytest.raises(ValueError):
        root_of_unity(3)


def test_sqrt2():
    assert sqrt2() * sqrt2() == Cyclo8((2, 0, 0, 0))
    assert sqrt2() * inv_sqrt2() == ONE
    assert multiplicative_order(sqrt2()) is None


def test_dyadic():
    assert Dyadic.from_fraction(Fraction(3, 8)).to_fraction() == Fraction(3, 8)
    assert Dyadic(4, 3) == Dyadic(1, 1)
    with pytest.raises(ValueError):
        Dyadic.from_fraction(Fraction(1, 3))


def test_immutable():
    with pytest.raises(AttributeError):
        ONE.exp = 3


def test_from_coeffs_mixes_denominators():
    c = Cyclo8.from_coeffs([Fraction(1, 2), 0, Fraction(-1, 4), 3])
    assert c.nums == (2, 0, -1, 12) and c.exp == 2
