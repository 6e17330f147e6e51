import math
from fractions import Fraction
from math import gcd

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from garside_workbench.field import FieldContext, matrix_rank, minimal_polynomial


def sympy_minpoly(L):
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.minimal_polynomial(2 * sympy.cos(sympy.pi / L), x), x)
    return tuple(int(c) for c in reversed(p.all_coeffs()))


def totient(n):
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


def test_small_minimal_polynomials():
    assert minimal_polynomial(3) == (-1, 1)
    assert minimal_polynomial(4) == (-2, 0, 1)


@pytest.mark.parametrize("L", [1, 2, 5, 6, 7, 8, 9, 10, 12, 15, 20, 24, 30])
def test_minimal_polynomial_matches_sympy(L):
    assert minimal_polynomial(L) == sympy_minpoly(L)


def test_degree_for_60_is_half_totient_of_120():
    assert FieldContext(60).degree == totient(120) // 2 == 16


def test_cos_values():
    K = FieldContext(60)
    assert K.cos_pi_over(2).is_zero()
    assert K.cos_pi_over(3) == K.from_int(Fraction(1, 2))
    c = K.cos_pi_over(5)
    assert (4 * c * c - 2 * c - 1).is_zero()


def test_label_outside_context():
    with pytest.raises(ValueError, match="label outside field context"):
        FieldContext(4).two_cos_pi_over(5)


def test_signs():
    K = FieldContext(60)
    assert K.zero().sign() == 0
    assert (K.cos_pi_over(4) - K.cos_pi_over(3)).sign() == 1
    # 2cos(2pi/5) = (2cos(pi/5))^2 - 2
    t = K.two_cos_pi_over(5)
    assert (t * (t * t - 2) - 1).sign() == 0


@pytest.mark.parametrize("m", range(2, 13))
def test_two_cos_is_a_root_of_its_minimal_polynomial(m):
    K = FieldContext(m)
    v = K.two_cos_pi_over(m)
    acc = K.zero()
    for c in reversed(K.minpoly):
        acc = acc * v + c
    assert acc.is_zero()
    assert abs(float(v) - 2 * math.cos(math.pi / m)) < 1e-12


K30 = FieldContext(30)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
elements = st.lists(rationals, min_size=K30.degree, max_size=K30.degree).map(K30.element)


@settings(max_examples=60, deadline=None)
@given(elements, elements, elements)
def test_field_axioms(x, y, z):
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    assert (x * y) * z == x * (y * z)
    if not x.is_zero():
        assert (x * x.inverse()) == K30.one()


@settings(max_examples=60, deadline=None)
@given(elements)
def test_sign_matches_float_and_negation(x):
    s = x.sign()
    assert (-x).sign() == -s
    f = float(x)
    if abs(f) > 1e-9:
        assert s == (1 if f > 0 else -1)


def test_sign_of_tiny_nonzero_element():
    K = FieldContext(12)
    b = K.beta()
    # beta^2 - 2 = sqrt 3 here; compare against its 10-digit truncations
    x = b * b - 2 - Fraction(1732050807, 10**9)
    assert x.sign() == 1
    y = b * b - 2 - Fraction(1732050808, 10**9)
    assert y.sign() == -1


def test_matrix_rank():
    K = FieldContext(5)
    t = K.two_cos_pi_over(5)
    one = K.one()
    rows = [[one, t], [t, t * t]]
    assert matrix_rank(rows) == 1
    rows = [[one, t], [t, one]]
    assert matrix_rank(rows) == 2
    assert matrix_rank([]) == 0
