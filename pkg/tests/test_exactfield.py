"""Exact cyclotomic field arithmetic."""

import math
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from harmvol.exactfield import (
    CycloNum,
    OrderMismatchError,
    cyclotomic_polynomial,
    euler_phi,
    field_arith,
)


def test_euler_phi_small_values():
    assert [euler_phi(n) for n in range(1, 13)] == [
        1, 1, 2, 2, 4, 2, 6, 4, 6, 4, 10, 4,
    ]


def test_cyclotomic_polynomials_match_reference_values():
    assert cyclotomic_polynomial(1) == (-1, 1)
    assert cyclotomic_polynomial(2) == (1, 1)
    assert cyclotomic_polynomial(4) == (1, 0, 1)
    assert cyclotomic_polynomial(6) == (1, -1, 1)
    assert cyclotomic_polynomial(8) == (1, 0, 0, 0, 1)
    assert cyclotomic_polynomial(12) == (1, 0, -1, 0, 1)


@pytest.mark.parametrize("n", range(1, 31))
def test_cyclotomic_polynomial_annihilates_primitive_root(n):
    coeffs = cyclotomic_polynomial(n)
    assert len(coeffs) == euler_phi(n) + 1
    with mpmath.workprec(96):
        z = mpmath.expjpi(mpmath.mpf(2) / n)
        value = mpmath.fsum((c * z**k for k, c in enumerate(coeffs)),
                            absolute=False)
        assert abs(value) < mpmath.mpf(2) ** -60


def test_zeta_powers_wrap_around_the_order():
    z = CycloNum.zeta(6)
    assert z**6 == CycloNum.from_rational(6, 1)
    assert CycloNum.zeta(6, -1) == z**5
    assert CycloNum.zeta(6, 13) == z


def test_division_example_in_the_sixth_roots():
    z = CycloNum.zeta(6)
    one = CycloNum.from_rational(6, 1)
    ratio = (one + z) / (one - z)
    assert ratio == 2 * z - 1
    # the value is sqrt(3) * i
    embedded = ratio.embed(96)
    assert abs(embedded - mpmath.mpc(0, mpmath.sqrt(3))) < 1e-25


def test_mixed_orders_refuse_to_combine():
    with pytest.raises(OrderMismatchError):
        CycloNum.zeta(6) + CycloNum.zeta(8)


def test_embed_requires_enough_precision():
    with pytest.raises(ValueError):
        CycloNum.zeta(6).embed(32)


def _cyclo(order):
    phi = euler_phi(order)
    rationals = st.fractions(
        min_value=-5, max_value=5, max_denominator=6
    )
    return st.lists(rationals, min_size=phi, max_size=phi).map(
        lambda cs: CycloNum(order, cs)
    )


@settings(max_examples=60, deadline=None)
@given(a=_cyclo(6), b=_cyclo(6), c=_cyclo(6))
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c
    assert a - a == CycloNum.from_rational(6, 0)


@settings(max_examples=60, deadline=None)
@given(a=_cyclo(8))
def test_multiplicative_inverse(a):
    if a.is_zero():
        with pytest.raises(ZeroDivisionError):
            a.inverse()
    else:
        assert a * a.inverse() == CycloNum.from_rational(8, 1)
        assert 1 / a == a.inverse()


@settings(max_examples=40, deadline=None)
@given(a=_cyclo(6), b=_cyclo(6))
def test_embedding_is_a_homomorphism(a, b):
    with mpmath.workprec(96):
        pa, pb = a.embed(96), b.embed(96)
        assert abs((a * b).embed(96) - pa * pb) < 1e-20
        assert abs((a + b).embed(96) - (pa + pb)) < 1e-20


@settings(max_examples=40, deadline=None)
@given(a=_cyclo(6))
def test_conjugation_and_real_part(a):
    assert a.conj().conj() == a
    r = a.real_part()
    assert r.conj() == r
    with mpmath.workprec(96):
        assert abs(a.embed(96).conjugate() - a.conj().embed(96)) < 1e-20
        assert abs(mpmath.im(r.embed(96))) < 1e-20


def test_try_rational_detects_rational_elements():
    assert CycloNum.from_rational(6, Fraction(3, 7)).try_rational() == Fraction(3, 7)
    assert CycloNum.zeta(6).try_rational() is None
    z = CycloNum.zeta(6)
    assert (z + z.conj()).try_rational() == 1  # 2*cos(pi/3)


def test_field_arith_dispatch():
    a = CycloNum.zeta(6)
    b = CycloNum.from_rational(6, 2)
    assert field_arith(a, b, "add") == a + 2
    assert field_arith(a, b, "sub") == a - 2
    assert field_arith(a, b, "mul") == 2 * a
    assert field_arith(a, b, "div") == a * Fraction(1, 2)
    with pytest.raises(ValueError):
        field_arith(a, b, "pow")
