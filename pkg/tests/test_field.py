import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from orbitkit.field import CyclotomicNumber, FieldElement, check_prime, fe_inv, is_prime, zeta_power

PRIMES = st.sampled_from([2, 3, 5, 7, 11])


@st.composite
def cyclotomics(draw, p=None):
    p = p or draw(PRIMES)
    coeffs = draw(st.lists(st.builds(Fraction, st.integers(-20, 20), st.integers(1, 6)), min_size=p - 1, max_size=p - 1))
    return CyclotomicNumber(p, coeffs)


@st.composite
def cyclotomic_pairs(draw):
    p = draw(PRIMES)
    return draw(cyclotomics(p)), draw(cyclotomics(p)), draw(cyclotomics(p))


def test_primality():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    for bad in (1, 4, 9, 2.0, True):
        with pytest.raises(ValueError):
            check_prime(bad)


@pytest.mark.parametrize("p, a, inv", [(5, 1, 1), (5, 2, 3), (7, 4, 2)])
def test_inverse_examples(p, a, inv):
    assert fe_inv(FieldElement(a, p)).value == inv


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        fe_inv(FieldElement(0, 5))


def test_modulus_mismatch():
    with pytest.raises(ValueError):
        FieldElement(1, 3) + FieldElement(1, 5)


@given(PRIMES, st.integers(-50, 50), st.integers(-50, 50))
def test_field_ops_match_integers(p, a, b):
    x, y = FieldElement(a, p), FieldElement(b, p)
    assert (x + y).value == (a + b) % p
    assert (x - y).value == (a - b) % p
    assert (x * y).value == (a * b) % p
    if b % p:
        assert (x / y) * y == x


def test_zeta_power_examples():
    assert zeta_power(0, 7).coeffs == (1,) + (0,) * 5
    assert zeta_power(2, 3).coeffs == (-1, -1)
    assert sum((zeta_power(t, 5) for t in range(5)), CyclotomicNumber.zero(5)) == 0


def test_zeta_power_needs_modulus():
    with pytest.raises(TypeError):
        zeta_power(1)
    assert zeta_power(FieldElement(3, 5)) == zeta_power(3, 5)


@given(PRIMES, st.integers(-20, 20), st.integers(-20, 20))
def test_zeta_power_is_additive_character(p, s, t):
    assert zeta_power(s, p) * zeta_power(t, p) == zeta_power(s + t, p)
    assert zeta_power(t, p).conj() == zeta_power(-t, p)


@given(cyclotomic_pairs())
def test_ring_axioms(triple):
    a, b, c = triple
    assert a + b == b + a
    assert a * b == b * a
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == 0
    assert (a * b).conj() == a.conj() * b.conj()


@given(cyclotomics())
def test_complex_embedding(a):
    w = cmath.exp(2j * math.pi / a.p)
    z = a.to_complex()
    assert abs(z - sum(float(c) * w**i for i, c in enumerate(a.coeffs))) < 1e-9
    assert abs(a.conj().to_complex() - z.conjugate()) < 1e-6
    assert CyclotomicNumber.from_json(a.to_json()) == a


def test_full_length_input_is_reduced():
    # 1 + zeta + zeta^2 = 0 in Q(zeta_3)
    assert CyclotomicNumber(3, [1, 1, 1]) == 0
    assert CyclotomicNumber.from_exponent_counts(5, [2, 1, 1, 1, 1]) == 1
    assert CyclotomicNumber.from_exponent_counts(3, [3, 0, 0], den=3) == 1


def test_rational_helpers():
    x = CyclotomicNumber.rational(5, Fraction(3, 4))
    assert x.is_rational() and x.to_rational() == Fraction(3, 4)
    assert (x / 3).to_rational() == Fraction(1, 4)
    with pytest.raises(ValueError):
        zeta_power(1, 5).to_rational()
    with pytest.raises(ValueError):
        CyclotomicNumber(5, [1, 2])
    with pytest.raises(ValueError):
        CyclotomicNumber.one(3) + CyclotomicNumber.one(5)


def test_hash_consistent_with_eq():
    assert hash(CyclotomicNumber(3, [1, 1, 1])) == hash(CyclotomicNumber.zero(3))
