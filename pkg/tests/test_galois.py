import cmath
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem

from colrepcs.errors import (
    DomainError,
    FieldMismatchError,
    FieldZeroDivisionError,
    NotPrimeError,
)
from colrepcs.galois import (
    GF,
    FieldElement,
    FieldSpec,
    additive_character,
    character_sum,
    ff_add,
    ff_inv,
    ff_mul,
    find_irreducible,
    is_prime,
    prime_power,
)

SMALL_FIELDS = [(2, 1), (3, 1), (5, 1), (7, 1), (2, 2), (2, 3), (3, 2), (2, 4), (5, 2), (3, 3), (7, 2)]


def el(f, coeffs):
    return FieldElement(f, tuple(coeffs))


# -- sympy oracle (coefficients highest degree first) --------------------------

def sympy_mul_index(f: FieldSpec, a: int, b: int) -> int:
    da = list(reversed(f.digits[a].tolist()))
    db = list(reversed(f.digits[b].tolist()))
    mod = list(reversed(f.irreducible)) if f.k > 1 else [1, 0]
    prod = gf_mul(da, db, f.p, ZZ)
    rem = gf_rem(prod, mod, f.p, ZZ) if f.k > 1 else [c % f.p for c in prod[-1:]]
    rem = list(reversed(rem))
    return sum(int(c) * f.p**i for i, c in enumerate(rem))


def test_is_prime_and_prime_power():
    assert [n for n in range(30) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert prime_power(4) == (2, 2)
    assert prime_power(27) == (3, 3)
    assert prime_power(7) == (7, 1)
    for bad in (1, 6, 12, 100):
        with pytest.raises(NotPrimeError):
            prime_power(bad)


# -- examples ------------------------------------------------------------------

def test_add_examples():
    f5 = GF(5)
    assert ff_add(f5.element(3), f5.element(4)) == f5.element(2)
    f9 = GF(3, 2)
    for a in f9.elements():
        assert a + f9.zero == a
    f4 = FieldSpec(2, 2, (1, 1, 1))
    alpha, alpha1 = el(f4, (0, 1)), el(f4, (1, 1))
    # coefficient-wise XOR: (0,1) ^ (1,1) = (1,0)
    xor = tuple(x ^ y for x, y in zip(alpha.coeffs, alpha1.coeffs))
    assert (alpha + alpha1).coeffs == xor == (1, 0)


def test_mul_examples():
    f5 = GF(5)
    assert ff_mul(f5.element(3), f5.element(4)) == f5.element(2)
    for p, k in SMALL_FIELDS:
        f = GF(p, k)
        for a in f.elements():
            assert a * f.one == a
    f9 = FieldSpec(3, 2, (1, 0, 1))
    alpha = el(f9, (0, 1))
    assert (alpha * alpha).coeffs == (2, 0)


def test_inv_examples():
    assert ff_inv(GF(5).element(2)) == GF(5).element(3)
    assert ff_inv(GF(7).element(1)) == GF(7).element(1)
    f4 = FieldSpec(2, 2, (1, 1, 1))
    assert ff_inv(el(f4, (0, 1))) == el(f4, (1, 1))
    with pytest.raises(FieldZeroDivisionError):
        ff_inv(GF(5).zero)
    with pytest.raises(ZeroDivisionError):
        GF(3, 2).one / GF(3, 2).zero


def test_spec_mismatch():
    with pytest.raises(FieldMismatchError):
        ff_add(GF(5).one, GF(7).one)
    with pytest.raises(FieldMismatchError):
        ff_mul(GF(3).one, GF(3, 2).one)


def test_fieldspec_validation():
    with pytest.raises(NotPrimeError):
        FieldSpec(4)
    with pytest.raises(DomainError):
        FieldSpec(5, 2, (1, 0, 1))  # x^2 + 1 = (x-2)(x-3) over GF(5)
    with pytest.raises(DomainError):
        FieldSpec(5, 2, (2, 0, 2))  # not monic
    with pytest.raises(DomainError):
        FieldElement(GF(5), (5,))


# -- irreducible polynomials ----------------------------------------------------

def test_find_irreducible_examples():
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert find_irreducible(5, 2) == (2, 0, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)
    with pytest.raises(DomainError):
        find_irreducible(3, 1)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2), (5, 3), (7, 2), (7, 3)])
def test_find_irreducible_is_first_in_integer_order(p, k):
    # oracle: scan candidates in order of sum(c_i p^i), test with sympy
    for value in range(p**k):
        low = [(value // p**i) % p for i in range(k)]
        if gf_irreducible_p(list(reversed(low + [1])), p, ZZ):
            expected = tuple(low + [1])
            break
    assert find_irreducible(p, k) == expected


# -- tables vs independent oracle -----------------------------------------------

@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_mul_table_matches_sympy(p, k):
    f = GF(p, k)
    expected = np.array([[sympy_mul_index(f, a, b) for b in range(f.order)] for a in range(f.order)])
    np.testing.assert_array_equal(f.mul_table, expected)


@pytest.mark.parametrize("p,k", [(2, 2), (2, 3), (3, 2), (5, 2)])
def test_schoolbook_matches_tables(p, k):
    f = GF(p, k)
    for a in f.elements():
        for b in f.elements():
            assert (a * b).index == f.mul_table[a.index, b.index]
            assert (a + b).index == f.add_table[a.index, b.index]
        if not a.is_zero():
            assert a.inverse().index == f.inv_table[a.index]


@pytest.mark.parametrize("p,k", [f for f in SMALL_FIELDS if f[0] ** f[1] <= 49])
def test_field_axioms_exhaustive(p, k):
    f = GF(p, k)
    A, M = f.add_table, f.mul_table
    x = np.arange(f.order)
    a, b, c = np.meshgrid(x, x, x, indexing="ij")
    assert np.array_equal(A[A[a, b], c], A[a, A[b, c]])
    assert np.array_equal(M[M[a, b], c], M[a, M[b, c]])
    assert np.array_equal(M[a, A[b, c]], A[M[a, b], M[a, c]])
    assert np.array_equal(A, A.T) and np.array_equal(M, M.T)
    assert np.all(A[x, f.neg_table] == 0)
    nz = x[1:]
    assert np.all(M[nz, f.inv_table[nz]] == 1)
    # no zero divisors
    assert np.count_nonzero(M[1:, 1:] == 0) == 0


@pytest.mark.parametrize("p,k", SMALL_FIELDS)
def test_index_roundtrip(p, k):
    f = GF(p, k)
    for i in range(f.order):
        e = FieldElement.from_index(f, i)
        assert e.index == i
        assert e.coeffs == tuple(f.digits[i])


# -- characters -------------------------------------------------------------------

def test_character_examples():
    assert additive_character(0, 5) == 1 + 0j
    assert abs(additive_character(1, 2) - (-1)) < 1e-15
    z = additive_character(2, 5)
    assert abs(z - complex(math.cos(4 * math.pi / 5), math.sin(4 * math.pi / 5))) < 1e-15


def test_character_sum_examples():
    assert abs(character_sum(3, 1, 5)) < 1e-12
    assert abs(character_sum(0, 0, 5) - 5) < 1e-12
    direct = sum(cmath.exp(2j * math.pi * 2 / 7) for _ in range(7))
    assert abs(character_sum(0, 2, 7) - direct) < 1e-12
    assert abs(character_sum(0, 2, 7) - 7 * cmath.exp(4j * math.pi / 7)) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_character_homomorphism(p):
    for g1 in range(p):
        for g2 in range(p):
            lhs = additive_character((g1 + g2) % p, p)
            assert abs(lhs - additive_character(g1, p) * additive_character(g2, p)) < 1e-12


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_character_sum_closed_form(p):
    for tau in range(p):
        for beta in range(p):
            expected = 0 if tau else p * additive_character(beta, p)
            assert abs(character_sum(tau, beta, p) - expected) < 1e-12


@given(st.sampled_from([2, 3, 5, 7, 11, 13]), st.integers(-1000, 1000), st.integers(-1000, 1000))
def test_character_is_periodic_and_multiplicative(p, g1, g2):
    assert abs(additive_character(g1 + p, p) - additive_character(g1, p)) < 1e-12
    assert abs(additive_character(g1 + g2, p)
               - additive_character(g1, p) * additive_character(g2, p)) < 1e-12
