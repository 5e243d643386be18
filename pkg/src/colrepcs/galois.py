"""Arithmetic in GF(p) and GF(p^k).

Elements of GF(p^k) are coefficient vectors over Z_p in the power basis
1, a, ..., a^(k-1), where a is the class of x modulo a fixed monic irreducible
polynomial.  Every element has a canonical integer index

    index = sum(coeffs[i] * p**i)

which is also the column index of the matching codeword in a codebook over
GF(p) (see :mod:`colrepcs.codes`).

Single elements use schoolbook polynomial arithmetic.  Bulk work (codeword
enumeration) goes through the index-level lookup tables on :class:`FieldSpec`.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DomainError,
    FieldMismatchError,
    FieldZeroDivisionError,
    NotPrimeError,
)

__all__ = [
    "FieldSpec",
    "FieldElement",
    "GF",
    "is_prime",
    "prime_power",
    "find_irreducible",
    "is_irreducible",
    "ff_add",
    "ff_mul",
    "ff_inv",
    "additive_character",
    "character_sum",
]


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    return all(n % d for d in range(3, math.isqrt(n) + 1, 2))


def prime_power(q: int) -> tuple[int, int]:
    """Split ``q = p**k`` into ``(p, k)``; raise if ``q`` is not a prime power."""
    if q >= 2:
        for p in range(2, q + 1):
            if q % p == 0:
                k, r = 0, q
                while r % p == 0:
                    r //= p
                    k += 1
                if r == 1 and is_prime(p):
                    return p, k
                break
    raise NotPrimeError(f"{q} is not a prime power")


# -- polynomials over Z_p, coefficient lists lowest degree first -------------

def _trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of ``a`` modulo the monic polynomial ``m``."""
    a = _trim([c % p for c in a])
    dm = len(m) - 1
    while len(a) - 1 >= dm:
        c = a[-1]
        shift = len(a) - 1 - dm
        for i, mc in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mc) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int):
    """All monic polynomials of the given degree, in increasing index order."""
    for low in itertools.product(range(p), repeat=degree):
        yield list(reversed(low)) + [1]


def is_irreducible(poly, p: int) -> bool:
    """Trial division by every monic polynomial of degree 1..deg/2."""
    poly = [int(c) % p for c in poly]
    k = len(poly) - 1
    if k < 1 or poly[-1] != 1:
        return False
    for d in range(1, k // 2 + 1):
        for f in _monic_polys(p, d):
            if not _poly_mod(poly, f, p):
                return False
    return True


def find_irreducible(p: int, k: int) -> tuple[int, ...]:
    """Smallest monic irreducible polynomial of degree ``k`` over GF(p).

    Candidates are ordered by the integer ``sum(c_i * p**i)`` of their
    non-leading coefficients ``c_0 .. c_{k-1}``, so over GF(5) the quadratic
    ``x^2 + 2`` comes before ``x^2 + x + 1``.

    Returns
    -------
    tuple of int
        Coefficients, lowest degree first, length ``k + 1``; last entry is 1.
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if k < 2:
        raise DomainError("an irreducible polynomial is only needed for k >= 2")
    for value in range(p**k):
        low = [(value // p**i) % p for i in range(k)]
        cand = low + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("unreachable: irreducible polynomials exist for every degree")


@dataclass(frozen=True)
class FieldSpec:
    """The field GF(p^k) with a fixed representation.

    ``irreducible`` is ``None`` for prime fields; for ``k >= 2`` it defaults to
    :func:`find_irreducible` when omitted.
    """

    p: int
    k: int = 1
    irreducible: tuple[int, ...] | None = None

    def __post_init__(self):
        if not is_prime(self.p):
            raise NotPrimeError(f"{self.p} is not prime")
        if self.k < 1:
            raise DomainError(f"extension degree must be >= 1, got {self.k}")
        if self.k == 1:
            if self.irreducible is not None:
                object.__setattr__(self, "irreducible", None)
            return
        if self.irreducible is None:
            object.__setattr__(self, "irreducible", find_irreducible(self.p, self.k))
            return
        poly = tuple(int(c) for c in self.irreducible)
        if len(poly) != self.k + 1 or poly[-1] != 1:
            raise DomainError(f"modulus must be monic of degree {self.k}: {poly}")
        if any(not 0 <= c < self.p for c in poly):
            raise DomainError(f"modulus coefficients must lie in [0, {self.p - 1}]")
        if not is_irreducible(poly, self.p):
            raise DomainError(f"{poly} is reducible over GF({self.p})")
        object.__setattr__(self, "irreducible", poly)

    @property
    def order(self) -> int:
        return self.p**self.k

    def __repr__(self):
        if self.k == 1:
            return f"GF({self.p})"
        return f"GF({self.p}^{self.k}, mod={list(self.irreducible)})"

    # -- elements ---------------------------------------------------------
    def element(self, value) -> FieldElement:
        """Build an element from an index or a coefficient sequence."""
        if isinstance(value, FieldElement):
            if value.field != self:
                raise FieldMismatchError(f"{value.field!r} != {self!r}")
            return value
        if isinstance(value, (int, np.integer)):
            return FieldElement.from_index(self, int(value))
        return FieldElement(self, tuple(int(c) for c in value))

    @property
    def zero(self) -> FieldElement:
        return FieldElement.from_index(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement.from_index(self, 1)

    def elements(self) -> list[FieldElement]:
        return [FieldElement.from_index(self, i) for i in range(self.order)]

    # -- index-level tables ------------------------------------------------
    @cached_property
    def digits(self) -> np.ndarray:
        """``order x k`` array; row ``i`` holds the coefficients of element ``i``."""
        idx = np.arange(self.order)
        return np.stack([(idx // self.p**i) % self.p for i in range(self.k)], axis=1)

    @cached_property
    def _weights(self) -> np.ndarray:
        return self.p ** np.arange(self.k)

    @cached_property
    def add_table(self) -> np.ndarray:
        s = (self.digits[:, None, :] + self.digits[None, :, :]) % self.p
        return s @ self._weights

    @cached_property
    def neg_table(self) -> np.ndarray:
        return ((-self.digits) % self.p) @ self._weights

    @cached_property
    def mul_table(self) -> np.ndarray:
        p, k = self.p, self.k
        d = self.digits
        # full product coefficients, degree up to 2k-2
        prod = np.zeros((self.order, self.order, 2 * k - 1), dtype=np.int64)
        for i in range(k):
            for j in range(k):
                prod[:, :, i + j] += d[:, None, i] * d[None, :, j]
        prod %= p
        if k > 1:
            mod = np.asarray(self.irreducible, dtype=np.int64)
            for top in range(2 * k - 2, k - 1, -1):
                c = prod[:, :, top].copy()
                shift = top - k
                prod[:, :, shift:top + 1] -= c[:, :, None] * mod[None, None, :]
                prod %= p
        return prod[:, :, :k] @ self._weights

    @cached_property
    def inv_table(self) -> np.ndarray:
        """``inv_table[i]`` is the inverse of element ``i``; entry 0 is -1."""
        inv = np.full(self.order, -1, dtype=np.int64)
        rows, cols = np.nonzero(self.mul_table == 1)
        inv[rows] = cols
        return inv


@lru_cache(maxsize=None)
def GF(p: int, k: int = 1) -> FieldSpec:
    """Cached field with the default irreducible polynomial."""
    return FieldSpec(p, k)


@dataclass(frozen=True)
class FieldElement:
    field: FieldSpec
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) != self.field.k:
            raise DomainError(f"expected {self.field.k} coefficients, got {len(self.coeffs)}")
        if any(not 0 <= c < self.field.p for c in self.coeffs):
            raise DomainError(f"coefficients out of range for {self.field!r}: {self.coeffs}")

    @classmethod
    def from_index(cls, field: FieldSpec, index: int) -> FieldElement:
        if not 0 <= index < field.order:
            raise DomainError(f"index {index} outside [0, {field.order - 1}]")
        return cls(field, tuple((index // field.p**i) % field.p for i in range(field.k)))

    @property
    def index(self) -> int:
        return sum(c * self.field.p**i for i, c in enumerate(self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other):
        return ff_add(self, other)

    def __sub__(self, other):
        return ff_add(self, -other)

    def __neg__(self):
        p = self.field.p
        return FieldElement(self.field, tuple((-c) % p for c in self.coeffs))

    def __mul__(self, other):
        return ff_mul(self, other)

    def __truediv__(self, other):
        return ff_mul(self, ff_inv(other))

    def inverse(self) -> FieldElement:
        return ff_inv(self)

    def __int__(self):
        return self.index

    def __repr__(self):
        if self.field.k == 1:
            return f"{self.coeffs[0]} (GF({self.field.p}))"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                mono = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
                terms.append(f"{c}{mono}" if (c != 1 or i == 0) else mono)
        return f"{' + '.join(reversed(terms)) or '0'} ({self.field!r})"


def _check_same(a: FieldElement, b: FieldElement):
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field!r} != {b.field!r}")


def ff_add(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    p = a.field.p
    return FieldElement(a.field, tuple((x + y) % p for x, y in zip(a.coeffs, b.coeffs)))


def ff_mul(a: FieldElement, b: FieldElement) -> FieldElement:
    _check_same(a, b)
    f = a.field
    prod = [0] * (2 * f.k - 1)
    for i, x in enumerate(a.coeffs):
        if x:
            for j, y in enumerate(b.coeffs):
                prod[i + j] += x * y
    if f.k > 1:
        rem = _poly_mod(prod, list(f.irreducible), f.p)
    else:
        rem = _trim([prod[0] % f.p])
    rem = rem + [0] * (f.k - len(rem))
    return FieldElement(f, tuple(rem))


def ff_inv(a: FieldElement) -> FieldElement:
    """Multiplicative inverse by exhaustive search over the field."""
    if a.is_zero():
        raise FieldZeroDivisionError(f"zero has no inverse in {a.field!r}")
    one = a.field.one
    for i in range(1, a.field.order):
        b = FieldElement.from_index(a.field, i)
        if ff_mul(a, b) == one:
            return b
    raise AssertionError(f"no inverse found in {a.field!r}; modulus is not irreducible")


def additive_character(gamma: int, p: int) -> complex:
    """Canonical additive character of GF(p): ``exp(2j*pi*gamma/p)``."""
    return cmath.exp(2j * math.pi * (int(gamma) % p) / p)


def character_sum(tau: int, beta: int, p: int) -> complex:
    """Direct sum of ``chi(tau*g + beta)`` over every ``g`` in GF(p)."""
    return sum(additive_character(tau * g + beta, p) for g in range(p))
