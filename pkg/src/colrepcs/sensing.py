"""Sensing matrices from linear codes, coherence and related bounds.

A code over GF(p) that contains the all-one word is turned into a complex
sensing matrix in two steps:

1. :func:`coset_reduce` keeps one codeword from each coset ``{c + t*1}``.
   Members of a coset differ by a global phase after step 2, so keeping more
   than one would give coherence 1.
2. :func:`exponentiate` maps each symbol ``c`` to ``exp(2j*pi*c/p)/sqrt(N)``.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .codes import enumerate_codewords, rs2_generator
from .colrep import theorem2_construct
from .errors import DomainError, NormalizationError, NotPrimeError, ReductionError
from .galois import GF, is_prime

__all__ = [
    "SensingMatrix",
    "CoherenceReport",
    "RipEstimate",
    "coset_reduce",
    "exponentiate",
    "coherence",
    "sampled_coherence",
    "analyze_coherence",
    "coherence_bound_theorem1",
    "welch_bound",
    "rip_estimate",
    "construct_example1",
    "construct_example2",
    "NORM_TOL",
]

NORM_TOL = 1e-10
TIE_TOL = 1e-12
# soft cap: above this p the example constructions warn but still run
PRACTICAL_MAX_P = 13


@dataclass(frozen=True, eq=False)
class SensingMatrix:
    """An ``m x n`` matrix with unit-norm columns plus provenance."""

    entries: np.ndarray
    provenance: dict = field(default_factory=dict)
    claimed_coherence: float | None = None

    def __post_init__(self):
        a = np.asarray(self.entries)
        if a.ndim != 2 or 0 in a.shape:
            raise DomainError(f"sensing matrix must be a non-empty 2-D array, got {a.shape}")
        if not np.issubdtype(a.dtype, np.complexfloating):
            a = a.astype(np.float64)
        norms = np.linalg.norm(a, axis=0)
        bad = np.nonzero(np.abs(norms - 1.0) > NORM_TOL)[0]
        if bad.size:
            j = int(bad[0])
            raise NormalizationError(f"column {j} has norm {norms[j]!r}, expected 1")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    @property
    def n(self) -> int:
        return self.entries.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    @property
    def p(self) -> int | None:
        return self.provenance.get("p")

    @property
    def is_complex(self) -> bool:
        return np.issubdtype(self.entries.dtype, np.complexfloating)


@dataclass(frozen=True)
class CoherenceReport:
    exact: float
    pair: tuple[int, int]
    welch: float
    ratio_to_welch: float
    theorem1_bound: float | None = None
    method: str = "full"
    pairs: int = 0
    seed: int | None = None

    def to_dict(self) -> dict:
        return {
            "coherence": self.exact,
            "pair": list(self.pair),
            "welch": self.welch,
            "ratio_to_welch": self.ratio_to_welch,
            "theorem1_bound": self.theorem1_bound,
            "method": self.method,
            "pairs": self.pairs,
            "seed": self.seed,
        }


@dataclass(frozen=True)
class RipEstimate:
    """``k_max`` is ``None`` when the coherence is zero (no finite limit)."""

    mu: float
    k_max: int | None
    delta: dict

    @property
    def unbounded(self) -> bool:
        return self.k_max is None


# -- code to matrix pipeline --------------------------------------------------

def coset_reduce(C, p: int) -> np.ndarray:
    """Keep the codeword with first coordinate 0 from each all-one coset.

    Columns keep their original relative order.
    """
    C = np.asarray(C)
    n = C.shape[1]
    if n % p:
        raise ReductionError(f"column count {n} is not divisible by p={p}")
    if not np.any(np.all(C == 1, axis=0)):
        raise ReductionError("the all-one vector is not a column")
    keep = np.nonzero(C[0] == 0)[0]
    if keep.size != n // p:
        raise ReductionError(
            f"{keep.size} columns start with 0 but there are {n // p} cosets; "
            "the column set is not closed under adding the all-one word"
        )
    return C[:, keep]


def exponentiate(C_reduced, p: int, provenance: dict | None = None,
                 claimed_coherence: float | None = None) -> SensingMatrix:
    C = np.asarray(C_reduced, dtype=np.int64)
    if C.size and (C.min() < 0 or C.max() >= p):
        raise DomainError(f"symbols must lie in [0, {p - 1}]")
    N = C.shape[0]
    A = np.exp(2j * np.pi * C / p) / math.sqrt(N)
    prov = {"p": p, **(provenance or {})}
    return SensingMatrix(A, prov, claimed_coherence)


# -- coherence -----------------------------------------------------------------

def _as_array(A) -> np.ndarray:
    return A.entries if isinstance(A, SensingMatrix) else np.asarray(A)


def _unit_columns(a: np.ndarray) -> np.ndarray:
    norms = np.linalg.norm(a, axis=0)
    zero = np.nonzero(norms == 0)[0]
    if zero.size:
        raise NormalizationError(f"column {int(zero[0])} is zero")
    return a / norms


def welch_bound(m: int, n: int) -> float:
    """``sqrt((n - m) / (m * (n - 1)))``; defined for ``n > m >= 1``."""
    if m < 1 or n <= m:
        raise DomainError(f"Welch bound needs n > m >= 1, got m={m}, n={n}")
    return math.sqrt((n - m) / (m * (n - 1)))


def _report(mu: float, pair, m: int, n: int, theorem1=None, **kw) -> CoherenceReport:
    welch = welch_bound(m, n) if n > m else 0.0
    ratio = mu / welch if welch > 0 else math.inf
    return CoherenceReport(float(mu), (int(pair[0]), int(pair[1])), welch, ratio, theorem1, **kw)


def _theorem1_from(A) -> float | None:
    prov = A.provenance if isinstance(A, SensingMatrix) else {}
    if {"p", "code_length", "code_min_distance"} <= prov.keys():
        return coherence_bound_theorem1(prov["p"], prov["code_length"], prov["code_min_distance"])
    return None


def coherence(A, block: int = 1024) -> CoherenceReport:
    """Exact coherence: max normalized |<a_i, a_j>| over all pairs ``i < j``.

    Ties resolve to the lexicographically smallest pair.
    """
    a = _unit_columns(_as_array(A))
    m, n = a.shape
    if n < 2:
        raise DomainError("need >= 2 columns")
    best, pair = -1.0, (0, 1)
    for s in range(0, n, block):
        g = np.abs(a[:, s:s + block].conj().T @ a[:, s:])
        rows = np.arange(g.shape[0])[:, None]
        colsi = np.arange(g.shape[1])[None, :]
        g[colsi <= rows] = -1.0
        top = float(g.max())
        if top > best + TIE_TOL:
            # first entry within rounding of the block max, row-major
            flat = int(np.argmax(g >= top - TIE_TOL))
            i, j = divmod(flat, g.shape[1])
            pair = (s + i, s + j)
        best = max(best, top)
    return _report(min(best, 1.0), pair, m, n, _theorem1_from(A),
                   method="full", pairs=n * (n - 1) // 2)


def sampled_coherence(A, n_pairs: int = 10**6, seed: int = 0,
                      chunk: int = 65536) -> CoherenceReport:
    """Max over ``n_pairs`` uniformly drawn distinct column pairs.

    A lower estimate of the true coherence.
    """
    a = _unit_columns(_as_array(A))
    m, n = a.shape
    if n < 2:
        raise DomainError("need >= 2 columns")
    rng = np.random.default_rng(seed)
    i = rng.integers(0, n, size=n_pairs)
    j = rng.integers(0, n - 1, size=n_pairs)
    j = j + (j >= i)
    best, pair = -1.0, (0, 1)
    ac = a.conj()
    for s in range(0, n_pairs, chunk):
        ii, jj = i[s:s + chunk], j[s:s + chunk]
        v = np.abs(np.einsum("ij,ij->j", ac[:, ii], a[:, jj]))
        t = int(np.argmax(v))
        if v[t] > best:
            best, pair = float(v[t]), tuple(sorted((int(ii[t]), int(jj[t]))))
    return _report(min(best, 1.0), pair, m, n, _theorem1_from(A),
                   method="sampled", pairs=n_pairs, seed=seed)


def analyze_coherence(A, max_pairs: int = 10**6, samples: int = 10**6,
                      seed: int = 0) -> CoherenceReport:
    """Full enumeration when it has at most ``max_pairs`` pairs, else sampling."""
    n = _as_array(A).shape[1]
    if n < 2:
        raise DomainError("need >= 2 columns")
    if n * (n - 1) // 2 <= max_pairs:
        return coherence(A)
    return sampled_coherence(A, samples, seed)


def coherence_bound_theorem1(p: int, N: int, dmin: int) -> float:
    """``(p*(p-1)*N - p**2*dmin) / (2*N)``; may exceed 1, in which case it says nothing."""
    if not 0 <= dmin <= N:
        raise DomainError(f"need 0 <= dmin <= N, got dmin={dmin}, N={N}")
    return (p * (p - 1) * N - p * p * dmin) / (2 * N)


def rip_estimate(mu: float) -> RipEstimate:
    """RIP order implied by coherence: ``delta_k <= mu*(k-1)`` for ``k <= 1/mu + 1``."""
    if not 0 <= mu <= 1:
        raise DomainError(f"coherence must lie in [0, 1], got {mu}")
    # Fraction keeps 1/0.2 from landing at 4.999...; rounding noise near 0 counts as 0
    frac = Fraction(mu).limit_denominator(10**9)
    if frac == 0:
        return RipEstimate(float(mu), None, {})
    k_max = math.floor(1 / frac + 1)
    return RipEstimate(mu, k_max, {k: mu * (k - 1) for k in range(1, k_max + 1)})


# -- example constructions ---------------------------------------------------

def _check_p(p: int, lowest: int = 2):
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    if p < lowest:
        raise DomainError(f"p must be >= {lowest}, got {p}")
    if p > PRACTICAL_MAX_P:
        warnings.warn(f"p={p} exceeds the practical size cap {PRACTICAL_MAX_P}", stacklevel=3)


def _construct(p: int, n_pattern_points: int, name: str, claimed: float) -> SensingMatrix:
    A_cb = enumerate_codewords(rs2_generator(GF(p)))
    P_cb = enumerate_codewords(rs2_generator(GF(p, 2), range(n_pattern_points)))
    res = theorem2_construct(A_cb, P_cb)
    reduced = coset_reduce(res.codewords, p)
    prov = {
        "construction": name,
        "params": {"p": p},
        "code_length": int(res.codewords.shape[0]),
        "code_min_distance": res.exact_dmin,
        "predicted_min_distance": res.predicted_dmin,
    }
    return exponentiate(reduced, p, prov, claimed)


def construct_example1(p: int) -> SensingMatrix:
    """``p^2 x p^3`` matrix with coherence ``1/p``."""
    _check_p(p)
    return _construct(p, p, "example1", 1 / p)


def construct_example2(p: int) -> SensingMatrix:
    """``p(p-1) x p^3`` matrix with coherence ``1/(p-1)``; pattern points are ``0..p-2``."""
    _check_p(p, lowest=3)
    return _construct(p, p - 1, "example2", 1 / (p - 1))
