"""Growing sensing matrices: Kronecker product and column replacement."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .codes import enumerate_codewords, rs2_generator
from .colrep import PatternMatrix, column_replace
from .errors import DomainError, NotPrimeError
from .galois import GF, is_prime, prime_power
from .sensing import (
    CoherenceReport,
    SensingMatrix,
    analyze_coherence,
    coherence,
    construct_example1,
    welch_bound,
)

__all__ = [
    "ResizeReport",
    "KroneckerComparison",
    "kronecker",
    "max_pairwise_agreement",
    "theorem4_bound",
    "resize_theorem4",
    "construct_example3",
    "construct_example4",
    "compare_vs_kronecker",
]


@dataclass(frozen=True)
class ResizeReport:
    input_shape: tuple[int, int]
    mu_input: float
    pattern_shape: tuple[int, int]
    d_P: int
    output_shape: tuple[int, int]
    bound: float
    coherence: CoherenceReport

    @property
    def method(self) -> str:
        return self.coherence.method

    @property
    def measured(self) -> float:
        return self.coherence.exact

    def to_dict(self) -> dict:
        return {
            "input": {"m": self.input_shape[0], "n": self.input_shape[1], "mu": self.mu_input},
            "pattern": {"N": self.pattern_shape[0], "L": self.pattern_shape[1], "d_P": self.d_P},
            "output": {"m": self.output_shape[0], "n": self.output_shape[1]},
            "bound": self.bound,
            "coherence": self.coherence.to_dict(),
        }


def kronecker(A: SensingMatrix, B: SensingMatrix) -> SensingMatrix:
    """Kronecker product; coherence is ``max(mu_A, mu_B)``."""
    claimed = None
    if A.claimed_coherence is not None and B.claimed_coherence is not None:
        claimed = max(A.claimed_coherence, B.claimed_coherence)
    prov = {"construction": "kronecker", "parents": [A.provenance, B.provenance]}
    return SensingMatrix(np.kron(A.entries, B.entries), prov, claimed)


def max_pairwise_agreement(P: PatternMatrix) -> int:
    return P.d_P


def theorem4_bound(mu_A: float, N: int, d_P: int) -> float:
    """``(d_P + (N - d_P) * mu_A) / N``."""
    return (d_P + (N - d_P) * mu_A) / N


def resize_theorem4(A: SensingMatrix, P, *, mu_A: float | None = None,
                    max_pairs: int = 10**6, samples: int = 10**6, seed: int = 0,
                    claimed: float | None = None,
                    provenance: dict | None = None) -> tuple[SensingMatrix, ResizeReport]:
    """Stack columns of ``A`` as selected by ``P`` and scale by ``1/sqrt(N)``.

    The output coherence is measured exactly when the output has at most
    ``max_pairs`` column pairs, otherwise over ``samples`` seeded random pairs
    (a lower estimate; the returned ``bound`` is the certified upper value).
    """
    if not isinstance(P, PatternMatrix):
        P = PatternMatrix(P, A.n)
    if P.alphabet_size != A.n:
        raise DomainError(f"pattern alphabet size {P.alphabet_size} != primary width {A.n}")
    N = P.rows
    C = column_replace(A.entries, P) / math.sqrt(N)
    if mu_A is None:
        mu_A = coherence(A).exact
    d_P = P.d_P
    bound = theorem4_bound(mu_A, N, d_P)
    prov = {
        "construction": "column_replacement",
        "p": A.provenance.get("p"),
        "params": {"N": N, "L": P.cols, "d_P": d_P},
        "primary": A.provenance,
        **(provenance or {}),
    }
    out = SensingMatrix(C, prov, claimed)
    report = ResizeReport(
        input_shape=A.shape,
        mu_input=float(mu_A),
        pattern_shape=(N, P.cols),
        d_P=d_P,
        output_shape=out.shape,
        bound=bound,
        coherence=analyze_coherence(out, max_pairs=max_pairs, samples=samples, seed=seed),
    )
    return out, report


def construct_example3(q: int, k: int, *, row_seed: int | None = None,
                       **kw) -> tuple[SensingMatrix, ResizeReport]:
    """Binary ``kq x q^2`` matrix with coherence ``1/k`` from the ``q x q`` identity.

    The pattern is ``k`` rows of the ``q x q^2`` codeword matrix of the
    two-row code over GF(q) evaluated at every field element.  By default
    the first ``k`` rows are used; ``row_seed`` picks them at random instead.
    """
    p, e = prime_power(q)
    if not 2 <= k <= q:
        raise DomainError(f"need 2 <= k <= q, got k={k}, q={q}")
    P0 = enumerate_codewords(rs2_generator(GF(p, e))).columns
    if row_seed is None:
        rows = np.arange(k)
    else:
        rows = np.sort(np.random.default_rng(row_seed).choice(q, size=k, replace=False))
    ident = SensingMatrix(np.eye(q), {"construction": "identity", "params": {"q": q}})
    return resize_theorem4(
        ident, PatternMatrix(P0[rows], q), mu_A=0.0, claimed=1 / k,
        provenance={"construction": "example3", "p": p,
                    "params": {"q": q, "k": k, "rows": rows.tolist()}},
        **kw,
    )


def construct_example4(p: int, **kw) -> tuple[SensingMatrix, ResizeReport]:
    """``p^3 x p^6`` matrix from the ``p^2 x p^3`` Example 1 matrix.

    The pattern is the codeword matrix of the two-row code over GF(p^3)
    evaluated at ``0..p-1``; any two of its columns share at most one entry.
    """
    A = construct_example1(p)
    P = enumerate_codewords(rs2_generator(GF(p, 3), range(p))).columns
    return resize_theorem4(
        A, PatternMatrix(P, A.n), mu_A=kw.pop("mu_A", None),
        claimed=(2 * p - 1) / p**2,
        provenance={"construction": "example4", "params": {"p": p}},
        **kw,
    )


@dataclass(frozen=True)
class KroneckerComparison:
    p: int
    column_replacement: float
    kronecker: float
    winner: str
    margin: float
    polynomial: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def compare_vs_kronecker(p: int) -> KroneckerComparison:
    """Coherence of a ``p^3 x p^6`` matrix built both ways from a ``p^2 x p^3`` one.

    Column replacement gives ``(2p-1)/p^2``.  The Kronecker route needs a
    ``p x p^3`` partner, which at best meets the Welch bound, so its
    coherence is at least ``max(1/p, welch(p, p^3))``.  Squaring the
    comparison gives ``polynomial = (p^4 - p)(p - 3) - 1``, positive exactly
    when column replacement wins (p >= 5).
    """
    if not is_prime(p):
        raise NotPrimeError(f"{p} is not prime")
    cr = (2 * p - 1) / p**2
    kr = max(1 / p, welch_bound(p, p**3))
    winner = "column_replacement" if cr < kr else "kronecker"
    return KroneckerComparison(p, cr, kr, winner, kr - cr, (p**4 - p) * (p - 3) - 1)
