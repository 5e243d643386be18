"""Column replacement and the large-minimum-distance code construction.

Column replacement substitutes, for every entry ``P[b, g]`` of an ``N' x L``
pattern matrix, the column ``A[:, P[b, g]]`` of an ``r x m`` primary matrix.
Block row ``b`` of output column ``g`` is that primary column, so the result
is ``r*N' x L``.  Indices are 0-based here; the CLI prints them 1-based.
"""
from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .codes import Codebook
from .errors import CorrespondenceError, DomainError, PatternIndexError, PreconditionError

__all__ = [
    "PatternMatrix",
    "column_replace",
    "Theorem2Result",
    "theorem2_construct",
    "predicted_min_distance",
    "gf_rank",
    "is_linear_span",
]

# above this many row subsets fall back to chunked pairwise comparison
_SUBSET_SEARCH_LIMIT = 4096


@dataclass(frozen=True, eq=False)
class PatternMatrix:
    entries: np.ndarray
    alphabet_size: int

    def __post_init__(self):
        e = np.asarray(self.entries, dtype=np.int64)
        if e.ndim != 2 or 0 in e.shape:
            raise DomainError(f"pattern must be a non-empty 2-D array, got shape {e.shape}")
        if e.min() < 0 or e.max() >= self.alphabet_size:
            bad = np.argwhere((e < 0) | (e >= self.alphabet_size))[0]
            raise PatternIndexError(
                f"pattern entry {int(e[tuple(bad)])} at {tuple(int(x) for x in bad)} "
                f"outside [0, {self.alphabet_size - 1}]"
            )
        e.setflags(write=False)
        object.__setattr__(self, "entries", e)

    @classmethod
    def from_codebook(cls, cb: Codebook, alphabet_size: int | None = None) -> PatternMatrix:
        return cls(cb.columns, cb.field.order if alphabet_size is None else alphabet_size)

    @property
    def rows(self) -> int:
        return self.entries.shape[0]

    @property
    def cols(self) -> int:
        return self.entries.shape[1]

    @cached_property
    def d_P(self) -> int:
        """Largest number of coordinates on which two distinct columns agree."""
        return self._max_agreement()

    def _max_agreement(self) -> int:
        n, L = self.entries.shape
        if L < 2:
            raise DomainError("max pairwise agreement needs at least two columns")
        if 2**n <= _SUBSET_SEARCH_LIMIT:
            # agreement >= t iff two columns coincide on some t-subset of rows
            best = 0
            for t in range(1, n + 1):
                if not any(
                    _has_duplicate_columns(self.entries[list(rows)])
                    for rows in itertools.combinations(range(n), t)
                ):
                    break
                best = t
        else:
            best = _pairwise_max_agreement(self.entries)
        if best == n:
            warnings.warn("pattern has two identical columns (degenerate)", stacklevel=3)
        return best


def _has_duplicate_columns(sub: np.ndarray) -> bool:
    return np.unique(sub.T, axis=0).shape[0] < sub.shape[1]


def _pairwise_max_agreement(e: np.ndarray, chunk: int = 256) -> int:
    L = e.shape[1]
    best = 0
    for start in range(0, L - 1, chunk):
        block = e[:, start:start + chunk]
        agree = (block[:, :, None] == e[:, None, start:]).sum(axis=0)
        # keep only pairs with second index strictly greater
        ii = np.arange(block.shape[1])[:, None]
        jj = np.arange(L - start)[None, :]
        agree[jj <= ii] = -1
        best = max(best, int(agree.max()))
    return best


def column_replace(primary, pattern) -> np.ndarray:
    """Column replacement of ``primary`` (``r x m``) in ``pattern`` (``N' x L``).

    ``out[b*r + s, g] == primary[s, pattern[b, g]]``.
    """
    A = np.asarray(primary)
    if A.ndim != 2:
        raise DomainError(f"primary must be 2-D, got shape {A.shape}")
    if not isinstance(pattern, PatternMatrix):
        pattern = PatternMatrix(pattern, A.shape[1])
    if pattern.alphabet_size != A.shape[1]:
        raise DomainError(
            f"pattern alphabet size {pattern.alphabet_size} != primary column count {A.shape[1]}"
        )
    r = A.shape[0]
    nb, L = pattern.entries.shape
    # (r, N', L) -> (N', r, L) -> (N'*r, L)
    return A[:, pattern.entries].transpose(1, 0, 2).reshape(nb * r, L)


def predicted_min_distance(N: int, N_prime: int, dmin: int, dmin_prime: int) -> int:
    """``N*N' - ((N' - d')*N + d'*(N - d))``, which simplifies to ``d * d'``."""
    return N * N_prime - ((N_prime - dmin_prime) * N + dmin_prime * (N - dmin))


def gf_rank(M: np.ndarray, p: int) -> int:
    """Rank of an integer matrix over GF(p) by Gaussian elimination."""
    M = np.array(M, dtype=np.int64) % p
    if M.shape[1] > M.shape[0]:
        M = np.ascontiguousarray(M.T)
    rows, cols = M.shape
    rank = 0
    for c in range(cols):
        if rank == rows:
            break
        pivots = np.nonzero(M[rank:, c])[0]
        if pivots.size == 0:
            continue
        piv = rank + pivots[0]
        if piv != rank:
            M[[rank, piv]] = M[[piv, rank]]
        M[rank] = (M[rank] * pow(int(M[rank, c]), -1, p)) % p
        others = np.nonzero(M[:, c])[0]
        others = others[others != rank]
        if others.size:
            M[others] = (M[others] - np.outer(M[others, c], M[rank])) % p
        rank += 1
    return rank


def is_linear_span(C: np.ndarray, p: int) -> bool:
    """True iff the distinct columns of ``C`` form a GF(p)-subspace.

    A set of vectors is a subspace exactly when its size equals the size of
    its span, ``p ** rank``.
    """
    distinct = np.unique(np.asarray(C).T, axis=0).shape[0]
    return distinct == p ** gf_rank(C, p)


@dataclass(frozen=True, eq=False)
class Theorem2Result:
    codewords: np.ndarray
    p: int
    N: int
    N_prime: int
    dmin: int
    dmin_prime: int

    @property
    def predicted_dmin(self) -> int:
        return predicted_min_distance(self.N, self.N_prime, self.dmin, self.dmin_prime)

    @cached_property
    def exact_dmin(self) -> int:
        """Minimum weight of the nonzero columns."""
        w = np.count_nonzero(self.codewords, axis=0)
        return int(w[w > 0].min())

    @cached_property
    def is_linear(self) -> bool:
        return is_linear_span(self.codewords, self.p)

    @cached_property
    def has_all_one(self) -> bool:
        return bool(np.any(np.all(self.codewords == 1, axis=0)))

    def __iter__(self):
        # allows ``C, dmin = theorem2_construct(...)``
        yield self.codewords
        yield self.predicted_dmin


def theorem2_construct(A_cb: Codebook, P_cb: Codebook) -> Theorem2Result:
    """Replace columns of a GF(p) codebook in a codebook over GF(p^k).

    Pattern symbol with element index ``e`` selects primary column ``e``;
    both use the same base-p digit order, so the primary column for
    ``sum(i_j a^j)`` is ``sum(i_j g_j)``.

    Raises
    ------
    CorrespondenceError
        If the primary is not over a prime field or the pattern field order
        differs from the primary codeword count.
    PreconditionError
        If either codebook lacks the all-one codeword, or the primary's first
        generator row is not the all-one vector.
    """
    fA, fP = A_cb.field, P_cb.field
    if fA.k != 1:
        raise CorrespondenceError(f"primary code must be over a prime field, got {fA!r}")
    if fP.p != fA.p or fP.order != A_cb.columns.shape[1]:
        raise CorrespondenceError(
            f"pattern field {fP!r} has order {fP.order}, but the primary has "
            f"{A_cb.columns.shape[1]} codewords over GF({fA.p})"
        )
    if not A_cb.has_all_one:
        raise PreconditionError("primary code does not contain the all-one codeword")
    if not P_cb.has_all_one:
        raise PreconditionError("pattern code does not contain the all-one codeword")
    if not np.all(A_cb.columns[:, 1] == 1):
        raise PreconditionError("primary codeword for the field element 1 must be all-one")

    C = column_replace(A_cb.columns, PatternMatrix.from_codebook(P_cb, A_cb.columns.shape[1]))
    C.setflags(write=False)
    res = Theorem2Result(
        codewords=C,
        p=fA.p,
        N=A_cb.code.length,
        N_prime=P_cb.code.length,
        dmin=A_cb.min_distance,
        dmin_prime=P_cb.min_distance,
    )
    if not res.is_linear:
        raise AssertionError("column replacement output is not closed under GF(p) combinations")
    if not res.has_all_one:
        raise AssertionError("column replacement output lacks the all-one codeword")
    return res
