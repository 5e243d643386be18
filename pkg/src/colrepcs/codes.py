"""Linear codes over GF(q): generators, codebooks and minimum distance.

Symbols are stored as element indices (see :mod:`colrepcs.galois`).  A
codebook is the ``N x q**k`` matrix whose column ``j`` is the codeword for the
message with index ``j = sum(m_i * q**i)``, i.e. ``sum(m_i * g_i)``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DegenerateCodeError, DomainError, RankDeficiencyError
from .galois import FieldElement, FieldSpec

__all__ = [
    "LinearCode",
    "Codebook",
    "enumerate_codewords",
    "min_distance",
    "contains_all_one",
    "rs2_generator",
    "codebook_to_dict",
    "codebook_from_dict",
    "dump_codebook",
    "load_codebook",
]


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Code spanned by the rows of ``generator`` (a ``k x N`` index array)."""

    field: FieldSpec
    generator: np.ndarray

    def __post_init__(self):
        g = np.asarray(self.generator, dtype=np.int64)
        if g.ndim == 1:
            g = g[None, :]
        if g.ndim != 2 or g.shape[1] < 1:
            raise DomainError(f"generator must be a k x N array, got shape {g.shape}")
        if g.size and (g.min() < 0 or g.max() >= self.field.order):
            raise DomainError(f"generator entries must be element indices of {self.field!r}")
        g.setflags(write=False)
        object.__setattr__(self, "generator", g)

    @property
    def length(self) -> int:
        return self.generator.shape[1]

    @property
    def dimension(self) -> int:
        return self.generator.shape[0]

    def rows(self) -> list[list[FieldElement]]:
        return [[FieldElement.from_index(self.field, int(v)) for v in row] for row in self.generator]


@dataclass(frozen=True, eq=False)
class Codebook:
    code: LinearCode
    columns: np.ndarray

    @property
    def field(self) -> FieldSpec:
        return self.code.field

    @property
    def shape(self) -> tuple[int, int]:
        return self.columns.shape

    @cached_property
    def min_distance(self) -> int:
        """Minimum weight over nonzero codewords (equal to min distance by linearity)."""
        if self.columns.shape[1] < 2:
            raise DomainError("minimum distance needs at least two codewords")
        weights = np.count_nonzero(self.columns[:, 1:], axis=0)
        return int(weights.min())

    @cached_property
    def has_all_one(self) -> bool:
        return bool(np.any(np.all(self.columns == 1, axis=0)))

    def column(self, j: int) -> list[FieldElement]:
        return [FieldElement.from_index(self.field, int(v)) for v in self.columns[:, j]]


def enumerate_codewords(code: LinearCode) -> Codebook:
    """All ``q**k`` codewords of ``code`` ordered by message index.

    Raises
    ------
    RankDeficiencyError
        If two messages map to the same codeword.
    """
    f = code.field
    q, k, n = f.order, code.dimension, code.length
    total = q**k
    msg = np.arange(total)
    cols = np.zeros((n, total), dtype=np.int64)
    for i in range(k):
        digit = (msg // q**i) % q
        term = f.mul_table[digit[None, :], code.generator[i][:, None]]
        cols = f.add_table[cols, term]
    distinct = np.unique(cols.T, axis=0).shape[0]
    if distinct != total:
        raise RankDeficiencyError(
            f"generator rows are linearly dependent: {distinct} distinct codewords, expected {total}"
        )
    cols.setflags(write=False)
    return Codebook(code, cols)


def min_distance(cb: Codebook) -> int:
    return cb.min_distance


def contains_all_one(cb: Codebook) -> bool:
    return cb.has_all_one


def rs2_generator(field: FieldSpec, evaluation_points=None) -> LinearCode:
    """Two-row generator: an all-one row over a row of evaluation points.

    Parameters
    ----------
    field : FieldSpec
    evaluation_points : sequence of FieldElement or int, optional
        Distinct points; defaults to every field element in index order.

    Its codewords are the evaluations of polynomials of degree < 2, so any two
    distinct codewords agree in at most one coordinate.
    """
    if evaluation_points is None:
        pts = list(range(field.order))
    else:
        pts = [field.element(x).index for x in evaluation_points]
    if len(pts) < 2:
        raise DegenerateCodeError("need at least two evaluation points")
    if len(set(pts)) != len(pts):
        raise DegenerateCodeError(f"evaluation points are not distinct: {pts}")
    g = np.array([[1] * len(pts), pts], dtype=np.int64)
    return LinearCode(field, g)


# -- JSON export ---------------------------------------------------------------

def codebook_to_dict(cb: Codebook) -> dict:
    f = cb.field
    return {
        "p": f.p,
        "field_degree": f.k,
        "irreducible": list(f.irreducible) if f.irreducible else None,
        "k": cb.code.dimension,
        "N": cb.code.length,
        "generator": cb.code.generator.tolist(),
        "columns": cb.columns.T.tolist(),
    }


def codebook_from_dict(d: dict) -> Codebook:
    irr = d.get("irreducible")
    f = FieldSpec(int(d["p"]), int(d.get("field_degree", 1)), tuple(irr) if irr else None)
    cb = enumerate_codewords(LinearCode(f, np.array(d["generator"], dtype=np.int64)))
    if "columns" in d and not np.array_equal(cb.columns.T, np.asarray(d["columns"])):
        raise DomainError("stored columns do not match the generator")
    return cb


def dump_codebook(cb: Codebook, path) -> None:
    with open(path, "w") as fh:
        json.dump(codebook_to_dict(cb), fh)
        fh.write("\n")


def load_codebook(path) -> Codebook:
    with open(path) as fh:
        return codebook_from_dict(json.load(fh))
