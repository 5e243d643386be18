"""Sensing-matrix files.

JSON layout::

    {"format_version": 1, "m": .., "n": .., "p": .., "construction": ..,
     "params": {..}, "claimed_coherence": .., "provenance": {..},
     "entries": [[re, im], ...]}   # row-major, m*n pairs

Floats are written with ``repr`` so a load/save round trip is bit-exact.
The CSV export writes one ``re+imj`` cell per matrix entry.
"""
from __future__ import annotations

import json

import numpy as np

from .errors import MatrixFormatError
from .sensing import SensingMatrix

__all__ = [
    "FORMAT_VERSION",
    "matrix_to_dict",
    "matrix_from_dict",
    "save_matrix",
    "load_matrix",
    "save_matrix_csv",
    "load_matrix_csv",
    "format_complex",
    "write_json",
]

FORMAT_VERSION = 1


def _jsonable(obj):
    """Convert numpy scalars/arrays nested in provenance dicts."""
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(obj, path) -> None:
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=1, allow_nan=True)
        fh.write("\n")


def matrix_to_dict(S: SensingMatrix) -> dict:
    a = np.asarray(S.entries, dtype=np.complex128)
    flat = a.reshape(-1)
    prov = S.provenance
    return {
        "format_version": FORMAT_VERSION,
        "m": S.m,
        "n": S.n,
        "p": prov.get("p"),
        "construction": prov.get("construction"),
        "params": _jsonable(prov.get("params", {})),
        "claimed_coherence": S.claimed_coherence,
        "provenance": _jsonable(prov),
        "entries": np.stack([flat.real, flat.imag], axis=1).tolist(),
    }


def matrix_from_dict(d: dict) -> SensingMatrix:
    try:
        version = d["format_version"]
        m, n = int(d["m"]), int(d["n"])
        entries = d["entries"]
    except (KeyError, TypeError, ValueError) as exc:
        raise MatrixFormatError(f"missing or invalid header field: {exc}") from None
    if version != FORMAT_VERSION:
        raise MatrixFormatError(f"unsupported format_version {version!r}")
    if len(entries) != m * n:
        raise MatrixFormatError(f"expected {m * n} entries for {m}x{n}, found {len(entries)}")
    try:
        pairs = np.asarray(entries, dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise MatrixFormatError(f"entries must be [re, im] number pairs: {exc}") from None
    if pairs.shape != (m * n, 2):
        raise MatrixFormatError(f"entries must be [re, im] pairs, got shape {pairs.shape}")
    a = (pairs[:, 0] + 1j * pairs[:, 1]).reshape(m, n)
    if not np.any(pairs[:, 1]):
        a = a.real.copy()
    prov = dict(d.get("provenance") or {})
    for key in ("p", "construction", "params"):
        if d.get(key) is not None:
            prov.setdefault(key, d[key])
    return SensingMatrix(a, prov, d.get("claimed_coherence"))


def save_matrix(S: SensingMatrix, path) -> None:
    with open(path, "w") as fh:
        json.dump(matrix_to_dict(S), fh, separators=(",", ":"))
        fh.write("\n")


def load_matrix(path) -> SensingMatrix:
    with open(path) as fh:
        text = fh.read()
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFormatError(
            f"{path}: invalid JSON at line {exc.lineno} column {exc.colno} (offset {exc.pos}): {exc.msg}"
        ) from None
    if not isinstance(d, dict):
        raise MatrixFormatError(f"{path}: top level must be a JSON object")
    return matrix_from_dict(d)


def format_complex(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    sign = "-" if np.signbit(im) else "+"
    return f"{re!r}{sign}{abs(im)!r}j"


def save_matrix_csv(S: SensingMatrix, path) -> None:
    a = np.asarray(S.entries, dtype=np.complex128)
    with open(path, "w") as fh:
        for row in a:
            fh.write(",".join(format_complex(z) for z in row))
            fh.write("\n")


def load_matrix_csv(path) -> np.ndarray:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                rows.append([complex(cell) for cell in line.split(",")])
            except ValueError as exc:
                raise MatrixFormatError(f"{path}: line {lineno}: {exc}") from None
    return np.array(rows, dtype=np.complex128)
