"""Matrix file ingestion and writing.

Two formats are read: Matrix Market (array or coordinate, any numeric
field, symmetric variants expanded) and plain CSV whose entries are
complex numbers written like ``1.5-2i``.  Writing targets array-format
Matrix Market with enough digits that a float64 round trip is exact.
"""

from __future__ import annotations

import os

import numpy as np
import scipy.io
import scipy.sparse

from .linalg import as_square_matrix

__all__ = ["MatrixInputError", "read_matrix", "write_matrix_mm"]


class MatrixInputError(ValueError):
    """A matrix file is missing, malformed, or not square."""


def _parse_csv(path: str) -> np.ndarray:
    rows = []
    width = None
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            entries = []
            for tok in line.split(","):
                tok = tok.strip().replace(" ", "")
                try:
                    entries.append(complex(tok.replace("i", "j")))
                except ValueError:
                    raise MatrixInputError(
                        f"{path}:{lineno}: cannot parse entry {tok!r} as a complex number"
                    ) from None
            if width is None:
                width = len(entries)
            elif len(entries) != width:
                raise MatrixInputError(
                    f"{path}:{lineno}: row has {len(entries)} entries, expected {width}"
                )
            rows.append(entries)
    if not rows:
        raise MatrixInputError(f"{path}: no matrix data found")
    return np.array(rows, dtype=complex)


def read_matrix(path: str) -> np.ndarray:
    """Read a dense square complex matrix from Matrix Market or CSV."""
    if not os.path.isfile(path):
        raise MatrixInputError(f"matrix file not found: {path}")
    with open(path, "rb") as fh:
        head = fh.read(14)
    if head.startswith(b"%%MatrixMarket"):
        try:
            M = scipy.io.mmread(path)
        except ValueError as exc:
            raise MatrixInputError(f"{path}: invalid Matrix Market file: {exc}") from exc
        if scipy.sparse.issparse(M):
            M = M.toarray()
        M = np.asarray(M, dtype=complex)
    else:
        M = _parse_csv(path)
    try:
        return as_square_matrix(M)
    except ValueError as exc:
        raise MatrixInputError(f"{path}: {exc}") from exc


def write_matrix_mm(path: str, M) -> None:
    """Write array-format Matrix Market, complex general, column-major.

    17 significant digits, so reading the file back reproduces the
    float64 entries bit for bit.
    """
    A = as_square_matrix(M)
    m, n = A.shape
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("%%MatrixMarket matrix array complex general\n")
        fh.write(f"{m} {n}\n")
        for j in range(n):
            for i in range(m):
                v = A[i, j]
                fh.write(f"{v.real:.16e} {v.imag:.16e}\n")
