"""Dense complex linear-algebra kernels shared by the rest of the package.

Everything here operates on plain numpy arrays with complex entries.  All
routines are pure functions with no shared mutable state, so they are safe
to call from concurrent evaluation batches.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ComputationError",
    "SingularTriplet",
    "as_square_matrix",
    "smallest_singular_triplet",
    "eigenvalues",
    "sigma_min_shifted",
    "sigma_min_shifted_many",
    "spectral_norm",
]


class ComputationError(RuntimeError):
    """A dense decomposition (SVD or eigensolve) failed to converge."""


def as_square_matrix(M) -> np.ndarray:
    """Validate ``M`` and return it as a square complex ndarray."""
    A = np.asarray(M, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] == 0:
        raise ValueError(f"expected a nonempty square matrix, got shape {A.shape}")
    if not (np.all(np.isfinite(A.real)) and np.all(np.isfinite(A.imag))):
        raise ValueError("matrix entries must all be finite")
    return A


@dataclass(frozen=True)
class SingularTriplet:
    """Smallest singular value of a matrix together with a consistent
    left/right singular vector pair: M v = sigma u and M^H u = sigma v.

    The phase of the vectors is whatever the SVD returned; consumers must
    only use phase-invariant products such as u^H v.
    """

    sigma: float
    left_vector: np.ndarray
    right_vector: np.ndarray


def smallest_singular_triplet(M) -> SingularTriplet:
    """Smallest singular triplet of a square matrix via a full SVD."""
    A = as_square_matrix(M)
    try:
        U, s, Vh = np.linalg.svd(A)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(
            f"SVD did not converge for a {A.shape[0]}x{A.shape[1]} matrix"
        ) from exc
    return SingularTriplet(float(s[-1]), U[:, -1].copy(), Vh[-1].conj().copy())


def eigenvalues(M) -> np.ndarray:
    """All eigenvalues of ``M``, multiplicities included, in no particular order."""
    A = as_square_matrix(M)
    try:
        return np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise ComputationError(
            f"eigensolver did not converge for a {A.shape[0]}x{A.shape[1]} matrix"
        ) from exc


def sigma_min_shifted(M, z: complex) -> float:
    """sigma_min(M - z I).

    Shares the full-SVD path of :func:`smallest_singular_triplet` so the
    two agree to the last bit; the values-only LAPACK driver can differ
    in the final ulp.
    """
    A = as_square_matrix(M)
    shifted = A - z * np.eye(A.shape[0], dtype=complex)
    return smallest_singular_triplet(shifted).sigma


def sigma_min_shifted_many(M, zs, chunk: int = 4096) -> np.ndarray:
    """sigma_min(M - z I) for every z in ``zs`` via stacked SVDs.

    Much faster than a Python loop for the dense grid scans used by the
    oracle and plot emission.
    """
    A = as_square_matrix(M)
    z = np.asarray(zs, dtype=complex).ravel()
    eye = np.eye(A.shape[0], dtype=complex)
    out = np.empty(z.size)
    for start in range(0, z.size, chunk):
        zz = z[start : start + chunk]
        stack = A[None, :, :] - zz[:, None, None] * eye[None, :, :]
        out[start : start + zz.size] = np.linalg.svd(stack, compute_uv=False)[:, -1]
    return out


def spectral_norm(M) -> float:
    """Largest singular value of ``M``."""
    A = as_square_matrix(M)
    return float(np.linalg.svd(A, compute_uv=False)[0])
