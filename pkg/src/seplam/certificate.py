"""Angular machinery for the globality certificate.

Given a search point z0 and a level eps, each angle theta defines a ray
(or a full line, the default) along which the eps-level regions of
sigma_min(A - zI) and sigma_min(B - zI) can be located exactly: the
crossing radii are imaginary eigenvalues of a structured 2k x 2k matrix
built from the problem data.  On top of the crossings this module builds
the three-branch certificate function whose sign over all angles decides
whether the two level regions have interior points in common.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import (
    ComputationError,
    as_square_matrix,
    sigma_min_shifted,
    sigma_min_shifted_many,
)

__all__ = [
    "SUM",
    "OVERLAP",
    "GAP",
    "BranchLogicError",
    "SearchFrame",
    "RayCrossings",
    "CertificateSample",
    "build_rotated_matrix",
    "pencil_matrices",
    "imaginary_crossings",
    "arg_min_sq",
    "overlap_measure",
    "boundary_gap",
    "certificate_value",
    "certificate_value_varah",
    "certificate_values",
    "certificate_values_varah",
    "negative_gap_clamps",
    "reset_negative_gap_clamps",
]

SUM = "SUM"
OVERLAP = "OVERLAP"
GAP = "GAP"

# merge tolerance for nearly coincident crossing radii
_DEDUP_RTOL = 1e-10
# intersections shorter than this are tangential touches, not overlap
_TOUCH_TOL = 1e-12

# diagnostic: how many times a gap value was clamped up to zero
_clamp_count = 0


def negative_gap_clamps() -> int:
    return _clamp_count


def reset_negative_gap_clamps() -> None:
    global _clamp_count
    _clamp_count = 0


class BranchLogicError(RuntimeError):
    """A certificate branch was entered with its preconditions violated."""


@dataclass(frozen=True)
class SearchFrame:
    """Search point and angular-domain conventions for certificate sampling.

    With ``use_lines`` the certificate is sampled over [0, pi] and each
    angle represents the full line through z0; otherwise angles in
    (-pi, pi] parameterize rays emanating from z0.
    """

    z0: complex
    use_lines: bool = True
    imag_axis_tol: float = 1e-8

    def __post_init__(self):
        if self.imag_axis_tol <= 0:
            raise ValueError("imag_axis_tol must be positive")

    def domain(self) -> tuple[float, float]:
        return (0.0, math.pi) if self.use_lines else (-math.pi, math.pi)


@dataclass(frozen=True)
class RayCrossings:
    """Sorted positive radii where a ray crosses the eps level set.

    ``inside[j]`` says whether the open interval (r_{j-1}, r_j) lies inside
    the eps-level region, with r_0 = 0 and r_{len} = +inf; the final
    interval is always outside because the level regions are bounded.
    """

    radii: np.ndarray
    inside: np.ndarray


@dataclass(frozen=True)
class CertificateSample:
    """One evaluation of the certificate: value, which branch fired, and
    (for the overlap branch) the boundary points of the overlap region
    along the ray, excluding z0."""

    theta: float
    value: float
    branch: str
    overlap_boundary: tuple[complex, ...] = ()


def build_rotated_matrix(M, eps: float, frame: SearchFrame, theta: float) -> np.ndarray:
    """The 2k x 2k rotated matrix whose imaginary eigenvalues i*r mark the
    radii where the eps level of sigma_min(M - zI) meets the ray at theta."""
    A = as_square_matrix(M)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    k = A.shape[0]
    eye = np.eye(k, dtype=complex)
    S = A - frame.z0 * eye
    em = np.exp(-1j * theta)
    ep = np.exp(1j * theta)
    top = np.hstack([em * S, -eps * em * eye])
    bot = np.hstack([-eps * ep * eye, ep * S.conj().T])
    return 1j * np.vstack([top, bot])


def pencil_matrices(M, eps: float, frame: SearchFrame, theta: float):
    """The generalized-eigenproblem form (C, D) equivalent to
    :func:`build_rotated_matrix`; D is unitary and diagonal, so the reduced
    standard problem is numerically equivalent."""
    A = as_square_matrix(M)
    k = A.shape[0]
    eye = np.eye(k, dtype=complex)
    S = A - frame.z0 * eye
    C = np.block([[S, -eps * eye], [eps * eye, -S.conj().T]])
    D = np.block(
        [
            [-1j * np.exp(1j * theta) * eye, np.zeros((k, k))],
            [np.zeros((k, k)), 1j * np.exp(-1j * theta) * eye],
        ]
    )
    return C, D


def _eigs(M, eps, frame, theta) -> np.ndarray:
    try:
        return np.linalg.eigvals(build_rotated_matrix(M, eps, frame, theta))
    except np.linalg.LinAlgError as exc:
        raise ComputationError("eigensolver failed on rotated certificate matrix") from exc


def _axis_radii(eigs: np.ndarray, tol: float) -> list[float]:
    """Signed radii r such that i*r is (numerically) an eigenvalue.

    Eigenvalues within the relative tolerance of the imaginary axis are
    snapped onto it; near-duplicates are merged."""
    mask = np.abs(eigs.real) <= tol * np.maximum(1.0, np.abs(eigs))
    rs = np.sort(eigs.imag[mask])
    out: list[float] = []
    for r in rs:
        if out and abs(r - out[-1]) <= _DEDUP_RTOL * (1.0 + abs(r)):
            continue
        out.append(float(r))
    return out


def _classify(M, eps, z0, theta, radii: list[float], lo_open: float) -> list[bool]:
    """Midpoint test for each interval between consecutive crossing radii.

    ``lo_open`` is 0.0 for a ray and -inf for a full line; the unbounded
    outer intervals are probed one unit beyond the extreme radius."""
    if not radii:
        return [False]
    dirn = np.exp(1j * theta)
    mids = []
    for j in range(len(radii) + 1):
        if j == 0:
            mids.append(radii[0] - 1.0 if lo_open == -np.inf else 0.5 * radii[0])
        elif j == len(radii):
            mids.append(radii[-1] + 1.0)
        else:
            mids.append(0.5 * (radii[j - 1] + radii[j]))
    sig = sigma_min_shifted_many(M, z0 + np.asarray(mids) * dirn)
    return [bool(s <= eps) for s in sig]


def _intervals_from_flags(radii, flags, lo_open) -> list[tuple[float, float]]:
    bounds = [lo_open] + list(radii) + [np.inf]
    out: list[tuple[float, float]] = []
    for j, inside in enumerate(flags):
        if not inside:
            continue
        lo, hi = bounds[j], bounds[j + 1]
        if out and out[-1][1] == lo:
            out[-1] = (out[-1][0], hi)
        else:
            out.append((lo, hi))
    return out


def _candidate_radii(M, eps, frame, theta, eigs=None) -> list[float]:
    """Unfiltered candidate radii: eps matches SOME singular value of the
    shifted matrix there, not necessarily the smallest."""
    if eigs is None:
        eigs = _eigs(M, eps, frame, theta)
    rs = _axis_radii(eigs, frame.imag_axis_tol)
    if not frame.use_lines:
        rs = [r for r in rs if r > 0]
    return rs


def _level_tol(eps: float, r: float) -> float:
    return 1e-8 * (1.0 + eps + abs(r))


def _crossing_radii(M, eps, frame, theta, eigs=None) -> list[float]:
    """Radii where the ray (positive r) or line (signed r) meets the eps
    level set of sigma_min(M - zI).

    Candidates where eps equals a larger singular value are discarded by
    a direct sigma_min check; sigma_min is 1-Lipschitz along the ray, so
    the tolerance only has to absorb the eigensolver's radius error."""
    rs = _candidate_radii(M, eps, frame, theta, eigs=eigs)
    if not rs:
        return rs
    zs = frame.z0 + np.asarray(rs) * np.exp(1j * theta)
    sig = sigma_min_shifted_many(M, zs)
    return [r for r, s in zip(rs, sig) if abs(s - eps) <= _level_tol(eps, r)]


def _inside_intervals(M, eps, frame, theta, eigs=None):
    rs = _crossing_radii(M, eps, frame, theta, eigs=eigs)
    lo_open = -np.inf if frame.use_lines else 0.0
    flags = _classify(M, eps, frame.z0, theta, rs, lo_open)
    return rs, _intervals_from_flags(rs, flags, lo_open)


def imaginary_crossings(M, eps: float, frame: SearchFrame, theta: float) -> RayCrossings:
    """All radii r > 0 where the ray from z0 at angle theta meets the eps
    level set of sigma_min(M - zI), with inside/outside interval flags."""
    ray = frame if not frame.use_lines else SearchFrame(frame.z0, False, frame.imag_axis_tol)
    rs = _crossing_radii(M, eps, ray, theta)
    flags = _classify(M, eps, frame.z0, theta, rs, 0.0)
    return RayCrossings(np.asarray(rs, dtype=float), np.asarray(flags, dtype=bool))


def _arg_min_sq_from_eigs(eigs: np.ndarray, frame: SearchFrame) -> float:
    lam = np.where(
        np.abs(eigs.real) <= frame.imag_axis_tol * np.maximum(1.0, np.abs(eigs)),
        1j * eigs.imag,
        eigs,
    )
    lam = lam[(lam.real <= 0) & (np.abs(lam) > 0)]
    if lam.size == 0:
        return math.pi**2
    ang = np.angle(-1j * lam) ** 2
    if frame.use_lines:
        # a line also covers the opposite direction, reached by flipping
        # the sign of the imaginary parts
        ang = np.minimum(ang, np.angle(-1j * np.conj(lam)) ** 2)
    return float(np.min(ang))


def arg_min_sq(M, eps: float, frame: SearchFrame, theta: float) -> float:
    """Squared minimal angular deviation of the rotated matrix's spectrum
    from the positive imaginary axis; zero exactly when the ray (or line)
    meets the eps-level region."""
    return _arg_min_sq_from_eigs(_eigs(M, eps, frame, theta), frame)


def _intersect(ints1, ints2) -> list[tuple[float, float]]:
    out = []
    i = j = 0
    while i < len(ints1) and j < len(ints2):
        lo = max(ints1[i][0], ints2[j][0])
        hi = min(ints1[i][1], ints2[j][1])
        if hi > lo:
            out.append((lo, hi))
        if ints1[i][1] <= ints2[j][1]:
            i += 1
        else:
            j += 1
    return out


def _overlap(A, B, epsA, epsB, frame, theta, eigsA=None, eigsB=None):
    _, intsA = _inside_intervals(A, epsA, frame, theta, eigs=eigsA)
    _, intsB = _inside_intervals(B, epsB, frame, theta, eigs=eigsB)
    total = 0.0
    boundary: list[complex] = []
    dirn = np.exp(1j * theta)
    for lo, hi in _intersect(intsA, intsB):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            # a misclassified unbounded interval; contributes no usable
            # boundary points and would make the measure meaningless
            continue
        if hi - lo <= _TOUCH_TOL * (1.0 + abs(lo) + abs(hi)):
            continue
        total += hi - lo
        for r in (lo, hi):
            if abs(r) > _TOUCH_TOL:
                boundary.append(complex(frame.z0 + r * dirn))
    return -total, boundary


def overlap_measure(A, B, epsA: float, epsB: float, frame: SearchFrame, theta: float):
    """Negative total length of the ray's intersection with both level
    regions, plus the interval endpoints as points in the plane."""
    return _overlap(A, B, epsA, epsB, frame, theta)


def _raw_gap(A, B, epsA, epsB, frame, theta, radiiA, radiiB) -> float:
    if not radiiA or not radiiB:
        raise BranchLogicError(
            "gap branch entered with an empty crossing set; branch selection bug"
        )
    dirn = np.exp(1j * theta)
    dA = float(np.min(sigma_min_shifted_many(A, frame.z0 + np.asarray(radiiB) * dirn))) - epsA
    dB = float(np.min(sigma_min_shifted_many(B, frame.z0 + np.asarray(radiiA) * dirn))) - epsB
    return min(dA, dB)


def _clamp_gap(val: float) -> float:
    global _clamp_count
    if val < 0.0:
        # rounding at the branch boundary; the true value is nonnegative here
        _clamp_count += 1
        val = 0.0
    return val


def boundary_gap(A, B, epsA: float, epsB: float, frame: SearchFrame, theta: float) -> float:
    """How far the two level regions are from sharing a boundary point
    along the ray: min over each region's crossing radii of the other
    matrix's sigma_min deficit."""
    radiiA = _crossing_radii(A, epsA, frame, theta)
    radiiB = _crossing_radii(B, epsB, frame, theta)
    return _clamp_gap(_raw_gap(A, B, epsA, epsB, frame, theta, radiiA, radiiB))


def certificate_value_varah(
    A, B, eps1: float, eps2: float, frame: SearchFrame, theta: float
) -> CertificateSample:
    """The three-branch certificate with independent levels for A and B."""
    eigsA = _eigs(A, eps1, frame, theta)
    a = _arg_min_sq_from_eigs(eigsA, frame)
    eigsB = _eigs(B, eps2, frame, theta)
    b = _arg_min_sq_from_eigs(eigsB, frame)
    if a + b > 0.0:
        return CertificateSample(theta, a + b, SUM)
    candA = _candidate_radii(A, eps1, frame, theta, eigs=eigsA)
    candB = _candidate_radii(B, eps2, frame, theta, eigs=eigsB)
    if not candA or not candB:
        raise BranchLogicError(
            "gap branch entered with an empty crossing set; branch selection bug"
        )
    # one sigma_min batch per matrix over the union of candidate radii
    # serves both the level-set filter and the boundary-gap minimum
    nA = len(candA)
    union = np.asarray(candA + candB)
    zs = frame.z0 + union * np.exp(1j * theta)
    sigA = sigma_min_shifted_many(A, zs)
    sigB = sigma_min_shifted_many(B, zs)
    tolA = np.array([_level_tol(eps1, r) for r in union])
    tolB = np.array([_level_tol(eps2, r) for r in union])
    onA = np.abs(sigA - eps1) <= tolA
    onB = np.abs(sigB - eps2) <= tolB
    radiiA = [r for r, keep in zip(candA, onA[:nA]) if keep]
    radiiB = [r for r, keep in zip(candB, onB[nA:]) if keep]
    if not radiiA or not radiiB:
        raise BranchLogicError(
            "gap branch entered with an empty crossing set; branch selection bug"
        )
    dA = float(np.min(sigA[nA:][onB[nA:]])) - eps1
    dB = float(np.min(sigB[:nA][onA[:nA]])) - eps2
    raw = min(dA, dB)
    if raw > 0.0:
        # a strictly positive gap already rules out overlap: any overlap
        # interval endpoint is a crossing of one region lying inside the
        # other, which would force the gap to be nonpositive
        return CertificateSample(theta, raw, GAP)
    lo_open = -np.inf if frame.use_lines else 0.0
    intsA = _intervals_from_flags(radiiA, _classify(A, eps1, frame.z0, theta, radiiA, lo_open), lo_open)
    intsB = _intervals_from_flags(radiiB, _classify(B, eps2, frame.z0, theta, radiiB, lo_open), lo_open)
    total = 0.0
    boundary: list[complex] = []
    dirn = np.exp(1j * theta)
    for lo, hi in _intersect(intsA, intsB):
        if not (np.isfinite(lo) and np.isfinite(hi)):
            continue
        if hi - lo <= _TOUCH_TOL * (1.0 + abs(lo) + abs(hi)):
            continue
        total += hi - lo
        for r in (lo, hi):
            if abs(r) > _TOUCH_TOL:
                boundary.append(complex(frame.z0 + r * dirn))
    if total > 0.0:
        return CertificateSample(theta, -total, OVERLAP, tuple(boundary))
    return CertificateSample(theta, _clamp_gap(raw), GAP)


def certificate_value(A, B, eps: float, frame: SearchFrame, theta: float) -> CertificateSample:
    """The certificate with a single shared level eps for both matrices."""
    return certificate_value_varah(A, B, eps, eps, frame, theta)


def _rotated_stack(M, eps, frame, thetas: np.ndarray) -> np.ndarray:
    """Stacked rotated matrices for all thetas at once, assembled with the
    same elementwise products as :func:`build_rotated_matrix` so the two
    agree to the bit."""
    A = as_square_matrix(M)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    k = A.shape[0]
    S = A - frame.z0 * np.eye(k, dtype=complex)
    em = np.exp(-1j * thetas)
    ep = np.exp(1j * thetas)
    out = np.zeros((thetas.size, 2 * k, 2 * k), dtype=complex)
    out[:, :k, :k] = 1j * (em[:, None, None] * S)
    out[:, k:, k:] = 1j * (ep[:, None, None] * S.conj().T)
    d = np.arange(k)
    out[:, d, k + d] = (1j * (-eps * em))[:, None]
    out[:, k + d, d] = (1j * (-eps * ep))[:, None]
    return out


def _arg_min_sq_rows(eigs: np.ndarray, frame: SearchFrame) -> np.ndarray:
    """Row-wise version of :func:`_arg_min_sq_from_eigs` for a stack of
    eigenvalue sets."""
    snap = np.abs(eigs.real) <= frame.imag_axis_tol * np.maximum(1.0, np.abs(eigs))
    lam = np.where(snap, 1j * eigs.imag, eigs)
    valid = (lam.real <= 0) & (np.abs(lam) > 0)
    ang = np.angle(-1j * lam) ** 2
    if frame.use_lines:
        ang = np.minimum(ang, np.angle(-1j * np.conj(lam)) ** 2)
    ang = np.where(valid, ang, np.inf)
    out = np.min(ang, axis=1)
    return np.where(np.isfinite(out), out, math.pi**2)


def certificate_values_varah(
    A, B, eps1: float, eps2: float, frame: SearchFrame, thetas
) -> list[CertificateSample]:
    """Batched :func:`certificate_value_varah` over many angles.

    One stacked eigensolve covers every angle for both matrices and a
    single sigma_min batch per matrix serves all the non-sum angles, so
    the per-angle Python and LAPACK call overhead is paid once per batch.
    Angles that reach the interval-classification branch fall back to the
    scalar path; every returned sample matches the scalar function.
    """
    thetas = np.asarray(thetas, dtype=float).ravel()
    m = thetas.size
    if m == 0:
        return []
    stacked = np.concatenate(
        [_rotated_stack(A, eps1, frame, thetas), _rotated_stack(B, eps2, frame, thetas)]
    )
    try:
        eigs = np.linalg.eigvals(stacked)
    except np.linalg.LinAlgError as exc:
        raise ComputationError("eigensolver failed on rotated certificate matrix") from exc
    eigsA, eigsB = eigs[:m], eigs[m:]
    a = _arg_min_sq_rows(eigsA, frame)
    b = _arg_min_sq_rows(eigsB, frame)

    out: list[CertificateSample | None] = [None] * m
    hard: list[int] = []
    for i in range(m):
        s = a[i] + b[i]
        if s > 0.0:
            out[i] = CertificateSample(float(thetas[i]), float(s), SUM)
        else:
            hard.append(i)
    if not hard:
        return out

    cands: list[tuple[list[float], list[float]]] = []
    z_parts: list[np.ndarray] = []
    for i in hard:
        candA = _axis_radii(eigsA[i], frame.imag_axis_tol)
        candB = _axis_radii(eigsB[i], frame.imag_axis_tol)
        if not frame.use_lines:
            candA = [r for r in candA if r > 0]
            candB = [r for r in candB if r > 0]
        if not candA or not candB:
            raise BranchLogicError(
                "gap branch entered with an empty crossing set; branch selection bug"
            )
        cands.append((candA, candB))
        z_parts.append(frame.z0 + np.asarray(candA + candB) * np.exp(1j * thetas[i]))
    z_all = np.concatenate(z_parts)
    sigA_all = sigma_min_shifted_many(A, z_all)
    sigB_all = sigma_min_shifted_many(B, z_all)

    pos = 0
    for i, (candA, candB) in zip(hard, cands):
        nA = len(candA)
        n_u = nA + len(candB)
        sigA = sigA_all[pos : pos + n_u]
        sigB = sigB_all[pos : pos + n_u]
        pos += n_u
        union = candA + candB
        onA = np.array([abs(s - eps1) <= _level_tol(eps1, r) for s, r in zip(sigA, union)])
        onB = np.array([abs(s - eps2) <= _level_tol(eps2, r) for s, r in zip(sigB, union)])
        if not (onA[:nA].any() and onB[nA:].any()):
            raise BranchLogicError(
                "gap branch entered with an empty crossing set; branch selection bug"
            )
        dA = float(np.min(sigA[nA:][onB[nA:]])) - eps1
        dB = float(np.min(sigB[:nA][onA[:nA]])) - eps2
        raw = min(dA, dB)
        if raw > 0.0:
            out[i] = CertificateSample(float(thetas[i]), raw, GAP)
        else:
            # near the branch boundary the scalar path classifies the
            # inside intervals; this is rare, so recomputing is cheap
            out[i] = certificate_value_varah(A, B, eps1, eps2, frame, float(thetas[i]))
    return out


def certificate_values(A, B, eps: float, frame: SearchFrame, thetas) -> list[CertificateSample]:
    """Batched :func:`certificate_value` with a single shared level."""
    return certificate_values_varah(A, B, eps, eps, frame, thetas)
