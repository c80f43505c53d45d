"""Adaptive piecewise-Chebyshev approximation over an angular domain.

The fitter samples a scalar function of theta at nested Chebyshev-Lobatto
nodes, doubling the degree until the coefficient tail is small, and
bisecting the interval when degree 128 is still not enough.  It aborts
immediately when any sample lands on the overlap branch of the
certificate, since a single negative sample already yields restart
points and finishing the fit would be wasted work.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numpy.polynomial import chebyshev as C

from .certificate import OVERLAP, SUM, CertificateSample

__all__ = [
    "Piece",
    "PiecewiseInterpolant",
    "FitOutcome",
    "FitBudgetError",
    "fit_adaptive",
    "global_min",
    "evaluate",
]

_DEGREES = (8, 16, 32, 64, 128)
_MAX_DEGREE = _DEGREES[-1]
_MAX_DEPTH = 30
# Lobatto nodes of the finest degree; coarser node sets are strided views,
# so refining a piece reuses every sample already taken on it
_MASTER = np.cos(np.arange(_MAX_DEGREE + 1) * np.pi / _MAX_DEGREE)


class FitBudgetError(RuntimeError):
    """Sample budget exhausted before the fit converged.

    Carries whatever was assembled so far in ``partial`` (may be None)
    and the number of samples spent.
    """

    def __init__(self, message: str, partial, samples_used: int):
        super().__init__(message)
        self.partial = partial
        self.samples_used = samples_used


@dataclass(frozen=True)
class Piece:
    lo: float
    hi: float
    coef: np.ndarray
    error: float
    over_tolerance: bool = False

    def to_local(self, theta):
        return (2.0 * np.asarray(theta) - self.lo - self.hi) / (self.hi - self.lo)

    def __call__(self, theta):
        return C.chebval(self.to_local(theta), self.coef)


@dataclass(frozen=True)
class PiecewiseInterpolant:
    """Pieces with pairwise-disjoint interiors covering [domain_lo, domain_hi]."""

    pieces: tuple[Piece, ...]
    domain_lo: float
    domain_hi: float
    n_samples: int

    def piece_for(self, theta: float) -> Piece:
        if not (self.domain_lo <= theta <= self.domain_hi):
            raise ValueError(f"theta {theta} outside domain [{self.domain_lo}, {self.domain_hi}]")
        for p in self.pieces:
            if theta <= p.hi:
                return p
        return self.pieces[-1]


@dataclass(frozen=True)
class FitOutcome:
    """Either a converged interpolant or an abort witness, never both."""

    converged: bool
    interpolant: PiecewiseInterpolant | None = None
    witness: CertificateSample | None = None
    samples: tuple[CertificateSample, ...] = field(default=())
    n_samples: int = 0


def _as_sample(theta: float, raw) -> CertificateSample:
    if isinstance(raw, CertificateSample):
        return raw
    v = float(raw)
    return CertificateSample(theta, v, OVERLAP if v < 0 else SUM)


def _trim(coef: np.ndarray, cutoff: float) -> np.ndarray:
    """Drop the trailing coefficients that sit below ``cutoff``; they are
    noise at the accepted accuracy and only slow down root finding."""
    keep = np.nonzero(np.abs(coef) > cutoff)[0]
    n = int(keep[-1]) + 1 if keep.size else 1
    return coef[:n].copy()


def _cheb_coeffs(values: np.ndarray) -> np.ndarray:
    """First-kind Chebyshev coefficients from values at Lobatto nodes
    cos(j*pi/n), j = 0..n (descending in x)."""
    n = values.size - 1
    j = np.arange(n + 1)
    T = np.cos(np.outer(j, j) * (np.pi / n))
    w = np.ones(n + 1)
    w[0] = w[-1] = 0.5
    c = (2.0 / n) * (T @ (values * w))
    c[0] *= 0.5
    c[-1] *= 0.5
    return c


def fit_adaptive(f, domain, tol: float, max_samples: int = 100_000, map_fn=map) -> FitOutcome:
    """Fit ``f`` over ``domain`` to tolerance ``tol``.

    ``f`` maps theta to a CertificateSample or a bare float (floats are
    wrapped, negatives counting as overlap).  Returns a converged
    interpolant, or aborts with the first overlap witness.  Pieces that
    still miss the tolerance at degree 128 and maximum bisection depth
    are kept with ``over_tolerance`` set so callers can probe them more
    carefully.  ``map_fn`` lets callers evaluate each batch concurrently;
    results are consumed in theta order either way, so the outcome does
    not depend on scheduling.
    """
    lo, hi = float(domain[0]), float(domain[1])
    if not hi > lo:
        raise ValueError("empty fit domain")
    if tol <= 0:
        raise ValueError("fit tolerance must be positive")

    all_samples: list[CertificateSample] = []
    count = 0
    vscale = 0.0
    pieces: list[Piece] = []
    # left-to-right worklist keeps piece order and sample order deterministic
    stack: list[tuple[float, float, int, float | None]] = [(lo, hi, 0, None)]

    while stack:
        a, b, depth, parent_err8 = stack.pop()
        cache: dict[int, CertificateSample] = {}
        accepted = None
        err_prev = None
        err8 = None
        for deg in _DEGREES:
            stride = _MAX_DEGREE // deg
            idx = range(0, _MAX_DEGREE + 1, stride)
            new_idx = [j for j in idx if j not in cache]
            if count + len(new_idx) > max_samples:
                raise FitBudgetError(
                    f"certificate fit exceeded the {max_samples}-sample budget",
                    _assemble(pieces, lo, hi, count) if pieces else None,
                    count,
                )
            thetas = 0.5 * (a + b) + 0.5 * (b - a) * _MASTER[new_idx]
            # the whole batch is evaluated before any overlap check so the
            # chosen witness does not depend on evaluation interleaving
            batch = [_as_sample(float(t), r) for t, r in zip(thetas, map_fn(f, thetas))]
            count += len(batch)
            all_samples.extend(batch)
            overlaps = [s for s in batch if s.branch == OVERLAP]
            if overlaps:
                witness = min(overlaps, key=lambda s: (s.value, s.theta))
                return FitOutcome(
                    converged=False,
                    witness=witness,
                    samples=tuple(all_samples),
                    n_samples=count,
                )
            for j, s in zip(new_idx, batch):
                cache[j] = s
            values = np.array([cache[j].value for j in idx])
            coef = _cheb_coeffs(values)
            err = max(abs(coef[-1]), abs(coef[-2]))
            vscale = max(vscale, float(np.max(np.abs(values))))
            if err <= tol * max(1.0, vscale):
                # the top-level piece is confirmed through the full node
                # set even when a low degree already looks converged, so
                # narrow features cannot hide between sparse samples; the
                # nested nodes make this a one-time cost per fit
                if depth > 0 or deg == _MAX_DEGREE:
                    cutoff = max(err, 100 * np.finfo(float).eps * max(1.0, vscale))
                    accepted = Piece(a, b, _trim(coef, cutoff), err)
                    break
                if deg == _DEGREES[0]:
                    err8 = err
                err_prev = err
                continue
            # stalled coefficient decay means a nonsmooth point inside the
            # piece; bisecting now is far cheaper than sampling up to the
            # top degree first.  Decay is judged both against the previous
            # degree and against the parent piece at the same degree.
            if depth < _MAX_DEPTH:
                if deg == _DEGREES[0]:
                    err8 = err
                    if parent_err8 is not None and err > 0.25 * parent_err8:
                        break
                elif err_prev is not None and err > 0.25 * err_prev:
                    break
            err_prev = err
        if accepted is None:
            if depth >= _MAX_DEPTH:
                accepted = Piece(a, b, coef, err, over_tolerance=True)
            else:
                mid = 0.5 * (a + b)
                stack.append((mid, b, depth + 1, err8))
                stack.append((a, mid, depth + 1, err8))
                continue
        pieces.append(accepted)

    pieces.sort(key=lambda p: p.lo)
    return FitOutcome(
        converged=True,
        interpolant=_assemble(pieces, lo, hi, count),
        samples=tuple(all_samples),
        n_samples=count,
    )


def _assemble(pieces, lo, hi, count) -> PiecewiseInterpolant:
    return PiecewiseInterpolant(tuple(sorted(pieces, key=lambda p: p.lo)), lo, hi, count)


def global_min(p: PiecewiseInterpolant) -> list[tuple[float, float]]:
    """Critical points of every piece plus piece endpoints, sorted
    ascending by value (ties broken by theta)."""
    cands: list[tuple[float, float]] = []
    seen = set()

    def add(piece: Piece, x: float):
        theta = 0.5 * (piece.lo + piece.hi) + 0.5 * (piece.hi - piece.lo) * x
        theta = min(max(theta, piece.lo), piece.hi)
        key = round(theta, 14)
        if key in seen:
            return
        seen.add(key)
        cands.append((theta, float(C.chebval(piece.to_local(theta), piece.coef))))

    for piece in p.pieces:
        add(piece, -1.0)
        add(piece, 1.0)
        if piece.coef.size > 2:
            der = C.chebder(piece.coef)
            roots = C.chebroots(der)
            for r in roots:
                if abs(r.imag) <= 1e-10 and -1.0 - 1e-10 <= r.real <= 1.0 + 1e-10:
                    add(piece, float(np.clip(r.real, -1.0, 1.0)))
    cands.sort(key=lambda tv: (tv[1], tv[0]))
    return cands


def evaluate(p: PiecewiseInterpolant, theta: float) -> float:
    """Clenshaw evaluation of the piece that owns ``theta``."""
    return float(p.piece_for(theta)(theta))
