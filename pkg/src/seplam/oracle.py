"""Brute-force reference computations for testing.

Nothing here is fast or clever on purpose: the point is to provide
independent answers (dense grid scans, pairwise eigenvalue distances)
that the main algorithm can be checked against.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.optimize

from .certificate import SearchFrame, certificate_value_varah
from .linalg import eigenvalues, sigma_min_shifted_many
from .objective import DEMMEL, VARAH

__all__ = ["GridSpec", "bounding_spec", "grid_min", "normal_sep", "theta_scan"]


@dataclass(frozen=True)
class GridSpec:
    center: complex
    half_width: float
    points_per_axis: int = 401
    zoom_rounds: int = 3
    zoom_factor: float = 10.0

    def __post_init__(self):
        if self.points_per_axis < 16:
            raise ValueError("points_per_axis must be at least 16")
        if self.zoom_factor <= 1:
            raise ValueError("zoom_factor must exceed 1")


def bounding_spec(A, B, points_per_axis=401, zoom_rounds=3, zoom_factor=10.0) -> GridSpec:
    """A grid centered at the spectral mean, wide enough that the
    minimizer of either objective cannot fall outside it."""
    eigs = np.concatenate([eigenvalues(A), eigenvalues(B)])
    center = complex(np.mean(eigs))
    radius = float(np.max(np.abs(eigs - center))) if eigs.size else 1.0
    return GridSpec(center, radius + max(1.0, radius), points_per_axis, zoom_rounds, zoom_factor)


def _objective_on_grid(A, B, variant, zs):
    sa = sigma_min_shifted_many(A, zs)
    sb = sigma_min_shifted_many(B, zs)
    if variant == VARAH:
        return sa + sb
    if variant != DEMMEL:
        raise ValueError(f"unknown variant {variant!r}")
    return np.maximum(sa, sb)


# per-axis resolution of the zoom grids and caps keeping the search finite
_ZOOM_N = 65
_MAX_CANDIDATES = 12
_MAX_SUBCANDIDATES = 4
_MAX_ZOOM_GRIDS = 25


def _grid_eval(A, B, variant, center, half, n):
    xs = np.linspace(center.real - half, center.real + half, n)
    ys = np.linspace(center.imag - half, center.imag + half, n)
    X, Y = np.meshgrid(xs, ys)
    zs = (X + 1j * Y).ravel()
    return zs, _objective_on_grid(A, B, variant, zs)


def _candidates(zs, vals, spacing, cap):
    """Grid points that can still hide the window minimum.

    The objective is 1-Lipschitz and any point of the window lies within
    half a cell diagonal (at most 0.71 * spacing) of some grid point, so
    only points with a value that close to the sampled minimum qualify;
    near-duplicates within two cells collapse to the best one."""
    order = np.argsort(vals, kind="stable")
    vmin = float(vals[order[0]])
    out: list[complex] = []
    for idx in order:
        if vals[idx] > vmin + 0.75 * spacing:
            break
        z = complex(zs[idx])
        if all(abs(z - c) > 2.0 * spacing for c in out):
            out.append(z)
        if len(out) >= cap:
            break
    return out


def grid_min(A, B, variant, spec: GridSpec) -> tuple[complex, float]:
    """Exhaustive coarse grid followed by recursive zooming around every
    point that could still hide the minimum at the current resolution.

    Each zoom level shrinks the window by the spec's zoom factor and
    re-applies the Lipschitz screening, so a narrow basin is not lost to
    a marginally lower sample in a neighboring one.  Ties resolve to the
    first grid index and the worklist order is fixed, so the result is
    deterministic."""
    center = complex(spec.center)
    half = float(spec.half_width)
    zs, vals = _grid_eval(A, B, variant, center, half, spec.points_per_axis)
    k = int(np.argmin(vals))
    best_z, best_v = complex(zs[k]), float(vals[k])
    h = 2.0 * half / (spec.points_per_axis - 1)

    # every coarse candidate gets its own refinement budget, so one
    # candidate with a bushy subtree cannot starve the others; a
    # derivative-free polish then settles each refined point onto the
    # floor of its basin
    for c0 in _candidates(zs, vals, h, _MAX_CANDIDATES):
        work = [(c0, 2.0 * h, spec.zoom_rounds)]
        grids = 0
        cand_z, cand_v = c0, np.inf
        while work and grids < _MAX_ZOOM_GRIDS:
            c, w, rounds = work.pop()
            zs, vals = _grid_eval(A, B, variant, c, w, _ZOOM_N)
            grids += 1
            k = int(np.argmin(vals))
            if vals[k] < cand_v:
                cand_z, cand_v = complex(zs[k]), float(vals[k])
            if rounds <= 0:
                continue
            spacing = 2.0 * w / (_ZOOM_N - 1)
            for sub in reversed(_candidates(zs, vals, spacing, _MAX_SUBCANDIDATES)):
                work.append((sub, w / spec.zoom_factor, rounds - 1))
        cand_z, cand_v = _polish(A, B, variant, cand_z, cand_v)
        if cand_v < best_v:
            best_z, best_v = cand_z, cand_v
    return best_z, best_v


def _polish(A, B, variant, z: complex, v: float) -> tuple[complex, float]:
    """Nelder-Mead descent from a grid point to the floor of its basin;
    never returns a worse value than it was given."""

    def f(xy):
        return float(_objective_on_grid(A, B, variant, np.array([complex(*xy)]))[0])

    res = scipy.optimize.minimize(
        f,
        np.array([z.real, z.imag]),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": 1e-13, "maxiter": 600},
    )
    if res.fun < v:
        return complex(res.x[0], res.x[1]), float(res.fun)
    return z, v


def normal_sep(eigsA, eigsB, variant=DEMMEL) -> float:
    """Exact separation for normal matrices given their spectra: the
    minimum pairwise eigenvalue distance (sum variant) or half of it
    (max variant)."""
    a = np.asarray(list(eigsA), dtype=complex)
    b = np.asarray(list(eigsB), dtype=complex)
    if a.size == 0 or b.size == 0:
        raise ValueError("spectra must be nonempty")
    gap = float(np.min(np.abs(a[:, None] - b[None, :])))
    return gap if variant == VARAH else 0.5 * gap


def theta_scan(A, B, eps, frame: SearchFrame, n_points: int = 4096, interval=None):
    """Uniform angular scan of the certificate.

    ``eps`` is a single level or an (epsA, epsB) pair.  Returns the
    minimizing angle, the minimum value, and the full sample list.
    """
    if n_points < 256:
        raise ValueError("n_points must be at least 256")
    eps1, eps2 = eps if isinstance(eps, (tuple, list)) else (eps, eps)
    lo, hi = interval if interval is not None else frame.domain()
    thetas = np.linspace(lo, hi, n_points)
    samples = [certificate_value_varah(A, B, eps1, eps2, frame, float(t)) for t in thetas]
    k = int(np.argmin([s.value for s in samples]))
    return samples[k].theta, samples[k].value, samples
