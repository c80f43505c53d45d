"""Optimization objectives over z = x + iy and a nonsmooth local minimizer.

Two objectives are supported: the max of the two shifted smallest
singular values (variant DEMMEL) and their sum (variant VARAH).  Both
are globally Lipschitz but nonsmooth, so the minimizer is BFGS with a
weak-Wolfe line search, which handles kinks well in practice as long as
every accepted step decreases the function.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .linalg import as_square_matrix, smallest_singular_triplet

__all__ = [
    "DEMMEL",
    "VARAH",
    "ObjectiveEval",
    "LocalMinResult",
    "eval_objective",
    "minimize_local",
]

DEMMEL = "demmel"
VARAH = "varah"

# branch tie tolerance for the max objective, relative to the larger sigma
_TIE_RTOL = 1e-14
_MAX_ITER = 500


@dataclass(frozen=True)
class ObjectiveEval:
    """One objective evaluation: value, gradient in (x, y), which matrix
    attained the max (A, B, or TIE; sum variant reports TIE never), the
    two singular values, and the per-matrix branch gradients."""

    value: float
    gradient: np.ndarray
    active: str
    sigma_a: float
    sigma_b: float
    grad_a: np.ndarray
    grad_b: np.ndarray


@dataclass(frozen=True)
class LocalMinResult:
    z_star: complex
    value: float
    iterations: int
    converged: bool
    evaluations: int


def _sigma_grad(M: np.ndarray, z: complex):
    """sigma_min(M - zI) and its gradient wrt (Re z, Im z).

    With u, v the left/right singular vectors of M - zI, the derivative
    of sigma along dz is -Re(conj(dz) u^H v); the phase ambiguity of the
    vectors cancels in the product."""
    k = M.shape[0]
    trip = smallest_singular_triplet(M - z * np.eye(k, dtype=complex))
    w = np.vdot(trip.left_vector, trip.right_vector)
    return trip.sigma, np.array([-w.real, w.imag])


def eval_objective(A, B, z: complex, variant: str = DEMMEL) -> ObjectiveEval:
    A = as_square_matrix(A)
    B = as_square_matrix(B)
    sa, ga = _sigma_grad(A, z)
    sb, gb = _sigma_grad(B, z)
    if variant == VARAH:
        return ObjectiveEval(sa + sb, ga + gb, "SUM", sa, sb, ga, gb)
    if variant != DEMMEL:
        raise ValueError(f"unknown variant {variant!r}")
    if abs(sa - sb) <= _TIE_RTOL * max(sa, sb):
        return ObjectiveEval(max(sa, sb), ga, "TIE", sa, sb, ga, gb)
    if sa >= sb:
        return ObjectiveEval(sa, ga, "A", sa, sb, ga, gb)
    return ObjectiveEval(sb, gb, "B", sa, sb, ga, gb)


def _stationarity(fe: ObjectiveEval, variant: str) -> float:
    """First-order measure: gradient norm, or near a tie of the max
    objective the norm of the minimum-norm convex combination of the two
    branch gradients (zero in that hull means Clarke-stationary)."""
    if variant == DEMMEL and abs(fe.sigma_a - fe.sigma_b) <= 1e-8 * max(
        1.0, fe.sigma_a, fe.sigma_b
    ):
        d = fe.grad_b - fe.grad_a
        dd = float(d @ d)
        t = 0.5 if dd == 0.0 else float(np.clip(-(fe.grad_a @ d) / dd, 0.0, 1.0))
        return float(np.linalg.norm(fe.grad_a + t * d))
    return float(np.linalg.norm(fe.gradient))


def _weak_wolfe(fn, x, fe0, d, c1=1e-4, c2=0.5, max_bisect=60):
    """Weak-Wolfe bisection line search for nonsmooth functions.

    Returns (step, evaluation, n_evals) or (None, None, n_evals) if no
    decreasing step was found.  When the curvature condition never holds
    (common exactly at a kink) the last Armijo point is used anyway; the
    step still decreases f, which is all BFGS needs to stay monotone.
    """
    derphi0 = float(fe0.gradient @ d)
    if derphi0 >= 0:
        return None, None, 0
    lo, hi = 0.0, np.inf
    alpha = 1.0
    armijo_best = None
    evals = 0
    for _ in range(max_bisect):
        fe = fn(x + alpha * d)
        evals += 1
        if fe.value > fe0.value + c1 * alpha * derphi0:
            hi = alpha
        elif float(fe.gradient @ d) < c2 * derphi0:
            lo = alpha
            armijo_best = (alpha, fe)
        else:
            return alpha, fe, evals
        alpha = 2.0 * lo if np.isinf(hi) else 0.5 * (lo + hi)
        if hi - lo < 1e-16 * max(1.0, abs(lo)):
            break
    if armijo_best is not None:
        return armijo_best[0], armijo_best[1], evals
    return None, None, evals


def minimize_local(
    A, B, z_init: complex, variant: str = DEMMEL, opt_tol: float = 1e-14
) -> LocalMinResult:
    """BFGS descent on the chosen objective from z_init.

    Monotone: every accepted iterate decreases the objective.  Terminates
    on the stationarity proxy, on line-search stagnation (typical at the
    nonsmooth minimizers of the max objective), or after 500 iterations.
    """
    if opt_tol <= 0:
        raise ValueError("opt_tol must be positive")
    A = as_square_matrix(A)
    B = as_square_matrix(B)
    evals = 0

    def fn(xy):
        nonlocal evals
        evals += 1
        return eval_objective(A, B, complex(xy[0], xy[1]), variant)

    x = np.array([z_init.real, z_init.imag], dtype=float)
    fe = fn(x)
    H = np.eye(2)
    converged = False
    it = 0
    for it in range(1, _MAX_ITER + 1):
        if _stationarity(fe, variant) <= opt_tol or fe.value == 0.0:
            converged = True
            it -= 1
            break
        g = fe.gradient
        d = -H @ g
        if float(d @ g) >= 0:
            H = np.eye(2)
            d = -g
        alpha, fe_new, _ = _weak_wolfe(fn, x, fe, d)
        if alpha is None and not np.array_equal(H, np.eye(2)):
            # one retry with a reset Hessian before declaring stagnation
            H = np.eye(2)
            d = -g
            alpha, fe_new, _ = _weak_wolfe(fn, x, fe, d)
        if alpha is None or fe_new.value >= fe.value:
            converged = True
            break
        s = alpha * d
        y = fe_new.gradient - g
        sy = float(s @ y)
        if sy > 1e-12 * np.linalg.norm(s) * np.linalg.norm(y):
            rho = 1.0 / sy
            V = np.eye(2) - rho * np.outer(s, y)
            H = V @ H @ V.T + rho * np.outer(s, s)
        x = x + s
        fe = fe_new
    return LocalMinResult(complex(x[0], x[1]), fe.value, it, converged, evals)
