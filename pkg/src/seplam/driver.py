"""Optimization-with-restarts for the two sep-lambda variants.

The loop alternates a local minimization of the objective with a fitted
angular certificate.  A negative certificate sample proves the incumbent
is not globally optimal and hands back boundary points of the overlap
region, which seed the next round of local optimization.  A certificate
that fits cleanly and stays nonnegative certifies the incumbent (for the
sum variant this certifies the necessary optimality condition, i.e. the
value is a validated upper bound, not a proven global minimum).
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import certificate as cert
from .certificate import OVERLAP, CertificateSample, SearchFrame
from .interp import FitBudgetError, fit_adaptive, global_min
from .linalg import as_square_matrix, eigenvalues, sigma_min_shifted
from .objective import DEMMEL, VARAH, eval_objective, minimize_local

__all__ = [
    "CERTIFIED_GLOBAL",
    "TOL_STALLED",
    "BUDGET_EXCEEDED",
    "SolveOptions",
    "SepResult",
    "select_search_point",
    "validate_search_point",
    "compute_sep_demmel",
    "estimate_sep_varah",
    "varah_eigenvalue_check",
    "compute_sep",
]

CERTIFIED_GLOBAL = "CERTIFIED_GLOBAL"
TOL_STALLED = "TOL_STALLED"
BUDGET_EXCEEDED = "BUDGET_EXCEEDED"

# spectral clustering tolerance for the search-point mean
_EIG_DEDUP_ATOL = 1e-10
_MAX_FANOUT = 5
_MAX_Z0_RETRIES = 20


@dataclass(frozen=True)
class SolveOptions:
    variant: str = DEMMEL
    z_init: complex | None = None
    z0_override: complex | None = None
    rel_term_tol: float = 1e-12
    fit_tol: float = 1e-8
    opt_tol: float = 1e-14
    max_restarts: int = 30
    max_samples: int = 100_000
    use_lines: bool = True
    seed: int = 0
    threads: int | None = None

    def __post_init__(self):
        if self.rel_term_tol <= 0 or self.fit_tol <= 0 or self.opt_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_restarts < 1:
            raise ValueError("max_restarts must be at least 1")


@dataclass(frozen=True)
class SepResult:
    epsilon: float
    minimizer: complex
    status: str
    restarts: int
    certificate_evals: int
    objective_evals: int
    variant: str
    eps1: float | None = None
    eps2: float | None = None
    varah_eig_check: float | None = None
    varah_eig_location: complex | None = None
    # final-round certificate samples and the per-round history, kept for
    # plot-data emission rather than for callers
    final_samples: tuple[CertificateSample, ...] = field(default=(), repr=False)
    final_certificate_evals: int = field(default=0, repr=False)
    trace: tuple = field(default=(), repr=False)


def _dedup_complex(values, atol: float) -> list[complex]:
    out: list[complex] = []
    for v in sorted(values, key=lambda w: (w.real, w.imag)):
        if any(abs(v - u) <= atol for u in out):
            continue
        out.append(complex(v))
    return out


def _conj_symmetric(spectrum, atol: float) -> bool:
    return all(any(abs(np.conj(lam) - mu) <= atol for mu in spectrum) for lam in spectrum)


def select_search_point(A, B) -> complex:
    """Mean of the distinct eigenvalues of both matrices; pulled onto the
    real axis when both spectra are closed under conjugation, since then
    the whole problem is symmetric about it."""
    eigsA = eigenvalues(A)
    eigsB = eigenvalues(B)
    distinct = _dedup_complex(list(eigsA) + list(eigsB), _EIG_DEDUP_ATOL)
    z0 = complex(np.mean(distinct))
    if _conj_symmetric(eigsA, _EIG_DEDUP_ATOL) and _conj_symmetric(eigsB, _EIG_DEDUP_ATOL):
        z0 = complex(z0.real, 0.0)
    return z0


def validate_search_point(A, B, eps_values, z0: complex, seed: int = 0) -> complex:
    """Perturb z0 until no supplied level is (numerically) a singular
    value of the shifted matrices, which the crossing theory assumes."""
    rng = np.random.default_rng(seed)
    A = as_square_matrix(A)
    B = as_square_matrix(B)
    z = complex(z0)
    for _ in range(_MAX_Z0_RETRIES + 1):
        bad = False
        for M in (A, B):
            s = np.linalg.svd(M - z * np.eye(M.shape[0]), compute_uv=False)
            for eps in eps_values:
                if np.any(np.abs(s - eps) <= 1e-10 * (1.0 + eps)):
                    bad = True
        if not bad:
            return z
        ang = rng.uniform(0.0, 2.0 * math.pi)
        z = z + 1e-6 * (1.0 + abs(z)) * complex(math.cos(ang), math.sin(ang))
    raise RuntimeError("could not find a valid search point after 20 perturbations")


def varah_eigenvalue_check(A, B) -> tuple[float, complex]:
    """min over eigenvalues of either matrix of the other's shifted
    sigma_min, with the attaining eigenvalue.  Always a valid sum-variant
    value, since the eigenvalue contributes a zero term."""
    best = math.inf
    where = 0j
    for lam in sorted(eigenvalues(B), key=lambda w: (w.real, w.imag)):
        v = sigma_min_shifted(A, lam)
        if v < best:
            best, where = v, complex(lam)
    for lam in sorted(eigenvalues(A), key=lambda w: (w.real, w.imag)):
        v = sigma_min_shifted(B, lam)
        if v < best:
            best, where = v, complex(lam)
    return best, where


class _Counters:
    def __init__(self):
        self.certificate = 0
        self.objective = 0


def _run_locals(A, B, variant, starts, opts, counters, incumbent_val):
    """Fan out local minimizations over candidate start points, most
    promising (lowest objective) first, stopping early once one clearly
    beats the incumbent.  Results merge deterministically."""
    scored = []
    for z in starts:
        fe = eval_objective(A, B, z, variant)
        counters.objective += 1
        scored.append((fe.value, z.real, z.imag, z))
    scored.sort(key=lambda t: t[:3])
    results = []
    for _, _, _, z in scored[:_MAX_FANOUT]:
        r = minimize_local(A, B, z, variant, opts.opt_tol)
        counters.objective += r.evaluations
        results.append(r)
        if incumbent_val - r.value > opts.rel_term_tol * max(incumbent_val, 1e-300):
            break
    results.sort(key=lambda r: (r.value, r.z_star.real, r.z_star.imag))
    return results[0] if results else None


def _certificate_round(A, B, eps1, eps2, frame, opts, counters, pool):
    """Fit the certificate for one round.  Returns
    (kind, payload, samples, evals) where kind is 'overlap' (payload =
    witness sample), 'certified' (payload = None) or 'budget'."""

    def sampler(theta):
        return cert.certificate_value_varah(A, B, eps1, eps2, frame, float(theta))

    def eval_batch(ts):
        return cert.certificate_values_varah(A, B, eps1, eps2, frame, ts)

    def batch_map(_, thetas):
        # whole-batch evaluation amortizes the eigensolve and sigma_min
        # call overhead; with a pool the batch is split into contiguous
        # chunks, whose results are concatenated in order either way
        ts = np.asarray(thetas, dtype=float)
        if pool is None or ts.size < 2 * opts.threads:
            return eval_batch(ts)
        chunks = [c for c in np.array_split(ts, opts.threads) if c.size]
        return [s for part in pool.map(eval_batch, chunks) for s in part]

    clamps_before = cert.negative_gap_clamps()
    try:
        outcome = fit_adaptive(
            sampler, frame.domain(), opts.fit_tol, opts.max_samples, map_fn=batch_map
        )
    except FitBudgetError as exc:
        counters.certificate += exc.samples_used
        return "budget", None, (), exc.samples_used
    counters.certificate += outcome.n_samples
    samples = list(outcome.samples)
    evals = outcome.n_samples
    if not outcome.converged:
        return "overlap", outcome.witness, tuple(samples), evals

    interp = outcome.interpolant
    eps = max(eps1, eps2)
    slack = 1e-6 * (1.0 + eps)
    minima = global_min(interp)
    flagged = [p for p in interp.pieces if p.over_tolerance]
    probe = [tv for tv in minima if tv[1] <= slack]
    probe = probe[:20] or minima[:1]
    for p in flagged:
        inside = [tv for tv in minima if p.lo <= tv[0] <= p.hi]
        probe.extend(inside[:5])
    seen = set()
    for theta, _ in probe:
        key = round(theta, 14)
        if key in seen:
            continue
        seen.add(key)
        s = cert.certificate_value_varah(A, B, eps1, eps2, frame, theta)
        counters.certificate += 1
        evals += 1
        samples.append(s)
        if s.branch == OVERLAP:
            return "overlap", s, tuple(samples), evals

    interp_min = minima[0][1] if minima else 0.0
    if interp_min < -slack and not flagged:
        # the interpolant undershoots (ringing near a jump) but every
        # exact probe came back nonnegative; certify with a note
        warnings.warn(
            "certificate interpolant dipped below the slack but all exact "
            "re-evaluations were nonnegative; certifying",
            RuntimeWarning,
            stacklevel=2,
        )
    if cert.negative_gap_clamps() > clamps_before:
        warnings.warn(
            "gap branch values were clamped to zero during the final certificate",
            RuntimeWarning,
            stacklevel=2,
        )
    return "certified", None, tuple(samples), evals


def _solve(A, B, opts: SolveOptions) -> SepResult:
    A = as_square_matrix(A)
    B = as_square_matrix(B)
    variant = opts.variant
    counters = _Counters()
    z0 = opts.z0_override if opts.z0_override is not None else select_search_point(A, B)
    z_init = opts.z_init if opts.z_init is not None else z0

    best = minimize_local(A, B, z_init, variant, opts.opt_tol)
    counters.objective += best.evaluations

    pool = None
    if opts.threads is not None and opts.threads > 1:
        pool = ThreadPoolExecutor(max_workers=opts.threads)

    restarts = 0
    status = BUDGET_EXCEEDED
    final_samples: tuple = ()
    final_evals = 0
    trace = [(0, best.value, best.z_star, ())]
    try:
        while True:
            if variant == VARAH:
                fe = eval_objective(A, B, best.z_star, VARAH)
                counters.objective += 1
                eps1, eps2 = fe.sigma_a, fe.sigma_b
                levels = [eps1, eps2]
            else:
                eps1 = eps2 = best.value
                levels = [best.value]

            if variant == VARAH and min(eps1, eps2) <= 1e-14:
                # one pseudospectrum has empty interior at its level, so
                # the overlap certificate is vacuous; the eigenvalue check
                # below still validates the estimate
                status = CERTIFIED_GLOBAL
                final_samples, final_evals = (), 0
                break

            frame = SearchFrame(
                validate_search_point(A, B, levels, z0, opts.seed),
                use_lines=opts.use_lines,
            )
            kind, witness, samples, evals = _certificate_round(
                A, B, eps1, eps2, frame, opts, counters, pool
            )
            final_samples, final_evals = samples, evals
            if kind == "budget":
                status = BUDGET_EXCEEDED
                break
            if kind == "certified":
                status = CERTIFIED_GLOBAL
                break
            # overlap found: the incumbent is not optimal; restart from
            # the overlap boundary points
            starts = list(witness.overlap_boundary)
            if not starts:
                status = TOL_STALLED
                break
            if restarts >= opts.max_restarts:
                status = BUDGET_EXCEEDED
                break
            restarts += 1
            cand = _run_locals(A, B, variant, starts, opts, counters, best.value)
            improved = cand is not None and best.value - cand.value > opts.rel_term_tol * max(
                best.value, 1e-300
            )
            if not improved:
                status = TOL_STALLED
                if cand is not None and cand.value < best.value:
                    best = cand
                trace.append((restarts, best.value, best.z_star, tuple(starts)))
                break
            best = cand
            trace.append((restarts, best.value, best.z_star, tuple(starts)))
    finally:
        if pool is not None:
            pool.shutdown(wait=True)

    eps_out = best.value
    minimizer = best.z_star
    res_eps1 = res_eps2 = None
    eig_check = eig_loc = None
    if variant == VARAH:
        fe = eval_objective(A, B, minimizer, VARAH)
        counters.objective += 1
        res_eps1, res_eps2 = fe.sigma_a, fe.sigma_b
        eig_check, eig_loc = varah_eigenvalue_check(A, B)
        if eig_check < eps_out:
            # an eigenvalue of one matrix beats the optimizer; it is a
            # genuine objective value (one term vanishes there)
            eps_out = eig_check
            minimizer = eig_loc
            res_eps1 = sigma_min_shifted(A, minimizer)
            res_eps2 = sigma_min_shifted(B, minimizer)
    return SepResult(
        epsilon=eps_out,
        minimizer=minimizer,
        status=status,
        restarts=restarts,
        certificate_evals=counters.certificate,
        objective_evals=counters.objective,
        variant=variant,
        eps1=res_eps1,
        eps2=res_eps2,
        varah_eig_check=eig_check,
        varah_eig_location=eig_loc,
        final_samples=final_samples,
        final_certificate_evals=final_evals,
        trace=tuple(trace),
    )


def compute_sep_demmel(A, B, opts: SolveOptions | None = None) -> SepResult:
    """Smallest eps at which the eps-pseudospectra of A and B intersect,
    with a globality certificate."""
    opts = opts or SolveOptions()
    if opts.variant != DEMMEL:
        opts = replace(opts, variant=DEMMEL)
    return _solve(A, B, opts)


def estimate_sep_varah(A, B, opts: SolveOptions | None = None) -> SepResult:
    """Upper bound for the sum-variant separation, certified to satisfy
    the necessary optimality condition that the interior pseudospectra at
    the split levels do not overlap, and cross-checked against the
    eigenvalue-based bound."""
    opts = opts or SolveOptions(variant=VARAH)
    if opts.variant != VARAH:
        opts = replace(opts, variant=VARAH)
    return _solve(A, B, opts)


def compute_sep(A, B, opts: SolveOptions | None = None) -> SepResult:
    """Dispatch on the variant in ``opts`` (default: the max variant)."""
    opts = opts or SolveOptions()
    if opts.variant == VARAH:
        return estimate_sep_varah(A, B, opts)
    return compute_sep_demmel(A, B, opts)
