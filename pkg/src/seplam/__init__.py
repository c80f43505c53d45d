"""Certified computation of eigenvalue separation measures for matrix pairs.

The main entry points are :func:`compute_sep_demmel` (smallest eps at
which the eps-pseudospectra of A and B intersect, with a globality
certificate) and :func:`estimate_sep_varah` (a certified upper bound for
the sum-of-perturbations variant).
"""

from .certificate import (
    GAP,
    OVERLAP,
    SUM,
    CertificateSample,
    RayCrossings,
    SearchFrame,
    arg_min_sq,
    boundary_gap,
    build_rotated_matrix,
    certificate_value,
    certificate_value_varah,
    certificate_values,
    certificate_values_varah,
    imaginary_crossings,
    overlap_measure,
    pencil_matrices,
)
from .driver import (
    BUDGET_EXCEEDED,
    CERTIFIED_GLOBAL,
    TOL_STALLED,
    SepResult,
    SolveOptions,
    compute_sep,
    compute_sep_demmel,
    estimate_sep_varah,
    select_search_point,
    validate_search_point,
    varah_eigenvalue_check,
)
from .interp import FitBudgetError, FitOutcome, PiecewiseInterpolant, evaluate, fit_adaptive, global_min
from .linalg import (
    ComputationError,
    SingularTriplet,
    eigenvalues,
    sigma_min_shifted,
    sigma_min_shifted_many,
    smallest_singular_triplet,
    spectral_norm,
)
from .mmio import MatrixInputError, read_matrix, write_matrix_mm
from .objective import DEMMEL, VARAH, LocalMinResult, ObjectiveEval, eval_objective, minimize_local

__version__ = "0.1.0"

__all__ = [
    "BUDGET_EXCEEDED",
    "CERTIFIED_GLOBAL",
    "TOL_STALLED",
    "DEMMEL",
    "VARAH",
    "SUM",
    "OVERLAP",
    "GAP",
    "CertificateSample",
    "ComputationError",
    "FitBudgetError",
    "FitOutcome",
    "LocalMinResult",
    "MatrixInputError",
    "ObjectiveEval",
    "PiecewiseInterpolant",
    "RayCrossings",
    "SearchFrame",
    "SepResult",
    "SingularTriplet",
    "SolveOptions",
    "arg_min_sq",
    "boundary_gap",
    "build_rotated_matrix",
    "certificate_value",
    "certificate_value_varah",
    "certificate_values",
    "certificate_values_varah",
    "compute_sep",
    "compute_sep_demmel",
    "eigenvalues",
    "estimate_sep_varah",
    "eval_objective",
    "evaluate",
    "fit_adaptive",
    "global_min",
    "imaginary_crossings",
    "minimize_local",
    "overlap_measure",
    "pencil_matrices",
    "read_matrix",
    "select_search_point",
    "sigma_min_shifted",
    "sigma_min_shifted_many",
    "smallest_singular_triplet",
    "spectral_norm",
    "validate_search_point",
    "varah_eigenvalue_check",
    "write_matrix_mm",
]
