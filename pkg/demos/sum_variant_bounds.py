"""Compare the max-variant separation with the sum-variant estimate.

For any pair, the sum value is at least the max value and (for the true
quantities) at most twice it. The sum-variant run also reports the
eigenvalue-based bound: evaluating one matrix's sigma_min at the other's
eigenvalues, which is always a valid sum objective value.
"""

import numpy as np

from seplam import compute_sep_demmel, estimate_sep_varah

rng = np.random.default_rng(8)
n = 8
A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n)) + 3.0 * np.eye(n)

rd = compute_sep_demmel(A, B)
rv = estimate_sep_varah(A, B)

print("max variant:  epsilon =", rd.epsilon)
print("sum variant:  epsilon =", rv.epsilon)
print("  split levels eps1 =", rv.eps1, " eps2 =", rv.eps2)
print("  eigenvalue-based bound:", rv.varah_eig_check,
      "at", rv.varah_eig_location)
print()
print("sandwich: max <= sum <= 2 * max")
print("  ", rd.epsilon, "<=", rv.epsilon, "<=", 2 * rd.epsilon)
print("ratio sum/max:", rv.epsilon / rd.epsilon)
