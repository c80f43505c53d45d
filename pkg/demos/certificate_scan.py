"""Walk through one certificate round for a small normal pair.

Two diagonal matrices with well separated spectra make everything
checkable by hand: the separation is half the smallest distance between
eigenvalues of A and eigenvalues of B.
"""

import numpy as np

from seplam import (
    SearchFrame,
    certificate_values,
    compute_sep_demmel,
    select_search_point,
)

ea = np.array([0.0 + 0j, 1.0 + 2.0j, -0.5 - 1.5j])
eb = ea + 4.0
A, B = np.diag(ea), np.diag(eb)

exact = 0.5 * np.min(np.abs(ea[:, None] - eb[None, :]))
print("exact separation (half min eigenvalue gap):", exact)

res = compute_sep_demmel(A, B)
print("computed epsilon:", res.epsilon)
print("status:", res.status, "| restarts:", res.restarts)
print("minimizer:", res.minimizer)
print("certificate evaluations:", res.certificate_evals)

# sample the certificate at the final level over the whole angular domain
z0 = select_search_point(A, B)
frame = SearchFrame(z0)
thetas = np.linspace(*frame.domain(), 721)
samples = certificate_values(A, B, res.epsilon, frame, thetas)

values = np.array([s.value for s in samples])
branches = [s.branch for s in samples]
print()
print("certificate over [0, pi] at the computed level:")
print("  min value:", values.min(), "at theta =", thetas[values.argmin()])
for name in ("SUM", "GAP", "OVERLAP"):
    print(f"  {name:7s} samples: {branches.count(name)}")
print()
print("a nonnegative certificate everywhere is what certifies globality;")
print("raise the level a little and overlap appears:")
bumped = certificate_values(A, B, 1.05 * res.epsilon, frame, thetas)
neg = [s for s in bumped if s.value < 0]
print("  negative samples at 1.05x level:", len(neg))
if neg:
    w = min(neg, key=lambda s: s.value)
    print("  deepest overlap at theta =", w.theta, "value =", w.value)
    print("  restart points:", w.overlap_boundary)
