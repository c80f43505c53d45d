"""Show the certificate rescuing a local search gone wrong.

The pair below is built so that a search started at 10 + 10i falls into
a local minimum that is not global. The certificate detects the overlap
at the incumbent level and hands back restart points on the overlap
boundary; one restart later the run reaches the global value.
"""

import numpy as np

from seplam import SolveOptions, compute_sep_demmel

n = 10
rng = np.random.default_rng(1)
M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
N = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
# rescale both to spectral radius 10, then push the spectra apart
M *= 10.0 / np.max(np.abs(np.linalg.eigvals(M)))
N *= 10.0 / np.max(np.abs(np.linalg.eigvals(N)))
A = M - 10.0 * np.eye(n)
B = N + 10.0 * np.eye(n)

bad = compute_sep_demmel(A, B, SolveOptions(z_init=10.0 + 10.0j))
print("started from z = 10+10i")
print("restarts:", bad.restarts, "| status:", bad.status)
for rnd, eps, z, starts in bad.trace:
    note = f" ({len(starts)} restart points)" if starts else ""
    print(f"  round {rnd}: epsilon = {eps:.12e} at z = {z:.6f}{note}")

default = compute_sep_demmel(A, B)
print()
print("started from the spectral mean (default)")
print("restarts:", default.restarts, "| epsilon =", default.epsilon)
print()
print("difference between the two final values:",
      abs(bad.epsilon - default.epsilon))
