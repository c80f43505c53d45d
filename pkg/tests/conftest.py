import numpy as np
import pytest


def dense_pair(seed, n, spectral_radius=10.0):
    """Seeded dense complex pair, each rescaled to the given spectral radius."""
    rng = np.random.default_rng(seed)
    M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    N = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    M *= spectral_radius / np.max(np.abs(np.linalg.eigvals(M)))
    N *= spectral_radius / np.max(np.abs(np.linalg.eigvals(N)))
    return M, N


def normal_pair(rng, n, min_gap=0.1, shift=3.0):
    """Diagonal pair with spectra separated by at least min_gap."""
    while True:
        ea = rng.normal(size=n) + 1j * rng.normal(size=n)
        eb = rng.normal(size=n) + 1j * rng.normal(size=n) + shift
        if np.min(np.abs(ea[:, None] - eb[None, :])) >= min_gap:
            return ea, eb


@pytest.fixture
def rng():
    return np.random.default_rng(0)
