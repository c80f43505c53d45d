import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from seplam.linalg import (
    as_square_matrix,
    eigenvalues,
    sigma_min_shifted,
    sigma_min_shifted_many,
    smallest_singular_triplet,
    spectral_norm,
)


def random_complex(rng, shape):
    return rng.normal(size=shape) + 1j * rng.normal(size=shape)


class TestSmallestSingularTriplet:
    def test_identity(self):
        t = smallest_singular_triplet(np.eye(3))
        assert t.sigma == pytest.approx(1.0)

    def test_diagonal(self):
        t = smallest_singular_triplet(np.diag([3.0, 0.5, 2.0]))
        assert t.sigma == pytest.approx(0.5)
        # right vector is e2 up to phase
        assert abs(abs(t.right_vector[1]) - 1.0) < 1e-12
        assert np.linalg.norm(t.right_vector[[0, 2]]) < 1e-12

    def test_matches_full_svd(self, rng):
        M = random_complex(rng, (6, 6))
        t = smallest_singular_triplet(M)
        s = np.linalg.svd(M, compute_uv=False)
        assert abs(t.sigma - s[-1]) < 1e-12

    def test_triplet_residuals(self, rng):
        for _ in range(10):
            M = random_complex(rng, (5, 5))
            t = smallest_singular_triplet(M)
            nm = spectral_norm(M)
            assert abs(np.linalg.norm(t.left_vector) - 1) < 1e-12
            assert abs(np.linalg.norm(t.right_vector) - 1) < 1e-12
            assert np.linalg.norm(M @ t.right_vector - t.sigma * t.left_vector) <= 1e-10 * nm
            assert (
                np.linalg.norm(M.conj().T @ t.left_vector - t.sigma * t.right_vector)
                <= 1e-10 * nm
            )

    def test_rejects_nonsquare(self):
        with pytest.raises(ValueError):
            smallest_singular_triplet(np.ones((2, 3)))

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            as_square_matrix([[np.nan]])


class TestEigenvalues:
    def test_diagonal(self):
        e = sorted(eigenvalues(np.diag([1 + 2j, -3])), key=lambda z: z.real)
        assert e[0] == pytest.approx(-3)
        assert e[1] == pytest.approx(1 + 2j)

    def test_closed_form_2x2(self):
        e = np.sort_complex(eigenvalues([[1, -0.5], [0.5, -1]]))
        root = np.sqrt(0.75)
        assert np.allclose(e, [-root, root], atol=1e-12)

    def test_companion_cube_roots(self):
        # companion matrix of z^3 - 1
        C = np.array([[0, 0, 1], [1, 0, 0], [0, 1, 0]], dtype=float)
        e = eigenvalues(C)
        expected = np.exp(2j * np.pi * np.arange(3) / 3)
        for w in expected:
            assert np.min(np.abs(e - w)) < 1e-12


class TestSigmaMinShifted:
    def test_scalar(self):
        assert sigma_min_shifted([[0.0]], 0.3) == pytest.approx(0.3)

    def test_normal_distance(self):
        assert sigma_min_shifted(np.diag([0, 4j]), 2.0) == pytest.approx(2.0)

    def test_definitional_identity(self, rng):
        M = random_complex(rng, (8, 8))
        z = 1 + 1j
        t = smallest_singular_triplet(M - z * np.eye(8))
        assert sigma_min_shifted(M, z) == t.sigma

    def test_many_matches_scalar(self, rng):
        M = random_complex(rng, (5, 5))
        zs = random_complex(rng, 37)
        vals = sigma_min_shifted_many(M, zs, chunk=16)
        for z, v in zip(zs, vals):
            assert v == pytest.approx(sigma_min_shifted(M, z), abs=1e-13)

    @settings(max_examples=25, deadline=None)
    @given(
        seed=st.integers(0, 10_000),
        re1=st.floats(-3, 3),
        im1=st.floats(-3, 3),
        re2=st.floats(-3, 3),
        im2=st.floats(-3, 3),
    )
    def test_lipschitz_in_z(self, seed, re1, im1, re2, im2):
        M = random_complex(np.random.default_rng(seed), (4, 4))
        z1, z2 = complex(re1, im1), complex(re2, im2)
        diff = abs(sigma_min_shifted(M, z1) - sigma_min_shifted(M, z2))
        assert diff <= abs(z1 - z2) + 1e-12

    @settings(max_examples=25, deadline=None)
    @given(seed=st.integers(0, 10_000), re=st.floats(-5, 5), im=st.floats(-5, 5))
    def test_normal_matrix_distance(self, seed, re, im):
        lams = random_complex(np.random.default_rng(seed), 4)
        z = complex(re, im)
        expected = np.min(np.abs(lams - z))
        assert sigma_min_shifted(np.diag(lams), z) == pytest.approx(expected, abs=1e-12)
