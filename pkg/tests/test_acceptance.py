"""End-to-end acceptance checks for the separation solver.

Each test prints a single PASS/FAIL line so the run can be audited at a
glance.  The dense-pair oracle results are computed once per module and
shared by the tests that need them.
"""

import json
import time

import numpy as np
import pytest
import scipy.linalg

import seplam.cli as cli
from conftest import dense_pair, normal_pair
from seplam.certificate import (
    SearchFrame,
    build_rotated_matrix,
    imaginary_crossings,
    pencil_matrices,
)
from seplam.driver import (
    BUDGET_EXCEEDED,
    CERTIFIED_GLOBAL,
    SepResult,
    SolveOptions,
    compute_sep_demmel,
    estimate_sep_varah,
    select_search_point,
    validate_search_point,
)
from seplam.linalg import eigenvalues, sigma_min_shifted
from seplam.mmio import read_matrix, write_matrix_mm
from seplam.objective import DEMMEL, VARAH, eval_objective
from seplam.oracle import bounding_spec, grid_min, normal_sep, theta_scan

N_ORACLE_PAIRS = 20
ORACLE_SIZES = (5, 8, 10)


def _report(capsys, name, ok):
    with capsys.disabled():
        print(f"{'PASS' if ok else 'FAIL'}: {name}")


def _checked(capsys, name, body):
    try:
        body()
    except BaseException:
        _report(capsys, name, False)
        raise
    _report(capsys, name, True)


@pytest.fixture(scope="module")
def oracle_data():
    """Computed separation and brute-force grid value for 20 seeded dense
    pairs (complex standard normal, rescaled to spectral radius 10)."""
    out = []
    for k in range(N_ORACLE_PAIRS):
        n = ORACLE_SIZES[k % len(ORACLE_SIZES)]
        A, B = dense_pair(seed=100 + k, n=n)
        res = compute_sep_demmel(A, B)
        spec = bounding_spec(A, B, points_per_axis=401, zoom_rounds=4, zoom_factor=8.0)
        _, v_ref = grid_min(A, B, DEMMEL, spec)
        out.append((A, B, res, v_ref))
    return out


def test_normal_pair_exactness(capsys):
    def body():
        rng = np.random.default_rng(42)
        t0 = time.perf_counter()
        for k in range(50):
            n = 2 + k % 7
            ea, eb = normal_pair(rng, n)
            res = compute_sep_demmel(np.diag(ea), np.diag(eb))
            ref = normal_sep(ea, eb)
            assert res.status == CERTIFIED_GLOBAL, f"pair {k}: status {res.status}"
            assert abs(res.epsilon - ref) <= 1e-8 * ref, (
                f"pair {k}: got {res.epsilon!r}, exact {ref!r}"
            )
        elapsed = time.perf_counter() - t0
        assert elapsed < 60.0, f"50 normal pairs took {elapsed:.1f}s"

    _checked(capsys, "normal-pair exactness (50 diagonal pairs, <60s)", body)


def test_dense_oracle_agreement(capsys, oracle_data):
    def body():
        for k, (_, _, res, v_ref) in enumerate(oracle_data):
            assert res.epsilon <= v_ref + 1e-8, (
                f"pair {k}: computed {res.epsilon!r} exceeds grid value {v_ref!r}"
            )
            assert abs(res.epsilon - v_ref) <= 1e-4 * v_ref, (
                f"pair {k}: computed {res.epsilon!r} vs grid {v_ref!r}"
            )

    _checked(capsys, "dense-pair agreement with grid oracle (20 pairs, 1e-4)", body)


def test_crossing_radii_consistency(capsys):
    def body():
        rng = np.random.default_rng(7)
        checked_radii = 0
        for k in range(200):
            n = int(rng.integers(2, 7))
            M = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            eps = float(rng.uniform(0.2, 2.0))
            z0 = complex(rng.normal(), rng.normal())
            theta = float(rng.uniform(-np.pi, np.pi))
            frame = SearchFrame(z0, use_lines=False)

            # every reported radius lies on the eps level set
            cr = imaginary_crossings(M, eps, frame, theta)
            for r in cr.radii:
                z = z0 + r * np.exp(1j * theta)
                assert abs(sigma_min_shifted(M, z) - eps) <= 1e-6, (
                    f"sample {k}: radius {r} off the level set"
                )
            checked_radii += cr.radii.size

            # rotated-matrix spectrum is symmetric under lam -> -conj(lam)
            eigs = np.linalg.eigvals(build_rotated_matrix(M, eps, frame, theta))
            scale = max(1.0, float(np.max(np.abs(eigs))))
            for lam in eigs:
                assert np.min(np.abs(eigs + np.conj(lam))) <= 1e-8 * scale

            # pencil form agrees with the reduced standard form
            if k < 20:
                C, D = pencil_matrices(M, eps, frame, theta)
                pencil = scipy.linalg.eig(C, D, right=False)
                for lam in eigs:
                    assert np.min(np.abs(pencil - lam)) <= 1e-8 * scale
        assert checked_radii > 0

    _checked(capsys, "crossing radii on level set + spectrum symmetry (200 samples)", body)


def test_certificate_sign_change(capsys, oracle_data):
    def body():
        for k, (A, B, res, _) in enumerate(oracle_data[:10]):
            eps_star = res.epsilon
            levels = [0.95 * eps_star, eps_star, 1.05 * eps_star]
            z0 = validate_search_point(A, B, levels, select_search_point(A, B))
            frame = SearchFrame(z0)
            _, v_above, _ = theta_scan(A, B, 1.05 * eps_star, frame)
            assert v_above < 0.0, f"pair {k}: no overlap at 1.05x ({v_above!r})"
            _, v_below, _ = theta_scan(A, B, 0.95 * eps_star, frame)
            assert v_below >= -1e-9, f"pair {k}: overlap at 0.95x ({v_below!r})"
            _, v_at, _ = theta_scan(A, B, eps_star, frame)
            assert -1e-6 <= v_at <= 1e-3, f"pair {k}: value at eps* is {v_at!r}"

    _checked(capsys, "certificate sign flips across the separation level (10 pairs)", body)


def test_gradient_against_finite_differences(capsys):
    def body():
        rng = np.random.default_rng(11)
        h = 1e-6
        done = 0
        while done < 100:
            n = int(rng.integers(3, 7))
            A = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            B = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
            z = complex(rng.normal(), rng.normal())
            fe = eval_objective(A, B, z, DEMMEL)
            # smooth points only: away from branch ties of the max
            if abs(fe.sigma_a - fe.sigma_b) < 1e-4:
                continue
            for variant in (DEMMEL, VARAH):
                fe = eval_objective(A, B, z, variant)
                ref = np.empty(2)
                for j, dz in enumerate((h, 1j * h)):
                    fp = eval_objective(A, B, z + dz, variant).value
                    fm = eval_objective(A, B, z - dz, variant).value
                    ref[j] = (fp - fm) / (2 * h)
                err = np.linalg.norm(fe.gradient - ref)
                assert err <= 1e-5 * max(1.0, np.linalg.norm(ref)), (
                    f"point {done} ({variant}): gradient error {err!r}"
                )
            done += 1

    _checked(capsys, "analytic gradients match central differences (100 points)", body)


def test_restart_from_bad_start(capsys):
    def body():
        M, N = dense_pair(seed=1, n=10)
        A = M - 10.0 * np.eye(10)
        B = N + 10.0 * np.eye(10)
        bad = compute_sep_demmel(A, B, SolveOptions(z_init=10.0 + 10.0j))
        assert bad.restarts >= 1, "no restart despite the bad starting point"
        values = [v for _, v, _, _ in bad.trace]
        assert all(b < a for a, b in zip(values, values[1:])), (
            f"incumbent values not strictly decreasing: {values}"
        )
        default = compute_sep_demmel(A, B)
        assert abs(bad.epsilon - default.epsilon) <= 1e-8, (
            f"bad-start value {bad.epsilon!r} vs default {default.epsilon!r}"
        )

    _checked(capsys, "bad starting point recovers via certificate restarts", body)


def test_sum_variant_bounds(capsys, oracle_data):
    def body():
        for k, (A, B, res, _) in enumerate(oracle_data):
            rv = estimate_sep_varah(A, B)
            # the max-variant value never exceeds the sum-variant estimate
            assert res.epsilon <= rv.epsilon + 1e-8, (
                f"pair {k}: max value {res.epsilon!r} above sum estimate {rv.epsilon!r}"
            )
            assert rv.eps1 + rv.eps2 == pytest.approx(rv.epsilon, abs=1e-10)
            # the eigenvalue-based bound against direct enumeration
            brute = np.inf
            for lam in eigenvalues(B):
                s = np.linalg.svd(A - lam * np.eye(A.shape[0]), compute_uv=False)
                brute = min(brute, float(s[-1]))
            for lam in eigenvalues(A):
                s = np.linalg.svd(B - lam * np.eye(B.shape[0]), compute_uv=False)
                brute = min(brute, float(s[-1]))
            assert abs(rv.varah_eig_check - brute) <= 1e-12, (
                f"pair {k}: eigenvalue bound {rv.varah_eig_check!r} vs brute {brute!r}"
            )

    _checked(capsys, "sum-variant estimate bounds the max variant (20 pairs)", body)


def test_identical_matrices_give_zero(capsys):
    def body():
        for seed in range(5):
            A, _ = dense_pair(seed=300 + seed, n=5)
            res = compute_sep_demmel(A, A)
            assert res.epsilon <= 1e-7, f"seed {seed}: got {res.epsilon!r}"

    _checked(capsys, "identical matrices give (near) zero separation (5 cases)", body)


def test_run_determinism(capsys, tmp_path):
    def body():
        A, B = dense_pair(seed=17, n=5)
        pa, pb = str(tmp_path / "a.mtx"), str(tmp_path / "b.mtx")
        write_matrix_mm(pa, A)
        write_matrix_mm(pb, B)
        outs = []
        for run in range(2):
            out = str(tmp_path / f"r{run}.json")
            code = cli.run_cli(
                ["--matrix-a", pa, "--matrix-b", pb, "--seed", "5", "--output", out]
            )
            assert code == 0
            lines = [
                ln
                for ln in open(out, "rb").read().splitlines()
                if b"wall_time_seconds" not in ln
            ]
            outs.append(b"\n".join(lines))
        assert outs[0] == outs[1], "repeated runs differ byte for byte"

    _checked(capsys, "identical runs produce byte-identical output", body)


def test_cli_io_contract(capsys, tmp_path, monkeypatch):
    def body():
        rng = np.random.default_rng(23)
        M = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        p = str(tmp_path / "m.mtx")
        write_matrix_mm(p, M)
        assert np.array_equal(read_matrix(p), M), "matrix round trip not bit-exact"

        pa, pb = str(tmp_path / "a.mtx"), str(tmp_path / "b.mtx")
        write_matrix_mm(pa, np.array([[0.0]]))
        write_matrix_mm(pb, np.array([[2.0]]))
        out = str(tmp_path / "out.json")
        code = cli.run_cli(["--matrix-a", pa, "--matrix-b", pb, "--output", out])
        assert code == 0
        payload = json.loads(open(out).read())
        assert set(payload) == {
            "epsilon",
            "minimizer",
            "status",
            "restarts",
            "certificate_evals",
            "objective_evals",
            "variant",
            "eps1",
            "eps2",
            "varah_eig_check",
            "wall_time_seconds",
            "config",
        }, f"unexpected schema: {sorted(payload)}"

        code = cli.run_cli(["--matrix-a", str(tmp_path / "no.mtx"), "--matrix-b", pb])
        assert code == 1, "missing input must exit 1"

        stub = SepResult(
            epsilon=1.0,
            minimizer=1.0 + 0j,
            status=BUDGET_EXCEEDED,
            restarts=30,
            certificate_evals=1,
            objective_evals=1,
            variant=DEMMEL,
        )
        monkeypatch.setattr(cli, "compute_sep", lambda A, B, opts: stub)
        code = cli.run_cli(["--matrix-a", pa, "--matrix-b", pb, "--output", out])
        assert code == 2, "budget exhaustion must exit 2"

    _checked(capsys, "file round trip, result schema, and exit codes", body)
