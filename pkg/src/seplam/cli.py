"""Command-line front end.

Reads two matrices, runs the requested separation computation, and
writes a JSON result.  Optionally dumps plot-ready CSV data: the final
certificate samples, a sigma_min grid for pseudospectra contours, and
the per-round restart trace.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .driver import (
    BUDGET_EXCEEDED,
    SolveOptions,
    compute_sep,
)
from .linalg import eigenvalues, sigma_min_shifted_many
from .mmio import MatrixInputError, read_matrix
from .objective import DEMMEL, VARAH

__all__ = ["run_cli", "console_main", "emit_plot_data"]

_GRID_N = 257


class _CliError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with code 2 on bad flags; input problems must be exit 1
    def error(self, message):
        raise _CliError(message)


def _parse_complex(text: str) -> complex:
    parts = text.split(",")
    if len(parts) != 2:
        raise _CliError(f"expected RE,IM but got {text!r}")
    try:
        return complex(float(parts[0]), float(parts[1]))
    except ValueError:
        raise _CliError(f"expected RE,IM but got {text!r}") from None


def _build_parser() -> _Parser:
    p = _Parser(prog="seplam", description="Certified eigenvalue separation of two matrices")
    p.add_argument("--matrix-a", required=True, help="path to A (Matrix Market or CSV)")
    p.add_argument("--matrix-b", required=True, help="path to B (Matrix Market or CSV)")
    p.add_argument("--variant", choices=[DEMMEL, VARAH], default=DEMMEL)
    p.add_argument("--tol", type=float, default=1e-12, help="relative termination tolerance")
    p.add_argument("--fit-tol", type=float, default=1e-8, help="certificate fit tolerance")
    p.add_argument("--z-init", default=None, help="starting point RE,IM")
    p.add_argument("--z0", default=None, help="search point override RE,IM")
    p.add_argument("--rays", action="store_true", help="ray certificate instead of lines")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-restarts", type=int, default=30)
    p.add_argument("--emit-plot", default=None, metavar="DIR")
    p.add_argument("--output", default=None, metavar="PATH")
    p.add_argument("--threads", type=int, default=None)
    return p


def _resolve_threads(flag_value):
    if flag_value is not None:
        return flag_value
    env = os.environ.get("SEPLAM_THREADS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _CliError(f"SEPLAM_THREADS must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_plot_data(result, A, B, out_dir: str) -> None:
    """Write certificate.csv, pseudospectra.csv, and trace.csv."""
    os.makedirs(out_dir, exist_ok=True)

    with open(os.path.join(out_dir, "certificate.csv"), "w", encoding="utf-8") as fh:
        fh.write("theta,value,branch\n")
        for s in result.final_samples:
            fh.write(f"{_fmt(s.theta)},{_fmt(s.value)},{s.branch}\n")

    eigs = np.concatenate([eigenvalues(A), eigenvalues(B)])
    center = complex(np.mean(eigs))
    radius = float(np.max(np.abs(eigs - center))) if eigs.size else 1.0
    half = radius + max(1.0, 2.0 * result.epsilon)
    xs = np.linspace(center.real - half, center.real + half, _GRID_N)
    ys = np.linspace(center.imag - half, center.imag + half, _GRID_N)
    X, Y = np.meshgrid(xs, ys)
    zs = (X + 1j * Y).ravel()
    sa = sigma_min_shifted_many(A, zs)
    sb = sigma_min_shifted_many(B, zs)
    with open(os.path.join(out_dir, "pseudospectra.csv"), "w", encoding="utf-8") as fh:
        fh.write("re,im,sigma_a,sigma_b\n")
        for z, va, vb in zip(zs, sa, sb):
            fh.write(f"{_fmt(z.real)},{_fmt(z.imag)},{_fmt(va)},{_fmt(vb)}\n")

    with open(os.path.join(out_dir, "trace.csv"), "w", encoding="utf-8") as fh:
        fh.write("round,epsilon,minimizer_re,minimizer_im,restart_points\n")
        for rnd, eps, z, starts in result.trace:
            pts = ";".join(f"{p.real:.17g}{p.imag:+.17g}i" for p in starts)
            fh.write(f"{rnd},{_fmt(eps)},{_fmt(z.real)},{_fmt(z.imag)},{pts}\n")


def _complex_or_none(z):
    return None if z is None else {"re": z.real, "im": z.imag}


def run_cli(argv) -> int:
    try:
        args = _build_parser().parse_args(argv)
        threads = _resolve_threads(args.threads)
        z_init = _parse_complex(args.z_init) if args.z_init is not None else None
        z0 = _parse_complex(args.z0) if args.z0 is not None else None
        try:
            opts = SolveOptions(
                variant=args.variant,
                z_init=z_init,
                z0_override=z0,
                rel_term_tol=args.tol,
                fit_tol=args.fit_tol,
                max_restarts=args.max_restarts,
                use_lines=not args.rays,
                seed=args.seed,
                threads=threads,
            )
        except ValueError as exc:
            raise _CliError(str(exc)) from exc
        A = read_matrix(args.matrix_a)
        B = read_matrix(args.matrix_b)
    except (_CliError, MatrixInputError) as exc:
        print(f"seplam: error: {exc}", file=sys.stderr)
        return 1

    t0 = time.perf_counter()
    result = compute_sep(A, B, opts)
    wall = time.perf_counter() - t0

    payload = {
        "epsilon": result.epsilon,
        "minimizer": {"re": result.minimizer.real, "im": result.minimizer.imag},
        "status": result.status,
        "restarts": result.restarts,
        "certificate_evals": result.certificate_evals,
        "objective_evals": result.objective_evals,
        "variant": result.variant,
        "eps1": result.eps1,
        "eps2": result.eps2,
        "varah_eig_check": result.varah_eig_check,
        "wall_time_seconds": wall,
        "config": {
            "matrix_a": args.matrix_a,
            "matrix_b": args.matrix_b,
            "variant": args.variant,
            "tol": args.tol,
            "fit_tol": args.fit_tol,
            "z_init": _complex_or_none(z_init),
            "z0": _complex_or_none(z0),
            "rays": args.rays,
            "seed": args.seed,
            "max_restarts": args.max_restarts,
            "threads": threads,
        },
    }
    text = json.dumps(payload, sort_keys=True, indent=2)

    try:
        if args.output:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(text + "\n")
        else:
            print(text)
        if args.emit_plot:
            emit_plot_data(result, A, B, args.emit_plot)
    except OSError as exc:
        print(f"seplam: error: {exc}", file=sys.stderr)
        return 1

    return 2 if result.status == BUDGET_EXCEEDED else 0


def console_main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
