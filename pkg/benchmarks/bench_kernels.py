"""Time the numba kernels against their numpy twins.

    python3 benchmarks/bench_kernels.py [--repeat 5]

Each kernel is called once untimed so JIT compilation stays out of the
numbers.  Results are checked for agreement before timing is reported.
"""
import argparse
import math
import time

import numpy as np

from trapoly import _kernels
from trapoly._backend import HAVE_NUMBA
from trapoly.recursion import GParams, g_coeffs
from trapoly.spectral import _gershgorin, build_g_matrix, eigenvalues


def best_of(fn, repeat):
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def recurrence_case():
    p = GParams(1.0, 2.0, 3.0)
    n = np.arange(20000)
    diag, sub, sup = g_coeffs(n, p)
    zsq = np.linspace(0.5, 100.0, 16)
    A = (diag[:, None] - zsq[None, :]) / sup[:, None]
    B = np.broadcast_to((sub / sup)[:, None], A.shape).copy()
    p1 = A[0].copy()
    return "recurrence (20000 x 16)", (A, B, p1), _kernels.recurrence_numba, _kernels.recurrence_numpy


def bisect_case():
    m = build_g_matrix(GParams(2.0, 3.0, -35.0), 400)
    lo, hi, norm = _gershgorin(m)
    args = (m.diag, m.offdiag ** 2, lo, hi, np.finfo(float).eps ** 2 * norm, 400)
    return "bisection (N=400)", args, _kernels.bisect_numba, _kernels.bisect_numpy


def inverse_iteration_case():
    m = build_g_matrix(GParams(2.0, 3.0, -35.0), 400)
    vals = eigenvalues(m)
    args = (m.diag, m.offdiag, vals, 3, np.finfo(float).eps * _gershgorin(m)[2])
    return (
        "inverse iteration (N=400)",
        args,
        _kernels.inverse_iteration_numba,
        _kernels.inverse_iteration_numpy,
    )


def first_component_case():
    m = build_g_matrix(GParams(2.0, 3.0, -35.0), 400)
    vals = eigenvalues(m)
    args = (m.diag, m.offdiag, vals, np.finfo(float).tiny * np.max(m.offdiag ** 2))
    return (
        "twisted first component (N=400)",
        args,
        _kernels.log_first_component_numba,
        _kernels.log_first_component_numpy,
    )


def _first(x):
    return x[0] if isinstance(x, tuple) else x


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not HAVE_NUMBA:
        print("numba is not installed; only the numpy path can run")
        return
    cases = (recurrence_case, bisect_case, inverse_iteration_case, first_component_case)
    print(f"{'kernel':34s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'speed-up':>9s}")
    for make in cases:
        name, a, fast, slow = make()
        ref, got = _first(slow(*a)), _first(fast(*a))  # also warms the JIT
        if not np.allclose(got, ref, rtol=1e-10, atol=1e-12 * np.max(np.abs(ref))):
            print(f"{name:34s} MISMATCH between paths")
            continue
        t_fast = best_of(lambda: fast(*a), args.repeat)
        t_slow = best_of(lambda: slow(*a), args.repeat)
        print(f"{name:34s} {1e3 * t_fast:11.2f} {1e3 * t_slow:11.2f} {t_slow / t_fast:8.1f}x")


if __name__ == "__main__":
    main()
