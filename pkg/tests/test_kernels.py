"""The numba and numpy kernel paths must agree; the env flag must switch them."""
import numpy as np
import pytest

from trapoly import _backend, _kernels
from trapoly.recursion import GParams, HParams, eval_h_sequence, h_coeffs
from trapoly.spectral import _gershgorin, build_g_matrix, build_h_pencil, eigenvalues

needs_numba = pytest.mark.skipif(not _backend.HAVE_NUMBA, reason="numba not installed")


@pytest.mark.parametrize("value, want", [("1", False), ("true", False), ("0", True), ("", True)])
@needs_numba
def test_disable_flag(monkeypatch, value, want):
    monkeypatch.setenv("TRAPOLY_DISABLE_NUMBA", value)
    assert _backend.use_numba() is want


def test_precision_flag(monkeypatch):
    monkeypatch.delenv("TRAPOLY_PRECISION_BITS", raising=False)
    assert _backend.precision_bits() == 53
    monkeypatch.setenv("TRAPOLY_PRECISION_BITS", "64")
    assert _backend.precision_bits() == 64
    monkeypatch.setenv("TRAPOLY_PRECISION_BITS", "128")
    with pytest.warns(RuntimeWarning):
        assert _backend.precision_bits() == 53


def _recurrence_inputs():
    # H family: d_n ~ n^2 makes values overflow doubles quickly
    p = HParams(2.0, 3.0, 1.0, 1.0)
    d, e, b, c = h_coeffs(np.arange(3000), p)
    x = np.array([-0.3, 0.0, 1e-4, 0.5])
    A = (np.cos(1.0) - e[:, None] - np.sin(1.0) * d[:, None] * x[None, :]) / c[:, None]
    B = np.broadcast_to((b / c)[:, None], A.shape).copy()
    return A, B, A[0].copy()


@needs_numba
def test_recurrence_paths_agree():
    A, B, p1 = _recurrence_inputs()
    s1, e1 = _kernels.recurrence_numba(A, B, p1)
    s2, e2 = _kernels.recurrence_numpy(A, B, p1)
    v1 = s1 * 10.0 ** (e1 - e2).astype(float)
    assert np.allclose(v1, s2, rtol=1e-12, atol=0)
    assert np.max(e1) > 1000  # the test exercises rescaling


@needs_numba
def test_bisection_paths_agree():
    m = build_g_matrix(GParams(2.0, 3.0, -35.0), 120)
    lo, hi, norm = _gershgorin(m)
    a, bad_a = _kernels.bisect_numba(m.diag, m.offdiag ** 2, lo, hi, 1e-30 * norm, 400)
    b, bad_b = _kernels.bisect_numpy(m.diag, m.offdiag ** 2, lo, hi, 1e-30 * norm, 400)
    assert bad_a == bad_b == -1
    assert np.array_equal(a, b)


@needs_numba
@pytest.mark.parametrize("which", ["g", "h"])
def test_eigenvector_paths_agree(which):
    if which == "g":
        m = build_g_matrix(GParams(0.5, 1.5, -10.0), 80)
    else:
        m = build_h_pencil(HParams(2, 3, 1, 2.0), 80).reduced()
    lam = eigenvalues(m)
    v1 = _kernels.inverse_iteration_numba(m.diag, m.offdiag, lam, 3, 1e-300)
    v2 = _kernels.inverse_iteration_numpy(m.diag, m.offdiag, lam, 3, 1e-300)
    assert np.allclose(v1, v2, atol=1e-12)
    l1 = _kernels.log_first_component_numba(m.diag, m.offdiag, lam, 1e-300)
    l2 = _kernels.log_first_component_numpy(m.diag, m.offdiag, lam, 1e-300)
    assert np.allclose(l1, l2, rtol=1e-12, atol=1e-12)


def test_bisection_against_scipy(backend):
    from scipy.linalg import eigh_tridiagonal

    m = build_g_matrix(GParams(1.0, 2.0, 3.0), 150)
    want = eigh_tridiagonal(m.diag, m.offdiag, eigvals_only=True)
    got = eigenvalues(m)
    assert np.max(np.abs(got - want)) < 1e-12 * np.max(np.abs(want))


def test_first_component_against_dense(backend):
    m = build_g_matrix(GParams(2.0, 3.0, -35.0), 40)
    w, V = np.linalg.eigh(m.dense())
    lam = eigenvalues(m)
    got = _kernels.log_first_component(m.diag, m.offdiag, lam, 1e-300)
    big = np.abs(V[0]) > 1e-8  # dense eigh is only accurate for the larger components
    assert np.allclose(got[big], np.log(np.abs(V[0, big])), atol=1e-9)


def test_public_results_identical_across_paths(monkeypatch):
    p = HParams(2, 3, 1, 2.0)
    monkeypatch.setenv("TRAPOLY_DISABLE_NUMBA", "1")
    slow = eval_h_sequence(p, np.array([0.01, -0.02]), 500)
    monkeypatch.delenv("TRAPOLY_DISABLE_NUMBA")
    fast = eval_h_sequence(p, np.array([0.01, -0.02]), 500)
    assert np.array_equal(slow.exponent10, fast.exponent10) or np.allclose(
        slow.log10_abs(), fast.log10_abs(), atol=1e-10
    )
