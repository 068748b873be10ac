"""Zeros, spectra and Gauss-type quadrature from the recursion matrices.

The zeros of the degree-N polynomial are the eigenvalues of the N x N
truncated recursion matrix written in the orthonormal basis.  For the G
family that matrix is already symmetric tridiagonal in z**2.  For the H
family the spectral variable multiplies ``sin(theta) d_n``, which gives a
definite pencil ``T v = x D v``; it is reduced with ``D**-1/2`` on both sides.

Eigenvalues come from Sturm-sequence bisection and first eigenvector
components from inverse iteration (see :mod:`trapoly._kernels`).
"""
from dataclasses import dataclass, field
import math
from typing import Optional

import numpy as np

from . import _kernels
from .errors import ConvergenceError, ParameterError
from .recursion import GParams, HParams, g_coeffs, h_coeffs

DEFAULT_STABILITY_TOL = 1e-6
_MAX_BISECT_ITER = 400
# bisect down to adjacent floats: Gauss sums are sensitive to node error at
# large nodes, and eps * ||T|| is not enough there
_ABS_TOL_FACTOR = np.finfo(float).eps ** 2


@dataclass
class SymTridiagPencil:
    """Symmetric tridiagonal T with optional positive diagonal D (T v = lam D v)."""

    diag: np.ndarray
    offdiag: np.ndarray
    scale: Optional[np.ndarray] = None

    def __post_init__(self):
        self.diag = np.asarray(self.diag, dtype=float)
        self.offdiag = np.asarray(self.offdiag, dtype=float)
        n = self.diag.shape[0]
        if n < 1 or self.offdiag.shape != (n - 1,):
            raise ParameterError("need len(offdiag) == len(diag) - 1 >= 0")
        if not np.all(np.isfinite(self.offdiag)) or not np.all(np.isfinite(self.diag)):
            raise ParameterError("non-finite matrix entries")
        if self.scale is not None:
            self.scale = np.asarray(self.scale, dtype=float)
            if self.scale.shape != (n,):
                raise ParameterError("scale must match diag")
            if not np.all(self.scale > 0):
                raise ParameterError("indefinite pencil: scale entries must be > 0")

    @property
    def size(self):
        return self.diag.shape[0]

    def reduced(self):
        """Equivalent standard symmetric problem D^-1/2 T D^-1/2."""
        if self.scale is None:
            return self
        r = 1.0 / np.sqrt(self.scale)
        return SymTridiagPencil(self.diag * r * r, self.offdiag * r[:-1] * r[1:])

    def dense(self):
        t = np.diag(self.diag)
        if self.size > 1:
            t += np.diag(self.offdiag, 1) + np.diag(self.offdiag, -1)
        return t


@dataclass
class SpectrumReport:
    continuous_samples: np.ndarray
    discrete_points: np.ndarray
    n_discrete: int
    stability_tol: float
    # zeros_b minus zeros_a for every matched pair, for diagnostics
    shifts: np.ndarray = field(default_factory=lambda: np.zeros(0))


@dataclass
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    # natural log of the weights; finite where ``weights`` underflows to 0
    log_weights: Optional[np.ndarray] = None


# --------------------------------------------------------------------------
# builders
# --------------------------------------------------------------------------


def build_h_pencil(p: HParams, N: int) -> SymTridiagPencil:
    """Pencil whose eigenvalues are the N zeros of H_N in x = 1/z."""
    if N < 1:
        raise ParameterError("order N must be >= 1")
    st = math.sin(p.theta)
    if st < 1e-14:
        raise ParameterError("sin(theta) = 0: the H recursion has no z-dependence")
    n = np.arange(N)
    d, e, b, c = h_coeffs(n, p)
    if np.any(d <= 0):
        raise ParameterError(
            "indefinite pencil: alpha <= -((mu+nu+1)/2)^2 makes d_n <= 0"
        )
    off = -np.sqrt(b[1:] * c[:-1])
    return SymTridiagPencil(math.cos(p.theta) - e, off, st * d)


def build_g_matrix(p: GParams, N: int) -> SymTridiagPencil:
    """Symmetric matrix whose eigenvalues are the N zeros of G_N in z**2.

    The off-diagonal is ``-(sigma + B_n^2) sqrt(b_{n+1} c_n)``, i.e. the
    recursion written for the orthonormal G_n, so eigenvectors are the
    orthonormal polynomial values at the eigenvalue.
    """
    if N < 1:
        raise ParameterError("order N must be >= 1")
    n = np.arange(N)
    diag, sub, sup = g_coeffs(n, p)
    off = np.sign(sup[:-1]) * np.sqrt(sup[:-1] * sub[1:])
    return SymTridiagPencil(diag, off)


# --------------------------------------------------------------------------
# eigen-solver
# --------------------------------------------------------------------------


def _gershgorin(m):
    r = np.zeros(m.size)
    if m.size > 1:
        a = np.abs(m.offdiag)
        r[:-1] += a
        r[1:] += a
    lo = float(np.min(m.diag - r))
    hi = float(np.max(m.diag + r))
    norm = max(abs(lo), abs(hi), np.finfo(float).tiny)
    pad = 4 * np.finfo(float).eps * norm + np.finfo(float).tiny
    return lo - pad, hi + pad, norm


def eigenvalues(m: SymTridiagPencil) -> np.ndarray:
    """All eigenvalues, ascending, by Sturm bisection."""
    s = m.reduced()
    if s.size == 1:
        return s.diag.copy()
    lo, hi, norm = _gershgorin(s)
    vals, bad = _kernels.bisect(
        s.diag, s.offdiag ** 2, lo, hi, _ABS_TOL_FACTOR * norm, _MAX_BISECT_ITER
    )
    if bad >= 0:
        raise ConvergenceError(f"bisection did not converge for eigenvalue {bad}", bad)
    return vals


def eigenvectors(m: SymTridiagPencil, values=None, n_iter=3) -> np.ndarray:
    """Unit eigenvectors of the reduced standard problem, one per row."""
    s = m.reduced()
    if values is None:
        values = eigenvalues(m)
    values = np.asarray(values, dtype=float)
    if s.size == 1:
        return np.ones((values.shape[0], 1))
    norm = _gershgorin(s)[2]
    vecs = _kernels.inverse_iteration(
        s.diag, s.offdiag, values, n_iter, np.finfo(float).eps * norm
    )
    if not np.all(np.isfinite(vecs)):
        raise ConvergenceError("inverse iteration produced non-finite vectors")
    return vecs


def eig_sym_tridiag(m: SymTridiagPencil):
    """(eigenvalues ascending, first components of the unit eigenvectors).

    For a pencil the first components refer to the reduced problem.
    """
    vals = eigenvalues(m)
    first = eigenvectors(m, vals)[:, 0]
    return vals, first


# --------------------------------------------------------------------------
# zeros and spectra
# --------------------------------------------------------------------------


def zeros_h(p: HParams, N: int) -> np.ndarray:
    """Zeros of H_N in x = 1/z, ascending."""
    return eigenvalues(build_h_pencil(p, N))


def zeros_g(p: GParams, N: int) -> np.ndarray:
    """Zeros of G_N in z**2, ascending."""
    return eigenvalues(build_g_matrix(p, N))


def classify_spectrum(zeros_a, zeros_b, tol=DEFAULT_STABILITY_TOL, edge=None):
    """Split ``zeros_b`` into N-stable (discrete) points and continuum samples.

    A zero of the larger order is discrete when an unmatched zero of the
    smaller order lies within ``tol`` of it (greedy nearest neighbour, sorted
    order).  With ``edge`` set, only zeros strictly below it are candidates;
    the G family uses ``edge=0``.
    """
    if not tol > 0:
        raise ParameterError("tol must be > 0")
    a = np.sort(np.asarray(zeros_a, dtype=float))
    b = np.sort(np.asarray(zeros_b, dtype=float))
    used = np.zeros(a.shape[0], dtype=bool)
    discrete = np.zeros(b.shape[0], dtype=bool)
    shifts = []
    for i, v in enumerate(b):
        if edge is not None and not v < edge:
            continue
        if a.size == 0:
            break
        j = int(np.searchsorted(a, v))
        best, best_d = -1, np.inf
        for k in (j - 1, j, j + 1):
            if 0 <= k < a.size and not used[k] and abs(a[k] - v) < best_d:
                best, best_d = k, abs(a[k] - v)
        if best >= 0 and best_d <= tol:
            used[best] = True
            discrete[i] = True
            shifts.append(v - a[best])
    pts = b[discrete]
    return SpectrumReport(b[~discrete], pts, int(pts.size), float(tol), np.array(shifts))


def spectrum_g(p: GParams, N: int, N_b=None, tol=DEFAULT_STABILITY_TOL):
    """Classify the G spectrum from orders N and N_b (default 1.5 N)."""
    N_b = N_b or int(round(1.5 * N))
    return classify_spectrum(zeros_g(p, N), zeros_g(p, N_b), tol, edge=0.0)


def spectrum_h(p: HParams, N: int, N_b=None, tol=DEFAULT_STABILITY_TOL):
    """Classify the H spectrum from orders N and N_b (default 1.5 N), in z.

    Zeros come out in x = 1/z, where the pencil spectrum piles up at 0 and
    an absolute tolerance would match nearly everything; stability is
    therefore judged on z = 1/x.  The report holds z values.
    """
    N_b = N_b or int(round(1.5 * N))
    za = _reciprocal(zeros_h(p, N))
    zb = _reciprocal(zeros_h(p, N_b))
    return classify_spectrum(za, zb, tol)


def _reciprocal(x):
    with np.errstate(divide="ignore"):
        return 1.0 / x


def log_first_components(m: SymTridiagPencil, values) -> np.ndarray:
    """ln |v_0| of the unit eigenvectors of the reduced problem at ``values``."""
    s = m.reduced()
    values = np.asarray(values, dtype=float)
    if s.size == 1:
        return np.zeros(values.shape[0])
    pivmin = np.finfo(float).tiny * max(1.0, float(np.max(s.offdiag ** 2)))
    return _kernels.log_first_component(s.diag, s.offdiag, values, pivmin)


def golub_welsch(m: SymTridiagPencil) -> QuadratureRule:
    """Nodes and normalised weights (sum 1) from the recursion matrix.

    Weights are squared first eigenvector components, taken from a twisted
    factorisation so that weights far below 1 keep their relative accuracy.
    A pencil is reduced first; its nodes are still the pencil eigenvalues.
    """
    vals = eigenvalues(m)
    lw = 2.0 * log_first_components(m, vals)
    lw -= np.logaddexp.reduce(lw)
    with np.errstate(under="ignore"):
        w = np.exp(lw)
    return QuadratureRule(vals, w, lw)
