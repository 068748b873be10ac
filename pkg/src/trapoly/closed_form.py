"""Closed-form physics quantities attached to the G family.

Bound-state levels, scattering phase shift, amplitude and the conjectured
continuous weight are all expressed through Gamma functions of
``(nu+1)/2 -+ sqrt(-sigma) + i z / sqrt(2)`` and ``i sqrt(2) z``.
Amplitude and weight are only known up to a constant factor.
"""
from dataclasses import dataclass
import math

import numpy as np

from .errors import DomainError, ParameterError
from .numerics import log_gamma_complex, wrap_angle
from .recursion import GParams, eval_g_sequence
from .spectral import build_g_matrix, golub_welsch

SQRT2 = math.sqrt(2.0)


@dataclass
class BoundSpectrum:
    levels: np.ndarray
    count: int


def bound_spectrum(nu, sigma):
    """z_n^2 = -2 (n + (nu+1)/2 - sqrt(-sigma))^2 for n = 0..N.

    N is the largest integer <= sqrt(-sigma) - (nu+1)/2; the spectrum is empty
    when that is negative or sigma >= 0.
    """
    if sigma >= 0:
        return BoundSpectrum(np.zeros(0), 0)
    top = math.sqrt(-sigma) - 0.5 * (nu + 1)
    # the floor is taken with a little slack so that exact boundary cases
    # such as sigma = -((nu+1)/2)^2 keep their zero-energy level
    if top < -1e-12:
        return BoundSpectrum(np.zeros(0), 0)
    N = int(math.floor(top + 1e-12))
    n = np.arange(N + 1)
    levels = -2.0 * (n - top) ** 2
    return BoundSpectrum(levels, N + 1)


def _gamma_args(nu, sigma, z, extrapolated):
    z = np.asarray(z, dtype=float)
    if np.any(~(z > 0)):
        raise DomainError("z must be > 0")
    if sigma < 0:
        r = complex(math.sqrt(-sigma))
    elif extrapolated:
        r = 1j * math.sqrt(sigma)
    else:
        raise ParameterError(
            "sigma >= 0 is outside the closed-form regime; pass extrapolated=True"
        )
    a = 0.5 * (nu + 1)
    w = 1j * z / SQRT2
    return 1j * SQRT2 * z, a - r + w, a + r + w


def _log_parts(nu, sigma, z, extrapolated):
    g0, g1, g2 = _gamma_args(nu, sigma, z, extrapolated)
    return log_gamma_complex(g0), log_gamma_complex(g1), log_gamma_complex(g2)


def phase_shift(nu, sigma, z, extrapolated=False):
    """delta(z) = arg G(i sqrt2 z) - arg G(a - r + i z/sqrt2) - arg G(a + r + i z/sqrt2).

    a = (nu+1)/2, r = sqrt(-sigma).  Returned in (-pi, pi].
    """
    l0, l1, l2 = _log_parts(nu, sigma, z, extrapolated)
    return wrap_angle(np.imag(l0) - np.imag(l1) - np.imag(l2))


def log_amplitude(nu, sigma, z, extrapolated=False):
    l0, l1, l2 = _log_parts(nu, sigma, z, extrapolated)
    out = np.real(l0) - np.real(l1) - np.real(l2)
    return float(out) if np.ndim(out) == 0 else out


def amplitude(nu, sigma, z, extrapolated=False):
    """|G(i sqrt2 z) / (G(a - r + i z/sqrt2) G(a + r + i z/sqrt2))|, unnormalised."""
    out = np.exp(log_amplitude(nu, sigma, z, extrapolated))
    return float(out) if np.ndim(out) == 0 else out


def weight(nu, sigma, z, extrapolated=False):
    """rho(z) = 1 / amplitude(z)^2, unnormalised."""
    la = log_amplitude(nu, sigma, z, extrapolated)
    if np.any(np.isneginf(la)):
        raise ArithmeticError("amplitude vanishes: weight is infinite")
    out = np.exp(-2.0 * la)
    return float(out) if np.ndim(out) == 0 else out


def orthonormal_values(p: GParams, zsq, n_max):
    """Matrix [k, j] = orthonormal G_k at zsq[j], k = 0..n_max, as floats."""
    seq = eval_g_sequence(p, np.atleast_1d(zsq), n_max, normalization="orthonormal")
    return seq.values()


def orthogonality_check(p: GParams, n, m, N_quad):
    """Gauss analogue of the orthogonality relation: sum_k w_k G_n(x_k) G_m(x_k)."""
    # inclusive bound, so that n, m <= 20 works at N_quad = 60
    if max(n, m) > N_quad / 3:
        raise ParameterError("need n, m <= N_quad / 3")
    if min(n, m) < 0:
        raise ParameterError("orders must be >= 0")
    rule = golub_welsch(build_g_matrix(p, N_quad))
    vals = orthonormal_values(p, rule.nodes, max(n, m))
    return float(np.sum(rule.weights * vals[n] * vals[m]))


def discrete_weights(p: GParams, N_quad):
    """Negative-z^2 nodes and their Gauss weights (the discrete mass samples)."""
    rule = golub_welsch(build_g_matrix(p, N_quad))
    neg = rule.nodes < 0
    return rule.nodes[neg], rule.weights[neg]


def log_christoffel_weights(p: GParams, nodes, N):
    """ln of the Gauss weights 1 / sum_{k<N} G_k(x)^2 (orthonormal G_k).

    Same weights as Golub-Welsch at the order-N nodes, reached through the
    polynomial values instead of eigenvectors.  Forward recursion makes this
    inaccurate at nodes whose eigenvector decays with n (bound states).
    """
    seq = eval_g_sequence(p, np.atleast_1d(nodes), N - 1, normalization="orthonormal")
    lg = seq.log10_abs()
    top = np.max(lg, axis=0)
    with np.errstate(under="ignore"):
        total = np.sum(np.power(10.0, 2.0 * (lg - top)), axis=0)
    return -(2.0 * top + np.log10(total)) * math.log(10.0)


def weight_shape_ratio(p: GParams, N_quad, middle=0.6):
    """Gauss weight per unit z-spacing over rho(z), on interior positive nodes.

    Returns (z, log_ratio).  A constant log_ratio means the conjectured
    weight matches the recursion measure up to normalisation.
    """
    rule = golub_welsch(build_g_matrix(p, N_quad))
    pos = rule.nodes > 0
    x = rule.nodes[pos]
    log_w_all = rule.log_weights[pos]
    z = np.sqrt(x)
    npos = z.size
    i0 = max(int(round(0.5 * (1 - middle) * npos)), 1)
    i1 = min(int(round(0.5 * (1 + middle) * npos)), npos - 1)
    idx = np.arange(i0, i1)
    spacing = 0.5 * (z[idx + 1] - z[idx - 1])
    log_w = log_w_all[idx]
    log_rho = -2.0 * log_amplitude(p.nu, p.sigma, z[idx])
    return z[idx], log_w - np.log(spacing) - log_rho
