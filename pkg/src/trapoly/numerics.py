"""Special-function primitives and a reference Jacobi-polynomial evaluator."""
import math

import numpy as np
from scipy import special

from .errors import DomainError, ParameterError


def log_gamma_real(x):
    """ln Gamma(x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(~(x > 0)):
        raise DomainError("log_gamma_real requires x > 0")
    out = special.gammaln(x)
    return float(out) if out.ndim == 0 else out


def log_gamma_complex(z):
    """Principal-branch log-gamma.

    The imaginary part is the continuous argument of Gamma along the upper
    half plane (not reduced to (-pi, pi]), which is what phase sums need.
    Non-positive integers raise :class:`DomainError`.
    """
    z = np.asarray(z, dtype=complex)
    pole = (z.imag == 0) & (z.real <= 0) & (z.real == np.round(z.real))
    if np.any(pole):
        raise DomainError("log-gamma pole at a non-positive integer")
    out = special.loggamma(z)
    return complex(out) if out.ndim == 0 else out


def pochhammer(a, n):
    """Rising factorial (a)_n by direct product; valid for any real a."""
    if n < 0:
        raise ParameterError("pochhammer order must be >= 0")
    out = 1.0
    for k in range(n):
        out *= a + k
    return out


def pochhammer_log(a, n):
    """ln (a)_n, requiring every factor a + k (k < n) to be positive.

    Raises ParameterError if a factor is non-positive; use :func:`pochhammer`
    in that case.
    """
    n = np.asarray(n)
    if np.any(n < 0):
        raise ParameterError("pochhammer order must be >= 0")
    if np.any((n > 0) & (a <= 0)):
        raise ParameterError(
            f"(a)_n with a={a} has a non-positive factor; use pochhammer() product form"
        )
    if a <= 0:
        out = np.zeros(n.shape)
    else:
        out = special.gammaln(a + n) - special.gammaln(a)
    return float(out) if out.ndim == 0 else out


def jacobi_poly(n, mu, nu, x):
    """Jacobi polynomial P_n^(mu, nu)(x) by its standard three-term recurrence."""
    if n < 0:
        raise ParameterError("degree must be >= 0")
    x = np.asarray(x, dtype=float)
    p_prev = np.zeros_like(x)
    p = np.ones_like(x)
    s = mu + nu
    for k in range(n):
        if k == 0:
            nxt = 0.5 * (mu - nu) + 0.5 * (s + 2) * x
        else:
            c = 2 * k + s
            a1 = 2 * (k + 1) * (k + s + 1) * c
            a2 = (c + 1) * (mu * mu - nu * nu)
            a3 = c * (c + 1) * (c + 2)
            a4 = 2 * (k + mu) * (k + nu) * (c + 2)
            nxt = ((a2 + a3 * x) * p - a4 * p_prev) / a1
        p_prev, p = p, nxt
    return float(p) if p.ndim == 0 else p


def wrap_angle(phi, period=2 * math.pi):
    """Reduce angles to (-period/2, period/2]."""
    half = 0.5 * period
    out = half - np.mod(half - np.asarray(phi, dtype=float), period)
    return float(out) if out.ndim == 0 else out
