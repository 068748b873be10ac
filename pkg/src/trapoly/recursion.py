"""Forward evaluation of the H and G polynomial families.

Both families are defined only through their three-term recursions.  The
H family runs in ``x = 1/z``; its diagonal carries ``x sin(theta) d_n`` with
``d_n ~ n**2`` so values grow super-exponentially away from ``x = 0``.  The G
family runs in ``z**2``.  Values are therefore returned as
:class:`ScaledSequence` (decimal significand and exponent per entry).
"""
from dataclasses import dataclass
import math

import numpy as np

from . import _kernels
from .errors import BreakdownError, ParameterError
from .numerics import pochhammer_log

# |sigma + B_n^2| below this fraction of B_n^2 counts as a vanishing coefficient.
BREAKDOWN_RTOL = 1e-12


@dataclass(frozen=True)
class HParams:
    mu: float
    nu: float
    alpha: float
    theta: float

    def __post_init__(self):
        _check_mu_nu(self.mu, self.nu)
        if not 0.0 <= self.theta <= math.pi:
            raise ParameterError(f"theta={self.theta} outside [0, pi]")


@dataclass(frozen=True)
class GParams:
    mu: float
    nu: float
    sigma: float

    def __post_init__(self):
        _check_mu_nu(self.mu, self.nu)

    def b_sq(self, n):
        """B_n^2 with B_n = n + (mu + nu)/2 + 1."""
        return (np.asarray(n, dtype=float) + 0.5 * (self.mu + self.nu) + 1.0) ** 2


@dataclass(frozen=True)
class SecondKind:
    """Seed P_1 = c0 + c1 * t, t being the family's variable (x or z**2)."""

    c0: float
    c1: float


def _check_mu_nu(mu, nu):
    if not (mu > -1 and nu > -1):
        raise ParameterError(f"need mu > -1 and nu > -1, got mu={mu}, nu={nu}")


@dataclass
class ScaledSequence:
    """Values stored as ``significand * 10**exponent10``.

    ``significand`` is 0 or has magnitude in [1, 10).  Arrays have the sequence
    index on axis 0; a trailing axis appears when several evaluation points
    were processed together.
    """

    significand: np.ndarray
    exponent10: np.ndarray

    def __len__(self):
        return self.significand.shape[0]

    def __getitem__(self, k):
        return ScaledSequence(self.significand[k], self.exponent10[k])

    @property
    def n_max(self):
        return len(self) - 1

    def values(self):
        """Plain floats; entries beyond double range become 0 or +-inf."""
        with np.errstate(over="ignore", under="ignore"):
            out = np.asarray(self.significand, dtype=float) * np.power(
                10.0, np.asarray(self.exponent10, dtype=float)
            )
        return out

    def representable(self):
        return (np.abs(self.exponent10) < 300) | (self.significand == 0)

    def sign(self):
        return np.sign(self.significand)

    def log10_abs(self):
        with np.errstate(divide="ignore"):
            return np.log10(np.abs(np.asarray(self.significand, dtype=float))) + self.exponent10

    def relative_to(self, ref_exponent):
        """Values divided by ``10**ref_exponent``, as floats."""
        with np.errstate(over="ignore", under="ignore"):
            return np.asarray(self.significand, dtype=float) * np.power(
                10.0, np.asarray(self.exponent10 - ref_exponent, dtype=float)
            )

    def scaled(self, log10_factor):
        """Multiply entry-wise by ``10**log10_factor`` (broadcast on axis 0)."""
        f = np.asarray(log10_factor, dtype=float)
        if f.ndim == 1 and self.significand.ndim == 2:
            f = f[:, None]
        whole = np.floor(f)
        sig = self.significand * np.power(10.0, f - whole)
        exp = self.exponent10 + whole.astype(np.int64)
        big = np.abs(sig) >= 10
        sig = np.where(big, sig / 10, sig)
        exp = np.where(big, exp + 1, exp)
        exp = np.where(sig == 0, 0, exp)
        return ScaledSequence(sig, exp)


# --------------------------------------------------------------------------
# coefficients
# --------------------------------------------------------------------------


def _jacobi_like(n, mu, nu):
    """(e_n, b_n, c_n) shared by both families, with n = 0 limits."""
    n = np.asarray(n, dtype=float)
    s = mu + nu
    k = np.where(n == 0, 1.0, n)  # dummy to keep n = 0 lanes finite
    c2 = 2 * k + s
    e = np.where(n == 0, (nu - mu) / (s + 2), (nu * nu - mu * mu) / (c2 * (c2 + 2)))
    b = np.where(n == 0, 0.0, 2 * (k + mu) * (k + nu) / (c2 * (c2 + 1)))
    c = np.where(
        n == 0, 2.0 / (s + 2), 2 * (k + 1) * (k + s + 1) / ((c2 + 1) * (c2 + 2))
    )
    return e, b, c


def _as_out(*arrs):
    if np.ndim(arrs[0]) == 0:
        return tuple(float(a) for a in arrs)
    return arrs


def h_coeffs(n, p):
    """Recursion coefficients (d_n, e_n, b_n, c_n) of the H family.

    The recursion reads
    ``cos(theta) H_n = (x sin(theta) d_n + e_n) H_n + b_n H_{n-1} + c_n H_{n+1}``.
    b_0 multiplies H_{-1} = 0 and is returned as 0.
    """
    if np.any(np.asarray(n) < 0):
        raise ParameterError("order must be >= 0")
    n_arr = np.asarray(n, dtype=float)
    d = (n_arr + 0.5 * (p.mu + p.nu + 1)) ** 2 + p.alpha
    e, b, c = _jacobi_like(n_arr, p.mu, p.nu)
    return _as_out(d, e, b, c)


def g_coeffs(n, p, check=True):
    """Recursion coefficients (diag_n, sub_n, sup_n) of the G family.

    ``z^2 G_n = diag_n G_n + sub_n G_{n-1} + sup_n G_{n+1}``.  With ``check``
    a vanishing ``sigma + B_n^2`` (sup_n = 0) raises BreakdownError.
    """
    if np.any(np.asarray(n) < 0):
        raise ParameterError("order must be >= 0")
    n_arr = np.asarray(n, dtype=float)
    mu, nu, s = p.mu, p.nu, p.mu + p.nu
    bsq = p.b_sq(n_arr)
    fac = p.sigma + bsq
    if check:
        _guard_breakdown(fac, bsq, n_arr)
    fac_prev = p.sigma + p.b_sq(n_arr - 1)
    e, b, c = _jacobi_like(n_arr, mu, nu)
    k = np.where(n_arr == 0, 1.0, n_arr)
    third = np.where(n_arr == 0, 0.0, 2 * k * (k + nu) / (2 * k + s))
    # e_n = (nu^2 - mu^2)/(...), and the G diagonal uses the opposite sign.
    diag = fac * (1.0 - e) - third - 0.5 * (mu + 1) ** 2
    sub = np.where(n_arr == 0, 0.0, -fac_prev * b)
    sup = -fac * c
    return _as_out(diag, sub, sup)


def _guard_breakdown(fac, bsq, n):
    bad = np.abs(fac) < BREAKDOWN_RTOL * bsq
    if np.any(bad):
        order = int(np.asarray(n).reshape(-1)[np.flatnonzero(np.asarray(bad).reshape(-1))[0]])
        raise BreakdownError(
            f"sigma + B_n^2 vanishes at n={order}; the G recursion breaks down", order
        )


def orthonormal_log_scale(n, mu, nu):
    """ln of the orthonormalisation constant A_n (vectorised over n)."""
    _check_mu_nu(mu, nu)
    n = np.atleast_1d(np.asarray(n, dtype=np.int64))
    if np.any(n < 0):
        raise ParameterError("order must be >= 0")
    s = mu + nu
    out = np.zeros(n.shape)
    pos = n > 0
    k = n[pos]
    # (s+1)_k / (s+1) = (s+2)_{k-1}; keeps every factor positive for s > -2.
    out[pos] = 0.5 * (
        np.log(2 * k + s + 1)
        + pochhammer_log(1.0, k)
        + pochhammer_log(s + 2, k - 1)
        - pochhammer_log(mu + 1, k)
        - pochhammer_log(nu + 1, k)
    )
    return out


def orthonormal_scale(n, mu, nu):
    """A_n = sqrt((2n+mu+nu+1)/(mu+nu+1) * n! (mu+nu+1)_n / ((mu+1)_n (nu+1)_n))."""
    out = np.exp(orthonormal_log_scale(n, mu, nu))
    return float(out[0]) if np.ndim(n) == 0 else out


# --------------------------------------------------------------------------
# sequence evaluation
# --------------------------------------------------------------------------


def _run(A, B, p1, n_max, normalization, mu, nu, scalar):
    sig, exp = _kernels.recurrence(A, B, p1)
    seq = ScaledSequence(sig, exp)
    if normalization == "orthonormal":
        seq = seq.scaled(orthonormal_log_scale(np.arange(n_max + 1), mu, nu) / math.log(10))
    elif normalization != "standard":
        raise ParameterError(f"unknown normalization {normalization!r}")
    if scalar:
        seq = ScaledSequence(seq.significand[:, 0], seq.exponent10[:, 0])
    return seq


def _seed_p1(seed, first_c0, first_c1, t):
    if seed is None:
        return None
    if not isinstance(seed, SecondKind):
        raise ParameterError("seed must be None (first kind) or SecondKind")
    same = math.isclose(seed.c0, first_c0, rel_tol=1e-15, abs_tol=1e-300) and math.isclose(
        seed.c1, first_c1, rel_tol=1e-15, abs_tol=1e-300
    )
    if same:
        raise ParameterError("second-kind seed coincides with the first-kind seed")
    return seed.c0 + seed.c1 * t


def eval_h_sequence(p, x, n_max, seed=None, normalization="standard"):
    """H_0..H_{n_max} at ``x = 1/z`` (scalar or 1-D array of points)."""
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    d, e, b, c = h_coeffs(np.arange(max(n_max, 1)), p)
    ct, st = math.cos(p.theta), math.sin(p.theta)
    A = (ct - e[:, None] - st * d[:, None] * xs[None, :]) / c[:, None]
    B = np.broadcast_to((b / c)[:, None], A.shape)
    p1 = A[0].copy()
    s2 = 0.5 * (p.mu + p.nu + 2)
    alt = _seed_p1(seed, 0.5 * (p.mu - p.nu) + s2 * ct, -s2 * st * d[0], xs)
    if alt is not None:
        p1 = alt
    return _run(A[:n_max], B[:n_max], p1, n_max, normalization, p.mu, p.nu, scalar)


def eval_h_discrete_sequence(p, beta=None, x_k=0.0, n_max=0, normalization="standard"):
    """Discrete H variant at ``x_k = 1/z_k``; ``beta = exp(-2 theta)``.

    When ``beta`` is omitted it is taken from ``p.theta``, which must then be
    positive.
    """
    if beta is None:
        if not p.theta > 0:
            raise ParameterError("beta = exp(-2 theta) needs theta > 0")
        beta = math.exp(-2 * p.theta)
    if not 0.0 < beta < 1.0:
        raise ParameterError(f"beta={beta} outside (0, 1)")
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    scalar = np.ndim(x_k) == 0
    xs = np.atleast_1d(np.asarray(x_k, dtype=float))
    d, e, b, c = h_coeffs(np.arange(max(n_max, 1)), p)
    rb = math.sqrt(beta)
    A = ((1 + beta) - xs[None, :] * (1 - beta) * d[:, None] - 2 * rb * e[:, None]) / (
        2 * rb * c[:, None]
    )
    B = np.broadcast_to((b / c)[:, None], A.shape)
    return _run(A[:n_max], B[:n_max], A[0].copy(), n_max, normalization, p.mu, p.nu, scalar)


def eval_g_sequence(p, zsq, n_max, seed=None, normalization="standard"):
    """G_0..G_{n_max} at ``z**2`` (may be negative: the discrete substitution)."""
    if n_max < 0:
        raise ParameterError("n_max must be >= 0")
    scalar = np.ndim(zsq) == 0
    ts = np.atleast_1d(np.asarray(zsq, dtype=float))
    diag, sub, sup = g_coeffs(np.arange(max(n_max, 1)), p, check=n_max > 0)
    A = (ts[None, :] - diag[:, None]) / sup[:, None]
    B = np.broadcast_to((sub / sup)[:, None], A.shape)
    p1 = A[0].copy()
    s2 = p.mu + p.nu + 2
    f0 = 2 * (p.sigma + float(p.b_sq(0)))
    alt = _seed_p1(seed, p.mu + 1 - s2 * 0.5 * (p.mu + 1) ** 2 / f0, -s2 / f0, ts)
    if alt is not None:
        p1 = alt
    return _run(A[:n_max], B[:n_max], p1, n_max, normalization, p.mu, p.nu, scalar)
