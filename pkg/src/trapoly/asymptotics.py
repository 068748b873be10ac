"""Large-n asymptotics: envelope exponent, oscillation law, amplitude, phase.

Target forms::

    LinearN:  P_n ~ n**-tau * A * cos(freq * n + log_coeff * ln n + phase)
    LogN:     P_n ~ n**-tau * A * cos(freq * ln n + phase)
"""
from dataclasses import asdict, dataclass
import enum
import math

import numpy as np
from scipy import optimize

from .errors import FitError, ParameterError
from .numerics import wrap_angle
from .recursion import GParams, ScaledSequence, eval_g_sequence

NOT_SINUSOIDAL = 0.5


class Law(str, enum.Enum):
    LINEAR_N = "LinearN"
    LOG_N = "LogN"


@dataclass
class AsymptoticsFit:
    tau: float
    law: Law
    freq: float
    log_coeff: float
    amplitude: float
    phase: float
    rms_residual: float

    def to_dict(self):
        out = asdict(self)
        out["law"] = Law(self.law).value
        return out


@dataclass
class ScanPoint:
    z: float
    amplitude: float = math.nan
    phase: float = math.nan
    freq: float = math.nan
    rms_residual: float = math.nan
    error: str = ""


def _window(seq, n_lo, n_hi):
    if n_lo < 1 or n_hi > seq.n_max or n_hi <= n_lo:
        raise ParameterError(
            f"window [{n_lo}, {n_hi}] invalid for a sequence of order {seq.n_max}"
        )
    return np.arange(n_lo, n_hi + 1)


def _weighted(seq, n, tau):
    """n**tau * seq over the window, divided by 10**ref; returns (y, ref)."""
    sub = seq[n[0]: n[-1] + 1]
    logs = sub.log10_abs() + tau * np.log10(n)
    finite = np.isfinite(logs)
    ref = float(np.max(logs[finite])) if finite.any() else 0.0
    y = np.where(finite, np.sign(sub.significand) * np.power(10.0, np.where(finite, logs - ref, 0.0)), 0.0)
    return y, ref


def _lobe_amplitudes(n, y):
    """Local amplitude at the extremum of every complete lobe."""
    s = np.sign(y)
    nz = np.flatnonzero(s != 0)
    changes = nz[1:][s[nz[1:]] != s[nz[:-1]]]
    if changes.size < 5:
        raise FitError(f"only {changes.size} sign changes in window; need >= 5")
    pos, amp = [], []
    for a, b in zip(changes[:-1], changes[1:]):
        k = a + int(np.argmax(np.abs(y[a:b])))
        if k == 0 or k == y.size - 1:
            continue
        ym, y0, yp = y[k - 1], y[k], y[k + 1]
        c = 0.5 * (ym + yp) / y0
        if abs(c) < 1 - 1e-12:
            # exact for a sampled sinusoid of constant amplitude
            a2 = (y0 * y0 - ym * yp) / (1 - c * c)
            est = math.sqrt(a2) if a2 > 0 else abs(y0)
        else:
            est = abs(y0)
        pos.append(n[k])
        amp.append(est)
    if len(amp) < 3:
        raise FitError("fewer than 3 complete lobes in window")
    return np.array(pos, dtype=float), np.array(amp)


def envelope_exponent(seq: ScaledSequence, n_lo: int, n_hi: int) -> float:
    """tau from a log-log regression of the lobe-peak envelope of |seq|."""
    n = _window(seq, n_lo, n_hi)
    if n_hi - n_lo < 50:
        raise ParameterError("window must span at least 50 orders")
    y, _ = _weighted(seq, n, 0.0)
    pos, amp = _lobe_amplitudes(n, y)
    slope = np.polyfit(np.log(pos), np.log(amp), 1)[0]
    return float(-slope)


def _linear_lsq(M, y):
    coef, *_ = np.linalg.lstsq(M, y, rcond=None)
    r = M @ coef - y
    return coef, float(r @ r)


def _grid_residuals(g, y, freqs):
    out = np.empty(freqs.size)
    for i, f in enumerate(freqs):
        M = np.column_stack((np.cos(f * g), np.sin(f * g)))
        out[i] = _linear_lsq(M, y)[1]
    return out


def fit_oscillation(seq, tau, law, n_lo, n_hi, freq_max=None):
    """Least-squares fit of ``n**tau * seq`` to the law's sinusoid.

    The frequency comes from a grid search over (0, freq_max] (pi for LinearN,
    20 for LogN by default), a bounded scalar refinement and a final joint
    least-squares polish of every parameter.
    """
    law = Law(law)
    n = _window(seq, n_lo, n_hi)
    y, ref = _weighted(seq, n, tau)
    lnn = np.log(n.astype(float))
    g = n.astype(float) if law is Law.LINEAR_N else lnn
    if freq_max is None:
        freq_max = math.pi if law is Law.LINEAR_N else 20.0
    span = g[-1] - g[0]
    step = min(freq_max / 32, math.pi / (4 * span))
    grid = np.arange(step, freq_max + 0.5 * step, step)
    res = _grid_residuals(g, y, grid)
    i = int(np.argmin(res))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, grid.size - 1)]
    f0 = optimize.minimize_scalar(
        lambda f: _grid_residuals(g, y, np.array([f]))[0],
        bounds=(lo, hi),
        method="bounded",
        options={"xatol": 1e-12 * max(1.0, hi)},
    ).x
    (c, s), _ = _linear_lsq(np.column_stack((np.cos(f0 * g), np.sin(f0 * g))), y)
    a0, d0 = math.hypot(c, s), math.atan2(-s, c)

    if law is Law.LINEAR_N:
        def model(q):
            return q[0] * np.cos(q[1] * g + q[2] * lnn + q[3]) - y
        start = [a0, f0, 0.0, d0]
    else:
        def model(q):
            return q[0] * np.cos(q[1] * g + q[2]) - y
        start = [a0, f0, d0]
    sol = optimize.least_squares(model, start, method="lm", xtol=1e-14, ftol=1e-14)
    q = sol.x
    amp, freq = float(q[0]), float(q[1])
    log_coeff = float(q[2]) if law is Law.LINEAR_N else 0.0
    phase = float(q[-1])
    if amp < 0:
        amp, phase = -amp, phase + math.pi
    if amp == 0:
        raise FitError("fitted amplitude is zero")
    rms = float(np.sqrt(np.mean(sol.fun ** 2)) / amp)
    if rms > NOT_SINUSOIDAL:
        raise FitError(f"not sinusoidal: rms residual {rms:.3g} of amplitude")
    return AsymptoticsFit(
        tau=float(tau),
        law=law,
        freq=freq,
        log_coeff=log_coeff,
        amplitude=amp * 10.0 ** ref,
        phase=wrap_angle(phase),
        rms_residual=rms,
    )


def amplitude_scan(p: GParams, z_grid, n_lo, n_hi, tau=0.5, freq_max=None):
    """Fit A(z), delta(z) of the orthonormal G_n at each real z > 0.

    Fit failures are recorded in ``ScanPoint.error`` and the scan continues.
    """
    out = []
    for z in z_grid:
        z = float(z)
        if not (z > 0 and math.isfinite(z)):
            raise ParameterError(f"z grid entries must be positive and finite, got {z}")
        pt = ScanPoint(z)
        try:
            seq = eval_g_sequence(p, z * z, n_hi, normalization="orthonormal")
            fit = fit_oscillation(
                seq, tau, Law.LOG_N, n_lo, n_hi, freq_max or max(20.0, 3.0 * z)
            )
        except (FitError, ArithmeticError) as exc:
            pt.error = str(exc)
        else:
            pt.amplitude, pt.phase = fit.amplitude, fit.phase
            pt.freq, pt.rms_residual = fit.freq, fit.rms_residual
        out.append(pt)
    return out


def synthetic_sequence(n_max, tau, law, freq, amplitude, phase, log_coeff=0.0):
    """n**-tau * A * cos(...) for n = 1..n_max (entry 0 set to 1)."""
    n = np.arange(1, n_max + 1, dtype=float)
    arg = freq * (n if Law(law) is Law.LINEAR_N else np.log(n)) + log_coeff * np.log(n) + phase
    v = np.concatenate(([1.0], amplitude * n ** (-tau) * np.cos(arg)))
    k = np.where(v == 0, 0, np.floor(np.log10(np.abs(np.where(v == 0, 1, v))))).astype(np.int64)
    return ScaledSequence(v / 10.0 ** k, k)


@dataclass
class PhaseComparison:
    z: np.ndarray
    delta_fit: np.ndarray
    delta_closed_form: np.ndarray
    offset: float
    adjusted_diff: np.ndarray
    spread: float
    errors: list


def compare_phase_shift(p: GParams, z_grid, n_lo, n_hi, period=math.pi):
    """Fitted phase against the closed-form phase shift on a z grid.

    Differences are taken modulo ``period``; their circular mean is the
    offset and ``adjusted_diff`` is what remains, wrapped to
    (-period/2, period/2].  ``spread`` is max - min of that remainder over
    the points whose fit succeeded (nan if none did).
    """
    from .closed_form import phase_shift

    scan = amplitude_scan(p, z_grid, n_lo, n_hi)
    z = np.array([pt.z for pt in scan])
    fit = np.array([pt.phase for pt in scan])
    ref = np.atleast_1d(phase_shift(p.nu, p.sigma, z))
    diff = fit - ref
    ok = np.isfinite(diff)
    k = 2 * math.pi / period
    if ok.any():
        offset = float(np.angle(np.mean(np.exp(1j * k * diff[ok]))) / k)
    else:
        offset = math.nan
    adjusted = np.array([wrap_angle(d - offset, period) if f else math.nan for d, f in zip(diff, ok)])
    spread = float(np.ptp(adjusted[ok])) if ok.any() else math.nan
    return PhaseComparison(z, fit, ref, offset, adjusted, spread, [pt.error for pt in scan])
