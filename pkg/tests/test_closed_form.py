import math

import mpmath as mp
import numpy as np
import pytest

from trapoly.closed_form import (
    amplitude,
    bound_spectrum,
    discrete_weights,
    log_amplitude,
    log_christoffel_weights,
    orthogonality_check,
    phase_shift,
    weight,
    weight_shape_ratio,
)
from trapoly.errors import DomainError, ParameterError
from trapoly.recursion import GParams
from trapoly.spectral import build_g_matrix, golub_welsch, spectrum_g

LEVELS_NU3_SIGMA35 = [-30.671361735203075, -17.00704260280461, -7.342723470406144, -1.6784043380076794]


def mp_phase(nu, sigma, z):
    mp.mp.dps = 40
    a = mp.mpf(nu + 1) / 2
    r = mp.sqrt(-mp.mpf(sigma))
    w = 1j * mp.mpf(z) / mp.sqrt(2)
    raw = mp.im(mp.loggamma(1j * mp.sqrt(2) * z) - mp.loggamma(a - r + w) - mp.loggamma(a + r + w))
    return float(raw)


def test_bound_spectrum_values():
    bs = bound_spectrum(3, -35)
    assert bs.count == 4
    assert bs.levels == pytest.approx(LEVELS_NU3_SIGMA35, rel=1e-14)


@pytest.mark.parametrize("sigma", [0.0, 3.0, -3.9])
def test_bound_spectrum_empty(sigma):
    # sqrt(3.9) < (nu + 1)/2 = 2
    assert bound_spectrum(3, sigma).count == 0


def test_bound_spectrum_threshold_level():
    bs = bound_spectrum(3, -4.0)
    assert bs.count == 1 and bs.levels[0] == 0.0


def test_bound_spectrum_is_mu_independent_in_the_recursion():
    for mu in (1, 2):
        rep = spectrum_g(GParams(mu, 3, -35), 300, 450)
        assert np.allclose(rep.discrete_points[:3], LEVELS_NU3_SIGMA35[:3], rtol=1e-8)


def test_phase_shift_oracle():
    # raw 9.624857390943899 from 40-digit loggamma, wrapped into (-pi, pi]
    assert phase_shift(3, -35, 1.0) == pytest.approx(-2.9415132234152737, abs=1e-12)


@pytest.mark.parametrize("nu, sigma", [(3, -35), (0.5, -2), (2, -0.3)])
def test_phase_shift_against_mpmath(nu, sigma):
    z = np.array([0.5, 1.3, 4.0, 11.0, 20.0])
    got = phase_shift(nu, sigma, z)
    for zi, g in zip(z, got):
        assert abs(math.remainder(g - mp_phase(nu, sigma, zi), 2 * math.pi)) < 1e-10


def test_phase_shift_continuous_mod_2pi():
    z = np.linspace(0.5, 20, 5000)
    d = np.diff(phase_shift(3, -35, z))
    jumps = np.abs(np.remainder(d + math.pi, 2 * math.pi) - math.pi)
    assert np.max(jumps) < 0.05


def test_amplitude_oracles():
    assert amplitude(3, -35, 2.0) == pytest.approx(0.0010798066355452342, rel=1e-11)
    assert amplitude(3, -35, 1.0) == pytest.approx(0.0016141934937628532, rel=1e-11)


def test_weight_is_inverse_square_amplitude():
    z = np.linspace(0.3, 15, 40)
    assert np.allclose(weight(3, -35, z) * amplitude(3, -35, z) ** 2, 1.0, rtol=1e-12)
    assert np.all(weight(3, -35, z) > 0)


def test_closed_form_domain():
    with pytest.raises(DomainError):
        phase_shift(3, -35, 0.0)
    with pytest.raises(ParameterError, match="extrapolated"):
        phase_shift(2, 3.0, 1.0)
    assert np.isfinite(phase_shift(2, 3.0, 1.0, extrapolated=True))
    assert np.isfinite(log_amplitude(2, 3.0, 1.0, extrapolated=True))


@pytest.mark.parametrize("p", [GParams(2, 3, -35), GParams(1, 2, 3), GParams(0.5, 1.5, -10)])
def test_orthogonality_check(p):
    for n, m in [(0, 0), (5, 5), (20, 20), (0, 20), (3, 17)]:
        want = 1.0 if n == m else 0.0
        assert orthogonality_check(p, n, m, 60) == pytest.approx(want, abs=1e-10)


def test_orthogonality_check_preconditions():
    with pytest.raises(ParameterError):
        orthogonality_check(GParams(1, 2, 3), 21, 0, 60)
    with pytest.raises(ParameterError):
        orthogonality_check(GParams(1, 2, 3), -1, 0, 60)


def test_discrete_weights_are_the_bound_nodes():
    nodes, w = discrete_weights(GParams(2, 3, -35), 200)
    assert nodes.size == 4
    assert nodes[:3] == pytest.approx(LEVELS_NU3_SIGMA35[:3], rel=1e-9)
    assert np.all(w > 0) and w.sum() < 1


def test_christoffel_weights_agree_away_from_bound_nodes():
    p = GParams(1, 2, 3)
    rule = golub_welsch(build_g_matrix(p, 80))
    lw = log_christoffel_weights(p, rule.nodes, 80)
    assert np.allclose(lw, rule.log_weights, atol=1e-8)


def test_weight_shape_ratio_runs_on_interior_nodes():
    z, r = weight_shape_ratio(GParams(2, 3, -35), 100)
    assert z.size > 10 and np.all(np.isfinite(r))
    assert np.all(np.diff(z) > 0)
