import math

import numpy as np
import pytest

from trapoly.closed_form import phase_shift
from trapoly.errors import MappingError, ParameterError
from trapoly.physics_map import (
    PotentialId,
    PotentialSpec,
    map_to_g,
    map_to_h,
    potential_bound_energies,
    potential_phase_shift,
)
from trapoly.spectral import spectrum_g

FIG3 = dict(u0=-69.875, u_plus=8.75)


def test_hyperbolic_eckart_example():
    m = map_to_h(PotentialSpec("HypEckart", u0=1, u1=2), eps=-1)
    assert math.cos(m.params.theta) == pytest.approx(-0.5, abs=1e-15)
    assert m.z == pytest.approx(math.sqrt(3))
    assert (m.params.alpha, m.params.mu, m.params.nu) == (0.0, 2.0, 1.0)


def test_trig_scarf_uses_level_energy():
    spec = PotentialSpec("TrigScarf", u0=0.3, u1=4.0, u_plus=0.1, u_minus=0.2)
    m = map_to_h(spec, eps=1.0)
    assert math.cos(m.params.theta) == pytest.approx(0.25)
    assert m.z == pytest.approx(math.sqrt(15))
    assert m.params.alpha == 0.3


def test_rosen_morse_has_equal_mu_nu():
    m = map_to_h(PotentialSpec("HypRosenMorse", u0=1, u1=3), eps=-2.5)
    assert m.params.mu == m.params.nu == pytest.approx(math.sqrt(2.5))


# (row, spec, eps, tabulated (cos theta, z, alpha, mu^2, nu^2))
TABLE2 = [
    ("TrigScarf", dict(u0=0.4, u1=3.0, u_plus=0.2, u_minus=0.5), 1.2,
     lambda u0, u1, up, um, e: (e / u1, math.sqrt(u1 ** 2 - e ** 2), u0, 0.25 + 2 * um, 0.25 + 2 * up)),
    ("NewL2", dict(u0=1.0, u1=2.0, u_plus=0.3, u_minus=-0.2), 0.7,
     lambda u0, u1, up, um, e: ((e - u1) / (e + u1), 0.5 / math.sqrt(u1 * e), u0 - u1 - 1 / 16, 1 + 2 * um, 0.25 + 2 * up)),
    ("HypEckart", dict(u0=0.5, u1=-1.5, u_plus=0.4), -0.6,
     lambda u0, u1, up, um, e: (-u0 / u1, math.sqrt(u1 ** 2 - u0 ** 2), 0.0, -4 * e, 1 + 2 * up)),
    ("HypPoschlTeller", dict(u0=-1.0, u1=2.5, u_plus=-0.1), -0.3,
     lambda u0, u1, up, um, e: (-u0 / u1, 0.5 * math.sqrt(u1 ** 2 - u0 ** 2), -1 / 16, -e, 0.25 + up)),
    ("HypRosenMorse", dict(u0=0.2, u1=1.0), -1.1,
     lambda u0, u1, up, um, e: (-u0 / u1, math.sqrt(u1 ** 2 - u0 ** 2), -0.25, -e, -e)),
]


@pytest.mark.parametrize("row, kw, eps, table", TABLE2, ids=[r[0] for r in TABLE2])
def test_table2_round_trip(row, kw, eps, table):
    spec = PotentialSpec(row, **kw)
    m = map_to_h(spec, eps)
    got = (math.cos(m.params.theta), m.z, m.params.alpha, m.params.mu ** 2, m.params.nu ** 2)
    want = table(spec.u0, spec.u1, spec.u_plus, spec.u_minus, eps)
    assert np.allclose(got, want, rtol=1e-12, atol=1e-12)


@pytest.mark.parametrize("row, kw, eps, table", TABLE2, ids=[r[0] for r in TABLE2])
def test_rescaling_invariance(row, kw, eps, table):
    lam, c = 1.7, 3.1
    V = {k.replace("u_plus", "V_plus").replace("u_minus", "V_minus").replace("u0", "V0").replace("u1", "V1"): v * lam ** 2 / 2
         for k, v in kw.items()}
    a = PotentialSpec.from_physical(row, lam, **V)
    b = PotentialSpec.from_physical(row, c * lam, **{k: c * c * v for k, v in V.items()})
    E = a.energy(eps)
    ma, mb = map_to_h(a, a.eps(E)), map_to_h(b, b.eps(c * c * E))
    assert ma.z == pytest.approx(mb.z, rel=1e-13)
    assert ma.params.theta == pytest.approx(mb.params.theta, rel=1e-13)
    assert ma.params.mu == pytest.approx(mb.params.mu, rel=1e-13)


def test_from_physical_scaling():
    s = PotentialSpec.from_physical("PT2", lam=2.0, V0=4.0, V_plus=1.0)
    assert (s.u0, s.u_plus) == (2.0, 0.5)
    assert s.eps(3.0) == 1.5 and s.energy(1.5) == 3.0


@pytest.mark.parametrize(
    "row, kw, eps, msg",
    [
        ("HypEckart", dict(u0=3, u1=2), -1, "u1\\^2 - u0\\^2"),
        ("HypEckart", dict(u0=1, u1=2), 0.5, "mu\\^2"),
        ("HypRosenMorse", dict(u0=1, u1=2), 1.0, "mu\\^2"),
        ("TrigScarf", dict(u1=1.0), 2.0, "u1\\^2 - eps\\^2"),
        ("NewL2", dict(u1=1.0), -0.5, "u1\\*eps"),
        ("NewL2", dict(u1=1.0, u_plus=-0.125), 0.5, None),
    ],
)
def test_mapping_errors(row, kw, eps, msg):
    spec = PotentialSpec(row, **kw)
    if msg is None:
        map_to_h(spec, eps)  # boundary of the allowed range maps fine
        return
    with pytest.raises(MappingError, match=msg):
        map_to_h(spec, eps)


def test_cos_theta_out_of_range():
    spec = PotentialSpec("TrigScarf", u1=1.0)
    with pytest.raises(MappingError):
        map_to_h(spec, 1.5)


@pytest.mark.parametrize(
    "row, kw",
    [
        ("HypPoschlTeller", dict(u_plus=-0.3)),
        ("HypEckart", dict(u_plus=-0.6)),
        ("HypEckart", dict(u_minus=0.1)),
        ("HypRosenMorse", dict(u_plus=0.1)),
        ("TrigScarf", dict(u_minus=-0.2)),
        ("NewL2", dict(u_minus=-0.6)),
        ("PT2", dict(u1=1.0)),
    ],
)
def test_table1_bounds(row, kw):
    with pytest.raises(ParameterError):
        PotentialSpec(row, **kw)


def test_wrong_table_rows():
    with pytest.raises(MappingError):
        map_to_h(PotentialSpec("PT2", **FIG3), 1.0)
    with pytest.raises(MappingError):
        map_to_g(PotentialSpec("HypEckart", u0=1, u1=2), 1.0, 1.0)


def test_map_to_g_row1_fig3_parameters():
    m = map_to_g(PotentialSpec("PT2", **FIG3), 2.0, mu_override=2.0)
    assert m.params.sigma == pytest.approx(-35.0, abs=1e-14)
    assert m.params.nu == pytest.approx(3.0, abs=1e-14)
    assert m.params.mu == 2.0 and m.zsq == 1.0


def test_map_to_g_rows_2_and_3():
    m = map_to_g(PotentialSpec("EckartRow3", u0=-10.0, u_plus=0.5), 1.5, 1.0)
    assert (m.zsq, m.params.sigma, m.params.nu) == pytest.approx((3.0, -8.5, math.sqrt(2)))
    m = map_to_g(PotentialSpec("TrigRow2", u0=2.0, u_plus=0.1, u_minus=0.3), 1.0, 0.7)
    assert (m.zsq, m.params.sigma, m.params.nu, m.params.mu) == pytest.approx((-0.425, 1.0, math.sqrt(0.45), 0.7))


def test_row1_bound_energies():
    e = potential_bound_energies(PotentialSpec("PT2", **FIG3), 2.0)
    assert e[0] == pytest.approx(-61.3427, abs=1e-4)
    assert e[3] == pytest.approx(-3.3568, abs=1e-4)
    assert potential_bound_energies(PotentialSpec("PT2", u0=1.0, u_plus=8.75), 2.0) == []


@pytest.mark.parametrize("u0", [-3.0, -60.0, -1000.0])
def test_row3_fixed_point_matches_closed_form(u0):
    spec = PotentialSpec("EckartRow3", u0=u0, u_plus=1.0)
    e = potential_bound_energies(spec, 1.0)
    a = 0.5 * (math.sqrt(3) + 1)
    want = []
    n = 0
    while (n + a) ** 2 <= -u0:
        s = ((n + a) ** 2 - u0) / (2 * (n + a))
        want.append(-((n + a - s) ** 2))
        n += 1
    assert len(e) == len(want)
    assert np.allclose(sorted(want), e, rtol=1e-11, atol=1e-12)


def test_row3_levels_are_self_consistent():
    spec = PotentialSpec("EckartRow3", u0=-40.0, u_plus=0.3)
    for n, eps in enumerate(sorted(potential_bound_energies(spec, 1.0), reverse=True)[::-1]):
        m = map_to_g(spec, eps, 1.0)
        a = 0.5 * (m.params.nu + 1)
        assert m.zsq == pytest.approx(-2 * (n + a - math.sqrt(-m.params.sigma)) ** 2, rel=1e-10)


def test_row2_tower_needs_a_cap():
    spec = PotentialSpec("TrigRow2", u0=1.0, u_plus=0.5)
    with pytest.raises(ParameterError):
        potential_bound_energies(spec, 1.0)
    e = potential_bound_energies(spec, 1.0, n_levels=5)
    assert len(e) == 5 and np.all(np.diff(e) > 0)
    # each level reproduces z^2 through the closed-form spectrum
    for n, eps in enumerate(e):
        m = map_to_g(spec, eps, 1.0)
        a = 0.5 * (m.params.nu + 1)
        assert m.zsq == pytest.approx(-2 * (n + a - math.sqrt(-m.params.sigma)) ** 2, abs=1e-12)


@pytest.mark.parametrize("mu", [1.0, 2.0])
def test_bound_count_matches_spectrum(mu):
    spec = PotentialSpec("PT2", u0=-69.875, u_plus=8.75)
    m = map_to_g(spec, 1.0, mu)
    e = potential_bound_energies(spec, mu)
    rep = spectrum_g(m.params, 300, 450)
    assert rep.n_discrete == len(e)


def test_phase_shift_composition():
    spec = PotentialSpec("PT2", **FIG3)
    assert potential_phase_shift(spec, 2.0, 2.0) == pytest.approx(phase_shift(3, -35, 1.0), abs=1e-14)
    with pytest.raises(MappingError, match="scattering"):
        potential_phase_shift(spec, -1.0, 2.0)


def test_phase_shift_independent_of_lambda():
    a = PotentialSpec("PT2", lam=1.0, **FIG3)
    b = PotentialSpec("PT2", lam=5.0, **FIG3)
    assert potential_phase_shift(a, 3.0, 1.0) == potential_phase_shift(b, 3.0, 1.0)


def test_row3_phase_uses_energy_dependent_sigma():
    spec = PotentialSpec("EckartRow3", u0=-20.0, u_plus=0.5)
    eps = 0.8
    want = phase_shift(math.sqrt(2), -20.0 + eps, math.sqrt(2 * eps))
    assert potential_phase_shift(spec, eps, 1.0) == pytest.approx(want, abs=1e-14)


def test_enum_accepts_strings():
    assert PotentialSpec("HypEckart").id is PotentialId.HYP_ECKART
