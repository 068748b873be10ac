"""Potential parameters to polynomial parameters, and back to physics.

Everything is dimensionless: ``u_i = 2 V_i / lambda**2`` and
``eps = 2 E / lambda**2``.  The H-family rows cover five generalised
potentials; the G-family rows cover three potentials with a mixed or purely
discrete spectrum.  For the G rows the dependence of ``mu`` on the physics is
not known, so callers pass ``mu_override``; bound energies do not depend on it.
"""
from dataclasses import dataclass
import enum
import math

import numpy as np

from .closed_form import bound_spectrum, phase_shift
from .errors import ConvergenceError, MappingError, ParameterError
from .recursion import GParams, HParams

FIXED_POINT_DAMPING = 0.5
FIXED_POINT_TOL = 1e-12
FIXED_POINT_MAX_ITER = 200


class PotentialId(str, enum.Enum):
    TRIG_SCARF = "TrigScarf"
    NEW_L2 = "NewL2"
    HYP_ECKART = "HypEckart"
    HYP_POSCHL_TELLER = "HypPoschlTeller"
    HYP_ROSEN_MORSE = "HypRosenMorse"
    PT2 = "PT2"
    TRIG_ROW2 = "TrigRow2"
    ECKART_ROW3 = "EckartRow3"


H_ROWS = (
    PotentialId.TRIG_SCARF,
    PotentialId.NEW_L2,
    PotentialId.HYP_ECKART,
    PotentialId.HYP_POSCHL_TELLER,
    PotentialId.HYP_ROSEN_MORSE,
)
G_ROWS = (PotentialId.PT2, PotentialId.TRIG_ROW2, PotentialId.ECKART_ROW3)

# lower bounds on (u_plus, u_minus); None = unconstrained, 0.0 exact = must vanish
_BOUNDS = {
    PotentialId.TRIG_SCARF: (-1 / 8, -1 / 8),
    PotentialId.NEW_L2: (-1 / 8, -1 / 2),
    PotentialId.HYP_ECKART: (-1 / 2, "zero"),
    PotentialId.HYP_POSCHL_TELLER: (-1 / 4, "zero"),
    PotentialId.HYP_ROSEN_MORSE: ("zero", "zero"),
    PotentialId.PT2: (-1 / 4, "zero"),
    PotentialId.TRIG_ROW2: (-1 / 8, -1 / 8),
    PotentialId.ECKART_ROW3: (-1 / 2, "zero"),
}

# the G-row potentials carry no V1 term
_NO_U1 = G_ROWS


@dataclass(frozen=True)
class PotentialSpec:
    id: PotentialId
    u0: float = 0.0
    u1: float = 0.0
    u_plus: float = 0.0
    u_minus: float = 0.0
    lam: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "id", PotentialId(self.id))
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise ParameterError(f"lambda must be positive and finite, got {self.lam}")
        for name, bound in zip(("u_plus", "u_minus"), _BOUNDS[self.id]):
            val = getattr(self, name)
            if bound == "zero":
                if val != 0:
                    raise ParameterError(f"{self.id.value} requires {name} = 0")
            elif val < bound:
                raise ParameterError(
                    f"{self.id.value} requires {name} >= {bound:g}, got {val:g}"
                )
        if self.id in _NO_U1 and self.u1 != 0:
            raise ParameterError(f"{self.id.value} has no u1 term")

    @classmethod
    def from_physical(cls, id, lam, V0=0.0, V1=0.0, V_plus=0.0, V_minus=0.0):
        """Build from dimensional strengths; u_i = 2 V_i / lambda**2."""
        if not lam > 0:
            raise ParameterError("lambda must be > 0")
        k = 2.0 / (lam * lam)
        return cls(id, k * V0, k * V1, k * V_plus, k * V_minus, lam)

    def eps(self, energy):
        """Dimensionless energy 2 E / lambda**2."""
        return 2.0 * energy / (self.lam * self.lam)

    def energy(self, eps):
        return 0.5 * eps * self.lam * self.lam


@dataclass(frozen=True)
class MappedH:
    params: HParams
    z: float

    @property
    def x(self):
        return math.inf if self.z == 0 else 1.0 / self.z


@dataclass(frozen=True)
class MappedG:
    params: GParams
    zsq: float


def _root(val, what):
    if val < 0:
        raise MappingError(f"{what} = {val:g} is negative; no real value")
    return math.sqrt(val)


def _angle(c, what):
    if not abs(c) <= 1:
        raise MappingError(f"|cos theta| = |{what}| = {abs(c):g} exceeds 1")
    return math.acos(c)


def map_to_h(spec: PotentialSpec, eps: float) -> MappedH:
    """H-family argument and parameters for the potential at energy ``eps``.

    For the trigonometric Scarf row ``eps`` is the level energy eps_k.
    """
    u0, u1, up, um = spec.u0, spec.u1, spec.u_plus, spec.u_minus
    pid = spec.id
    if pid is PotentialId.TRIG_SCARF:
        if u1 == 0:
            raise MappingError("cos theta = eps/u1 needs u1 != 0")
        cos_t = eps / u1
        z = _root(u1 * u1 - eps * eps, "u1^2 - eps^2")
        alpha, mu_sq, nu_sq = u0, 0.25 + 2 * um, 0.25 + 2 * up
    elif pid is PotentialId.NEW_L2:
        if eps + u1 == 0:
            raise MappingError("cos theta = (eps-u1)/(eps+u1) needs eps != -u1")
        cos_t = (eps - u1) / (eps + u1)
        prod = u1 * eps
        if not prod > 0:
            raise MappingError(f"z = 1/(2 sqrt(u1 eps)) needs u1*eps > 0, got {prod:g}")
        z = 0.5 / math.sqrt(prod)
        alpha, mu_sq, nu_sq = u0 - u1 - 1 / 16, 1 + 2 * um, 0.25 + 2 * up
    elif pid in (
        PotentialId.HYP_ECKART,
        PotentialId.HYP_POSCHL_TELLER,
        PotentialId.HYP_ROSEN_MORSE,
    ):
        if u1 == 0:
            raise MappingError("cos theta = -u0/u1 needs u1 != 0")
        cos_t = -u0 / u1
        z = _root(u1 * u1 - u0 * u0, "u1^2 - u0^2")
        if pid is PotentialId.HYP_ECKART:
            alpha, mu_sq, nu_sq = 0.0, -4 * eps, 1 + 2 * up
        elif pid is PotentialId.HYP_POSCHL_TELLER:
            z *= 0.5
            alpha, mu_sq, nu_sq = -1 / 16, -eps, 0.25 + up
        else:
            alpha, mu_sq, nu_sq = -0.25, -eps, -eps
    else:
        raise MappingError(f"{pid.value} has no H-family parameter map")
    theta = _angle(cos_t, "cos theta")
    mu = _root(mu_sq, "mu^2")
    nu = _root(nu_sq, "nu^2")
    return MappedH(HParams(mu, nu, alpha, theta), z)


def _g_row(spec, eps):
    """(z^2, sigma, nu^2) of the G row."""
    pid = spec.id
    if pid is PotentialId.PT2:
        return eps / 2, spec.u0 / 2 - 1 / 16, 0.25 + spec.u_plus
    if pid is PotentialId.TRIG_ROW2:
        return -spec.u_minus - 1 / 8, spec.u0 - eps, 0.25 + 2 * spec.u_plus
    if pid is PotentialId.ECKART_ROW3:
        return 2 * eps, spec.u0 + eps, 1 + 2 * spec.u_plus
    raise MappingError(f"{pid.value} has no G-family parameter map")


def map_to_g(spec: PotentialSpec, eps: float, mu_override: float) -> MappedG:
    """G-family argument and parameters; ``mu`` is supplied by the caller."""
    zsq, sigma, nu_sq = _g_row(spec, eps)
    nu = _root(nu_sq, "nu^2")
    return MappedG(GParams(float(mu_override), nu, sigma), zsq)


def _eckart_level(n, a, u0):
    """eps_n for the Eckart row, where sigma = u0 + eps depends on the level.

    Damped fixed point on eps = -(n + a - sqrt(-u0 - eps))**2.  The undamped
    map has slope (s - n - a)/s with s = sqrt(-sigma), close to 1 for deep
    levels, so plain damping crawls; each step is therefore an Aitken
    (Steffensen) extrapolation of two damped updates.
    Returns None when level n does not exist.
    """
    if (n + a) ** 2 > -u0:
        return None

    def step(eps):
        s = math.sqrt(max(-u0 - eps, 0.0))
        return (1 - FIXED_POINT_DAMPING) * eps - FIXED_POINT_DAMPING * (n + a - s) ** 2

    eps = -((n + a - math.sqrt(-u0)) ** 2)
    for _ in range(FIXED_POINT_MAX_ITER):
        e1 = step(eps)
        e2 = step(e1)
        denom = e2 - 2 * e1 + eps
        new = e2 if denom == 0 else eps - (e1 - eps) ** 2 / denom
        if abs(new - eps) <= FIXED_POINT_TOL * max(1.0, abs(new)):
            eps = new
            break
        eps = new
    else:
        raise ConvergenceError(f"Eckart level {n}: fixed point did not converge", n)
    # bound branch: n <= sqrt(-sigma) - a
    if n + a - math.sqrt(max(-u0 - eps, 0.0)) > 1e-9:
        return None
    return eps


def potential_bound_energies(spec: PotentialSpec, mu_override: float, n_levels=None):
    """Bound-state energies eps_n in ascending order.

    ``n_levels`` caps the count; it is required for the trigonometric row,
    whose tower of levels is infinite.
    """
    zsq, sigma, nu_sq = _g_row(spec, 0.0)
    nu = _root(nu_sq, "nu^2")
    GParams(float(mu_override), nu, sigma)  # validates mu_override
    a = 0.5 * (nu + 1)
    pid = spec.id
    if pid is PotentialId.PT2:
        out = list(2.0 * bound_spectrum(nu, sigma).levels)
    elif pid is PotentialId.ECKART_ROW3:
        out = []
        n = 0
        while n_levels is None or n < n_levels:
            eps = _eckart_level(n, a, spec.u0)
            if eps is None:
                break
            out.append(eps)
            n += 1
    else:
        # z^2 is fixed by the potential and sigma = u0 - eps carries the
        # energy: the bound-level formula solved for sigma gives
        # sqrt(-sigma) = n + a + sqrt(-z^2/2)
        if n_levels is None:
            raise ParameterError("the trigonometric row has infinitely many levels; pass n_levels")
        if zsq > 0:
            return []
        root = math.sqrt(-zsq / 2)
        n = np.arange(n_levels)
        out = list(spec.u0 + (n + a + root) ** 2)
    out = [float(v) for v in out]
    if n_levels is not None:
        out = out[:n_levels]
    return sorted(out)


def potential_phase_shift(spec: PotentialSpec, eps: float, mu_override: float) -> float:
    """Scattering phase shift at energy ``eps`` through the G-family closed form."""
    m = map_to_g(spec, eps, mu_override)
    if not m.zsq > 0:
        raise MappingError(f"z^2 = {m.zsq:g} <= 0: not a scattering energy")
    if not m.params.sigma < 0:
        raise MappingError(f"sigma = {m.params.sigma:g} >= 0 after mapping")
    return float(phase_shift(m.params.nu, m.params.sigma, math.sqrt(m.zsq)))
