"""Two orthogonal polynomial families defined by three-term recursions.

The H family (argument x = 1/z) and the G family (argument z**2) are
evaluated by scaled forward recursion; zeros and Gauss rules come from
their symmetric tridiagonal recursion matrices.  See the README for a tour.
"""
__version__ = "0.1.0"

from .errors import (
    BreakdownError,
    ConvergenceError,
    DomainError,
    FitError,
    MappingError,
    ParameterError,
)
from .recursion import (
    GParams,
    HParams,
    ScaledSequence,
    SecondKind,
    eval_g_sequence,
    eval_h_discrete_sequence,
    eval_h_sequence,
    g_coeffs,
    h_coeffs,
    orthonormal_scale,
)
from .spectral import (
    QuadratureRule,
    SpectrumReport,
    SymTridiagPencil,
    build_g_matrix,
    build_h_pencil,
    classify_spectrum,
    golub_welsch,
    spectrum_g,
    spectrum_h,
    zeros_g,
    zeros_h,
)
from .asymptotics import (
    AsymptoticsFit,
    Law,
    amplitude_scan,
    compare_phase_shift,
    envelope_exponent,
    fit_oscillation,
)
from .closed_form import (
    amplitude,
    bound_spectrum,
    orthogonality_check,
    phase_shift,
    weight,
)
from .physics_map import (
    PotentialId,
    PotentialSpec,
    map_to_g,
    map_to_h,
    potential_bound_energies,
    potential_phase_shift,
)
