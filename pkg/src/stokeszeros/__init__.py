"""Stokes complexes and eigenfunction zero asymptotics for polynomial potentials.

The package traces the Stokes complexes of the quadratic differentials
((-1)^l (iz)^d - 1) dz^2, solves the associated boundary eigenvalue
problems by complex shooting, and measures how the zeros of rescaled
eigenfunctions settle onto the exceptional set as the index grows.
"""

from .errors import (
    CertificateError,
    DomainError,
    GeometryError,
    IntegrationError,
    QuadratureError,
    RootFindingError,
    StokesZerosError,
    StructuralError,
    TraceError,
)
from .polynomials import ComplexPolynomial, beta, gamma, gamma_beta, roots
from .quaddiff import (
    QuadDiff,
    StokesDirections,
    StokesLine,
    TraceCaps,
    build_quad_diff,
    launch_directions,
    stokes_directions,
    trace_trajectory,
    turning_points,
)
from .stokescomplex import (
    AdmissibilityResult,
    Region,
    StokesComplex,
    build_stokes_complex,
    canonical_pair,
    is_admissible,
    mark_exceptional,
    stokes_complex,
)
from .transport import TaylorStep, TransportState, transport, transport_states
from .wkb import (
    PhaseIntegral,
    WKBParameters,
    WKBValue,
    arc_mass,
    arc_mass_profile,
    eigenvalue_estimate,
    growth_bound,
    growth_constant,
    h0_bound,
    index_estimate,
    limit_density,
    liouville_g,
    successive_epsilon,
    wkb_approximant,
)
from .spectral import (
    Eigenpair,
    EigenfunctionEvaluator,
    ProblemSpec,
    RescaledEigenfunction,
    ShootingFrame,
    envelope_deviation,
    find_eigenvalues,
    integrate_ode,
    log_modulus_field,
    miss_function,
    miss_surrogate,
    rescale,
    solve_eigenpair,
    wkb_seed,
)
from .zeros import (
    ComparisonReport,
    EmpiricalMeasure,
    ZeroSet,
    compare_to_limit,
    count_zeros_rect,
    empirical_measure,
    hille_disc_check,
    locate_zeros,
)

__all__ = [
    "ComplexPolynomial",
    "roots",
    "gamma",
    "beta",
    "gamma_beta",
    "QuadDiff",
    "build_quad_diff",
    "turning_points",
    "stokes_directions",
    "StokesDirections",
    "trace_trajectory",
    "launch_directions",
    "TraceCaps",
    "StokesLine",
    "StokesComplex",
    "Region",
    "build_stokes_complex",
    "mark_exceptional",
    "stokes_complex",
    "is_admissible",
    "AdmissibilityResult",
    "canonical_pair",
    "TransportState",
    "TaylorStep",
    "transport",
    "transport_states",
    "PhaseIntegral",
    "growth_constant",
    "eigenvalue_estimate",
    "index_estimate",
    "limit_density",
    "arc_mass",
    "arc_mass_profile",
    "liouville_g",
    "h0_bound",
    "WKBParameters",
    "WKBValue",
    "wkb_approximant",
    "successive_epsilon",
    "growth_bound",
    "ProblemSpec",
    "Eigenpair",
    "ShootingFrame",
    "integrate_ode",
    "wkb_seed",
    "miss_function",
    "miss_surrogate",
    "find_eigenvalues",
    "solve_eigenpair",
    "EigenfunctionEvaluator",
    "RescaledEigenfunction",
    "rescale",
    "log_modulus_field",
    "envelope_deviation",
    "ZeroSet",
    "EmpiricalMeasure",
    "count_zeros_rect",
    "locate_zeros",
    "empirical_measure",
    "ComparisonReport",
    "compare_to_limit",
    "hille_disc_check",
    "StokesZerosError",
    "DomainError",
    "RootFindingError",
    "TraceError",
    "StructuralError",
    "IntegrationError",
    "QuadratureError",
    "CertificateError",
    "GeometryError",
]

__version__ = "0.1.0"
