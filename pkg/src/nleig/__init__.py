"""Nonlocal one-dimensional eigenvalue problem toolkit.

Computes the smallest value lambda(alpha, q) of the quotient

    ( int |u'|^2 dx  +  alpha * | int |u|^(q-1) u dx |^(2/q) )  /  int u^2 dx

over functions vanishing at the endpoints of an interval, together with the
minimizing profiles, the critical coupling at which the minimizer switches
from constant sign to an odd sine, and the auxiliary singular integrals that
describe the sign-changing branch.
"""

from .core import (
    GridFunction,
    EigenResult,
    MinimizerProfile,
    ProblemParams,
    analyze,
    dirichlet_energy,
    q_average,
    rayleigh_quotient,
)
from .quadrature import QuadResult, QuadratureNonconvergence, integrate_endpoint_singular
from .period import FirstIntegralCoeffs, PeriodValue, first_integral_coeffs, half_period
from .solver import SolverNonconvergence, SolverOptions, el_residual, minimize, saturation_reference
from .branches import (
    BranchPoint,
    branch_point,
    eigenvalue_from_depth,
    q1_coupling_of_eigenvalue,
    q1_flat_family,
    q1_positive_profile,
    reconstruct_profile,
)
from .critical import (
    BracketViolation,
    CriticalResult,
    DualityMismatch,
    alpha_critical,
    alpha_zero,
    rescale_lambda,
)

__version__ = "0.1.0"

__all__ = [
    "GridFunction",
    "EigenResult",
    "MinimizerProfile",
    "ProblemParams",
    "analyze",
    "dirichlet_energy",
    "q_average",
    "rayleigh_quotient",
    "QuadResult",
    "QuadratureNonconvergence",
    "integrate_endpoint_singular",
    "FirstIntegralCoeffs",
    "PeriodValue",
    "first_integral_coeffs",
    "half_period",
    "SolverNonconvergence",
    "SolverOptions",
    "el_residual",
    "minimize",
    "saturation_reference",
    "BranchPoint",
    "branch_point",
    "eigenvalue_from_depth",
    "q1_coupling_of_eigenvalue",
    "q1_flat_family",
    "q1_positive_profile",
    "reconstruct_profile",
    "BracketViolation",
    "CriticalResult",
    "DualityMismatch",
    "alpha_critical",
    "alpha_zero",
    "rescale_lambda",
    "__version__",
]
