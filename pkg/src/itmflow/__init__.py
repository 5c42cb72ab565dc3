"""Transformation methods for boundary-layer problems on semi-infinite domains.

Blasius is solved non-iteratively (:func:`topfer_solve`); the Sakiadis, slip,
moving-surface and Falkner-Skan problems are solved by the iterative
transformation method (:func:`itm_solve`), which turns each boundary value
problem into a sequence of initial value problems and a scalar root search.
"""

__version__ = "0.1.0"

from .engine import (
    ContinuationResult,
    ContinuationStalled,
    GammaProfile,
    ItmRun,
    Newton,
    NotConverged,
    RegulaFalsi,
    Secant,
    TopferResult,
    beta_min_continuation,
    boundary_residuals,
    evaluate_gamma,
    evaluate_gamma_with_derivative,
    gamma_profile,
    itm_solve,
    ode_residual,
    solve_all_branches,
    topfer_solve,
)
from .groups import AsymptoticSpec, DomainError, GammaEvaluation, ProbeStatus, ScalingGroup
from .ivp import Adaptive, FixedRK4, IntegratorConfig, OdeSystem, Status, Trajectory, integrate
from .oracles import blasius_series, blasius_series_eval, rubel_error_bound, shooting_oracle, truncated_blasius
from .problems import BoundarySpec, Family, ProblemSpec, blasius, falkner_skan, moving_surface, sakiadis, slip
from .results import ResultDocument, read_results, write_results
from .roots import RootConfig

__all__ = [
    "Adaptive",
    "AsymptoticSpec",
    "BoundarySpec",
    "ContinuationResult",
    "ContinuationStalled",
    "DomainError",
    "Family",
    "FixedRK4",
    "GammaEvaluation",
    "GammaProfile",
    "IntegratorConfig",
    "ItmRun",
    "Newton",
    "NotConverged",
    "OdeSystem",
    "ProbeStatus",
    "ProblemSpec",
    "RegulaFalsi",
    "ResultDocument",
    "RootConfig",
    "ScalingGroup",
    "Secant",
    "Status",
    "TopferResult",
    "Trajectory",
    "beta_min_continuation",
    "blasius",
    "blasius_series",
    "blasius_series_eval",
    "boundary_residuals",
    "evaluate_gamma",
    "evaluate_gamma_with_derivative",
    "falkner_skan",
    "gamma_profile",
    "integrate",
    "itm_solve",
    "moving_surface",
    "ode_residual",
    "read_results",
    "rubel_error_bound",
    "sakiadis",
    "shooting_oracle",
    "slip",
    "solve_all_branches",
    "topfer_solve",
    "truncated_blasius",
    "write_results",
]
