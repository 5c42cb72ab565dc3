"""Independent checks on the transformation-method results.

* the Blasius power series about the wall,
* Rubel's a posteriori bound on the truncated-boundary error,
* a bisection shooting solver for the original (``h = 1``) problems.

None of these share a code path with the iterative driver beyond the problem
definitions, so agreement with them is meaningful evidence.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.integrate import solve_ivp

from .groups import DomainError
from .ivp import IntegratorConfig, Trajectory, integrate
from .problems import Family, ProblemSpec, falkner_skan, physical_initial_state, physical_system
from .roots import InvalidBracket, RootFindingError

__all__ = [
    "BlowUpInsideBracket",
    "RubelBound",
    "SERIES_COEFFICIENTS",
    "SeriesApproximation",
    "blasius_series",
    "blasius_series_eval",
    "rubel_error_bound",
    "shooting_oracle",
    "solution_on_grid",
    "truncated_blasius",
]

# f = sum_k C_k lam**k eta**(3k-1), for the 1/2-coefficient Blasius equation
SERIES_COEFFICIENTS = (
    Fraction(1, 2),
    Fraction(-1, 2 * math.factorial(5)),
    Fraction(11, 4 * math.factorial(8)),
    Fraction(-375, 8 * math.factorial(11)),
)

ORACLE_INTEGRATOR = IntegratorConfig.adaptive(1.0e-11)


@dataclass(frozen=True)
class SeriesApproximation:
    lam: float
    n_terms: int

    def __post_init__(self):
        if not 1 <= self.n_terms <= len(SERIES_COEFFICIENTS):
            raise ValueError(f"n_terms must be in 1..{len(SERIES_COEFFICIENTS)}, got {self.n_terms}")

    @property
    def coefficients(self) -> tuple[Fraction, ...]:
        return SERIES_COEFFICIENTS[: self.n_terms]

    def __call__(self, eta):
        """``(f, f', f'')`` of the partial sum at ``eta`` (scalar or array)."""
        eta = np.asarray(eta, dtype=float)
        f = np.zeros_like(eta)
        fp = np.zeros_like(eta)
        fpp = np.zeros_like(eta)
        for k, c in enumerate(self.coefficients, start=1):
            n = 3 * k - 1
            a = float(c) * self.lam**k
            f += a * eta**n
            fp += a * n * eta ** (n - 1)
            fpp += a * n * (n - 1) * eta ** (n - 2)
        return f, fp, fpp


def blasius_series(lam: float, n_terms: int = 4) -> SeriesApproximation:
    return SeriesApproximation(float(lam), n_terms)


def blasius_series_eval(lam: float, eta, n_terms: int = 4):
    return blasius_series(lam, n_terms)(eta)


@dataclass(frozen=True)
class RubelBound:
    M: float
    f_M_at_M: float
    f_M_second_at_M: float

    @property
    def bound(self) -> float:
        return self.M * self.f_M_second_at_M / self.f_M_at_M


def rubel_error_bound(truncated: Trajectory, M: float) -> RubelBound:
    """``M f_M''(M) / f_M(M)`` from the endpoint of a truncated solution.

    ``truncated`` must solve ``f''' + f f'' = 0``, ``f(0) = f'(0) = 0``,
    ``f'(M) = 1`` on ``[0, M]`` (coefficient one, not one half).
    """
    if not truncated.completed:
        raise ValueError("the truncated solution did not complete")
    if not math.isclose(truncated.nodes[-1], M, rel_tol=1e-12):
        raise ValueError(f"trajectory ends at {truncated.nodes[-1]!r}, not at M = {M!r}")
    f_end, _, fpp_end = truncated.end[:3]
    if not f_end > 0:
        raise DomainError("f_M(M) must be positive", f_end)
    return RubelBound(float(M), float(f_end), float(fpp_end))


class BlowUpInsideBracket(RootFindingError):
    """A trial slope inside the bracket did not integrate; shrink the bracket."""


def _residual(problem: ProblemSpec, s: float, eta_inf: float, integrator: IntegratorConfig):
    tr = integrate(physical_system(problem), physical_initial_state(problem, s), [0.0, eta_inf], integrator)
    if not tr.completed:
        return math.nan, tr
    return tr.end[1] - problem.boundary.d, tr


def shooting_oracle(
    problem: ProblemSpec,
    s_bracket,
    eta_inf: float | None = None,
    integrator: IntegratorConfig | None = None,
    tol: float = 1.0e-12,
    max_bisections: int = 200,
) -> tuple[float, Trajectory]:
    """Bisection on ``R(s) = f'(eta_inf; s) - d`` for the original problem.

    ``s`` is the wall shear ``f''(0)``; slip and moving-wall conditions are
    built into the initial data. Stops when ``|R| <= tol`` or the bracket has
    shrunk to roundoff.
    """
    integrator = integrator or ORACLE_INTEGRATOR
    eta_inf = problem.eta_inf if eta_inf is None else float(eta_inf)
    lo, hi = sorted(float(x) for x in s_bracket)
    r_lo, tr_lo = _residual(problem, lo, eta_inf, integrator)
    r_hi, tr_hi = _residual(problem, hi, eta_inf, integrator)
    if math.isnan(r_lo) or math.isnan(r_hi):
        raise BlowUpInsideBracket(f"bracket end did not integrate on [{lo!r}, {hi!r}]")
    if r_lo == 0:
        return lo, tr_lo
    if r_hi == 0:
        return hi, tr_hi
    if r_lo * r_hi > 0:
        raise InvalidBracket(f"R(s) has no sign change on [{lo!r}, {hi!r}]")

    mid, tr = lo, tr_lo
    for _ in range(max_bisections):
        mid = 0.5 * (lo + hi)
        r, tr = _residual(problem, mid, eta_inf, integrator)
        if math.isnan(r):
            raise BlowUpInsideBracket(f"integration failed at s = {mid!r} ({tr.status.value})")
        if abs(r) <= tol or hi - lo <= 4 * np.finfo(float).eps * max(abs(lo), abs(hi), 1.0):
            return mid, tr
        if (r > 0) == (r_lo > 0):
            lo, r_lo = mid, r
        else:
            hi = mid
    return mid, tr


def solution_on_grid(problem: ProblemSpec, s: float, eta, tol: float = 1.0e-12) -> np.ndarray:
    """States of the original problem with wall shear ``s`` at the points ``eta``.

    Integrated with SciPy's DOP853, so it is independent of :mod:`itmflow.ivp`.
    """
    eta = np.asarray(eta, dtype=float)
    system = physical_system(problem)
    sol = solve_ivp(
        lambda t, y: system(t, y),
        (0.0, float(eta[-1])),
        physical_initial_state(problem, s),
        method="DOP853",
        t_eval=eta,
        rtol=tol,
        atol=tol,
    )
    if not sol.success:
        raise RuntimeError(f"reference integration failed: {sol.message}")
    return sol.y.T


def truncated_blasius(M: float, s_bracket=(0.3, 0.8), tol: float = 1.0e-13) -> tuple[float, Trajectory]:
    """Shooting solution of ``f''' + f f'' = 0`` with ``f'(M) = 1``.

    This is the coefficient-one formulation the Rubel bound is stated for.
    """
    problem = falkner_skan(0.0, 1, eta_inf=M)
    assert problem.family is Family.FALKNER_SKAN
    return shooting_oracle(problem, s_bracket, M, tol=tol)
