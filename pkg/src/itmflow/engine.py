"""Transformation-method drivers.

* :func:`topfer_solve` -- the non-iterative method for the Blasius problem.
* :func:`evaluate_gamma` / :func:`itm_solve` -- the iterative method: embed
  the problem in a family parametrized by ``h``, integrate the starred initial
  value problem, and root-find the transformation function
  ``Gamma(h*) = lam**(-sigma) h* - 1``.
* :func:`gamma_profile` / :func:`solve_all_branches` -- sample ``Gamma`` to
  count its real zeros (one per solution of the BVP) and solve each of them.
* :func:`beta_min_continuation` -- march the Falkner-Skan parameter down to
  the fold where both skin frictions vanish.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.integrate import solve_ivp
from scipy.optimize import minimize_scalar

from .groups import (
    DomainError,
    GammaEvaluation,
    ProbeStatus,
    ScalingGroup,
    gamma_value,
    lambda_from_endpoint,
    rescale_trajectory,
)
from .ivp import IntegratorConfig, OdeSystem, Status, Trajectory, integrate
from .problems import (
    Family,
    ProblemSpec,
    auxiliary_initial_state,
    auxiliary_system,
    gamma_derivative,
    physical_system,
    sensitivity_initial_state,
    sensitivity_system,
)
from .roots import (
    InvalidBracket,
    IterationRecord,
    RootConfig,
    RootFindingError,
    bracket_scan,
    newton_solve,
    regula_falsi_solve,
    secant_solve,
    sign_changes,
)

__all__ = [
    "ContinuationResult",
    "ContinuationStalled",
    "DEFAULT_INTEGRATOR",
    "GammaProfile",
    "ItmRun",
    "Newton",
    "NotConverged",
    "RegulaFalsi",
    "Secant",
    "TopferResult",
    "beta_min_continuation",
    "boundary_residuals",
    "evaluate_gamma",
    "evaluate_gamma_with_derivative",
    "gamma_profile",
    "itm_solve",
    "ode_residual",
    "solve_all_branches",
    "topfer_solve",
]

log = logging.getLogger(__name__)

WARM_MAX_PROBES = 20

DEFAULT_INTEGRATOR = IntegratorConfig.adaptive(1.0e-10)

_STATUS = {Status.BLOWUP: ProbeStatus.BLOWUP, Status.STEP_FAILURE: ProbeStatus.STEP_FAILURE}


# -- non-iterative method ---------------------------------------------------


@dataclass
class TopferResult:
    lambda_t: float
    checkpoints: list[float]
    checkpoint_lambdas: list[float]
    converged: bool | None
    starred_solution: Trajectory
    physical_solution: Trajectory

    @property
    def agreement(self) -> float:
        if len(self.checkpoint_lambdas) < 2:
            return math.nan
        return abs(self.checkpoint_lambdas[-1] - self.checkpoint_lambdas[-2])


def topfer_solve(
    integrator: IntegratorConfig | None = None,
    checkpoints: Sequence[float] = (10.0,),
    agreement_tol: float = 1.0e-5,
) -> TopferResult:
    """Blasius wall shear from one integration of ``f''' = -f f''/2``, ``(0, 0, 1)``.

    At every checkpoint ``eta*_j`` the estimate ``lam_j = f*'(eta*_j)**(-3/2)``
    is recorded; the result is the last one. ``converged`` reports whether the
    last two estimates agree within ``agreement_tol`` (``None`` for a single
    checkpoint).
    """
    integrator = integrator or DEFAULT_INTEGRATOR
    cps = [float(c) for c in checkpoints]
    if not cps:
        raise ValueError("at least one checkpoint is required")
    if any(b <= a for a, b in zip([0.0] + cps[:-1], cps)):
        raise ValueError("checkpoints must be positive and strictly ascending")

    system = OdeSystem(3, lambda eta, y: (y[1], y[2], -0.5 * y[0] * y[2]))
    y = np.array([0.0, 0.0, 1.0])
    nodes, states, lams = [np.array([0.0])], [y[None, :]], []
    start = 0.0
    for cp in cps:
        seg = integrate(system, y, [start, cp], integrator)
        if not seg.completed:
            raise RuntimeError(f"Blasius auxiliary integration failed at eta* = {seg.eta_stop}")
        nodes.append(seg.nodes[1:])
        states.append(seg.states[1:])
        y = seg.end
        start = cp
        if not y[1] > 0:
            raise DomainError("f*' must be positive at the checkpoint", y[1])
        lams.append(float(y[1] ** -1.5))
    starred = Trajectory(np.concatenate(nodes), np.concatenate(states))
    # f*' flattens out at the plateau; allow integrator-level wiggle there
    fp = starred.states[:, 1]
    if np.any(np.diff(fp) < -1.0e-6 * max(1.0, float(np.max(np.abs(fp))))):
        raise ValueError("f*' is not monotone; the non-iterative method does not apply")

    lam_t = lams[-1]
    converged = None if len(lams) < 2 else bool(abs(lams[-1] - lams[-2]) < agreement_tol)
    physical = rescale_trajectory(starred, lam_t ** (-1.0 / 3.0), ScalingGroup(-1.0, 1.0))
    return TopferResult(lam_t, cps, lams, converged, starred, physical)


# -- transformation function ------------------------------------------------


def _skin_friction(lam: float, p: float, group: ScalingGroup) -> float:
    return lam ** (2.0 * group.delta - 1.0) * p


def evaluate_gamma(
    problem: ProblemSpec,
    h_star: float,
    integrator: IntegratorConfig | None = None,
    eta_inf: float | None = None,
) -> GammaEvaluation:
    """Integrate the starred problem at ``h*`` and evaluate ``Gamma``.

    Never raises for numerical trouble: a failed integration or a non-positive
    base for ``lam`` gives a failed probe with ``gamma = -1``.
    """
    if problem.family is Family.BLASIUS:
        raise ValueError("the Blasius problem is solved by topfer_solve, not by the iterative method")
    integrator = integrator or DEFAULT_INTEGRATOR
    eta_inf = problem.eta_inf if eta_inf is None else eta_inf
    h_star = float(h_star)
    if not (h_star > 0 and math.isfinite(h_star)):
        return GammaEvaluation.failed(h_star, ProbeStatus.DOMAIN)
    tr = integrate(auxiliary_system(problem, h_star), auxiliary_initial_state(problem, h_star), [0.0, eta_inf], integrator)
    if not tr.completed:
        return GammaEvaluation.failed(h_star, _STATUS[tr.status], tr)
    try:
        lam = lambda_from_endpoint(tr.end[1], h_star, problem.group, problem.asym)
    except DomainError:
        return GammaEvaluation.failed(h_star, ProbeStatus.DOMAIN, tr)
    gamma = gamma_value(h_star, lam, problem.group)
    return GammaEvaluation(h_star, lam, gamma, _skin_friction(lam, problem.p, problem.group), ProbeStatus.OK, tr)


def evaluate_gamma_with_derivative(
    problem: ProblemSpec,
    h_star: float,
    integrator: IntegratorConfig | None = None,
    eta_inf: float | None = None,
) -> tuple[GammaEvaluation, float]:
    """Sakiadis ``Gamma`` and ``dGamma/dh*`` from the six-equation sensitivity system."""
    if problem.family is not Family.SAKIADIS:
        raise ValueError("the sensitivity system is only available for the Sakiadis problem")
    integrator = integrator or DEFAULT_INTEGRATOR
    eta_inf = problem.eta_inf if eta_inf is None else eta_inf
    h_star = float(h_star)
    if not (h_star > 0 and math.isfinite(h_star)):
        return GammaEvaluation.failed(h_star, ProbeStatus.DOMAIN), math.nan
    tr = integrate(sensitivity_system(h_star), sensitivity_initial_state(h_star, problem.p), [0.0, eta_inf], integrator)
    if not tr.completed:
        return GammaEvaluation.failed(h_star, _STATUS[tr.status], tr), math.nan
    u = tr.end
    try:
        lam = lambda_from_endpoint(u[1], h_star, problem.group, problem.asym)
        dgamma = gamma_derivative(u[1], u[4], h_star)
    except DomainError:
        return GammaEvaluation.failed(h_star, ProbeStatus.DOMAIN, tr), math.nan
    gamma = gamma_value(h_star, lam, problem.group)
    ev = GammaEvaluation(h_star, lam, gamma, _skin_friction(lam, problem.p, problem.group), ProbeStatus.OK, tr)
    return ev, dgamma


# -- iterative method -------------------------------------------------------


@dataclass(frozen=True)
class Secant:
    h0: float
    h1: float


@dataclass(frozen=True)
class Newton:
    h0: float


@dataclass(frozen=True)
class RegulaFalsi:
    lo: float
    hi: float
    illinois: bool = True


Finder = Secant | Newton | RegulaFalsi


@dataclass
class ItmRun:
    problem: ProblemSpec
    records: list[IterationRecord]
    converged: bool
    final_h_star: float
    final_lambda: float
    skin_friction: float
    physical_solution: Trajectory
    starred_solution: Trajectory
    eta_inf: float
    finder: Finder | None = None

    @property
    def n_probes(self) -> int:
        return len(self.records)

    @property
    def final_gamma(self) -> float:
        return gamma_value(self.final_h_star, self.final_lambda, self.problem.group)

    @property
    def wall_slope(self) -> float:
        """Physical ``f'(0)``."""
        return float(self.physical_solution.states[0, 1])

    @property
    def physical_eta_inf(self) -> float:
        return float(self.physical_solution.nodes[-1])


class ItmError(RuntimeError):
    pass


class NotConverged(ItmError):
    """The root finder gave up; ``records`` is the partial iteration log."""

    def __init__(self, problem: ProblemSpec, records: Sequence[IterationRecord], cause: Exception):
        super().__init__(f"{problem.label}: {type(cause).__name__}: {cause}")
        self.problem = problem
        self.records = list(records)
        self.cause = cause


class ContinuationStalled(ItmError):
    def __init__(self, message: str, result: ContinuationResult):
        super().__init__(message)
        self.result = result


def itm_solve(
    problem: ProblemSpec,
    finder: Finder,
    integrator: IntegratorConfig | None = None,
    eta_inf: float | None = None,
    root_config: RootConfig | None = None,
    h_window: tuple[float, float] | None = None,
) -> ItmRun:
    """Root-find ``Gamma`` with the chosen finder and rescale the final starred solution.

    A :class:`RegulaFalsi` pair that does not bracket a sign change is
    replaced by the first bracket found by scanning ``[lo/10, 10 hi]``.
    With ``h_window`` set, iterates outside it count as failed probes without
    being integrated, which keeps a wandering secant from reaching ``h*``
    values where every integration is expensive.
    """
    integrator = integrator or DEFAULT_INTEGRATOR
    eta_inf = problem.eta_inf if eta_inf is None else float(eta_inf)
    cfg = root_config or RootConfig()
    evaluations: dict[float, GammaEvaluation] = {}

    def probe(h):
        if h_window is not None and not h_window[0] <= h <= h_window[1]:
            return GammaEvaluation.failed(float(h), ProbeStatus.DOMAIN)
        ev = evaluate_gamma(problem, h, integrator, eta_inf)
        if ev.ok:
            evaluations[ev.h_star] = ev
        return ev

    def dprobe(h):
        ev, dg = evaluate_gamma_with_derivative(problem, h, integrator, eta_inf)
        if ev.ok:
            evaluations[ev.h_star] = ev
        return ev, dg

    try:
        if isinstance(finder, Secant):
            root, records = secant_solve(probe, finder.h0, finder.h1, cfg)
        elif isinstance(finder, Newton):
            root, records = newton_solve(dprobe, finder.h0, cfg)
        elif isinstance(finder, RegulaFalsi):
            try:
                root, records = regula_falsi_solve(probe, (finder.lo, finder.hi), cfg, finder.illinois)
            except InvalidBracket as err:
                lo, hi = sorted((finder.lo, finder.hi))
                brackets, _ = bracket_scan(probe, (lo / 10.0, hi * 10.0), 32)
                if not brackets:
                    raise err
                log.info("%s: invalid bracket [%g, %g], using scanned %s", problem.label, lo, hi, brackets[0])
                root, records = regula_falsi_solve(probe, brackets[0], cfg, finder.illinois)
                records = err.log + records
        else:
            raise TypeError(f"unknown finder {finder!r}")
    except RootFindingError as err:
        raise NotConverged(problem, err.log, err) from err

    ev = evaluations[root]
    physical = rescale_trajectory(ev.trajectory, ev.lam, problem.group)
    return ItmRun(
        problem, records, True, root, ev.lam, ev.skin_friction, physical, ev.trajectory, eta_inf, finder
    )


# -- existence and multiplicity ---------------------------------------------


@dataclass
class GammaProfile:
    samples: list[GammaEvaluation]
    brackets: list[tuple[float, float]]

    @property
    def zero_count_evidence(self) -> int:
        return len(self.brackets)

    def as_columns(self) -> dict[str, np.ndarray]:
        return {
            "h_star": np.array([s.h_star for s in self.samples]),
            "gamma": np.array([s.gamma for s in self.samples]),
            "lambda": np.array([s.lam for s in self.samples]),
            "status": np.array([s.status.value for s in self.samples]),
        }


def gamma_profile(
    problem: ProblemSpec,
    h_range: Sequence[float],
    n_samples: int = 32,
    integrator: IntegratorConfig | None = None,
    eta_inf: float | None = None,
    spacing: str = "log",
    refine: bool = True,
) -> GammaProfile:
    """Sample ``Gamma`` over ``h_range`` and bracket its sign changes.

    Two zeros close to a fold can both fall between neighbouring samples.
    With ``refine`` on, every sampled local extremum of ``Gamma`` that bends
    toward zero without crossing it is searched on its neighbour interval;
    if the refined extremum has the opposite sign it is inserted as a sample,
    which exposes the hidden pair of brackets.
    """

    def probe(h):
        ev = evaluate_gamma(problem, h, integrator, eta_inf)
        ev.trajectory = None
        return ev

    brackets, samples = bracket_scan(probe, h_range, n_samples, spacing)
    if refine:
        extra = [ev for ev in (_refine_extremum(probe, *samples[i - 1 : i + 2]) for i in range(1, len(samples) - 1)) if ev]
        if extra:
            samples = sorted(samples + extra, key=lambda ev: ev.h_star)
            brackets = sign_changes(samples)
    return GammaProfile(samples, brackets)


def _refine_extremum(probe, left: GammaEvaluation, mid: GammaEvaluation, right: GammaEvaluation):
    if not (left.ok and mid.ok and right.ok):
        return None
    if left.gamma * mid.gamma <= 0 or mid.gamma * right.gamma <= 0:
        return None
    if not abs(mid.gamma) < min(abs(left.gamma), abs(right.gamma)):
        return None
    sign = math.copysign(1.0, mid.gamma)

    def objective(h):
        ev = probe(h)
        # failed probes must never look like an improvement
        return sign * ev.gamma if ev.ok else abs(mid.gamma) + 1.0

    width = right.h_star - left.h_star
    res = minimize_scalar(objective, bounds=(left.h_star, right.h_star), method="bounded", options={"xatol": 1e-9 * width})
    ev = probe(float(res.x))
    if ev.ok and ev.gamma * mid.gamma < 0:
        log.info("refined extremum at h* = %.9g reveals a zero pair (Gamma = %.3e)", ev.h_star, ev.gamma)
        return ev
    return None


def solve_all_branches(
    problem: ProblemSpec,
    h_range: Sequence[float],
    n_samples: int = 32,
    integrator: IntegratorConfig | None = None,
    eta_inf: float | None = None,
    root_config: RootConfig | None = None,
    spacing: str = "log",
    refine: bool = True,
) -> list[ItmRun]:
    """One regula falsi solve per bracket of the Gamma profile, ordered by ``h*``.

    An empty list is evidence of nonexistence, not an error.
    """
    profile = gamma_profile(problem, h_range, n_samples, integrator, eta_inf, spacing, refine)
    runs = []
    for lo, hi in profile.brackets:
        if lo == hi:
            lo, hi = lo * (1 - 1e-9), hi * (1 + 1e-9)
        runs.append(itm_solve(problem, RegulaFalsi(lo, hi), integrator, eta_inf, root_config))
    return sorted(runs, key=lambda r: r.final_h_star)


# -- verification helpers ---------------------------------------------------


def boundary_residuals(problem: ProblemSpec, physical: Trajectory) -> dict[str, float]:
    """``|f(0) - a|``, ``|f'(0) - b - c f''(0)|`` and ``|f'(eta_inf) - d|``."""
    bc = problem.boundary
    f0, fp0, fpp0 = physical.states[0]
    return {
        "f0": abs(f0 - bc.a),
        "fprime0": abs(fp0 - (bc.b + bc.c * fpp0)),
        "fprime_inf": abs(physical.states[-1, 1] - bc.d),
    }


def ode_residual(problem: ProblemSpec, physical: Trajectory, tol: float = 1.0e-12) -> float:
    """Largest deviation of ``physical`` from the ``h = 1`` equation's own solution.

    The physical initial value problem is re-solved from the trajectory's wall
    values with SciPy's DOP853 (independent of :mod:`itmflow.ivp`) and compared
    at every stored node.
    """
    system = physical_system(problem)
    sol = solve_ivp(
        lambda t, y: system(t, y),
        (physical.nodes[0], physical.nodes[-1]),
        physical.states[0],
        method="DOP853",
        t_eval=physical.nodes,
        rtol=tol,
        atol=tol,
    )
    if not sol.success:
        return math.inf
    return float(np.max(np.abs(sol.y.T - physical.states)))


# -- continuation to the Falkner-Skan fold ----------------------------------


@dataclass
class ContinuationResult:
    beta_values: list[float] = field(default_factory=list)
    skin_frictions_normal: list[float] = field(default_factory=list)
    skin_frictions_reverse: list[float] = field(default_factory=list)
    h_normal: list[float] = field(default_factory=list)
    h_reverse: list[float] = field(default_factory=list)
    eta_inf_values: list[float] = field(default_factory=list)
    probes_normal: list[int] = field(default_factory=list)
    probes_reverse: list[int] = field(default_factory=list)
    rejected_betas: list[float] = field(default_factory=list)
    beta_min_estimate: float = math.nan
    reached_floor: bool = False

    def append(self, beta, normal: ItmRun, reverse: ItmRun, eta_inf):
        self.beta_values.append(beta)
        self.skin_frictions_normal.append(normal.skin_friction)
        self.skin_frictions_reverse.append(reverse.skin_friction)
        self.h_normal.append(normal.final_h_star)
        self.h_reverse.append(reverse.final_h_star)
        self.eta_inf_values.append(eta_inf)
        self.probes_normal.append(normal.n_probes)
        self.probes_reverse.append(reverse.n_probes)


def _seed_branch(problem: ProblemSpec, integrator, root_config, h_range=(1.0, 1.0e4), n_samples=24) -> ItmRun:
    runs = solve_all_branches(problem, h_range, n_samples, integrator, None, root_config)
    if not runs:
        raise NotConverged(problem, [], InvalidBracket(f"no sign change of Gamma on {h_range}"))
    return runs[0]


def beta_min_continuation(
    start_beta: float = -0.1988,
    *,
    initial_step: float = 1.0e-3,
    min_step: float = 1.0e-12,
    floor: float = 1.0e-5,
    shrink_below: float = 1.0e-3,
    shrunk_eta_inf: float = 1.0,
    eta_inf: float = 20.0,
    seeds: tuple[float, float] | None = None,
    integrator: IntegratorConfig | None = None,
    root_config: RootConfig | None = None,
    max_steps: int = 1000,
) -> ContinuationResult:
    """March ``beta`` downward until both Falkner-Skan skin frictions fall below ``floor``.

    At every step both branches are solved by the secant method warm-started
    at ``(h_prev, 1.05 h_prev)``. A failure on either branch halves the step;
    the truncated boundary switches to ``shrunk_eta_inf`` once both skin
    frictions are smaller than ``shrink_below``. ``seeds`` are starting
    ``h*`` values for the normal and reverse branches at ``start_beta``; by
    default they are found by scanning ``Gamma``.
    """
    integrator = integrator or DEFAULT_INTEGRATOR
    cfg = root_config or RootConfig()
    from .problems import falkner_skan

    normal0 = falkner_skan(start_beta, 1, eta_inf)
    reverse0 = falkner_skan(start_beta, -1, eta_inf)
    if seeds is None:
        normal = _seed_branch(normal0, integrator, cfg)
        reverse = _seed_branch(reverse0, integrator, cfg)
    else:
        normal = itm_solve(normal0, Secant(seeds[0], 1.05 * seeds[0]), integrator, None, cfg)
        reverse = itm_solve(reverse0, Secant(seeds[1], 1.05 * seeds[1]), integrator, None, cfg)

    result = ContinuationResult()
    beta, step, cur_eta = start_beta, initial_step, eta_inf
    result.append(beta, normal, reverse, cur_eta)

    def small(limit):
        return abs(normal.skin_friction) < limit and abs(reverse.skin_friction) < limit

    for _ in range(max_steps):
        if small(floor):
            result.reached_floor = True
            break
        if cur_eta != shrunk_eta_inf and small(shrink_below):
            cur_eta = shrunk_eta_inf
            try:
                normal = _warm(normal, beta, cur_eta, integrator, cfg)
                reverse = _warm(reverse, beta, cur_eta, integrator, cfg)
            except NotConverged as err:
                raise ContinuationStalled(f"re-solve at eta_inf = {cur_eta} failed: {err}", result) from err
            result.append(beta, normal, reverse, cur_eta)
            continue
        trial = beta - step
        try:
            n_run = _warm(normal, trial, cur_eta, integrator, cfg)
            r_run = _warm(reverse, trial, cur_eta, integrator, cfg)
        except NotConverged:
            result.rejected_betas.append(trial)
            step *= 0.5
            if step < min_step:
                result.beta_min_estimate = beta
                raise ContinuationStalled(
                    f"step fell below {min_step:g} at beta = {beta!r} before reaching the floor", result
                )
            continue
        if n_run.skin_friction <= 0 or r_run.skin_friction >= 0:
            # a branch jumped onto the other sign; treat like a failure
            result.rejected_betas.append(trial)
            step *= 0.5
            continue
        beta, normal, reverse = trial, n_run, r_run
        result.append(beta, normal, reverse, cur_eta)
        log.debug("beta=%.12f  f''(0)=%+.3e / %+.3e  step=%.1e", beta, normal.skin_friction, reverse.skin_friction, step)
    result.beta_min_estimate = beta
    if not result.reached_floor:
        raise ContinuationStalled(f"floor {floor:g} not reached within {max_steps} steps", result)
    return result


def _warm(run: ItmRun, beta: float, eta_inf: float, integrator, cfg) -> ItmRun:
    problem = run.problem.with_param(beta).with_eta_inf(eta_inf)
    h = run.final_h_star
    # a warm start converges in a handful of probes; past the fold it wanders,
    # so give up early and let the step control halve
    cfg = replace(cfg, max_iter=min(cfg.max_iter, WARM_MAX_PROBES))
    return itm_solve(problem, Secant(h, 1.05 * h), integrator, None, cfg, h_window=(h / 8.0, 8.0 * h))
