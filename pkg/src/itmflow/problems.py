"""Boundary-layer problem definitions.

Every family is a third-order problem ``f''' = phi(eta, f, f', f'')`` with
``f(0) = a``, ``f'(0) = b + c f''(0)`` and ``f'(inf) = d``. The table below
lists the families and their embedding (``delta = -1`` throughout):

============  ===========================  ==========================  =====
family        equation                     starred initial data        sigma
============  ===========================  ==========================  =====
Blasius       f''' = -f f''/2              (0, 0, 1)                   --
Sakiadis      f''' = -f f''/2              (0, sqrt(h*), -1)           4
Slip(c)       f''' = -f f''/2              (0, h* c p, p)              -1
Moving(b)     f''' = -f f''/2              (0, h* b, 1)                2
FalknerSkan   f''' = -f f'' - beta(h*-f'^2)  (0, 0, +-1)               4
============  ===========================  ==========================  =====

The Blasius/Sakiadis families keep the 1/2 coefficient; Falkner-Skan uses
coefficient one. The two normalizations are never converted into each other.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .groups import AsymptoticSpec, DomainError, ScalingGroup, starred_initial_state
from .ivp import OdeSystem

__all__ = [
    "BoundarySpec",
    "Family",
    "ProblemSpec",
    "auxiliary_initial_state",
    "auxiliary_system",
    "blasius",
    "falkner_skan",
    "gamma_derivative",
    "moving_surface",
    "physical_system",
    "rhs",
    "sakiadis",
    "sensitivity_initial_state",
    "sensitivity_rhs",
    "sensitivity_system",
    "slip",
]


class Family(enum.Enum):
    BLASIUS = "blasius"
    SAKIADIS = "sakiadis"
    SLIP = "slip"
    MOVING = "moving"
    FALKNER_SKAN = "falkner-skan"


@dataclass(frozen=True)
class BoundarySpec:
    a: float = 0.0
    b: float = 0.0
    c: float = 0.0
    d: float = 1.0

    def __post_init__(self):
        for name in ("a", "b", "c", "d"):
            if not math.isfinite(getattr(self, name)):
                raise ValueError(f"boundary constant {name} must be finite")


@dataclass(frozen=True)
class ProblemSpec:
    """One boundary-layer BVP together with its embedding.

    ``param`` is the family parameter: ``c`` for slip, ``b`` for moving
    surfaces, ``beta`` for Falkner-Skan, unused otherwise. ``p`` is the
    starred ``f''(0)``.
    """

    family: Family
    boundary: BoundarySpec
    group: ScalingGroup
    p: int
    asym: AsymptoticSpec
    param: float = 0.0
    eta_inf: float = 10.0
    metadata: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.p not in (1, -1):
            raise ValueError(f"p must be +1 or -1, got {self.p}")
        if not self.eta_inf > 0:
            raise ValueError("eta_inf must be positive")

    @property
    def beta(self) -> float:
        if self.family is not Family.FALKNER_SKAN:
            raise AttributeError("beta is only defined for Falkner-Skan problems")
        return self.param

    @property
    def label(self) -> str:
        if self.family in (Family.BLASIUS, Family.SAKIADIS):
            return f"{self.family.value}(p={self.p:+d})"
        name = {Family.SLIP: "c", Family.MOVING: "b", Family.FALKNER_SKAN: "beta"}[self.family]
        return f"{self.family.value}({name}={self.param:g}, p={self.p:+d})"

    def with_eta_inf(self, eta_inf: float) -> ProblemSpec:
        return replace(self, eta_inf=eta_inf)

    def with_p(self, p: int) -> ProblemSpec:
        return replace(self, p=p)

    def with_param(self, value: float) -> ProblemSpec:
        """Same family with a new parameter; boundary constants follow it."""
        boundary = self.boundary
        if self.family is Family.SLIP:
            boundary = replace(boundary, c=value)
        elif self.family is Family.MOVING:
            boundary = replace(boundary, b=value)
        return replace(self, param=value, boundary=boundary)


def blasius(eta_inf: float = 10.0) -> ProblemSpec:
    """Flat plate in a uniform stream, ``f'(inf) = 1``.

    Solved by the non-iterative transformation; the group entry is only used
    for rescaling (``sigma`` is irrelevant there).
    """
    return ProblemSpec(Family.BLASIUS, BoundarySpec(0, 0, 0, 1), ScalingGroup(-1, 1), 1, AsymptoticSpec(1), 0.0, eta_inf)


def sakiadis(p: int = -1, eta_inf: float = 10.0) -> ProblemSpec:
    """Moving plate in quiescent fluid: ``f'(0) = 1``, ``f'(inf) = 0``."""
    return ProblemSpec(
        Family.SAKIADIS, BoundarySpec(0, 1, 0, 0), ScalingGroup(-1, 4), p, AsymptoticSpec(0, homogeneous=True), 0.0, eta_inf
    )


def slip(c: float, p: int = 1, eta_inf: float = 10.0) -> ProblemSpec:
    """Blasius flow with slip ``f'(0) = c f''(0)``."""
    return ProblemSpec(Family.SLIP, BoundarySpec(0, 0, c, 1), ScalingGroup(-1, -1), p, AsymptoticSpec(1), c, eta_inf)


def moving_surface(b: float, p: int = 1, eta_inf: float = 10.0) -> ProblemSpec:
    """Blasius equation with ``f'(0) = b`` (``-b`` is the plate/stream velocity ratio)."""
    return ProblemSpec(Family.MOVING, BoundarySpec(0, b, 0, 1), ScalingGroup(-1, 2), p, AsymptoticSpec(1), b, eta_inf)


def falkner_skan(beta: float, p: int = 1, eta_inf: float = 20.0) -> ProblemSpec:
    """Wedge flow ``f''' + f f'' + beta (1 - f'^2) = 0``; ``p = +1`` normal, ``-1`` reverse flow."""
    return ProblemSpec(
        Family.FALKNER_SKAN, BoundarySpec(0, 0, 0, 1), ScalingGroup(-1, 4), p, AsymptoticSpec(1), beta, eta_inf
    )


def phi(spec: ProblemSpec):
    """``phi(eta, f, f', f'')`` of the original (``h = 1``) problem."""
    if spec.family is Family.FALKNER_SKAN:
        beta = spec.param
        return lambda eta, f, fp, fpp: -f * fpp - beta * (1.0 - fp * fp)
    return lambda eta, f, fp, fpp: -0.5 * f * fpp


def rhs(spec: ProblemSpec, h_star: float = 1.0):
    """First-order right-hand side of the embedded equation at ``h*``.

    Only Falkner-Skan carries ``h*`` in the equation; the other families are
    invariant and see ``h*`` through their initial data alone.
    """
    if spec.family is Family.FALKNER_SKAN:
        beta = spec.param
        h = float(h_star)

        def fs(eta, y):
            f, fp, fpp = y[0], y[1], y[2]
            return (fp, fpp, -f * fpp - beta * (h - fp * fp))

        return fs

    def half(eta, y):
        return (y[1], y[2], -0.5 * y[0] * y[2])

    return half


def auxiliary_initial_state(spec: ProblemSpec, h_star: float) -> np.ndarray:
    """``(f*(0), f*'(0), f*''(0))`` at ``h*``."""
    if not h_star > 0:
        raise DomainError("h* must be positive", h_star)
    if spec.family is Family.BLASIUS:
        return np.array([0.0, 0.0, float(spec.p)])
    bc = spec.boundary
    return starred_initial_state(bc.a, bc.b, bc.c, spec.p, h_star, spec.group)


def auxiliary_system(spec: ProblemSpec, h_star: float) -> OdeSystem:
    params = {"h_star": float(h_star)}
    if spec.family is not Family.BLASIUS:
        params[spec.family.value] = spec.param
    return OdeSystem(3, rhs(spec, h_star), params)


def physical_system(spec: ProblemSpec) -> OdeSystem:
    """The original equation (``h = 1``) as a first-order system."""
    return OdeSystem(3, rhs(spec, 1.0), {"param": spec.param})


def physical_initial_state(spec: ProblemSpec, s: float) -> np.ndarray:
    """Initial data of the original problem for a trial wall shear ``s``."""
    bc = spec.boundary
    return np.array([bc.a, bc.b + bc.c * s, s])


def sensitivity_rhs(h_star: float | None = None):
    """Sakiadis equation augmented with its derivative with respect to ``h``.

    ``u1..u3 = f, f', f''`` and ``u4..u6`` are their ``h``-derivatives; ``h*``
    enters only through the initial data.
    """

    def sens(eta, u):
        u1, u2, u3, u4, u5, u6 = u
        return (u2, u3, -0.5 * u1 * u3, u5, u6, -0.5 * (u4 * u3 + u1 * u6))

    return sens


def sensitivity_initial_state(h_star: float, p: int = -1) -> np.ndarray:
    if not h_star > 0:
        raise DomainError("h* must be positive", h_star)
    r = math.sqrt(h_star)
    return np.array([0.0, r, float(p), 0.0, 0.5 / r, 0.0])


def sensitivity_system(h_star: float) -> OdeSystem:
    return OdeSystem(6, sensitivity_rhs(h_star), {"h_star": float(h_star)})


def gamma_derivative(u2_end: float, u5_end: float, h_star: float) -> float:
    """``dGamma/dh*`` for Sakiadis from the sensitivity endpoint values."""
    r = math.sqrt(h_star)
    base = u2_end + r
    if not base > 0:
        raise DomainError("u2(eta_inf) + sqrt(h*) must be positive", base)
    return base**-2 * (1.0 - 2.0 * (u5_end + 0.5 / r) / base * h_star)
