"""Extended scaling groups ``f* = lam f, eta* = lam**delta eta, h* = lam**sigma h``.

The functions here are the algebra shared by every problem family: the group
parameter from the asymptotic value, the transformation function, the starred
initial data of the embedded problem, and rescaling of starred trajectories
back to physical variables.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from .ivp import Trajectory

__all__ = [
    "AsymptoticSpec",
    "DomainError",
    "GammaEvaluation",
    "ProbeStatus",
    "ScalingGroup",
    "embed_phi",
    "gamma_value",
    "lambda_from_endpoint",
    "rescale_trajectory",
    "starred_initial_state",
]


class DomainError(ValueError):
    """A fractional power was requested of a non-positive base."""

    def __init__(self, message: str, base: float):
        super().__init__(f"{message} (base = {base!r})")
        self.base = base


@dataclass(frozen=True)
class ScalingGroup:
    delta: float
    sigma: float

    def __post_init__(self):
        if self.delta == 1:
            raise ValueError("delta must differ from 1")
        if self.sigma == 0:
            raise ValueError("sigma must be nonzero")


@dataclass(frozen=True)
class AsymptoticSpec:
    """Target ``d`` of ``f'`` at infinity.

    ``homogeneous=True`` selects the shifted formula used when ``d = 0``.
    """

    d: float
    homogeneous: bool = False

    def __post_init__(self):
        if self.homogeneous and self.d != 0:
            raise ValueError("a homogeneous asymptotic condition needs d = 0")
        if not self.homogeneous and self.d == 0:
            raise ValueError("d = 0 requires homogeneous=True")


class ProbeStatus(enum.Enum):
    OK = "ok"
    BLOWUP = "blowup"
    STEP_FAILURE = "step_failure"
    DOMAIN = "domain"


@dataclass
class GammaEvaluation:
    """One evaluation of the transformation function.

    Failed probes carry ``gamma = -1`` and NaN for ``lam`` and
    ``skin_friction``. ``trajectory`` is the starred solution when it was kept.
    """

    h_star: float
    lam: float
    gamma: float
    skin_friction: float
    status: ProbeStatus = ProbeStatus.OK
    trajectory: Trajectory | None = None

    @property
    def ok(self) -> bool:
        return self.status is ProbeStatus.OK

    @classmethod
    def failed(cls, h_star: float, status: ProbeStatus, trajectory: Trajectory | None = None) -> GammaEvaluation:
        return cls(h_star, math.nan, -1.0, math.nan, status, trajectory)


def lambda_from_endpoint(fprime_end: float, h_star: float, group: ScalingGroup, asym: AsymptoticSpec) -> float:
    """Group parameter from the starred derivative at the truncated boundary.

    Non-homogeneous: ``lam = (f*'(eta_inf) / d) ** (1 / (1 - delta))``.
    Homogeneous: ``lam = (f*'(eta_inf) + h* ** ((1 - delta) / sigma)) ** (1 / (1 - delta))``.
    """
    e = 1.0 / (1.0 - group.delta)
    if asym.homogeneous:
        base = fprime_end + h_star ** ((1.0 - group.delta) / group.sigma)
    else:
        base = fprime_end / asym.d
    if not base > 0:
        raise DomainError("cannot take the positive root of a non-positive base", base)
    return base**e


def gamma_value(h_star: float, lam: float, group: ScalingGroup) -> float:
    """``lam**(-sigma) * h* - 1``."""
    if not lam > 0:
        raise DomainError("lambda must be positive", lam)
    return lam ** (-group.sigma) * h_star - 1.0


def starred_initial_state(a: float, b: float, c: float, p: float, h_star: float, group: ScalingGroup) -> np.ndarray:
    """Initial data ``(f*(0), f*'(0), f*''(0))`` of the embedded problem.

    The embedded conditions are ``f(0) = h**(1/sigma) a`` and
    ``f'(0) = h**((1-delta)/sigma) b + h**(delta/sigma) c f''(0)``; both are
    invariant under the group, so the starred values follow by replacing
    ``h`` with ``h*`` and ``f''(0)`` with ``p``.
    """
    d, s = group.delta, group.sigma
    f0 = h_star ** (1.0 / s) * a if a else 0.0
    fp0 = 0.0
    if b:
        fp0 += h_star ** ((1.0 - d) / s) * b
    if c:
        fp0 += h_star ** (d / s) * c * p
    return np.array([f0, fp0, float(p)])


def embed_phi(phi: Callable[[float, float, float, float], float], group: ScalingGroup, h: float):
    """Right-hand side of the group-invariant embedding of ``f''' = phi(eta, f, f', f'')``.

    Returns ``g`` with ``g(eta, f, f', f'') = h**((1-3d)/s) * phi(h**(-d/s) eta,
    h**(-1/s) f, h**((d-1)/s) f', h**((2d-1)/s) f'')``; at ``h = 1`` it is
    ``phi`` itself.
    """
    d, s = group.delta, group.sigma
    k_out = h ** ((1 - 3 * d) / s)
    k_eta = h ** (-d / s)
    k0 = h ** (-1 / s)
    k1 = h ** ((d - 1) / s)
    k2 = h ** ((2 * d - 1) / s)

    def g(eta, f, fp, fpp):
        return k_out * phi(k_eta * eta, k0 * f, k1 * fp, k2 * fpp)

    return g


def rescale_trajectory(starred: Trajectory, lam: float, group: ScalingGroup) -> Trajectory:
    """Map a starred trajectory to physical variables (first three components).

    ``eta = lam**(-delta) eta*``, ``f = f*/lam``, ``f' = lam**(delta-1) f*'``,
    ``f'' = lam**(2 delta - 1) f*''``.
    """
    if not lam > 0:
        raise DomainError("lambda must be positive", lam)
    d = group.delta
    scale = np.array([lam**-1.0, lam ** (d - 1.0), lam ** (2.0 * d - 1.0)])
    states = starred.states[:, :3] * scale
    eta_stop = None if starred.eta_stop is None else starred.eta_stop * lam**-d
    return Trajectory(starred.nodes * lam**-d, states, starred.status, eta_stop)
