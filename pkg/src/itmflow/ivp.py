"""Explicit Runge-Kutta integrators for first-order ODE systems.

Two drivers are provided:

* :func:`integrate_fixed` -- the classical fourth-order Runge-Kutta sweep with
  a uniform step (the last step is shortened to land on the end point).
* :func:`integrate_adaptive` -- the Dormand-Prince 5(4) embedded pair with
  per-component error control.

Neither driver raises on mathematical blow-up. A solution whose magnitude
exceeds ``blowup_threshold`` stops with status :attr:`Status.BLOWUP`, and a
non-finite right-hand side or a collapsed step stops with
:attr:`Status.STEP_FAILURE`. The transformation-method drivers rely on these
codes to mark failed probes.
"""

from __future__ import annotations

import enum
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "Adaptive",
    "FixedRK4",
    "IntegratorConfig",
    "OdeSystem",
    "Status",
    "Trajectory",
    "integrate",
    "integrate_adaptive",
    "integrate_fixed",
]

DEFAULT_BLOWUP = 1.0e8

Rhs = Callable[[float, np.ndarray], Sequence[float]]


class Status(enum.Enum):
    COMPLETED = "completed"
    BLOWUP = "blowup"
    STEP_FAILURE = "step_failure"


@dataclass(frozen=True)
class OdeSystem:
    """A first-order system ``y' = rhs(eta, y)`` of fixed dimension.

    ``parameters`` is informational (e.g. ``{"beta": -0.1, "h_star": 2.0}``)
    and is carried along for logging.
    """

    dimension: int
    rhs: Rhs
    parameters: dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if self.dimension < 1:
            raise ValueError(f"dimension must be positive, got {self.dimension}")

    def __call__(self, eta: float, y: np.ndarray) -> np.ndarray:
        return np.asarray(self.rhs(eta, y), dtype=float)


@dataclass
class Trajectory:
    """Accepted nodes of an integration.

    ``states[i]`` is the state at ``nodes[i]``. When the run did not complete,
    ``eta_stop`` holds the abscissa where it was abandoned; the stored states
    end at the last finite, below-threshold node.
    """

    nodes: np.ndarray
    states: np.ndarray
    status: Status = Status.COMPLETED
    eta_stop: float | None = None

    @property
    def completed(self) -> bool:
        return self.status is Status.COMPLETED

    @property
    def end(self) -> np.ndarray:
        return self.states[-1]

    @property
    def start(self) -> np.ndarray:
        return self.states[0]

    def __len__(self) -> int:
        return len(self.nodes)

    def component(self, i: int) -> np.ndarray:
        return self.states[:, i]

    def at(self, eta: float | np.ndarray) -> np.ndarray:
        """Linear interpolation of every component at ``eta``."""
        eta = np.asarray(eta, dtype=float)
        cols = [np.interp(eta, self.nodes, self.states[:, i]) for i in range(self.states.shape[1])]
        return np.stack(cols, axis=-1)


@dataclass(frozen=True)
class FixedRK4:
    step: float

    def __post_init__(self):
        if not self.step > 0:
            raise ValueError(f"step must be positive, got {self.step}")


@dataclass(frozen=True)
class Adaptive:
    rel_tol: float = 1.0e-10
    abs_tol: float = 1.0e-10
    initial_step: float = 1.0e-3
    min_step: float = 1.0e-12
    max_step: float = 1.0
    max_steps: int = 50_000

    def __post_init__(self):
        if self.max_steps < 1:
            raise ValueError("max_steps must be positive")
        for name in ("rel_tol", "abs_tol"):
            tol = getattr(self, name)
            if not 0.0 < tol < 1.0:
                raise ValueError(f"{name} must lie in (0, 1), got {tol}")
        if not 0.0 < self.min_step <= self.initial_step <= self.max_step:
            raise ValueError(
                "need 0 < min_step <= initial_step <= max_step, got "
                f"{self.min_step}, {self.initial_step}, {self.max_step}"
            )


@dataclass(frozen=True)
class IntegratorConfig:
    mode: FixedRK4 | Adaptive = field(default_factory=Adaptive)
    blowup_threshold: float = DEFAULT_BLOWUP

    def __post_init__(self):
        if not self.blowup_threshold > 0:
            raise ValueError("blowup_threshold must be positive")

    @classmethod
    def adaptive(cls, tol: float = 1.0e-10, **kwargs) -> IntegratorConfig:
        """Adaptive config with equal relative and absolute tolerance."""
        blowup = kwargs.pop("blowup_threshold", DEFAULT_BLOWUP)
        return cls(Adaptive(rel_tol=tol, abs_tol=tol, **kwargs), blowup)

    @classmethod
    def fixed(cls, step: float, blowup_threshold: float = DEFAULT_BLOWUP) -> IntegratorConfig:
        return cls(FixedRK4(step), blowup_threshold)


def _check_inputs(system: OdeSystem, y0, span) -> tuple[np.ndarray, float, float]:
    y0 = np.array(y0, dtype=float)
    if y0.shape != (system.dimension,):
        raise ValueError(f"initial state has shape {y0.shape}, system dimension is {system.dimension}")
    a, b = float(span[0]), float(span[1])
    if not a < b:
        raise ValueError(f"span must satisfy eta_a < eta_b, got [{a}, {b}]")
    return y0, a, b


def _finish(nodes, states, status, eta_stop=None) -> Trajectory:
    return Trajectory(np.array(nodes), np.array(states), status, eta_stop)


def _bad(y: np.ndarray, cap: float) -> Status | None:
    if not np.all(np.isfinite(y)):
        return Status.STEP_FAILURE
    if np.max(np.abs(y)) > cap:
        return Status.BLOWUP
    return None


def integrate_fixed(
    system: OdeSystem,
    y0,
    span: Sequence[float],
    step: float,
    blowup_threshold: float = DEFAULT_BLOWUP,
) -> Trajectory:
    """Classical RK4 with uniform ``step``; the final step lands on ``span[1]``."""
    y, a, b = _check_inputs(system, y0, span)
    if not step > 0:
        raise ValueError("step must be positive")
    n_full = int(math.floor((b - a) / step * (1 + 1e-14)))
    grid = a + step * np.arange(n_full + 1)
    if b - grid[-1] > 1e-12 * max(1.0, abs(b)):
        grid = np.append(grid, b)
    else:
        grid[-1] = b

    nodes, states = [a], [y.copy()]
    f = system.rhs
    for t0, t1 in zip(grid[:-1], grid[1:]):
        h = t1 - t0
        k1 = np.asarray(f(t0, y), dtype=float)
        k2 = np.asarray(f(t0 + 0.5 * h, y + 0.5 * h * k1), dtype=float)
        k3 = np.asarray(f(t0 + 0.5 * h, y + 0.5 * h * k2), dtype=float)
        k4 = np.asarray(f(t1, y + h * k3), dtype=float)
        y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        bad = _bad(y, blowup_threshold)
        if bad is not None:
            return _finish(nodes, states, bad, float(t1))
        nodes.append(float(t1))
        states.append(y)
    return _finish(nodes, states, Status.COMPLETED)


# Dormand-Prince 5(4) tableau.
_C = np.array([0.0, 1 / 5, 3 / 10, 4 / 5, 8 / 9, 1.0, 1.0])
_A = np.array(
    [
        [0, 0, 0, 0, 0, 0],
        [1 / 5, 0, 0, 0, 0, 0],
        [3 / 40, 9 / 40, 0, 0, 0, 0],
        [44 / 45, -56 / 15, 32 / 9, 0, 0, 0],
        [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729, 0, 0],
        [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656, 0],
        [35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
    ]
)
_B5 = np.array([35 / 384, 0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0])
_B4 = np.array([5179 / 57600, 0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])
_E = _B5 - _B4


def integrate_adaptive(
    system: OdeSystem,
    y0,
    span: Sequence[float],
    config: IntegratorConfig | Adaptive | None = None,
) -> Trajectory:
    """Dormand-Prince 5(4) with local extrapolation.

    A step is accepted when ``|err_i| <= rel_tol * max(|y_i|, |y_new_i|) + abs_tol``
    for every component. The first-same-as-last stage is reused. More than
    ``max_steps`` attempted steps (accepted or not) ends the run with
    :attr:`Status.STEP_FAILURE`, so no single integration can run unbounded.
    """
    if config is None:
        config = IntegratorConfig()
    if isinstance(config, Adaptive):
        config = IntegratorConfig(config)
    mode = config.mode
    if not isinstance(mode, Adaptive):
        raise TypeError("integrate_adaptive needs an Adaptive mode")
    y, a, b = _check_inputs(system, y0, span)
    cap = config.blowup_threshold
    f = system.rhs
    n = system.dimension

    nodes, states = [a], [y.copy()]
    t = a
    h = min(mode.initial_step, mode.max_step, b - a)
    K = np.empty((7, n))
    k0 = np.asarray(f(t, y), dtype=float)
    if not np.all(np.isfinite(k0)):
        return _finish(nodes, states, Status.STEP_FAILURE, t)
    K[0] = k0
    span_tol = 4 * np.finfo(float).eps * max(1.0, abs(b))

    attempts = 0
    while t < b:
        attempts += 1
        if attempts > mode.max_steps:
            return _finish(nodes, states, Status.STEP_FAILURE, t)
        last = False
        if t + h >= b - span_tol:
            h = b - t
            last = True
        elif t + 1.1 * h >= b:
            # avoid leaving a sliver for the final step
            h = 0.5 * (b - t)
        for i in range(1, 7):
            K[i] = f(t + _C[i] * h, y + h * (_A[i, :i] @ K[:i]))
        y_new = y + h * (_B5 @ K)
        if not (np.all(np.isfinite(K)) and np.all(np.isfinite(y_new))):
            # treat as a rejected step; shrink and retry
            h *= 0.25
            if h < mode.min_step:
                return _finish(nodes, states, Status.STEP_FAILURE, t)
            continue
        err = h * (_E @ K)
        scale = mode.rel_tol * np.maximum(np.abs(y), np.abs(y_new)) + mode.abs_tol
        ratio = float(np.max(np.abs(err) / scale))
        if ratio <= 1.0:
            t = b if last else t + h
            y = y_new
            K[0] = K[6]
            bad = _bad(y, cap)
            if bad is not None:
                return _finish(nodes, states, bad, t)
            nodes.append(t)
            states.append(y)
            fac = 5.0 if ratio == 0.0 else min(5.0, 0.9 * ratio ** -0.2)
            h = min(h * fac, mode.max_step)
        else:
            h *= max(0.2, 0.9 * ratio ** -0.2)
            if h < mode.min_step:
                return _finish(nodes, states, Status.STEP_FAILURE, t)
    return _finish(nodes, states, Status.COMPLETED)


def integrate(system: OdeSystem, y0, span: Sequence[float], config: IntegratorConfig | None = None) -> Trajectory:
    """Dispatch on ``config.mode``."""
    if config is None:
        config = IntegratorConfig()
    if isinstance(config.mode, FixedRK4):
        return integrate_fixed(system, y0, span, config.mode.step, config.blowup_threshold)
    return integrate_adaptive(system, y0, span, config)
