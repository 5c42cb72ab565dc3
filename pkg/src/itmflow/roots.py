"""Scalar root finders for the transformation function.

Every finder calls a *probe* ``h -> GammaEvaluation`` and keeps one
:class:`IterationRecord` per probe call, so the returned log doubles as the
iteration table. Probes that fail (blow-up, step failure, negative asymptote)
are never fed into an update: secant and Newton move the failed iterate
halfway back toward the last successful one and retry.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np

from .groups import GammaEvaluation, ProbeStatus

__all__ = [
    "DegenerateSecant",
    "FailedProbeRecovery",
    "InvalidBracket",
    "IterationRecord",
    "MaxIterExceeded",
    "RootConfig",
    "RootFindingError",
    "ZeroDerivative",
    "bracket_scan",
    "newton_solve",
    "regula_falsi_solve",
    "scalar_probe",
    "secant_solve",
    "sign_changes",
]

Probe = Callable[[float], GammaEvaluation]
DerivativeProbe = Callable[[float], tuple[GammaEvaluation, float]]

MAX_RECOVERIES = 5


@dataclass(frozen=True)
class RootConfig:
    tol_gamma: float = 1.0e-9
    tol_rel: float = 1.0e-6
    tol_abs: float = 1.0e-6
    max_iter: int = 50

    def __post_init__(self):
        for name in ("tol_gamma", "tol_rel", "tol_abs"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if self.max_iter < 2:
            raise ValueError("max_iter must be at least 2")


@dataclass(frozen=True)
class IterationRecord:
    index: int
    h_star: float
    gamma: float
    lam: float
    skin_friction: float
    status: ProbeStatus

    @property
    def ok(self) -> bool:
        return self.status is ProbeStatus.OK


class RootFindingError(RuntimeError):
    def __init__(self, message: str, log: Sequence[IterationRecord] = ()):
        super().__init__(message)
        self.log = list(log)


class MaxIterExceeded(RootFindingError):
    pass


class DegenerateSecant(RootFindingError):
    pass


class FailedProbeRecovery(RootFindingError):
    pass


class ZeroDerivative(RootFindingError):
    pass


class InvalidBracket(RootFindingError):
    pass


def scalar_probe(func: Callable[[float], float]) -> Probe:
    """Wrap a plain function as a probe (``lam`` and skin friction are NaN)."""

    def probe(h):
        return GammaEvaluation(h, math.nan, float(func(h)), math.nan)

    return probe


@dataclass
class _Logger:
    probe: Callable
    config: RootConfig
    log: list[IterationRecord] = field(default_factory=list)

    def __call__(self, h: float):
        if len(self.log) >= self.config.max_iter:
            raise MaxIterExceeded(f"no convergence within {self.config.max_iter} probes", self.log)
        out = self.probe(h)
        ev = out[0] if isinstance(out, tuple) else out
        self.log.append(IterationRecord(len(self.log), ev.h_star, ev.gamma, ev.lam, ev.skin_friction, ev.status))
        return out


def _step_small(h_new: float, h_old: float, cfg: RootConfig) -> bool:
    return abs(h_new - h_old) <= cfg.tol_rel * abs(h_new) + cfg.tol_abs


def _recover(call: _Logger, h: float, anchor: float | None, first):
    """Probe ``h``; on failure bisect toward ``anchor`` up to MAX_RECOVERIES times."""
    out = first if first is not None else call(h)
    ev = out[0] if isinstance(out, tuple) else out
    tries = 0
    while not ev.ok:
        if anchor is None or tries >= MAX_RECOVERIES:
            raise FailedProbeRecovery(f"probe failed at h* = {ev.h_star!r} ({ev.status.value})", call.log)
        h = 0.5 * (h + anchor)
        tries += 1
        out = call(h)
        ev = out[0] if isinstance(out, tuple) else out
    return h, out


def secant_solve(probe: Probe, h0: float, h1: float, config: RootConfig | None = None):
    """Secant iteration on ``Gamma(h*)``.

    Stops when ``|Gamma| <= tol_gamma`` and
    ``|h_j - h_{j-1}| <= tol_rel |h_j| + tol_abs``. Returns ``(root, log)``.
    """
    cfg = config or RootConfig()
    if h0 == h1:
        raise ValueError("secant needs two distinct starting iterates")
    call = _Logger(probe, cfg)

    e0 = call(h0)
    e1 = call(h1)
    if not e0.ok and not e1.ok:
        raise FailedProbeRecovery("both starting probes failed", call.log)
    if not e0.ok:
        h0, e0 = _recover(call, h0, h1, e0)
    elif not e1.ok:
        h1, e1 = _recover(call, h1, h0, e1)

    while True:
        if abs(e1.gamma) <= cfg.tol_gamma and _step_small(h1, h0, cfg):
            return h1, call.log
        dg = e1.gamma - e0.gamma
        if dg == 0 or abs(dg) <= 4 * np.finfo(float).eps * max(abs(e0.gamma), abs(e1.gamma)):
            if abs(e1.gamma) <= cfg.tol_gamma:
                return h1, call.log
            raise DegenerateSecant(f"equal Gamma values at h* = {h0!r}, {h1!r}", call.log)
        h2 = h1 - e1.gamma * (h1 - h0) / dg
        if not math.isfinite(h2):
            raise DegenerateSecant("secant update is not finite", call.log)
        h2, e2 = _recover(call, h2, h1, None)
        h0, e0, h1, e1 = h1, e1, h2, e2


def newton_solve(probe_with_derivative: DerivativeProbe, h0: float, config: RootConfig | None = None):
    """Newton iteration ``h <- h - Gamma / Gamma'`` with the secant stopping rule."""
    cfg = config or RootConfig()
    call = _Logger(probe_with_derivative, cfg)
    h, (ev, dg) = _recover(call, h0, None, None)
    h_prev = None
    while True:
        if h_prev is not None and abs(ev.gamma) <= cfg.tol_gamma and _step_small(h, h_prev, cfg):
            return h, call.log
        if dg == 0 or not math.isfinite(dg):
            raise ZeroDerivative(f"dGamma/dh* = {dg!r} at h* = {h!r}", call.log)
        h_next = h - ev.gamma / dg
        h_next, (ev, dg) = _recover(call, h_next, h, None)
        h_prev, h = h, h_next


def regula_falsi_solve(
    probe: Probe, bracket: Sequence[float], config: RootConfig | None = None, illinois: bool = True
):
    """False position on a sign-change bracket; stops on ``|Gamma| <= tol_gamma``.

    With ``illinois`` (the default) the stored ``Gamma`` of an end that
    survives twice in a row is halved, so a convex ``Gamma`` cannot pin one
    end forever. ``illinois=False`` is the textbook method, which converges
    one-sidedly and can stall on the flat ``Gamma`` near a fold. Either way
    the bracket is always a genuine sign change.
    """
    cfg = config or RootConfig()
    call = _Logger(probe, cfg)
    lo, hi = float(bracket[0]), float(bracket[1])
    e_lo = call(lo)
    e_hi = call(hi)
    if not (e_lo.ok and e_hi.ok):
        raise InvalidBracket(f"bracket endpoint probe failed on [{lo!r}, {hi!r}]", call.log)
    if e_lo.gamma == 0:
        return lo, call.log
    if e_hi.gamma == 0:
        return hi, call.log
    if e_lo.gamma * e_hi.gamma > 0:
        raise InvalidBracket(f"no sign change on [{lo!r}, {hi!r}]", call.log)
    g_lo, g_hi = e_lo.gamma, e_hi.gamma
    kept = 0  # +1: lo survived the last update, -1: hi did
    while True:
        c = hi - g_hi * (hi - lo) / (g_hi - g_lo)
        if not lo < c < hi and not hi < c < lo:
            c = 0.5 * (lo + hi)
        ev = call(c)
        if not ev.ok:
            c = 0.5 * (lo + hi)
            ev = call(c)
            if not ev.ok:
                raise FailedProbeRecovery(f"probe failed inside bracket at h* = {c!r}", call.log)
        if abs(ev.gamma) <= cfg.tol_gamma:
            return c, call.log
        if (ev.gamma > 0) == (g_lo > 0):
            lo, g_lo = c, ev.gamma
            if illinois and kept == -1:
                g_hi *= 0.5
            kept = -1
        else:
            hi, g_hi = c, ev.gamma
            if illinois and kept == 1:
                g_lo *= 0.5
            kept = 1


def sample_points(h_range: Sequence[float], n_samples: int, spacing: str = "log") -> np.ndarray:
    h_min, h_max = float(h_range[0]), float(h_range[1])
    if not 0 < h_min < h_max:
        raise ValueError(f"need 0 < h_min < h_max, got {h_range}")
    if n_samples < 2:
        raise ValueError("n_samples must be at least 2")
    if spacing == "log":
        return np.geomspace(h_min, h_max, n_samples)
    if spacing == "linear":
        return np.linspace(h_min, h_max, n_samples)
    raise ValueError(f"unknown spacing {spacing!r}")


def bracket_scan(probe: Probe, h_range: Sequence[float], n_samples: int, spacing: str = "log"):
    """Sample ``Gamma`` and collect sign-change brackets.

    Returns ``(brackets, samples)`` where ``samples`` are GammaEvaluations in
    ascending ``h*``. A bracket joins two consecutive successful samples of
    opposite sign; an exact zero yields the degenerate bracket ``(h, h)``.
    """
    hs = sample_points(h_range, n_samples, spacing)
    samples = [probe(float(h)) for h in hs]
    return sign_changes(samples), samples


def sign_changes(samples: Sequence[GammaEvaluation]) -> list[tuple[float, float]]:
    """Brackets between consecutive successful samples of opposite sign."""
    brackets: list[tuple[float, float]] = []
    for i, s in enumerate(samples):
        if s.ok and s.gamma == 0:
            brackets.append((s.h_star, s.h_star))
        if i == 0:
            continue
        prev = samples[i - 1]
        if prev.ok and s.ok and prev.gamma * s.gamma < 0:
            brackets.append((prev.h_star, s.h_star))
    return brackets
