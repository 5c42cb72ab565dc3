import math

import pytest

from itmflow.groups import GammaEvaluation, ProbeStatus
from itmflow.roots import (
    DegenerateSecant,
    FailedProbeRecovery,
    InvalidBracket,
    MaxIterExceeded,
    RootConfig,
    ZeroDerivative,
    bracket_scan,
    newton_solve,
    regula_falsi_solve,
    scalar_probe,
    secant_solve,
)

CFG = RootConfig(tol_gamma=1e-12, tol_rel=1e-12, tol_abs=1e-12)


class Counting:
    def __init__(self, func):
        self.func = func
        self.calls = 0

    def __call__(self, h):
        self.calls += 1
        return self.func(h)


def test_secant_on_affine_gamma_is_immediate():
    probe = scalar_probe(lambda h: 2.0 * h - 3.0)
    root, log = secant_solve(probe, 0.0, 1.0, CFG)
    assert root == pytest.approx(1.5, abs=1e-14)
    assert len(log) <= 4


def test_secant_sqrt2():
    root, log = secant_solve(scalar_probe(lambda h: h * h - 2.0), 1.0, 2.0, CFG)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)
    assert len(log) < 12


def test_newton_sqrt2():
    probe = lambda h: (GammaEvaluation(h, math.nan, h * h - 2.0, math.nan), 2.0 * h)  # noqa: E731
    root, log = newton_solve(probe, 1.0, CFG)
    assert root == pytest.approx(math.sqrt(2.0), abs=1e-12)


def test_newton_zero_derivative():
    probe = lambda h: (GammaEvaluation(h, math.nan, 1.0, math.nan), 0.0)  # noqa: E731
    with pytest.raises(ZeroDerivative):
        newton_solve(probe, 1.0, CFG)


def test_secant_degenerate():
    with pytest.raises(DegenerateSecant):
        secant_solve(scalar_probe(lambda h: 1.0), 0.0, 1.0, CFG)
    with pytest.raises(ValueError):
        secant_solve(scalar_probe(lambda h: h), 1.0, 1.0, CFG)


def test_secant_recovers_from_failed_probe():
    # probes beyond h = 3 "blow up"; the first update lands at 4
    def probe(h):
        if h > 3.0:
            return GammaEvaluation.failed(h, ProbeStatus.BLOWUP)
        return GammaEvaluation(h, math.nan, h - 2.5, math.nan)

    root, log = secant_solve(lambda h: probe(h), 0.5, 1.0, CFG)
    assert root == pytest.approx(2.5)
    assert all(r.h_star <= 3.0 or not r.ok for r in log)


def test_secant_gives_up_after_repeated_failures():
    def probe(h):
        if h != 1.0:
            return GammaEvaluation.failed(h, ProbeStatus.STEP_FAILURE)
        return GammaEvaluation(h, math.nan, 1.0, math.nan)

    with pytest.raises(FailedProbeRecovery) as err:
        secant_solve(probe, 1.0, 2.0, CFG)
    assert len(err.value.log) == 7  # two starts and five halvings


def test_max_iter():
    cfg = RootConfig(max_iter=5)
    with pytest.raises(MaxIterExceeded) as err:
        secant_solve(scalar_probe(lambda h: math.atan(h) + 0.5 * math.sin(20 * h)), 3.0, 4.0, cfg)
    assert len(err.value.log) == 5


def _widths(log, lo, hi):
    g_lo = log[0].gamma
    widths = [abs(hi - lo)]
    for rec in log[2:]:
        if (rec.gamma > 0) == (g_lo > 0):
            lo, g_lo = rec.h_star, rec.gamma
        else:
            hi = rec.h_star
        widths.append(abs(hi - lo))
    return widths


@pytest.mark.parametrize("illinois", [True, False])
def test_regula_falsi_bracket_shrinks(illinois):
    func = lambda h: math.exp(h) - 3.0  # noqa: E731
    cfg = RootConfig(tol_gamma=1e-12, max_iter=500)
    root, log = regula_falsi_solve(scalar_probe(func), (0.0, 3.0), cfg, illinois)
    assert root == pytest.approx(math.log(3.0), abs=1e-10)
    widths = _widths(log, 0.0, 3.0)
    assert all(b <= a for a, b in zip(widths, widths[1:]))


def test_illinois_beats_plain_on_convex_gamma():
    func = lambda h: h**8 - 0.5  # noqa: E731
    cfg = RootConfig(tol_gamma=1e-10, max_iter=500)
    _, fast = regula_falsi_solve(scalar_probe(func), (0.0, 1.5), cfg, True)
    _, slow = regula_falsi_solve(scalar_probe(func), (0.0, 1.5), cfg, False)
    assert len(fast) < len(slow)


def test_regula_falsi_invalid_bracket():
    with pytest.raises(InvalidBracket):
        regula_falsi_solve(scalar_probe(lambda h: h * h + 1.0), (-1.0, 1.0), CFG)


def test_returned_root_passes_fresh_probe():
    func = lambda h: math.cos(h) - h  # noqa: E731
    for solve in (
        lambda p: secant_solve(p, 0.0, 1.0, CFG),
        lambda p: regula_falsi_solve(p, (0.0, 1.0), CFG),
    ):
        root, _ = solve(scalar_probe(func))
        assert abs(func(root)) <= CFG.tol_gamma


@pytest.mark.parametrize(
    "solve",
    [
        lambda p: secant_solve(p, 0.0, 1.0, CFG),
        lambda p: regula_falsi_solve(p, (0.0, 1.0), CFG),
    ],
)
def test_log_is_complete(solve):
    probe = Counting(scalar_probe(lambda h: math.cos(h) - h))
    _, log = solve(probe)
    assert probe.calls == len(log)
    assert [r.index for r in log] == list(range(len(log)))


def test_bracket_scan_finds_all_sign_changes():
    brackets, samples = bracket_scan(scalar_probe(lambda h: math.sin(h)), (1.0, 10.0), 50, "linear")
    assert len(brackets) == 3  # pi, 2 pi, 3 pi
    assert [s.h_star for s in samples] == sorted(s.h_star for s in samples)


def test_bracket_scan_exact_zero_is_degenerate():
    brackets, _ = bracket_scan(scalar_probe(lambda h: h - 2.0), (1.0, 3.0), 3, "linear")
    assert (2.0, 2.0) in brackets


def test_bracket_scan_skips_failed_samples():
    def probe(h):
        if h < 2.0:
            return GammaEvaluation.failed(h, ProbeStatus.BLOWUP)
        return GammaEvaluation(h, math.nan, 1.0, math.nan)

    brackets, _ = bracket_scan(probe, (1.0, 4.0), 8, "linear")
    assert brackets == []


def test_root_config_validation():
    with pytest.raises(ValueError):
        RootConfig(tol_gamma=0.0)
    with pytest.raises(ValueError):
        RootConfig(max_iter=1)
