import math

import numpy as np
import pytest

from itmflow.ivp import (
    Adaptive,
    IntegratorConfig,
    OdeSystem,
    Status,
    integrate,
    integrate_adaptive,
    integrate_fixed,
)

EXP = OdeSystem(1, lambda t, y: y)
BLASIUS_AUX = OdeSystem(3, lambda e, y: (y[1], y[2], -0.5 * y[0] * y[2]))


def test_rk4_order_factor():
    err = [abs(integrate_fixed(EXP, [1.0], [0.0, 1.0], h).end[0] - math.e) for h in (0.1, 0.05)]
    assert 14.0 <= err[0] / err[1] <= 18.0


def test_fixed_step_lands_on_endpoint():
    tr = integrate_fixed(EXP, [1.0], [0.0, 1.0], 0.3)
    assert tr.nodes[-1] == 1.0
    np.testing.assert_allclose(np.diff(tr.nodes)[:3], 0.3)


def test_adaptive_hits_tolerance():
    tr = integrate(EXP, [1.0], [0.0, 2.0], IntegratorConfig.adaptive(1e-10))
    assert tr.completed
    assert abs(tr.end[0] - math.exp(2.0)) < 1e-8


def test_adaptive_consistency_on_blasius_auxiliary():
    ends = [integrate(BLASIUS_AUX, [0, 0, 1], [0, 10], IntegratorConfig.adaptive(t)).end[1] for t in (1e-6, 1e-7)]
    assert abs(ends[0] - ends[1]) < 1e-6


def test_blowup_keeps_finite_states():
    # y' = y**2 from y(0) = 1 blows up at t = 1
    riccati = OdeSystem(1, lambda t, y: y * y)
    for cfg in (IntegratorConfig.adaptive(1e-8), IntegratorConfig.fixed(1e-3)):
        tr = integrate(riccati, [1.0], [0.0, 2.0], cfg)
        assert tr.status is Status.BLOWUP
        assert tr.eta_stop is not None and tr.eta_stop <= 1.01
        assert np.all(np.isfinite(tr.states))
        assert np.max(np.abs(tr.states)) <= cfg.blowup_threshold


def test_nan_rhs_is_step_failure():
    bad = OdeSystem(1, lambda t, y: [math.nan])
    assert integrate(bad, [0.0], [0.0, 1.0]).status is Status.STEP_FAILURE


def test_step_budget_ends_run():
    cfg = IntegratorConfig(Adaptive(rel_tol=1e-12, abs_tol=1e-12, max_steps=10))
    tr = integrate_adaptive(BLASIUS_AUX, [0, 0, 1], [0, 10], cfg)
    assert tr.status is Status.STEP_FAILURE
    assert len(tr) <= 11


def test_nodes_strictly_increase():
    tr = integrate(BLASIUS_AUX, [0, 0, 1], [0, 10])
    assert np.all(np.diff(tr.nodes) > 0)
    assert np.all(np.isfinite(tr.states))


def test_deterministic():
    a = integrate(BLASIUS_AUX, [0, 0, 1], [0, 10])
    b = integrate(BLASIUS_AUX, [0, 0, 1], [0, 10])
    assert np.array_equal(a.nodes, b.nodes) and np.array_equal(a.states, b.states)


@pytest.mark.parametrize(
    "kwargs",
    [dict(rel_tol=0.0), dict(abs_tol=1.5), dict(min_step=1.0, initial_step=0.1), dict(max_steps=0)],
)
def test_adaptive_rejects_bad_settings(kwargs):
    with pytest.raises(ValueError):
        Adaptive(**kwargs)


def test_input_validation():
    with pytest.raises(ValueError):
        integrate(EXP, [1.0, 2.0], [0.0, 1.0])
    with pytest.raises(ValueError):
        integrate(EXP, [1.0], [1.0, 0.0])
    with pytest.raises(ValueError):
        IntegratorConfig.fixed(0.0)
