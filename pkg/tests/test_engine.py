import math

import numpy as np
import pytest

from itmflow import (
    NotConverged,
    RegulaFalsi,
    Secant,
    evaluate_gamma,
    evaluate_gamma_with_derivative,
    gamma_profile,
    itm_solve,
    solve_all_branches,
    topfer_solve,
)
from itmflow.engine import boundary_residuals, ode_residual
from itmflow.groups import ProbeStatus
from itmflow.ivp import IntegratorConfig
from itmflow.problems import falkner_skan, moving_surface, sakiadis, slip

TABLE1_H = [2.5, 3.5, 3.287172, 2.754191, 3.033897]


def test_topfer_blasius():
    res = topfer_solve(IntegratorConfig.adaptive(1e-10))
    assert res.lambda_t == pytest.approx(0.3320573362, abs=1e-8)
    assert res.converged is None
    # rescaled solution satisfies the Blasius conditions
    phys = res.physical_solution
    assert phys.states[0, 2] == pytest.approx(res.lambda_t)
    assert phys.states[-1, 1] == pytest.approx(1.0, abs=1e-12)


def test_topfer_checkpoints_are_recorded():
    res = topfer_solve(IntegratorConfig.fixed(0.1), checkpoints=(4.0, 6.0))
    assert len(res.checkpoint_lambdas) == 2
    assert res.agreement == pytest.approx(8.5485e-4, rel=1e-3)
    assert res.converged is False


def test_topfer_rejects_bad_checkpoints():
    with pytest.raises(ValueError):
        topfer_solve(checkpoints=(6.0, 4.0))


def test_table1_iterates(sakiadis_secant):
    hs = [r.h_star for r in sakiadis_secant.records]
    np.testing.assert_allclose(hs[:5], TABLE1_H, atol=1e-4)
    assert sakiadis_secant.n_probes == 10


def test_newton_matches_secant(sakiadis_secant, sakiadis_newton):
    assert sakiadis_newton.final_h_star == pytest.approx(sakiadis_secant.final_h_star, abs=1e-9)
    assert sakiadis_newton.n_probes == 7


@pytest.mark.parametrize("h", [2.5, 3.0, 3.5])
def test_sensitivity_derivative_matches_finite_difference(h):
    p = sakiadis()
    _, dg = evaluate_gamma_with_derivative(p, h)
    eps = 1e-5
    fd = (evaluate_gamma(p, h + eps).gamma - evaluate_gamma(p, h - eps).gamma) / (2 * eps)
    assert dg == pytest.approx(fd, abs=1e-5)


def test_gamma_decreases_through_the_sakiadis_root():
    _, dg = evaluate_gamma_with_derivative(sakiadis(), 2.5)
    assert dg < 0


def test_failed_probe_is_reported_not_raised():
    ev = evaluate_gamma(falkner_skan(-0.15, -1), 1.0)
    assert ev.status is ProbeStatus.BLOWUP
    assert ev.gamma == -1.0
    assert evaluate_gamma(sakiadis(), -1.0).status is ProbeStatus.DOMAIN


def test_converged_runs_satisfy_the_physical_problem(sakiadis_secant, slip_runs, moving_runs, fs_runs):
    runs = [sakiadis_secant, *slip_runs.values(), *moving_runs, *fs_runs.values()]
    for run in runs:
        assert abs(run.final_gamma) <= 1e-9
        res = boundary_residuals(run.problem, run.physical_solution)
        assert max(res.values()) <= 1e-5, run.problem.label
        assert ode_residual(run.problem, run.physical_solution) <= 1e-5, run.problem.label


def test_regula_falsi_falls_back_to_scan():
    run = itm_solve(slip(5.0), RegulaFalsi(2.0, 3.0))
    assert run.skin_friction == pytest.approx(0.143737, abs=1e-5)


def test_h_window_blocks_probes():
    with pytest.raises(NotConverged) as err:
        itm_solve(sakiadis(), Secant(2.5, 3.5), h_window=(2.0, 2.6))
    assert any(r.status is ProbeStatus.DOMAIN for r in err.value.records)


def test_moving_surface_two_branches(moving_runs):
    assert len(moving_runs) == 2
    assert moving_runs[0].final_h_star < moving_runs[1].final_h_star
    assert all(r.wall_slope == pytest.approx(-0.25) for r in moving_runs)


def test_moving_surface_nonexistence():
    profile = gamma_profile(moving_surface(-0.4), (1.0, 150.0), 64)
    assert profile.zero_count_evidence == 0
    assert solve_all_branches(moving_surface(-0.4), (1.0, 150.0), 32) == []


def test_refinement_exposes_close_zero_pair():
    problem = moving_surface(-0.3541)
    plain = gamma_profile(problem, (1.0, 150.0), 32, refine=False)
    refined = gamma_profile(problem, (1.0, 150.0), 32)
    assert plain.zero_count_evidence == 0
    assert refined.zero_count_evidence == 2


def test_sakiadis_uniqueness_evidence():
    assert gamma_profile(sakiadis(p=1), (0.1, 50.0), 32).zero_count_evidence == 0
    assert gamma_profile(sakiadis(), (0.5, 10.0), 32).zero_count_evidence == 1


def test_profile_columns():
    cols = gamma_profile(sakiadis(), (0.5, 10.0), 8).as_columns()
    assert set(cols) == {"h_star", "gamma", "lambda", "status"}
    assert len(cols["gamma"]) >= 8


def test_physical_eta_inf_is_rescaled(sakiadis_secant):
    assert sakiadis_secant.physical_eta_inf == pytest.approx(10.0 * sakiadis_secant.final_lambda)


def test_fixed_step_itm_agrees_with_adaptive(sakiadis_secant):
    run = itm_solve(sakiadis(), Secant(2.5, 3.5), IntegratorConfig.fixed(0.01))
    assert run.skin_friction == pytest.approx(sakiadis_secant.skin_friction, abs=1e-6)


@pytest.mark.slow
def test_continuation_monotone(continuation):
    res, _ = continuation
    normal = np.array(res.skin_frictions_normal)
    beta = np.array(res.beta_values)
    assert np.all(np.diff(beta) <= 0)
    moved = np.diff(beta) < 0
    assert np.all(np.diff(normal)[moved] < 0)
    assert np.all(np.array(res.skin_frictions_reverse) < 0)
    assert res.eta_inf_values[-1] == 1.0


@pytest.mark.slow
def test_below_fold_is_a_clean_diagnosis():
    assert solve_all_branches(falkner_skan(-0.21, 1), (1.0, 1.0e4), 24) == []
    with pytest.raises(NotConverged):
        itm_solve(falkner_skan(-0.21, -1), Secant(15.0, 25.0))


def test_evaluation_is_deterministic():
    a = evaluate_gamma(falkner_skan(-0.1, -1), 20.0)
    b = evaluate_gamma(falkner_skan(-0.1, -1), 20.0)
    assert a.gamma == b.gamma and not math.isnan(a.gamma)
