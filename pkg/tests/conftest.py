import time

import pytest

from itmflow import Newton, RegulaFalsi, Secant, beta_min_continuation, itm_solve, solve_all_branches
from itmflow.problems import falkner_skan, moving_surface, sakiadis, slip

# one line per acceptance criterion, printed after the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def sakiadis_secant():
    return itm_solve(sakiadis(), Secant(2.5, 3.5))


@pytest.fixture(scope="session")
def sakiadis_newton():
    return itm_solve(sakiadis(), Newton(2.5))


@pytest.fixture(scope="session")
def slip_runs():
    return {c: itm_solve(slip(c), RegulaFalsi(0.1, 1.0)) for c in (0.0, 1.0, 5.0, 10.0, 50.0)}


@pytest.fixture(scope="session")
def moving_runs():
    return solve_all_branches(moving_surface(-0.25), (1.0, 150.0), 32)


@pytest.fixture(scope="session")
def fs_runs():
    """Falkner-Skan runs keyed by ``(beta, p)``."""
    runs = {
        (-0.01, 1): itm_solve(falkner_skan(-0.01, 1), Secant(5.0, 10.0)),
        (-0.01, -1): itm_solve(falkner_skan(-0.01, -1), Secant(75.0, 150.0)),
        (-0.1, 1): itm_solve(falkner_skan(-0.1, 1), Secant(5.0, 10.0)),
    }
    for beta in (-0.025, -0.05, -0.1, -0.15, -0.18):
        runs[(beta, -1)] = itm_solve(falkner_skan(beta, -1), Secant(15.0, 25.0))
    return runs


@pytest.fixture(scope="session")
def continuation():
    """``(result, seconds)`` of the default continuation to the fold."""
    t0 = time.perf_counter()
    res = beta_min_continuation()
    return res, time.perf_counter() - t0
