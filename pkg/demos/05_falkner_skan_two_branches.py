"""
Falkner-Skan: normal and reverse flow
=====================================

For slightly negative ``beta`` the wedge-flow equation
``f''' + f f'' + beta (1 - f'^2) = 0`` has two solutions. Starting the
auxiliary problem with ``f''(0) = +1`` or ``-1`` selects the branch.
"""

from itmflow import Secant, itm_solve
from itmflow.problems import falkner_skan

normal = itm_solve(falkner_skan(-0.01, p=1), Secant(5.0, 10.0))
reverse = itm_solve(falkner_skan(-0.01, p=-1), Secant(75.0, 150.0))
print(f"beta = -0.01: normal f''(0) = {normal.skin_friction:.6f}, reverse f''(0) = {reverse.skin_friction:.6f}")

# %%
# The reverse branch has a region of backflow near the wall.
fp = reverse.physical_solution.states[:, 1]
print(f"reverse branch: min f' = {fp.min():.4f}")

# %%
# Sweep the reverse branch.
for beta in (-0.025, -0.05, -0.1, -0.15, -0.18):
    run = itm_solve(falkner_skan(beta, p=-1), Secant(15.0, 25.0))
    print(f"beta = {beta:6.3f}  f''(0) = {run.skin_friction:+.6f}  ({run.n_probes} probes)")
