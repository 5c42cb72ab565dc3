"""
Independent checks
==================

Three ways to check the transformation results without using them:

* a bisection shooting solver for the original problem,
* the power series of the Blasius solution near the wall,
* an a posteriori bound on the error from truncating the domain.
"""

import numpy as np

from itmflow import Secant, itm_solve, shooting_oracle
from itmflow.oracles import blasius_series_eval, rubel_error_bound, solution_on_grid, truncated_blasius
from itmflow.problems import blasius, falkner_skan

# %%
# Shooting agrees with the iterative method when both use the same boundary.
run = itm_solve(falkner_skan(-0.1, p=-1), Secant(15.0, 25.0))
s, _ = shooting_oracle(run.problem, (-0.2, -0.05), run.physical_eta_inf)
print(f"ITM {run.skin_friction:.10f}  shooting {s:.10f}")

# %%
# Four series terms are accurate to roundoff close to the wall.
lam = 0.332057336215
eta = np.linspace(0.0, 0.5, 6)
series = blasius_series_eval(lam, eta)[0]
exact = solution_on_grid(blasius(), lam, eta)[:, 0]
print("max |series - integration| on [0, 0.5]:", np.abs(series - exact).max())

# %%
# Truncation error bound for f''' + f f'' = 0, f'(M) = 1.
for M in (4.0, 6.0):
    _, tr = truncated_blasius(M)
    print(f"M = {M:g}: error bound {rubel_error_bound(tr, M).bound:.3e}")
