"""
Sakiadis flow: the iterative transformation method
==================================================

A plate moving through fluid at rest has ``f'(0) = 1`` and ``f'(inf) = 0``.
The boundary condition at the wall breaks the scaling symmetry, so we embed
a parameter ``h`` (``f'(0) = h**(1/2)``), scale it along with ``f`` and look for
the ``h*`` whose rescaled problem has ``h = 1``. That is a root of the
transformation function ``Gamma(h*) = lam**(-4) h* - 1``.
"""

from itmflow import Newton, Secant, itm_solve
from itmflow.problems import sakiadis

problem = sakiadis()

# %%
# Secant from two guesses. Each row is one integration.
run = itm_solve(problem, Secant(2.5, 3.5))
print(" j        h*        lambda        Gamma       f''(0)")
for r in run.records:
    print(f"{r.index:2d}  {r.h_star:10.6f}  {r.lam:10.6f}  {r.gamma:+.3e}  {r.skin_friction:+.6f}")

# %%
# Newton takes dGamma/dh* from the variational equations, integrated
# alongside the problem itself (six equations in all).
newton = itm_solve(problem, Newton(2.5))
print(f"\nNewton: f''(0) = {newton.skin_friction:.9f} after {newton.n_probes} integrations")

# %%
# The rescaled truncated boundary is lam * 10.
print(f"physical eta_inf = {run.physical_eta_inf:.6f}")
