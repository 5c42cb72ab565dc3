"""
Blasius flow from a single integration
======================================

The Blasius equation ``f''' + f f''/2 = 0`` is invariant under
``f -> lam f, eta -> eta/lam``. So one initial value problem with
``f''(0) = 1`` is enough: read off ``f'`` far from the wall and rescale.
"""

from itmflow import IntegratorConfig, topfer_solve

# %%
# One adaptive run to eta* = 10.
res = topfer_solve(IntegratorConfig.adaptive(1e-10))
print(f"f''(0) = {res.lambda_t:.10f}")

# %%
# The physical solution is the rescaled starred one; its far field is exactly 1.
phys = res.physical_solution
print(f"f'(eta_inf) = {phys.states[-1, 1]:.12f} at eta_inf = {phys.nodes[-1]:.4f}")

# %%
# Reading the asymptote too early biases the estimate. With the historical
# checkpoints 4 and 6 the two values still differ in the fourth digit.
early = topfer_solve(IntegratorConfig.fixed(0.1), checkpoints=(4.0, 6.0, 10.0))
for eta, lam in zip(early.checkpoints, early.checkpoint_lambdas):
    print(f"  eta* = {eta:4.1f}  ->  {lam:.8f}")
