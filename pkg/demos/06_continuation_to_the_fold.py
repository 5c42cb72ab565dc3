"""
Marching to the fold of the Falkner-Skan branches
=================================================

The two Falkner-Skan branches meet where both wall shears vanish. Starting
near there, we lower ``beta`` step by step. Each solve starts from the
previous root, and the step halves whenever a branch is lost. This takes
about a minute.
"""

import logging

from itmflow import beta_min_continuation

logging.basicConfig(level=logging.INFO, format="%(message)s")

res = beta_min_continuation(-0.1988)
print(f"beta_min ~ {res.beta_min_estimate:.10f}")
print(f"terminal f''(0): {res.skin_frictions_normal[-1]:+.3e} / {res.skin_frictions_reverse[-1]:+.3e}")
print(f"{len(res.beta_values)} accepted steps, {len(res.rejected_betas)} rejected")
