"""
Counting solutions: a surface moving against the stream
=======================================================

When the wall moves against the free stream (``f'(0) = b < 0``) the problem
has two solutions for moderate ``b`` and none past a critical value. Each
solution is a zero of ``Gamma``, so sampling ``Gamma`` counts them.
"""

from itmflow import gamma_profile, solve_all_branches
from itmflow.problems import moving_surface

# %%
# Two sign changes at b = -0.25, each solved by regula falsi.
for run in solve_all_branches(moving_surface(-0.25), (1.0, 150.0), 32):
    print(f"b = -0.25: h* = {run.final_h_star:9.5f}  f''(0) = {run.skin_friction:.6f}")

# %%
# Near the critical value the two zeros sit close together and can hide
# between two samples. The profile then refines local extrema of Gamma that
# approach zero without crossing it.
b = -0.3541
plain = gamma_profile(moving_surface(b), (1.0, 150.0), 32, refine=False)
refined = gamma_profile(moving_surface(b), (1.0, 150.0), 32)
print(f"b = {b}: {plain.zero_count_evidence} brackets plain, {refined.zero_count_evidence} refined")

# %%
# Past the critical value nothing is left.
print("b = -0.4:", gamma_profile(moving_surface(-0.4), (1.0, 150.0), 64).zero_count_evidence, "brackets")
