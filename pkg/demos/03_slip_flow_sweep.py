"""
Blasius flow with wall slip
===========================

With the slip condition ``f'(0) = c f''(0)`` the wall velocity grows with
``c`` and the wall shear drops. Regula falsi on a sign-change bracket of
``Gamma`` solves every case from the same bracket.
"""

from itmflow import RegulaFalsi, itm_solve
from itmflow.problems import slip

print("    c      f'(0)       f''(0)   probes")
for c in (0.0, 1.0, 5.0, 10.0, 50.0):
    run = itm_solve(slip(c), RegulaFalsi(0.1, 1.0))
    print(f"{c:5g}  {run.wall_slope:9.6f}  {run.skin_friction:11.6f}  {run.n_probes:5d}")
