"""
Comparing schemes against RIS height and size
=============================================

Proposed joint design versus fixed equal powers, no artificial noise, random
phases and no RIS at all.
"""

import numpy as np

from oamris import Scenario, SchemeConfig, run_scheme
from oamris.pipeline import SCHEMES

base = Scenario()

print("z_R   " + "  ".join(f"{s:>12s}" for s in SCHEMES))
for z in (0, 5, 10, 15, 20, 25, 30):
    u_R = base.geometry.u_R.copy()
    u_R[2] = z
    sc = base.replace(geometry=base.geometry.replace(u_R=u_R))
    row = [run_scheme(sc, SchemeConfig(scheme=s)).SR for s in SCHEMES]
    print(f"{z:3d}   " + "  ".join(f"{v:12.4f}" for v in row))

# %%
# More RIS elements give the phases more room to steer; Q_z stays at 10
print("\nQ     proposed")
for Q in (30, 60, 90, 120, 150):
    sc = base.replace(geometry=base.geometry.replace(Q_y=Q // 10))
    print(f"{Q:3d}   {run_scheme(sc, SchemeConfig()).SR:.4f}")
