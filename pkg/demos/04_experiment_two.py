"""
Losing control near the edge of the orange box
==============================================

The attitude-altitude law is now asked for (phi, theta) = (0.5, -0.5), which
lies outside its own box.  Each time it pushes the attitude out, the
yaw-position law takes over and pulls it elsewhere.  The run ends when roll
approaches -pi/2 inside the box: there the attitude-altitude matrix, whose
determinant is proportional to |cos(phi)|, stops being invertible.
"""

import dataclasses

import numpy as np

from singzone import Switching, ZoneSpec, bundled_scenario, run_scenario

sc = bundled_scenario("experiment2")
ts = run_scenario(sc)
for t, kind, detail in ts.events:
    print(f"{t:7.3f}  {kind:11s} {detail}")

# |det| of the active matrix and roll during the final half second
phi = ts.column("phi")
tail = ts.t > ts.t[-1] - 0.5
for k in np.flatnonzero(tail)[::10]:
    print(f"t={ts.t[k]:6.3f}  phi={phi[k]:+.4f}  |det|={abs(ts.det[k]):9.3f}  {ts.modes[k].value}")

# a hysteresis band around the box does not help: the failure happens inside it
for h in (0.05, 0.1):
    alt = dataclasses.replace(sc, policy=Switching(ZoneSpec(hysteresis=h)))
    print(f"hysteresis {h}:", run_scenario(alt).summary())
