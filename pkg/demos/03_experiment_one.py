"""
Switching into the attitude-altitude law
========================================

Starting at roll = pitch = 0.5 rad, the yaw-position law is in charge.  Once
the attitude enters the box theta in [-0.5, 0.5], phi <= 0.2 the supervisor
hands over to the (z, phi, theta, psi) law, which then holds the attitude
near (phi, theta) = (0.01, 0).
"""

import numpy as np

from singzone import bundled_scenario, run_scenario

sc = bundled_scenario("experiment1")
print(sc.description)
ts = run_scenario(sc)

for t, kind, detail in ts.events:
    print(f"{t:7.3f}  {kind:11s} {detail}")

# a coarse look at the attitude every second
phi, theta = ts.column("phi"), ts.column("theta")
for t in np.arange(0, sc.t_final + 1e-9, 1.0):
    k = int(np.argmin(np.abs(ts.t - t)))
    print(f"t={ts.t[k]:5.2f}  phi={phi[k]:+.4f}  theta={theta[k]:+.4f}  {ts.modes[k].value}")

print(ts.summary())
