"""
Lie derivatives by Taylor jets
==============================

Output derivatives along the drift, and their sensitivity to each input, are
read off a truncated Taylor expansion of the flow.  We check one of them
against a hand-derived formula, and show what a sign slip in the yaw partial
of the thrust axis does to the decoupling matrix.
"""

import numpy as np

from singzone import LieTable, delta_matrix, flow_taylor, numeric_row
from singzone.decoupling import mno_coefficients
from singzone.model import QuadParams, State14

p = QuadParams()
s = State14(psi=0.7, theta=0.4, phi=-0.3, vx=0.2, zeta=11.0, xi=0.5, p=0.8, q=-1.1, r=0.6)

# x and its first four derivatives along the drift
chain = flow_taylor("x", s, p, 4)
print("x chain:", np.round(chain.values, 6))

# third derivative by hand: -(dA1/dt zeta + A1 xi) / m
c = mno_coefficients(s.psi, s.theta, s.phi)
sph, cph, cth, tth = np.sin(s.phi), np.cos(s.phi), np.cos(s.theta), np.tan(s.theta)
psi_d = (sph * s.q + cph * s.r) / cth
th_d = cph * s.q - sph * s.r
ph_d = s.p + sph * tth * s.q + cph * tth * s.r
x3 = -((c.m1 * psi_d + c.n1 * ph_d + c.o1 * th_d) * s.zeta + c.a1 * s.xi) / p.m
print(f"x''' jet {chain.values[3]:.15f}  by hand {x3:.15f}")

# one LieTable gives every output at once
t = LieTable(s.to_array(), p, 4)
print("psi'' sensitivity to the inputs:", np.round(t.coupling("psi", 2), 6))

# closed-form decoupling rows against the jet rows
D = delta_matrix(s.psi, s.theta, s.phi, s.zeta, p)
for row, (name, k) in enumerate((("x", 4), ("y", 4), ("z", 4), ("psi", 2))):
    _, coeffs = numeric_row(name, s, p, k)
    print(f"row {name:3s} max gap {np.max(np.abs(D[row] - coeffs)):.2e}")

# with sin(phi) in place of cos(phi) in the yaw partial, rows 1 and 2 go wrong
D_typo = delta_matrix(s.psi, s.theta, s.phi, s.zeta, p, as_printed=True)
print("row gap with the sin/cos slip:", np.round(np.max(np.abs(D_typo - D), axis=1), 4))
