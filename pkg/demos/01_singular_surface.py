"""
Where is the yaw-position law singular?
=======================================

The surface ``S(theta, phi) = 0`` has been put forward as the set of
attitudes where the decoupling matrix of the (x, y, z, psi) outputs loses
rank.  Here we scan S and the determinant itself on the same grid and see
whether they agree.
"""

import numpy as np

from singzone import ScanKind, discrepancy_report, scan_grid, zero_contour
from singzone.model import QuadParams

p = QuadParams()
th_range = ph_range = (-1.5, 1.5, 301)

# S changes sign along one closed curve through the origin and (0, -pi/4)
s_scan = scan_grid(th_range, ph_range, ScanKind.S_FUNCTION)
contour = zero_contour(s_scan)
V = contour.vertices
print(f"S = 0 contour: {len(contour)} polyline(s), {len(V)} vertices")
print(f"  theta span [{V[:, 0].min():.3f}, {V[:, 0].max():.3f}]"
      f"  phi span [{V[:, 1].min():.3f}, {V[:, 1].max():.3f}]")

# The determinant at hover thrust, same grid.  Yaw does not matter.
det_scan = scan_grid(th_range, ph_range, ScanKind.DET_ORACLE, fixed_psi=0.0, fixed_zeta=9.81, p=p)
d = np.abs(det_scan.values)
print(f"|det| over the grid: min {d.min():.4g}, max {d.max():.4g}")

# Its closed form, -zeta^2 d^3 cos(phi) / (m^3 Ix Iy Iz cos(theta)), vanishes
# only at phi = +-pi/2, the edge of the Euler domain.
TH, PH = np.meshgrid(det_scan.theta, det_scan.phi, indexing="ij")
closed = -(9.81**2) * p.d**3 * np.cos(PH) / (p.m**3 * p.ix * p.iy * p.iz * np.cos(TH))
print(f"max relative gap to the closed form: {np.max(np.abs(det_scan.values / closed - 1)):.2e}")

# Cells on which the two fields disagree about singularity
rep = discrepancy_report(s_scan, det_scan)
print("classification:", rep.summary())
print("at (0, 0):", rep.at(0.0, 0.0).value,
      f"S = {s_scan.values[150, 150]:.1f}, det = {det_scan.values[150, 150]:.6g}")
