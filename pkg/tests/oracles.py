"""Independent reference computations used by the test suite."""
import math

import numpy as np
from scipy.integrate import solve_ivp

from singzone.model import QuadParams, drift_field


def fd_weights(offsets, order):
    """Finite-difference weights for the ``order``-th derivative on integer ``offsets``."""
    offsets = np.asarray(offsets, dtype=float)
    n = len(offsets)
    A = np.vander(offsets, n, increasing=True).T
    b = np.zeros(n)
    b[order] = math.factorial(order)
    return np.linalg.solve(A, b)


def drift_trajectory(x0, p: QuadParams, times):
    """States along the input-free flow at ``times`` (may be negative), via DOP853."""
    times = np.asarray(times, dtype=float)
    out = np.empty((14, len(times)))
    fwd = times >= 0
    for mask, sign in ((fwd, 1.0), (~fwd, -1.0)):
        if not mask.any():
            continue
        ts = np.abs(times[mask])
        order = np.argsort(ts)
        sol = solve_ivp(lambda t, x: sign * drift_field(x, p), (0.0, ts[order][-1] + 1e-12),
                        np.asarray(x0, float), method="DOP853", t_eval=ts[order],
                        rtol=1e-13, atol=1e-14)
        cols = np.empty((14, mask.sum()))
        cols[:, order] = sol.y
        out[:, mask] = cols
    return out


def fd_derivative_along_drift(x0, p, index, order, h=0.04, half_width=6):
    """``order``-th time derivative of state component ``index`` along the drift flow."""
    offsets = np.arange(-half_width, half_width + 1)
    traj = drift_trajectory(x0, p, offsets * h)
    w = fd_weights(offsets, order)
    return float(w @ traj[index]) / h**order


def row_relative_error(got, ref):
    """Entrywise error scaled by ``max(|ref|, max-norm of the ref row)``.

    Structural zeros make a pure entrywise relative error meaningless, so each
    entry is judged against the size of its row.  The last axis is the row.
    """
    got, ref = np.asarray(got, float), np.asarray(ref, float)
    row = np.max(np.abs(ref), axis=-1, keepdims=True)
    scale = np.maximum(np.abs(ref), row)
    return np.abs(got - ref) / np.where(scale > 0, scale, 1.0)


def det_yawpos_closed_form(theta, phi, zeta, p: QuadParams):
    """Determinant of the yaw-position decoupling matrix by cofactor expansion by hand.

    Reduces to ``-zeta^2 d^3 cos(phi) / (m^3 Ix Iy Iz cos(theta))``.
    """
    return -(zeta**2) * p.d**3 * np.cos(phi) / (p.m**3 * p.ix * p.iy * p.iz * np.cos(theta))


def x_third_derivative(X, p: QuadParams):
    """Closed-form third derivative of x: ``-(dA1/dt zeta + A1 xi) / m``.

    Euler-angle rates come from the body rates written out by hand, so this
    shares no code with the jet engine.  ``X`` is (..., 14).
    """
    X = np.asarray(X, float)
    psi, th, ph = X[..., 3], X[..., 4], X[..., 5]
    zeta, xi, pr, q, r = X[..., 9], X[..., 10], X[..., 11], X[..., 12], X[..., 13]
    sps, cps, sth, cth, sph, cph = (np.sin(psi), np.cos(psi), np.sin(th), np.cos(th),
                                    np.sin(ph), np.cos(ph))
    psi_d = (sph * q + cph * r) / cth
    th_d = cph * q - sph * r
    ph_d = pr + sph * sth / cth * q + cph * sth / cth * r
    a1 = cph * cps * sth + sph * sps
    a1_d = ((cps * sph - sps * sth * cph) * psi_d + (sps * cph - cps * sth * sph) * ph_d
            + cps * cth * cph * th_d)
    return -(a1_d * zeta + a1 * xi) / p.m


def flow_validation(ts, p: QuadParams, x4_model):
    """Relative mismatch between the simulated x'''' and the model's prediction.

    ``ts`` must be logged every step.  At each interior sample whose
    neighbours share its mode, the central difference of the closed-form x'''
    is compared against ``x4_model(state, u)``, with ``u`` the mean of the two
    inputs held over the stencil.  Returns the array of relative errors.
    """
    x3 = x_third_derivative(ts.states, p)
    dt = ts.t[1] - ts.t[0]
    errs = []
    for k in range(1, len(ts.t) - 1):
        if not (ts.modes[k - 1] is ts.modes[k] is ts.modes[k + 1]):
            continue
        if not np.all(np.isfinite(ts.inputs[k - 1:k + 1])):
            continue
        fd = (x3[k + 1] - x3[k - 1]) / (2 * dt)
        model = x4_model(ts.states[k], 0.5 * (ts.inputs[k - 1] + ts.inputs[k]))
        errs.append(abs(fd - model) / abs(model) if model != 0 else abs(fd))
    return np.array(errs)
