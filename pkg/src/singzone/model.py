"""Augmented quadrotor dynamics with a double integrator on thrust.

State ordering (14 entries)::

    [x, y, z, psi, theta, phi, vx, vy, vz, zeta, xi, p, q, r]

``zeta`` is the collective thrust and ``xi`` its rate; the first virtual
input drives ``xi``.  The vertical axis follows the equations literally,
``vz_dot = g - A3 * zeta / m``, so zero thrust accelerates ``z`` at ``+g``.

Every function here accepts either a :class:`State14` or an array whose
leading axis has length 14; trailing axes are treated as a batch.
"""
from __future__ import annotations

from dataclasses import astuple, dataclass, fields

import numpy as np

from .errors import DomainError

STATE_FIELDS = (
    "x", "y", "z", "psi", "theta", "phi",
    "vx", "vy", "vz", "zeta", "xi", "p", "q", "r",
)
IDX = {name: i for i, name in enumerate(STATE_FIELDS)}

EPS_THETA = 1e-6
EPS_PHI = 1e-6


@dataclass(frozen=True)
class QuadParams:
    """Physical constants: mass, arm length, principal inertias, gravity."""

    m: float = 1.0
    d: float = 0.3
    ix: float = 0.02
    iy: float = 0.02
    iz: float = 0.04
    g: float = 9.81

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"QuadParams.{f.name} must be positive and finite, got {v!r}")

    @property
    def input_gains(self) -> np.ndarray:
        """Gains of the four constant input fields (xi, p, q, r rows)."""
        return np.array([1.0, self.d / self.ix, self.d / self.iy, self.d / self.iz])

    def to_dict(self) -> dict:
        return {f.name: getattr(self, f.name) for f in fields(self)}


@dataclass(frozen=True)
class State14:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0
    psi: float = 0.0
    theta: float = 0.0
    phi: float = 0.0
    vx: float = 0.0
    vy: float = 0.0
    vz: float = 0.0
    zeta: float = 0.0
    xi: float = 0.0
    p: float = 0.0
    q: float = 0.0
    r: float = 0.0

    def __post_init__(self):
        for name in STATE_FIELDS:
            v = float(getattr(self, name))
            if not np.isfinite(v):
                raise ValueError(f"State14.{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, arr) -> "State14":
        arr = np.asarray(arr, dtype=float)
        if arr.shape != (14,):
            raise ValueError(f"expected a 14-element state, got shape {arr.shape}")
        return cls(*arr.tolist())

    @classmethod
    def hover(cls, params: QuadParams | None = None, **overrides) -> "State14":
        """Level attitude, zero rates, thrust balancing gravity."""
        params = params or QuadParams()
        values = {"zeta": params.m * params.g}
        values.update(overrides)
        return cls(**values)

    def replace(self, **changes) -> "State14":
        values = {name: getattr(self, name) for name in STATE_FIELDS}
        values.update(changes)
        return State14(**values)


@dataclass(frozen=True)
class VirtualInput:
    u1b: float = 0.0
    u2b: float = 0.0
    u3b: float = 0.0
    u4b: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = float(getattr(self, f.name))
            if not np.isfinite(v):
                raise ValueError(f"VirtualInput.{f.name} must be finite, got {v!r}")
            object.__setattr__(self, f.name, v)

    def to_array(self) -> np.ndarray:
        return np.array(astuple(self), dtype=float)

    @classmethod
    def from_array(cls, arr) -> "VirtualInput":
        arr = np.asarray(arr, dtype=float).reshape(4)
        return cls(*arr.tolist())


def as_state_array(s) -> np.ndarray:
    if isinstance(s, State14):
        return s.to_array()
    arr = np.asarray(s, dtype=float)
    if arr.shape[:1] != (14,):
        raise ValueError(f"state must have leading dimension 14, got shape {arr.shape}")
    return arr


def as_input_array(u) -> np.ndarray:
    if isinstance(u, VirtualInput):
        return u.to_array()
    arr = np.asarray(u, dtype=float)
    if arr.shape[:1] != (4,):
        raise ValueError(f"input must have leading dimension 4, got shape {arr.shape}")
    return arr


def check_theta(theta, eps_theta: float = EPS_THETA) -> None:
    theta = np.asarray(theta)
    if not np.all(np.abs(theta) < np.pi / 2 - eps_theta):
        raise DomainError(f"|theta| must stay below pi/2 - {eps_theta:g} (Euler kinematics singular)")


def check_attitude(theta, phi, eps_theta: float = EPS_THETA, eps_phi: float = EPS_PHI) -> None:
    check_theta(theta, eps_theta)
    if not np.all(np.abs(np.asarray(phi)) < np.pi / 2 - eps_phi):
        raise DomainError(f"|phi| must stay below pi/2 - {eps_phi:g}")


def _axis_from_trig(spsi, cpsi, sth, cth, sphi, cphi):
    a1 = cphi * cpsi * sth + sphi * spsi
    a2 = cphi * spsi * sth - sphi * cpsi
    a3 = cth * cphi
    return a1, a2, a3


def thrust_axis(psi, theta, phi):
    """Direction cosines (A1, A2, A3) of the body thrust axis."""
    return _axis_from_trig(np.sin(psi), np.cos(psi), np.sin(theta), np.cos(theta),
                           np.sin(phi), np.cos(phi))


def np_sincos(a):
    return np.sin(a), np.cos(a)


def drift_terms(x, params: QuadParams, sincos=np_sincos):
    """Drift field written against generic arithmetic.

    ``x`` is a sequence of 14 scalar-like objects and ``sincos`` returns the
    pair (sin, cos) of one of them.  Used both for plain float/array
    evaluation and for Taylor jets.
    """
    (_, _, _, psi, theta, phi, vx, vy, vz, zeta, xi, p, q, r) = x
    m, ix, iy, iz = params.m, params.ix, params.iy, params.iz
    sps, cps = sincos(psi)
    sth, cth = sincos(theta)
    sph, cph = sincos(phi)
    a1, a2, a3 = _axis_from_trig(sps, cps, sth, cth, sph, cph)

    body = sph * q + cph * r
    psi_dot = body / cth
    theta_dot = cph * q - sph * r
    phi_dot = p + body * (sth / cth)

    return [
        vx,
        vy,
        vz,
        psi_dot,
        theta_dot,
        phi_dot,
        -(a1 * zeta) / m,
        -(a2 * zeta) / m,
        params.g - (a3 * zeta) / m,
        xi,
        0.0 * xi,
        ((iy - iz) / ix) * (q * r),
        ((iz - ix) / iy) * (p * r),
        ((ix - iy) / iz) * (p * q),
    ]


def drift_field(s, p: QuadParams, eps_theta: float = EPS_THETA) -> np.ndarray:
    """Input-free part of the dynamics, shape matching the state."""
    x = as_state_array(s)
    check_theta(x[IDX["theta"]], eps_theta)
    return np.stack([np.asarray(row, dtype=float) * np.ones_like(x[0])
                     for row in drift_terms(x, p)])


def input_matrix(p: QuadParams) -> np.ndarray:
    """14x4 matrix whose columns are the constant input fields g1..g4."""
    g = np.zeros((14, 4))
    g[IDX["xi"], 0] = 1.0
    g[IDX["p"], 1] = p.d / p.ix
    g[IDX["q"], 2] = p.d / p.iy
    g[IDX["r"], 3] = p.d / p.iz
    return g


def state_derivative(s, u, p: QuadParams, eps_theta: float = EPS_THETA) -> np.ndarray:
    x = as_state_array(s)
    uu = as_input_array(u)
    out = drift_field(x, p, eps_theta)
    gains = p.input_gains
    # sparse add rather than a matmul so the zero-input case is bit-identical to the drift
    out[IDX["xi"]] = out[IDX["xi"]] + gains[0] * uu[0]
    out[IDX["p"]] = out[IDX["p"]] + gains[1] * uu[1]
    out[IDX["q"]] = out[IDX["q"]] + gains[2] * uu[2]
    out[IDX["r"]] = out[IDX["r"]] + gains[3] * uu[3]
    return out
