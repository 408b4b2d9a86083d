"""Feedback-linearizing control laws for the two output sets.

* Yaw-position: outputs ``(x, y, z, psi)``, relative degrees ``(4, 4, 4, 2)``.
* Attitude-altitude: outputs ``(z, phi, theta, psi)``, relative degrees
  ``(4, 2, 2, 2)``; thrust keeps its double integrator so both laws act on
  the same 14-dimensional state.

Each law solves ``Delta @ u = v - Ma`` where ``v`` is a linear tracking law
on the integrator chains.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .decoupling import (COND_MAX, DET_REL_MIN, DecouplingSystem, Mode, delta_yawpos,
                         invert_delta)
from .liederiv import LieTable
from .model import EPS_PHI, EPS_THETA, IDX, QuadParams, as_state_array, check_attitude

__all__ = [
    "Mode", "GainSet", "ReferenceSet", "OUTPUTS", "RELATIVE_DEGREE",
    "outer_loop_v", "fl_law", "delta_altatt", "decoupling_system", "chain_gains",
]

OUTPUTS = {
    Mode.YAW_POSITION: ("x", "y", "z", "psi"),
    Mode.ATTITUDE_ALTITUDE: ("z", "phi", "theta", "psi"),
}
RELATIVE_DEGREE = {"x": 4, "y": 4, "z": 4, "psi": 2, "phi": 2, "theta": 2}


def chain_gains(poles) -> tuple:
    """Gains ``(g0, ..., g_{k-1})`` whose error polynomial has the given roots.

    ``v = sum_i g_i (ref_i - y^(i))`` closes the chain ``y^(k) = v`` with
    characteristic polynomial ``s^k + g_{k-1} s^{k-1} + ... + g0``.
    """
    coeffs = np.real(np.poly(np.asarray(poles, dtype=complex)))
    return tuple(float(c) for c in coeffs[:0:-1])


def _is_hurwitz(gains) -> bool:
    poly = np.concatenate([[1.0], np.asarray(gains, dtype=float)[::-1]])
    return bool(np.all(np.real(np.roots(poly)) < 0))


@dataclass(frozen=True)
class GainSet:
    """Tracking gains per output, keyed by output name."""

    chains: dict = field(default_factory=lambda: GainSet.from_poles().chains)

    def __post_init__(self):
        chains = {}
        for name, g in self.chains.items():
            if name not in RELATIVE_DEGREE:
                raise ValueError(f"unknown output {name!r}")
            g = tuple(float(v) for v in g)
            if len(g) != RELATIVE_DEGREE[name]:
                raise ValueError(f"output {name!r} needs {RELATIVE_DEGREE[name]} gains, got {len(g)}")
            if not _is_hurwitz(g):
                raise ValueError(f"gains {g} for {name!r} do not give a Hurwitz polynomial")
            chains[name] = g
        missing = set(RELATIVE_DEGREE) - set(chains)
        if missing:
            raise ValueError(f"missing gains for {sorted(missing)}")
        object.__setattr__(self, "chains", chains)

    @classmethod
    def from_poles(cls, deg4=(-2.0,) * 4, deg2=(-2.0,) * 2) -> "GainSet":
        g4, g2 = chain_gains(deg4), chain_gains(deg2)
        return cls({name: (g4 if k == 4 else g2) for name, k in RELATIVE_DEGREE.items()})

    def __getitem__(self, name) -> tuple:
        return self.chains[name]


@dataclass(frozen=True)
class ReferenceSet:
    """Constant setpoints for each mode's outputs."""

    yaw_position: tuple = (0.0, 0.0, 0.0, 0.0)      # x, y, z, psi
    attitude_altitude: tuple = (0.0, 0.0, 0.0, 0.0)  # z, phi, theta, psi

    def __post_init__(self):
        for name in ("yaw_position", "attitude_altitude"):
            v = tuple(float(x) for x in getattr(self, name))
            if len(v) != 4 or not all(np.isfinite(v)):
                raise ValueError(f"{name} must hold 4 finite setpoints")
            object.__setattr__(self, name, v)

    def for_mode(self, mode: Mode) -> tuple:
        return self.yaw_position if Mode.coerce(mode) is Mode.YAW_POSITION else self.attitude_altitude


def _v_from_table(table: LieTable, refs: ReferenceSet, gains: GainSet, mode: Mode) -> np.ndarray:
    v = np.empty(4)
    for i, (name, ref) in enumerate(zip(OUTPUTS[mode], refs.for_mode(mode))):
        g = gains[name]
        chain = table.chain(name, len(g) - 1)
        err = -chain
        err[0] += ref
        v[i] = float(np.dot(g, err))
    return v


def tracking_error(s, p: QuadParams, refs: ReferenceSet, mode, table: LieTable | None = None):
    """Error chains ``ref - y^(i)`` of the active mode's outputs, concatenated."""
    mode = Mode.coerce(mode)
    table = table if table is not None else LieTable(as_state_array(s), p, 4)
    out = []
    for name, ref in zip(OUTPUTS[mode], refs.for_mode(mode)):
        err = -table.chain(name, RELATIVE_DEGREE[name] - 1)
        err[0] += ref
        out.append(err)
    return np.concatenate(out)


def outer_loop_v(s, refs: ReferenceSet, gains: GainSet, mode, p: QuadParams | None = None,
                 table: LieTable | None = None) -> np.ndarray:
    """Linear tracking command on the integrator chains of ``mode``'s outputs."""
    mode = Mode.coerce(mode)
    p = p or QuadParams()
    table = table if table is not None else LieTable(as_state_array(s), p, 4)
    return _v_from_table(table, refs, gains, mode)


def delta_altatt(s, p: QuadParams, table: LieTable | None = None,
                 eps_theta: float = EPS_THETA, eps_phi: float = EPS_PHI) -> DecouplingSystem:
    """Decoupling system for ``(z, phi, theta, psi)`` built from jet Lie derivatives."""
    x = as_state_array(s)
    check_attitude(x[IDX["theta"]], x[IDX["phi"]], eps_theta, eps_phi)
    table = table if table is not None else LieTable(x, p, 4)
    ks = [RELATIVE_DEGREE[n] for n in OUTPUTS[Mode.ATTITUDE_ALTITUDE]]
    names = OUTPUTS[Mode.ATTITUDE_ALTITUDE]
    ma = [float(table.drift(n, k)) for n, k in zip(names, ks)]
    delta = np.stack([table.coupling(n, k) for n, k in zip(names, ks)])
    return DecouplingSystem.build(ma, delta, Mode.ATTITUDE_ALTITUDE)


def decoupling_system(mode, s, p: QuadParams, table: LieTable | None = None) -> DecouplingSystem:
    mode = Mode.coerce(mode)
    if mode is Mode.YAW_POSITION:
        return delta_yawpos(s, p, table=table)
    return delta_altatt(s, p, table=table)


def fl_law(s, p: QuadParams, refs: ReferenceSet, gains: GainSet, mode,
           cond_max: float = COND_MAX, det_rel_min: float = DET_REL_MIN,
           return_system: bool = False):
    """Linearizing input ``u = Delta^-1 (v - Ma)`` for the active mode.

    Raises :class:`~singzone.errors.SingularMatrix` when the mode's
    decoupling matrix cannot be inverted.  With ``return_system=True`` the
    decoupling system is returned alongside the input.
    """
    mode = Mode.coerce(mode)
    x = as_state_array(s)
    check_attitude(x[IDX["theta"]], x[IDX["phi"]])
    table = LieTable(x, p, 4)
    dsys = decoupling_system(mode, x, p, table)
    v = _v_from_table(table, refs, gains, mode)
    u = invert_delta(dsys, v, cond_max, det_rel_min)
    if return_system:
        return u, dsys
    return u
