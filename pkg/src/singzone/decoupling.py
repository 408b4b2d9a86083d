"""Closed-form yaw-position decoupling matrix and guarded inversion.

For the outputs ``(x, y, z, psi)`` with relative degrees ``(4, 4, 4, 2)``::

    [x'''', y'''', z'''', psi''] = Ma(state) + Delta(state) @ u

Rows 1-3 of ``Delta`` come from the thrust-axis coefficients and their
attitude partials (the ``M``, ``N``, ``O`` sets below); row 4 from the yaw
kinematics.  ``Ma`` has no closed form here and is taken from the jet
engine in :mod:`singzone.liederiv`.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import SingularMatrix
from .liederiv import LieTable
from .model import (EPS_PHI, EPS_THETA, IDX, QuadParams, VirtualInput, as_state_array,
                    check_attitude, thrust_axis)

COND_MAX = 1e8
DET_REL_MIN = 1e-12


class Mode(Enum):
    YAW_POSITION = "YawPosition"
    ATTITUDE_ALTITUDE = "AttitudeAltitude"

    @classmethod
    def coerce(cls, m) -> "Mode":
        if isinstance(m, cls):
            return m
        key = str(m).replace("_", "").replace("-", "").lower()
        for mode in cls:
            if mode.value.lower() == key or mode.name.replace("_", "").lower() == key:
                return mode
        aliases = {"yawpos": cls.YAW_POSITION, "altatt": cls.ATTITUDE_ALTITUDE}
        if key in aliases:
            return aliases[key]
        raise ValueError(f"unknown mode {m!r}")


@dataclass(frozen=True)
class CoefficientSet:
    a1: float
    a2: float
    a3: float
    m1: float
    n1: float
    o1: float
    m2: float
    n2: float
    o2: float
    n3: float
    o3: float


def mno_coefficients(psi, theta, phi, as_printed: bool = False) -> CoefficientSet:
    """Thrust-axis coefficients and their partials in yaw (M), roll (N), pitch (O).

    ``m1`` and ``m2`` are the yaw partials of ``A1`` and ``A2``.  With
    ``as_printed=True`` the sin(phi) typo in their second term is reproduced
    (``s(psi) s(theta) s(phi)`` in place of ``s(psi) s(theta) c(phi)``); that
    variant disagrees with the true derivative whenever theta, psi and phi
    are all nonzero and exists only for comparison.
    """
    sps, cps = np.sin(psi), np.cos(psi)
    sth, cth = np.sin(theta), np.cos(theta)
    sph, cph = np.sin(phi), np.cos(phi)
    a1, a2, a3 = thrust_axis(psi, theta, phi)
    tail = sph if as_printed else cph
    return CoefficientSet(
        a1=a1, a2=a2, a3=a3,
        m1=cps * sph - sps * sth * tail,
        n1=sps * cph - cps * sth * sph,
        o1=cps * cth * cph,
        m2=sps * sph + cps * sth * tail,
        n2=-cps * cph - sps * sth * sph,
        o2=sps * cth * cph,
        n3=-cth * sph,
        o3=-sth * cph,
    )


def delta_matrix(psi, theta, phi, zeta, p: QuadParams, as_printed: bool = False) -> np.ndarray:
    """Closed-form 4x4 decoupling matrix; batch axes of the inputs lead the result."""
    psi, theta, phi, zeta = np.broadcast_arrays(*(np.asarray(v, dtype=float)
                                                  for v in (psi, theta, phi, zeta)))
    cs = mno_coefficients(psi, theta, phi, as_printed)
    sph, cph = np.sin(phi), np.cos(phi)
    cth, tth = np.cos(theta), np.tan(theta)
    kx, ky, kz = p.d / p.ix, p.d / p.iy, p.d / p.iz
    lead = -zeta / p.m

    def thrust_row(a, m_, n_, o_):
        return [
            -a / p.m,
            lead * n_ * kx,
            lead * (m_ * sph / cth + n_ * sph * tth + o_ * cph) * ky,
            lead * (m_ * cph / cth + n_ * cph * tth - o_ * sph) * kz,
        ]

    zero = np.zeros_like(psi)
    rows = [
        thrust_row(cs.a1, cs.m1, cs.n1, cs.o1),
        thrust_row(cs.a2, cs.m2, cs.n2, cs.o2),
        thrust_row(cs.a3, zero, cs.n3, cs.o3),
        [zero, zero, sph / cth * ky, cph / cth * kz],
    ]
    out = np.empty(psi.shape + (4, 4))
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            out[..., i, j] = v
    return out


def lu_diagnostics(delta: np.ndarray):
    """Determinant (LAPACK LU with partial pivoting) and 2-norm condition number.

    Also returns the product of row 2-norms, the scale against which a
    determinant is judged small.  Works on stacks of matrices.
    """
    det = np.linalg.det(delta)
    sv = np.linalg.svd(delta, compute_uv=False)
    with np.errstate(divide="ignore", invalid="ignore"):
        cond = np.where(sv[..., -1] > 0, sv[..., 0] / sv[..., -1], np.inf)
    scale = np.prod(np.linalg.norm(delta, axis=-1), axis=-1)
    return det, cond, scale


def is_singular(det, cond, scale, cond_max: float = COND_MAX, det_rel_min: float = DET_REL_MIN):
    return (cond > cond_max) | (np.abs(det) < det_rel_min * scale)


@dataclass(frozen=True)
class DecouplingSystem:
    ma: np.ndarray
    delta: np.ndarray
    det: float
    cond: float
    mode: Mode
    scale: float = field(default=float("nan"), compare=False)

    @classmethod
    def build(cls, ma, delta, mode: Mode) -> "DecouplingSystem":
        delta = np.array(delta, dtype=float)
        ma = None if ma is None else np.array(ma, dtype=float)
        det, cond, scale = lu_diagnostics(delta)
        for arr in (delta, ma):
            if arr is not None:
                arr.setflags(write=False)
        return cls(ma, delta, float(det), float(cond), mode, float(scale))

    @property
    def singular(self) -> bool:
        return bool(is_singular(self.det, self.cond, self.scale))

    def to_record(self) -> dict:
        return {
            "mode": self.mode.value,
            "delta": self.delta.tolist(),
            "ma": None if self.ma is None else self.ma.tolist(),
            "det": self.det,
            "cond": self.cond if np.isfinite(self.cond) else None,
        }


def _yawpos_ma(table: LieTable) -> np.ndarray:
    return np.array([table.drift("x", 4), table.drift("y", 4), table.drift("z", 4),
                     table.drift("psi", 2)], dtype=float)


def delta_yawpos(s, p: QuadParams, with_ma: bool = True, table: LieTable | None = None,
                 eps_theta: float = EPS_THETA, eps_phi: float = EPS_PHI) -> DecouplingSystem:
    x = as_state_array(s)
    check_attitude(x[IDX["theta"]], x[IDX["phi"]], eps_theta, eps_phi)
    delta = delta_matrix(x[IDX["psi"]], x[IDX["theta"]], x[IDX["phi"]], x[IDX["zeta"]], p)
    ma = None
    if with_ma:
        ma = _yawpos_ma(table if table is not None else LieTable(x, p, 4))
    return DecouplingSystem.build(ma, delta, Mode.YAW_POSITION)


def ma_yawpos(s, p: QuadParams, eps_theta: float = EPS_THETA, eps_phi: float = EPS_PHI) -> np.ndarray:
    x = as_state_array(s)
    check_attitude(x[IDX["theta"]], x[IDX["phi"]], eps_theta, eps_phi)
    return _yawpos_ma(LieTable(x, p, 4))


def invert_delta(dsys: DecouplingSystem, v, cond_max: float = COND_MAX,
                 det_rel_min: float = DET_REL_MIN) -> VirtualInput:
    """Solve ``delta @ u = v - ma`` for the virtual input ``u``.

    Raises :class:`SingularMatrix` when the condition number exceeds
    ``cond_max`` or ``|det|`` falls below ``det_rel_min`` times the product
    of row norms.
    """
    if is_singular(dsys.det, dsys.cond, dsys.scale, cond_max, det_rel_min):
        raise SingularMatrix(
            f"{dsys.mode.value} decoupling matrix is singular "
            f"(det={dsys.det:.6g}, cond={dsys.cond:.6g})", det=dsys.det, cond=dsys.cond)
    rhs = np.asarray(v, dtype=float)
    if dsys.ma is not None:
        rhs = rhs - dsys.ma
    return VirtualInput.from_array(np.linalg.solve(dsys.delta, rhs))
