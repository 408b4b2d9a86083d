"""Lie derivatives of scalar state outputs along the quadrotor drift.

The drift flow is expanded as a truncated Taylor series in time using jet
arithmetic (:mod:`singzone.jets`); entry ``k`` of the series of an output
``h`` times ``k!`` is ``L_f^k h``, exact up to rounding.  Seeding the initial
state with the constant input fields ``g_j`` as first-order directions gives
``L_{g_j} L_f^{k-1} h`` from the same pass.
"""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from math import factorial

import numpy as np

from .errors import OrderError
from .jets import Jet, sincos
from .model import IDX, QuadParams, as_state_array, check_theta, drift_terms, input_matrix

MAX_ORDER = 4


class OutputSelector(Enum):
    X = "x"
    Y = "y"
    Z = "z"
    PSI = "psi"
    THETA = "theta"
    PHI = "phi"

    @property
    def index(self) -> int:
        return IDX[self.value]

    @classmethod
    def coerce(cls, h) -> "OutputSelector":
        if isinstance(h, cls):
            return h
        try:
            return cls(str(h).lower())
        except ValueError:
            return cls[str(h).upper()]


@dataclass(frozen=True)
class LieChain:
    """``values[j] = L_f^j h`` for ``j = 0..order``."""

    values: tuple
    order: int

    def __post_init__(self):
        if len(self.values) != self.order + 1:
            raise ValueError("LieChain length must be order + 1")


def _jet_sincos(u):
    if isinstance(u, Jet):
        return sincos(u)
    return np.sin(u), np.cos(u)


def taylor_coefficients(s, p: QuadParams, order: int, directions: np.ndarray | None = None):
    """Time-Taylor coefficients of the drift flow through ``s``.

    Returns an array ``X[i, k, ..., d]``: state component ``i``, power
    ``k`` (0..order), batch axes, and dual slot ``d`` (0 for the value,
    ``1..`` for each column of ``directions``, a 14xD matrix of initial
    perturbations).
    """
    if order > MAX_ORDER or order < 0:
        raise OrderError(f"order must be in 0..{MAX_ORDER}, got {order}")
    x0 = as_state_array(s)
    check_theta(x0[IDX["theta"]])
    batch = x0.shape[1:]
    flat = x0.reshape(14, -1)
    nb = flat.shape[1]
    ndir = 0 if directions is None else directions.shape[1]
    X = np.zeros((14, order + 1, nb, 1 + ndir))
    X[:, 0, :, 0] = flat
    if ndir:
        X[:, 0, :, 1:] = directions[:, None, :]
    for k in range(order):
        comps = [Jet(X[i, :k + 1]) for i in range(14)]
        f = drift_terms(comps, p, _jet_sincos)
        for i, fi in enumerate(f):
            X[i, k + 1] = fi.c[k] / (k + 1)
    return X.reshape((14, order + 1) + batch + (1 + ndir,))


class LieTable:
    """All drift and input-coupling Lie derivatives up to ``order`` from one flow."""

    def __init__(self, s, p: QuadParams, order: int = MAX_ORDER):
        self.order = order
        self.params = p
        self.coeffs = taylor_coefficients(s, p, order, input_matrix(p))

    def drift(self, h, k: int):
        """``L_f^k h``."""
        h = OutputSelector.coerce(h)
        self._check(k)
        return factorial(k) * self.coeffs[h.index, k, ..., 0]

    def coupling(self, h, k: int):
        """``L_{g_j} L_f^{k-1} h`` for j = 1..4, stacked on the leading axis."""
        h = OutputSelector.coerce(h)
        self._check(k)
        if k < 1:
            raise OrderError("coupling needs k >= 1")
        c = factorial(k - 1) * self.coeffs[h.index, k - 1, ..., 1:]
        return np.moveaxis(c, -1, 0)

    def chain(self, h, k: int) -> np.ndarray:
        """``[h, L_f h, ..., L_f^k h]`` stacked on the leading axis."""
        return np.stack([self.drift(h, j) for j in range(k + 1)])

    def _check(self, k):
        if k > self.order or k < 0:
            raise OrderError(f"table holds orders 0..{self.order}, requested {k}")


def flow_taylor(h, s, p: QuadParams, k: int) -> LieChain:
    if k > MAX_ORDER:
        raise OrderError(f"order must be <= {MAX_ORDER}, got {k}")
    h = OutputSelector.coerce(h)
    X = taylor_coefficients(s, p, k)
    vals = tuple(factorial(j) * X[h.index, j, ..., 0] for j in range(k + 1))
    if np.ndim(vals[0]) == 0:
        vals = tuple(float(v) for v in vals)
    return LieChain(vals, k)


def input_coupling(h, s, p: QuadParams, k: int, j: int):
    """``L_{g_j} L_f^{k-1} h`` for input index ``j`` in 1..4."""
    if not 1 <= j <= 4:
        raise ValueError(f"input index must be 1..4, got {j}")
    if k < 1 or k > MAX_ORDER:
        raise OrderError(f"order must be in 1..{MAX_ORDER}, got {k}")
    h = OutputSelector.coerce(h)
    direction = input_matrix(p)[:, j - 1:j]
    X = taylor_coefficients(s, p, k - 1, direction)
    out = factorial(k - 1) * X[h.index, k - 1, ..., 1]
    return float(out) if np.ndim(out) == 0 else out


def numeric_row(h, s, p: QuadParams, k: int):
    """One row ``y^(k) = Ma + coeffs . u`` of the linearizing form.

    Returns ``(ma, coeffs)`` with ``coeffs`` of leading length 4.
    """
    table = LieTable(s, p, k)
    ma = table.drift(h, k)
    coeffs = table.coupling(h, k)
    if np.ndim(ma) == 0:
        return float(ma), np.asarray(coeffs, dtype=float)
    return ma, coeffs
