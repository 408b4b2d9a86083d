"""Truncated Taylor arithmetic in time, carrying first-order directional derivatives.

A :class:`Jet` stores coefficients ``c[k, b, d]``: ``k`` is the power of
time, ``b`` a flat batch index and ``d`` the dual slot, holding the value
(``d = 0``) and the derivative along each seeded direction (``d >= 1``).
Directional parts are nilpotent (``eps_i * eps_j = 0``), so products keep
only first-order terms.

The coefficient kernels are compiled with numba; the simulator evaluates
one jet flow per control step, and interpreter overhead would dominate.
"""
from __future__ import annotations

import numba
import numpy as np


@numba.njit(cache=True)
def _mul(a, b):
    n, nb, nd = a.shape
    out = np.zeros((n, nb, nd))
    for k in range(n):
        for i in range(k + 1):
            j = k - i
            for q in range(nb):
                a0 = a[i, q, 0]
                b0 = b[j, q, 0]
                out[k, q, 0] += a0 * b0
                for d in range(1, nd):
                    out[k, q, d] += a0 * b[j, q, d] + a[i, q, d] * b0
    return out


@numba.njit(cache=True)
def _div(a, b):
    n, nb, nd = a.shape
    out = np.zeros((n, nb, nd))
    acc = np.empty(nd)
    for q in range(nb):
        b0 = b[0, q, 0]
        for k in range(n):
            for d in range(nd):
                acc[d] = a[k, q, d]
            for i in range(1, k + 1):
                j = k - i
                acc[0] -= b[i, q, 0] * out[j, q, 0]
                for d in range(1, nd):
                    acc[d] -= b[i, q, 0] * out[j, q, d] + b[i, q, d] * out[j, q, 0]
            out[k, q, 0] = acc[0] / b0
            for d in range(1, nd):
                out[k, q, d] = (acc[d] - acc[0] * b[0, q, d] / b0) / b0
    return out


@numba.njit(cache=True)
def _sincos(u):
    n, nb, nd = u.shape
    s = np.zeros((n, nb, nd))
    c = np.zeros((n, nb, nd))
    for q in range(nb):
        s0 = np.sin(u[0, q, 0])
        c0 = np.cos(u[0, q, 0])
        s[0, q, 0] = s0
        c[0, q, 0] = c0
        for d in range(1, nd):
            s[0, q, d] = c0 * u[0, q, d]
            c[0, q, d] = -s0 * u[0, q, d]
        for k in range(1, n):
            for j in range(1, k + 1):
                w = j / k
                uj0 = u[j, q, 0]
                sk0 = s[k - j, q, 0]
                ck0 = c[k - j, q, 0]
                s[k, q, 0] += w * uj0 * ck0
                c[k, q, 0] -= w * uj0 * sk0
                for d in range(1, nd):
                    s[k, q, d] += w * (uj0 * c[k - j, q, d] + u[j, q, d] * ck0)
                    c[k, q, d] -= w * (uj0 * s[k - j, q, d] + u[j, q, d] * sk0)
    return s, c


class Jet:
    __slots__ = ("c",)
    __array_priority__ = 1000

    def __init__(self, coeffs):
        self.c = coeffs

    def _lift(self, other):
        if isinstance(other, Jet):
            return other.c
        out = np.zeros_like(self.c)
        out[0, :, 0] = other
        return out

    def _scale(self, other):
        return np.asarray(other, dtype=float).reshape(-1)[None, :, None]

    def __add__(self, other):
        if isinstance(other, Jet):
            return Jet(self.c + other.c)
        out = self.c.copy()
        out[0, :, 0] += other
        return Jet(out)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return Jet(-self.c)

    def __mul__(self, other):
        if isinstance(other, Jet):
            return Jet(_mul(self.c, other.c))
        return Jet(self.c * self._scale(other))

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return Jet(_div(self.c, other.c))
        return Jet(self.c / self._scale(other))

    def __rtruediv__(self, other):
        return Jet(_div(self._lift(other), self.c))


def sincos(u: Jet):
    """Sine and cosine of a jet via the coupled Taylor recurrences."""
    s, c = _sincos(u.c)
    return Jet(s), Jet(c)
