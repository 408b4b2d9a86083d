"""Singular-zone maps over (theta, phi).

Two scalar fields are scanned on the same grid: the closed-form surface
``S(theta, phi) = -1 + cos^2(theta) cos^2(phi) - cos^2(theta) cos(phi) sin(phi)``
proposed as the singular set of the yaw-position decoupling matrix, and the
determinant of that matrix evaluated directly.  :func:`discrepancy_report`
classifies every grid point by whether the two fields agree on singularity.
"""
from __future__ import annotations

import csv
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .decoupling import delta_matrix, lu_diagnostics
from .errors import EmptyContour, GridMismatch
from .model import EPS_PHI, EPS_THETA, QuadParams


class ScanKind(Enum):
    S_FUNCTION = "S_FUNCTION"
    DET_ORACLE = "DET_ORACLE"


class Classification(Enum):
    AGREE_NONSINGULAR = "AGREE_NONSINGULAR"
    AGREE_SINGULAR = "AGREE_SINGULAR"
    DISAGREE = "DISAGREE"


def s_value(theta, phi):
    c2 = np.cos(theta) ** 2
    return -1.0 + c2 * np.cos(phi) ** 2 - c2 * np.cos(phi) * np.sin(phi)


@dataclass(frozen=True)
class GridScan:
    """Scalar field sampled at ``values[i, j] = field(theta[i], phi[j])``.

    ``scale`` holds, for determinant scans, the product of the row norms of
    each cell's matrix (the yardstick for "small" determinants).  Cells that
    could not be evaluated are NaN.
    """

    theta_range: tuple
    phi_range: tuple
    values: np.ndarray
    kind: ScanKind
    scale: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        for rng in (self.theta_range, self.phi_range):
            if int(rng[2]) < 2:
                raise ValueError("grid needs at least 2 points per axis")
        if self.values.shape != (int(self.theta_range[2]), int(self.phi_range[2])):
            raise ValueError("values shape does not match the grid ranges")

    @property
    def theta(self) -> np.ndarray:
        lo, hi, n = self.theta_range
        return np.linspace(lo, hi, int(n))

    @property
    def phi(self) -> np.ndarray:
        lo, hi, n = self.phi_range
        return np.linspace(lo, hi, int(n))

    def cell_index(self, theta: float, phi: float) -> tuple[int, int]:
        """Index of the grid sample nearest to ``(theta, phi)``."""
        return int(np.argmin(np.abs(self.theta - theta))), int(np.argmin(np.abs(self.phi - phi)))

    def to_csv(self, path) -> None:
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "phi", "value"])
            for a, b, v in zip(th.ravel(), ph.ravel(), self.values.ravel()):
                w.writerow([_fmt(a), _fmt(b), _fmt(v)])


def _fmt(v) -> str:
    return format(float(v), ".17g")


def default_ranges(half_width: float = 1.5, count: int = 301):
    return (-half_width, half_width, count), (-half_width, half_width, count)


def scan_grid(theta_range, phi_range, kind=ScanKind.S_FUNCTION, fixed_psi: float = 0.0,
              fixed_zeta: float = 9.81, p: QuadParams | None = None,
              eps_theta: float = EPS_THETA, eps_phi: float = EPS_PHI) -> GridScan:
    """Evaluate S or the decoupling determinant over a (theta, phi) grid.

    The determinant is taken at the state with the grid attitude, yaw
    ``fixed_psi``, thrust ``fixed_zeta`` and every velocity, rate and thrust
    rate zero; the matrix depends on nothing else.  Cells outside the open
    Euler domain are left NaN.
    """
    kind = ScanKind(kind)
    p = p or QuadParams()
    theta_range = (float(theta_range[0]), float(theta_range[1]), int(theta_range[2]))
    phi_range = (float(phi_range[0]), float(phi_range[1]), int(phi_range[2]))
    th = np.linspace(*theta_range)
    ph = np.linspace(*phi_range)
    TH, PH = np.meshgrid(th, ph, indexing="ij")
    if kind is ScanKind.S_FUNCTION:
        return GridScan(theta_range, phi_range, s_value(TH, PH), kind)

    if fixed_zeta == 0:
        raise ValueError("determinant scan needs nonzero thrust (zeta != 0)")
    ok = (np.abs(TH) < np.pi / 2 - eps_theta) & (np.abs(PH) < np.pi / 2 - eps_phi)
    values = np.full(TH.shape, np.nan)
    scale = np.full(TH.shape, np.nan)
    delta = delta_matrix(fixed_psi, TH[ok], PH[ok], fixed_zeta, p)
    det, _, row_scale = lu_diagnostics(delta)
    values[ok] = det
    scale[ok] = row_scale
    meta = {"psi": float(fixed_psi), "zeta": float(fixed_zeta), "unevaluated": int((~ok).sum())}
    return GridScan(theta_range, phi_range, values, kind, scale, meta)


@dataclass(frozen=True)
class ContourSet:
    """Zero-level polylines as arrays of ``(theta, phi)`` vertices."""

    polylines: list

    def __len__(self):
        return len(self.polylines)

    @property
    def vertices(self) -> np.ndarray:
        if not self.polylines:
            return np.empty((0, 2))
        return np.concatenate(self.polylines)

    def to_csv(self, path) -> None:
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["polyline_id", "theta", "phi"])
            for k, line in enumerate(self.polylines):
                for a, b in line:
                    w.writerow([k, _fmt(a), _fmt(b)])


# Marching-squares edge table.  Corners are numbered 0:(i,j) 1:(i+1,j)
# 2:(i+1,j+1) 3:(i,j+1); edges 0:(c0,c1) 1:(c1,c2) 2:(c2,c3) 3:(c3,c0).
_EDGE_CORNERS = ((0, 1), (1, 2), (2, 3), (3, 0))
_SEGMENTS = {
    0: (), 15: (),
    1: ((3, 0),), 14: ((3, 0),),
    2: ((0, 1),), 13: ((0, 1),),
    4: ((1, 2),), 11: ((1, 2),),
    8: ((2, 3),), 7: ((2, 3),),
    3: ((3, 1),), 12: ((3, 1),),
    6: ((0, 2),), 9: ((0, 2),),
}


def _edge_point(theta, phi, vals, i, j, edge):
    corners = ((i, j), (i + 1, j), (i + 1, j + 1), (i, j + 1))
    (ia, ja), (ib, jb) = corners[_EDGE_CORNERS[edge][0]], corners[_EDGE_CORNERS[edge][1]]
    va, vb = vals[ia, ja], vals[ib, jb]
    t = va / (va - vb) if va != vb else 0.5
    return (theta[ia] + t * (theta[ib] - theta[ia]), phi[ja] + t * (phi[jb] - phi[ja]))


def zero_contour(scan: GridScan) -> ContourSet:
    """Zero level set of ``scan`` by marching squares with linear edge interpolation.

    Samples equal to zero count as positive.  Cells touching a NaN sample
    are skipped.  Saddle cells are resolved by the sign of the cell mean.
    """
    vals = scan.values
    theta, phi = scan.theta, scan.phi
    pos = vals >= 0
    segments = []
    ni, nj = vals.shape
    for i in range(ni - 1):
        for j in range(nj - 1):
            quad = (vals[i, j], vals[i + 1, j], vals[i + 1, j + 1], vals[i, j + 1])
            if np.isnan(quad).any():
                continue
            code = (pos[i, j] * 1 + pos[i + 1, j] * 2 + pos[i + 1, j + 1] * 4 + pos[i, j + 1] * 8)
            if code in (5, 10):
                center_pos = np.mean(quad) >= 0
                if (code == 5) == center_pos:
                    pairs = ((0, 1), (2, 3))
                else:
                    pairs = ((3, 0), (1, 2))
            else:
                pairs = _SEGMENTS[code]
            for ea, eb in pairs:
                segments.append(((i, j, ea), (i, j, eb)))
    if not segments:
        raise EmptyContour("scanned field has no sign change")
    return ContourSet(_chain_segments(segments, theta, phi, vals))


def _edge_key(i, j, e):
    # shared edges between neighbouring cells map to the same key
    if e == 0:
        return ("h", i, j)
    if e == 2:
        return ("h", i, j + 1)
    if e == 3:
        return ("v", i, j)
    return ("v", i + 1, j)


def _chain_segments(segments, theta, phi, vals):
    points = {}
    adj: dict = {}
    for a, b in segments:
        ka, kb = _edge_key(*a), _edge_key(*b)
        points.setdefault(ka, _edge_point(theta, phi, vals, *a))
        points.setdefault(kb, _edge_point(theta, phi, vals, *b))
        adj.setdefault(ka, []).append(kb)
        adj.setdefault(kb, []).append(ka)

    unused = {}
    for a, b in segments:
        ka, kb = _edge_key(*a), _edge_key(*b)
        unused.setdefault(frozenset((ka, kb)), 0)
        unused[frozenset((ka, kb))] += 1

    def take(u, v):
        key = frozenset((u, v))
        if unused.get(key, 0) > 0:
            unused[key] -= 1
            return True
        return False

    def walk(start):
        line = [start]
        cur = start
        while True:
            nxt = next((v for v in adj[cur] if take(cur, v)), None)
            if nxt is None:
                return line
            line.append(nxt)
            cur = nxt

    polylines = []
    # open chains start at degree-1 keys; remaining segments form closed loops
    starts = sorted((k for k, v in adj.items() if len(v) == 1), key=_sort_key)
    for k in starts + sorted(adj, key=_sort_key):
        while any(unused.get(frozenset((k, v)), 0) > 0 for v in adj[k]):
            line = walk(k)
            polylines.append(np.array([points[key] for key in line]))
    return polylines


def _sort_key(k):
    return (k[0], k[1], k[2])


@dataclass(frozen=True)
class DiscrepancyReport:
    theta: np.ndarray
    phi: np.ndarray
    s_values: np.ndarray
    det_values: np.ndarray
    classification: np.ndarray  # object array of Classification, NaN cells hold None
    meta: dict

    @property
    def counts(self) -> dict:
        c = Counter(x.value for x in self.classification.ravel() if x is not None)
        out = {k.value: c.get(k.value, 0) for k in Classification}
        out["UNEVALUATED"] = int(sum(x is None for x in self.classification.ravel()))
        return out

    def at(self, theta: float, phi: float) -> Classification:
        i = int(np.argmin(np.abs(self.theta - theta)))
        j = int(np.argmin(np.abs(self.phi - phi)))
        return self.classification[i, j]

    def summary(self) -> str:
        c = self.counts
        return " ".join(f"{k}={v}" for k, v in c.items())

    def to_csv(self, path) -> None:
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["theta", "phi", "s_value", "det_value", "classification"])
            for a, b, s, d, k in zip(th.ravel(), ph.ravel(), self.s_values.ravel(),
                                     self.det_values.ravel(), self.classification.ravel()):
                w.writerow([_fmt(a), _fmt(b), _fmt(s), _fmt(d),
                            "UNEVALUATED" if k is None else k.value])
            fh.write("# summary " + self.summary() + "\n")


def discrepancy_report(s_scan: GridScan, det_scan: GridScan, s_tol: float = 1e-9,
                       det_tol: float = 1e-9) -> DiscrepancyReport:
    """Classify each grid point by whether S and the determinant agree on singularity.

    A point is singular under S when ``|S| <= s_tol`` and singular under the
    determinant when ``|det| <= det_tol * scale`` (product of row norms).
    """
    if (s_scan.theta_range != det_scan.theta_range or s_scan.phi_range != det_scan.phi_range):
        raise GridMismatch("scans do not share the same grid")
    sv, dv = s_scan.values, det_scan.values
    scale = det_scan.scale if det_scan.scale is not None else np.ones_like(dv)
    s_sing = np.abs(sv) <= s_tol
    d_sing = np.abs(dv) <= det_tol * scale
    valid = np.isfinite(sv) & np.isfinite(dv)
    cls = np.empty(sv.shape, dtype=object)
    cls[...] = None
    cls[valid & s_sing & d_sing] = Classification.AGREE_SINGULAR
    cls[valid & ~s_sing & ~d_sing] = Classification.AGREE_NONSINGULAR
    cls[valid & (s_sing != d_sing)] = Classification.DISAGREE
    meta = dict(det_scan.meta)
    meta.update(s_tol=s_tol, det_tol=det_tol)
    return DiscrepancyReport(s_scan.theta, s_scan.phi, sv, dv, cls, meta)
