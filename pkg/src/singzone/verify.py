"""Self-check suites comparing independent derivations of the same quantities.

Each suite draws its samples from a seeded generator, so a report is a pure
function of ``(samples, seed)``.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .control import GainSet, ReferenceSet
from .decoupling import Mode, delta_matrix, delta_yawpos, lu_diagnostics
from .liederiv import LieTable
from .model import IDX, QuadParams, State14, thrust_axis
from .sim import FixedMode, Scenario, rk4_step, run_scenario

ANGLE_MAX = 1.4


@dataclass(frozen=True)
class SuiteResult:
    name: str
    passed: bool
    metric: float
    tol: float
    detail: str = ""

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{self.name:18s} {status}  metric={self.metric:.3e}  tol={self.tol:.0e}  {self.detail}".rstrip()


def random_states(rng: np.random.Generator, n: int) -> np.ndarray:
    """(14, n) states with |theta|, |phi| <= 1.4, zeta in [1, 20], rates in [-5, 5]."""
    X = rng.uniform(-1.0, 1.0, (14, n))
    X[IDX["psi"]] = rng.uniform(-np.pi, np.pi, n)
    X[IDX["theta"]] = rng.uniform(-ANGLE_MAX, ANGLE_MAX, n)
    X[IDX["phi"]] = rng.uniform(-ANGLE_MAX, ANGLE_MAX, n)
    X[IDX["zeta"]] = rng.uniform(1.0, 20.0, n)
    X[IDX["p"]:] = rng.uniform(-5.0, 5.0, (3, n))
    return X


def row_scaled_error(got, ref) -> np.ndarray:
    """``|got - ref|`` over ``max(|ref|, max |ref| in the row)``; rows on the last axis."""
    row = np.max(np.abs(ref), axis=-1, keepdims=True)
    scale = np.maximum(np.abs(ref), row)
    return np.abs(got - ref) / np.where(scale > 0, scale, 1.0)


def a_normalization(samples, seed, p=None, tol=1e-12):
    rng = np.random.default_rng(seed)
    psi, th, ph = rng.uniform(-np.pi, np.pi, (3, samples))
    a1, a2, a3 = thrust_axis(psi, th, ph)
    err = float(np.max(np.abs(a1**2 + a2**2 + a3**2 - 1.0)))
    return SuiteResult("a-normalization", err <= tol, err, tol, f"n={samples}")


def delta_equivalence(samples, seed, p=None, tol=1e-9, chunk=2000):
    """Closed-form decoupling matrix against rows built from jet Lie derivatives."""
    p = p or QuadParams()
    rng = np.random.default_rng(seed)
    X = random_states(rng, samples)
    worst = 0.0
    for lo in range(0, samples, chunk):
        Xc = X[:, lo:lo + chunk]
        D = delta_matrix(Xc[IDX["psi"]], Xc[IDX["theta"]], Xc[IDX["phi"]], Xc[IDX["zeta"]], p)
        table = LieTable(Xc, p, 4)
        for row, (name, k) in enumerate((("x", 4), ("y", 4), ("z", 4), ("psi", 2))):
            jet = np.moveaxis(table.coupling(name, k), 0, -1)
            worst = max(worst, float(row_scaled_error(D[:, row, :], jet).max()))
    return SuiteResult("delta-equivalence", worst <= tol, worst, tol, f"n={samples} row-scaled")


def zeta_scaling(samples, seed, p=None, tol=1e-9):
    p = p or QuadParams()
    rng = np.random.default_rng(seed)
    n = max(1, samples // 10)
    psi, th, ph = rng.uniform(-ANGLE_MAX, ANGLE_MAX, (3, n))
    zeta = rng.uniform(1.0, 20.0, n)
    d1, _, _ = lu_diagnostics(delta_matrix(psi, th, ph, 1.0, p))
    dz, _, _ = lu_diagnostics(delta_matrix(psi, th, ph, zeta, p))
    err = float(np.max(np.abs(dz - zeta**2 * d1) / np.abs(zeta**2 * d1)))
    return SuiteResult("zeta-scaling", err <= tol, err, tol, f"n={n}")


def psi_invariance(samples, seed, p=None, tol=1e-9, n_psi=64):
    p = p or QuadParams()
    rng = np.random.default_rng(seed)
    n = max(1, samples // 10)
    th, ph = rng.uniform(-ANGLE_MAX, ANGLE_MAX, (2, n))
    zeta = rng.uniform(1.0, 20.0, n)
    psi = np.linspace(-np.pi, np.pi, n_psi)
    det, _, _ = lu_diagnostics(delta_matrix(psi[:, None], th, ph, zeta, p))
    err = float(np.max(np.abs(det - det[0]) / np.abs(det[0])))
    return SuiteResult("psi-invariance", err <= tol, err, tol, f"n={n}x{n_psi}")


def altatt_det(samples, seed, p=None, tol=1e-9, chunk=2000):
    """Attitude-altitude determinant against ``|cos phi| d^3 / (m Ix Iy Iz)``."""
    p = p or QuadParams()
    rng = np.random.default_rng(seed)
    X = random_states(rng, samples)
    worst = 0.0
    for lo in range(0, samples, chunk):
        Xc = X[:, lo:lo + chunk]
        table = LieTable(Xc, p, 4)
        rows = [table.coupling(n, k) for n, k in (("z", 4), ("phi", 2), ("theta", 2), ("psi", 2))]
        D = np.moveaxis(np.stack(rows), 2, 0)  # (n, 4 rows, 4 inputs)
        det = np.abs(np.linalg.det(D))
        ref = np.abs(np.cos(Xc[IDX["phi"]])) * p.d**3 / (p.m * p.ix * p.iy * p.iz)
        worst = max(worst, float(np.max(np.abs(det - ref) / ref)))
    return SuiteResult("altatt-det", worst <= tol, worst, tol, f"n={samples}")


def rk4_order(samples=None, seed=0, p=None, tol=0.4):
    """Self-convergence slope of RK4 on a generic input-free trajectory."""
    p = p or QuadParams()
    x0 = np.array([0.1, -0.2, 0.3, 0.4, 0.3, -0.5, 0.5, -0.3, 0.2, 9.0, 0.7, 1.1, -0.8, 0.6])
    T = 0.4

    def integrate(n):
        x = x0.copy()
        for _ in range(n):
            x = rk4_step(x, np.zeros(4), p, T / n)
        return x

    ref = integrate(2048)
    errs = np.array([np.max(np.abs(integrate(n) - ref)) for n in (8, 16, 32)])
    slopes = np.log2(errs[:-1] / errs[1:])
    metric = float(np.max(np.abs(slopes - 4.0)))
    detail = "slopes=" + ",".join(f"{s:.3f}" for s in slopes)
    return SuiteResult("rk4-order", metric <= tol, metric, tol, detail)


def fd_flow(samples=None, seed=0, p=None, tol=1e-4, min_fraction=0.95):
    """Central difference of the simulated x''' against row 1 of ``Ma + Delta u``."""
    p = p or QuadParams()
    sc = Scenario(p, State14.hover(p, phi=0.3, theta=-0.2, psi=0.4), FixedMode(Mode.YAW_POSITION),
                  ReferenceSet((1.0, -1.0, 0.5, 0.2)), GainSet.from_poles(), dt=1e-3, t_final=2.0)
    ts = run_scenario(sc)
    x3 = LieTable(ts.states.T, p, 3).drift("x", 3)
    dt = sc.dt
    errs = []
    for k in range(1, len(ts.t) - 1):
        fd = (x3[k + 1] - x3[k - 1]) / (2 * dt)
        dsys = delta_yawpos(ts.states[k], p)
        model = dsys.ma[0] + dsys.delta[0] @ (0.5 * (ts.inputs[k - 1] + ts.inputs[k]))
        errs.append(abs(fd - model) / max(abs(model), 1e-300))
    frac = float(np.mean(np.array(errs) <= tol))
    return SuiteResult("fd-flow", frac >= min_fraction, frac, tol,
                       f"fraction within tol (need >= {min_fraction})")


SUITES = {
    "a-normalization": a_normalization,
    "delta-equivalence": delta_equivalence,
    "zeta-scaling": zeta_scaling,
    "psi-invariance": psi_invariance,
    "altatt-det": altatt_det,
    "rk4-order": rk4_order,
    "fd-flow": fd_flow,
}


def run_suites(names=None, samples: int = 10000, seed: int = 42, p: QuadParams | None = None):
    names = list(SUITES) if not names else list(names)
    unknown = [n for n in names if n not in SUITES]
    if unknown:
        raise ValueError(f"unknown suites {unknown}; choose from {sorted(SUITES)}")
    if samples < 1:
        raise ValueError("samples must be >= 1")
    return [SUITES[n](samples, seed, p) for n in names]
