"""Acceptance gate: one test per criterion, each at its stated tolerance.

Run ``pytest tests/test_acceptance.py`` to get a PASS/FAIL line per criterion
in the terminal summary.
"""
import csv
import time

import numpy as np
import pytest
from click.testing import CliRunner

from singzone.cli import cli
from singzone.control import GainSet, ReferenceSet, delta_altatt
from singzone.decoupling import Mode, delta_matrix, delta_yawpos, lu_diagnostics
from singzone.liederiv import numeric_row
from singzone.model import IDX, QuadParams, State14, VirtualInput, thrust_axis
from singzone.sim import FixedMode, Scenario, Termination, bundled_scenario, rk4_step, run_scenario
from singzone.singularity import ScanKind, s_value, scan_grid, zero_contour
from singzone.supervisor import ZoneSpec

from .oracles import drift_trajectory, flow_validation, row_relative_error

P = QuadParams()
ORANGE = ZoneSpec()


def random_states(rng, n):
    X = rng.uniform(-1, 1, (14, n))
    X[IDX["psi"]] = rng.uniform(-np.pi, np.pi, n)
    X[IDX["theta"]] = rng.uniform(-1.4, 1.4, n)
    X[IDX["phi"]] = rng.uniform(-1.4, 1.4, n)
    X[IDX["zeta"]] = rng.uniform(1, 20, n)
    X[IDX["p"]:] = rng.uniform(-5, 5, (3, n))
    return X


def test_c01_thrust_axis_normalization():
    rng = np.random.default_rng(1)
    t0 = time.perf_counter()
    psi, th, ph = rng.uniform(-np.pi, np.pi, (3, 100_000))
    a1, a2, a3 = thrust_axis(psi, th, ph)
    err = np.max(np.abs(a1**2 + a2**2 + a3**2 - 1))
    elapsed = time.perf_counter() - t0
    assert err <= 1e-12
    assert elapsed < 1.0


def test_c02_dual_derivation_equivalence():
    rng = np.random.default_rng(2)
    X = random_states(rng, 10_000)
    t0 = time.perf_counter()
    D = delta_matrix(X[IDX["psi"]], X[IDX["theta"]], X[IDX["phi"]], X[IDX["zeta"]], P)
    worst = 0.0
    for row, (name, k) in enumerate((("x", 4), ("y", 4), ("z", 4), ("psi", 2))):
        _, coeffs = numeric_row(name, X, P, k)
        worst = max(worst, row_relative_error(D[:, row, :], coeffs.T).max())
    elapsed = time.perf_counter() - t0
    assert worst <= 1e-9
    assert elapsed < 10.0


def test_c03_zeta_squared_scaling_and_psi_invariance():
    rng = np.random.default_rng(3)
    psi, th, ph = rng.uniform(-1.4, 1.4, (3, 1000))
    zeta = rng.uniform(1, 20, 1000)
    d1, _, _ = lu_diagnostics(delta_matrix(psi, th, ph, 1.0, P))
    dz, _, _ = lu_diagnostics(delta_matrix(psi, th, ph, zeta, P))
    np.testing.assert_allclose(dz, zeta**2 * d1, rtol=1e-9, atol=0)

    th, ph = rng.uniform(-1.4, 1.4, (2, 1000))
    zeta = rng.uniform(1, 20, 1000)
    grid = np.linspace(-np.pi, np.pi, 64)
    det, _, _ = lu_diagnostics(delta_matrix(grid[:, None], th, ph, zeta, P))
    np.testing.assert_allclose(det, np.broadcast_to(det[0], det.shape), rtol=1e-9, atol=0)


def test_c04_hover_determinant():
    zeta = 9.81
    expected = zeta**2 * P.d**3 / (P.m**3 * P.ix * P.iy * P.iz)
    dsys = delta_yawpos(State14.hover(P, zeta=zeta), P)
    assert abs(dsys.det) == pytest.approx(expected, rel=1e-9)
    assert expected == pytest.approx(1.62398e5, rel=1e-5)


def test_c05_singular_surface_adjudication(tmp_path):
    t0 = time.perf_counter()
    res = CliRunner().invoke(cli, ["singmap", "--range", "1.5", "--res", "301", "--det-oracle",
                                   "--psi", "0", "--zeta", "9.81", "--out-dir", str(tmp_path)])
    elapsed = time.perf_counter() - t0
    assert res.exit_code == 0, res.output
    with open(tmp_path / "discrepancy.csv") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")][1:]
    origin = [r for r in rows if float(r[0]) == 0.0 and float(r[1]) == 0.0]
    assert len(origin) == 1
    _, _, s_val, det_val, cls = origin[0]
    assert float(s_val) == 0.0
    assert abs(float(det_val)) >= 1e5
    assert cls == "DISAGREE"
    assert elapsed < 60.0


def test_c06_s_function_identities_and_contour():
    th = np.linspace(-1.5, 1.5, 100_001)
    np.testing.assert_allclose(s_value(th, 0.0), -np.sin(th) ** 2, rtol=0, atol=1e-12)
    np.testing.assert_allclose(s_value(0.0, th), -np.sin(th) * (np.sin(th) + np.cos(th)),
                               rtol=0, atol=1e-12)
    scan = scan_grid((-1.5, 1.5, 301), (-1.5, 1.5, 301), ScanKind.S_FUNCTION)
    V = zero_contour(scan).vertices
    for target in ((0.0, 0.0), (0.0, -np.pi / 4)):
        assert np.min(np.hypot(V[:, 0] - target[0], V[:, 1] - target[1])) <= 0.01


def test_c07_attitude_altitude_determinant_law():
    rng = np.random.default_rng(7)
    X = random_states(rng, 10_000)
    k = P.d**3 / (P.m * P.ix * P.iy * P.iz)
    rel = np.empty(X.shape[1])
    for i, x in enumerate(X.T):
        expected = abs(np.cos(x[IDX["phi"]])) * k
        rel[i] = abs(abs(delta_altatt(x, P).det) - expected) / expected
    assert rel.max() <= 1e-9


def test_c08_flow_validation_of_linearized_dynamics():
    sc = bundled_scenario("experiment1")
    sc = Scenario(sc.params, sc.initial, sc.policy, sc.refs, sc.gains, dt=sc.dt, t_final=3.0, log_every=1)
    ts = run_scenario(sc)
    assert ts.switch_count >= 1

    def x4(x, u):
        d = delta_yawpos(x, P)
        return d.ma[0] + d.delta[0] @ u

    errs = flow_validation(ts, P, x4)
    assert len(errs) > 2500
    assert np.mean(errs <= 1e-4) >= 0.95


def test_c09_rk4_order_and_exact_polynomial_steps():
    x0 = np.array([0.1, -0.2, 0.3, 0.4, 0.3, -0.5, 0.5, -0.3, 0.2, 9.0, 0.7, 1.1, -0.8, 0.6])
    T = 0.4
    ref = drift_trajectory(x0, P, [T])[:, 0]
    errs = []
    for n in (8, 16, 32):
        x = x0.copy()
        for _ in range(n):
            x = rk4_step(x, np.zeros(4), P, T / n)
        errs.append(np.max(np.abs(x - ref)))
    slopes = np.log2(np.array(errs[:-1]) / np.array(errs[1:]))
    assert np.all(np.abs(slopes - 4.0) <= 0.4)

    ff = rk4_step(State14(), VirtualInput(), P, 1.0)
    assert abs(ff.z - 4.905) <= 1e-12 and abs(ff.vz - 9.81) <= 1e-12
    tc = rk4_step(State14.hover(P), VirtualInput(1, 0, 0, 0), P, 1.0)
    assert abs(tc.xi - 1.0) <= 1e-12 and abs(tc.zeta - P.m * P.g - 0.5) <= 1e-12


def test_c10_experiment_one():
    sc = bundled_scenario("experiment1")
    assert (sc.initial.phi, sc.initial.theta, sc.initial.psi) == (0.5, 0.5, 0.0)
    t0 = time.perf_counter()
    ts = run_scenario(sc)
    elapsed = time.perf_counter() - t0
    into_altatt = [e for e in ts.events if e[1] == "switch" and e[2].endswith(Mode.ATTITUDE_ALTITUDE.value)]
    assert len(into_altatt) >= 1
    assert ts.termination is Termination.CONVERGED
    fs = ts.final_state
    _, phi_r, theta_r, _ = sc.refs.attitude_altitude
    assert sc.policy.zone.contains(fs.theta, fs.phi)
    assert abs(fs.phi - phi_r) <= 0.05 and abs(fs.theta - theta_r) <= 0.05
    assert elapsed < 30.0


def test_c11_experiment_two():
    sc = bundled_scenario("experiment2")
    assert sc.refs.attitude_altitude[1:3] == (0.5, -0.5)
    t0 = time.perf_counter()
    ts = run_scenario(sc)
    elapsed = time.perf_counter() - t0
    assert ts.switch_count >= 2
    assert ts.termination in (Termination.DIVERGED, Termination.SINGULAR)
    assert elapsed < 30.0


def test_c12_equilibrium_preservation():
    hover = State14.hover(P, x=0.5, y=-1.0, z=-3.0, psi=0.2)
    sc = Scenario(P, hover, FixedMode(Mode.YAW_POSITION), ReferenceSet((0.5, -1.0, -3.0, 0.2)),
                  GainSet.from_poles(), dt=1e-3, t_final=10.0, log_every=1)
    ts = run_scenario(sc)
    assert ts.t[-1] == pytest.approx(10.0)
    assert np.max(np.abs(ts.states - hover.to_array())) <= 1e-6
