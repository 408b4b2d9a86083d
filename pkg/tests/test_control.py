import numpy as np
import pytest

from singzone.control import (GainSet, ReferenceSet, chain_gains, decoupling_system, delta_altatt,
                              fl_law, outer_loop_v, tracking_error)
from singzone.decoupling import Mode
from singzone.errors import DomainError, SingularMatrix
from singzone.liederiv import LieTable
from singzone.model import IDX, QuadParams, State14

P = QuadParams()
G = GainSet.from_poles()


def random_states(rng, n):
    X = rng.uniform(-1, 1, (14, n))
    X[IDX["psi"]] = rng.uniform(-np.pi, np.pi, n)
    X[IDX["theta"]] = rng.uniform(-1.4, 1.4, n)
    X[IDX["phi"]] = rng.uniform(-1.4, 1.4, n)
    X[IDX["zeta"]] = rng.uniform(1, 20, n)
    X[IDX["p"]:] = rng.uniform(-5, 5, (3, n))
    return X


class TestGains:
    def test_degree_four(self):
        assert chain_gains([-2] * 4) == (16.0, 32.0, 24.0, 8.0)

    def test_degree_two(self):
        assert chain_gains([-2, -2]) == (4.0, 4.0)

    def test_complex_pair(self):
        assert chain_gains([-1 + 1j, -1 - 1j]) == pytest.approx((2.0, 2.0))

    def test_default_gainset(self):
        assert G["x"] == (16.0, 32.0, 24.0, 8.0)
        assert G["phi"] == (4.0, 4.0)
        assert GainSet() == G

    def test_rejects_non_hurwitz(self):
        chains = dict(G.chains)
        chains["psi"] = (-1.0, 1.0)
        with pytest.raises(ValueError):
            GainSet(chains)

    def test_rejects_wrong_length(self):
        chains = dict(G.chains)
        chains["x"] = (1.0, 1.0)
        with pytest.raises(ValueError):
            GainSet(chains)

    def test_rejects_missing(self):
        with pytest.raises(ValueError):
            GainSet({"x": G["x"]})


class TestReferences:
    def test_for_mode(self):
        r = ReferenceSet((1, 2, 3, 4), (5, 6, 7, 8))
        assert r.for_mode(Mode.YAW_POSITION) == (1, 2, 3, 4)
        assert r.for_mode("altatt") == (5, 6, 7, 8)

    def test_rejects_nonfinite(self):
        with pytest.raises(ValueError):
            ReferenceSet((0, 0, np.inf, 0))


class TestOuterLoop:
    def test_zero_at_reference(self):
        s = State14.hover(P, x=1.0, y=-2.0, z=0.5, psi=0.3)
        v = outer_loop_v(s, ReferenceSet((1.0, -2.0, 0.5, 0.3)), G, Mode.YAW_POSITION, P)
        np.testing.assert_allclose(v, 0.0, atol=1e-12)

    def test_position_step(self):
        v = outer_loop_v(State14.hover(P), ReferenceSet((0, 0, 1.0, 0)), G, "yawpos", P)
        np.testing.assert_allclose(v, [0, 0, 16.0, 0], atol=1e-12)

    def test_rate_feedback(self):
        s = State14.hover(P, r=0.5)
        v = outer_loop_v(s, ReferenceSet(), G, "yawpos", P)
        assert v[3] == pytest.approx(-4.0 * 0.5)

    def test_attitude_mode(self):
        v = outer_loop_v(State14.hover(P), ReferenceSet(attitude_altitude=(0, 0.1, -0.2, 0)), G,
                         "altatt", P)
        np.testing.assert_allclose(v, [0, 0.4, -0.8, 0], atol=1e-12)

    def test_tracking_error_layout(self):
        err = tracking_error(State14.hover(P, x=1.0), P, ReferenceSet(), "yawpos")
        assert err.shape == (14,)
        assert err[0] == -1.0 and np.all(err[1:] == 0)


class TestAltAtt:
    def test_hover_determinant(self):
        dsys = delta_altatt(State14.hover(P), P)
        assert abs(dsys.det) == pytest.approx(1687.5, rel=1e-12)

    def test_hover_phi_row(self):
        dsys = delta_altatt(State14.hover(P), P)
        np.testing.assert_allclose(dsys.delta[1], [0, P.d / P.ix, 0, 0], atol=1e-14)

    def test_determinant_law(self):
        rng = np.random.default_rng(0)
        for x in random_states(rng, 300).T:
            dsys = delta_altatt(x, P)
            expected = abs(np.cos(x[IDX["phi"]])) * P.d**3 / (P.m * P.ix * P.iy * P.iz)
            assert abs(dsys.det) == pytest.approx(expected, rel=1e-9)

    def test_shared_rows_with_yaw_position(self):
        rng = np.random.default_rng(1)
        for x in random_states(rng, 30).T:
            a = delta_altatt(x, P).delta
            b = decoupling_system("yawpos", x, P).delta
            np.testing.assert_allclose(a[0], b[2], rtol=1e-10, atol=1e-10 * np.abs(b[2]).max())
            np.testing.assert_allclose(a[3], b[3], rtol=1e-10, atol=1e-12)

    def test_attitude_rows_skip_thrust(self):
        rng = np.random.default_rng(2)
        for x in random_states(rng, 30).T:
            d = delta_altatt(x, P).delta
            assert d[1, 0] == 0.0 and d[2, 0] == 0.0

    def test_phi_zero_any_theta(self):
        for th in np.linspace(-1.5, 1.5, 13):
            dsys = delta_altatt(State14(theta=th, zeta=0.5), P)
            assert not dsys.singular

    def test_domain(self):
        with pytest.raises(DomainError):
            delta_altatt(State14(phi=np.pi / 2, zeta=1.0), P)


class TestLaw:
    def test_hover_at_reference(self):
        u = fl_law(State14.hover(P), P, ReferenceSet(), G, Mode.YAW_POSITION)
        np.testing.assert_allclose(u.to_array(), 0.0, atol=1e-10)

    def test_hover_at_reference_altatt(self):
        u = fl_law(State14.hover(P), P, ReferenceSet(), G, Mode.ATTITUDE_ALTITUDE)
        np.testing.assert_allclose(u.to_array(), 0.0, atol=1e-10)

    def test_zero_thrust_singular(self):
        with pytest.raises(SingularMatrix):
            fl_law(State14(), P, ReferenceSet(), G, Mode.YAW_POSITION)

    def test_altitude_step(self):
        u = fl_law(State14.hover(P), P, ReferenceSet((0, 0, 1.0, 0)), G, "yawpos").to_array()
        assert u[0] == pytest.approx(-P.m * 16.0, rel=1e-12)
        np.testing.assert_allclose(u[1:], 0.0, atol=1e-12)

    def test_linearizes(self):
        # Ma + Delta u reproduces v for both laws at generic states
        rng = np.random.default_rng(3)
        refs = ReferenceSet((1, 2, 3, 0.5), (1, 0.1, -0.1, 0.2))
        for x in random_states(rng, 20).T:
            for mode in Mode:
                u, dsys = fl_law(x, P, refs, G, mode, return_system=True)
                v = outer_loop_v(x, refs, G, mode, P, LieTable(x, P, 4))
                np.testing.assert_allclose(dsys.ma + dsys.delta @ u.to_array(), v,
                                           rtol=1e-8, atol=1e-8 * np.abs(v).max())
