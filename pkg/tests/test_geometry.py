"""Unit Tests for the wcolab.geometry functions"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats, lists

from wcolab import geometry as geo
from wcolab.util import mock_ball as mb
from wcolab.util.errors import PoleError, DomainError

coords = lists(floats(min_value=-0.5, max_value=0.5), min_size=3, max_size=3)


class TestReflections(object):

    def setup_class(self):
        self.rng = mb.make_rng(1)
        self.pts = mb.random_points_in_ball(self.rng, 200, 3, radius=4.0)

    def test_unit_sphere_inversion(self):
        res = geo.reflect_sphere(np.zeros(3), 1.0, [2.0, 0.0, 0.0])
        assert np.allclose(res, [0.5, 0.0, 0.0], rtol=0, atol=1e-15)

    def test_sphere_fixed_points(self):
        zeta = mb.random_sphere_points(self.rng, 50, 3)
        res = geo.reflect_sphere(np.zeros(3), 1.0, zeta)
        assert np.allclose(res, zeta, rtol=0, atol=1e-14)

        res = geo.reflect_sphere([3.0, 0, 0], 2.0, [1.0, 0, 0])
        assert np.allclose(res, [1.0, 0, 0], rtol=0, atol=1e-15)

    def test_sphere_involution(self):
        a = np.array([0.3, -1.2, 0.5])
        twice = geo.reflect_sphere(a, 1.7, geo.reflect_sphere(a, 1.7, self.pts))
        assert np.allclose(twice, self.pts, rtol=0, atol=1e-10)

    def test_sphere_pole(self):
        with pytest.raises(PoleError):
            geo.reflect_sphere([1.0, 0, 0], 1.0, [1.0, 0, 0])

    def test_hyperplane(self):
        e1 = [1.0, 0, 0]
        assert np.allclose(geo.reflect_hyperplane(e1, 0.0, [1.0, 2.0, 3.0]),
                           [-1.0, 2.0, 3.0])
        assert np.allclose(geo.reflect_hyperplane(e1, 1.0, [3.0, 0, 0]),
                           [-1.0, 0, 0])

    def test_hyperplane_fixed_and_involutive(self):
        a = np.array([1.0, 2.0, 2.0]) / 3.0
        t = 0.4
        res = geo.reflect_hyperplane(a, t, geo.reflect_hyperplane(a, t,
                                                                  self.pts))
        assert np.allclose(res, self.pts, rtol=0, atol=1e-13)

        # project onto the mirror, which must then be fixed
        mirror = self.pts - (self.pts @ a - t)[:, np.newaxis] * a
        assert np.allclose(geo.reflect_hyperplane(a, t, mirror), mirror,
                           rtol=0, atol=1e-13)
        moved = np.abs(self.pts @ a - t) > 1e-6
        res = geo.reflect_hyperplane(a, t, self.pts[moved])
        assert np.all(geo.norm(res - self.pts[moved]) > 0)

    def test_hyperplane_bad_normal(self):
        with pytest.raises(DomainError):
            geo.reflect_hyperplane([1.0, 1.0, 0], 0.0, [1.0, 0, 0])


class TestCanonical(object):

    def test_identity(self):
        m = geo.CanonicalMoebius.affine(1.0, n=3)
        x = np.array([0.2, -0.4, 0.9])
        assert np.allclose(geo.eval_canonical(m, x), x)

    def test_unit_inversion(self):
        m = geo.CanonicalMoebius(np.zeros(3), 1.0, np.eye(3), np.zeros(3), 2)
        assert np.allclose(m([0.5, 0.0, 0.0]), [2.0, 0.0, 0.0])

    def test_matches_sphere_reflection(self):
        a = np.array([3.0, 0, 0])
        m = geo.CanonicalMoebius(a, 4.0, np.eye(3), a, 2)
        x = np.array([1.0, 0, 0])
        assert np.allclose(m(x), geo.reflect_sphere(a, 2.0, x))
        assert np.allclose(m(x), [1.0, 0, 0])

        pts = mb.random_points_in_ball(mb.make_rng(2), 100, 3)
        r = geo.CanonicalMoebius.sphere_reflection(a, 2.0)
        assert np.allclose(r(pts), geo.reflect_sphere(a, 2.0, pts))

    def test_pole(self):
        m = geo.CanonicalMoebius.sphere_reflection([2.0, 0, 0], 1.0)
        with pytest.raises(PoleError):
            m([2.0, 0, 0])

    @pytest.mark.parametrize("A, alpha, eps", [
        (np.diag([1.0, 2.0, 1.0]), 1.0, 0),
        (np.eye(3), 0.0, 0),
        (np.eye(3), 1.0, 1),
    ])
    def test_invalid(self, A, alpha, eps):
        with pytest.raises(DomainError):
            geo.CanonicalMoebius(np.zeros(3), alpha, A, np.ones(3) * 2, eps)

    def test_ball_compatible(self):
        assert geo.CanonicalMoebius.sphere_reflection([1.5, 0, 0],
                                                      1.0).ball_compatible
        assert not geo.CanonicalMoebius.sphere_reflection([0.5, 0, 0],
                                                          1.0).ball_compatible

    def test_orthogonal_sphere_keeps_ball(self):
        rng = mb.make_rng(3)
        for dist in (1.5, 3.0):
            a = np.array([0.0, dist, 0.0])
            m = geo.CanonicalMoebius.sphere_reflection(
                a, geo.orthogonal_sphere_radius(a))
            assert np.all(geo.norm(m(mb.random_points_in_ball(rng, 500, 3)))
                          < 1.0)
            img = m(mb.random_sphere_points(rng, 100, 3))
            assert np.allclose(geo.norm(img), 1.0, rtol=0, atol=1e-12)

    def test_jacobian_scalar(self):
        a = np.array([0.0, 0.0, 2.0])
        m = geo.CanonicalMoebius.sphere_reflection(a, 1.5)
        x = mb.random_points_in_ball(mb.make_rng(4), 50, 3, radius=0.8)
        D = geo.jacobian_matrix_fd(m, x)
        assert np.allclose(geo.conformal_scale(D), m.jacobian_scalar(x),
                           rtol=1e-7)


class TestBracket(object):

    def test_zero_centre(self):
        x = mb.random_points_in_ball(mb.make_rng(5), 20, 4)
        assert np.allclose(geo.bracket(x, np.zeros(4)), 1.0)

    def test_diagonal(self):
        a = np.array([0.3, 0.4, 0.0])
        assert np.isclose(geo.bracket(a, a), 1.0 - 0.25)

    def test_value(self):
        assert np.isclose(geo.bracket([0.5, 0, 0], [0, 0.5, 0]),
                          1.03077641, atol=1e-8)


class TestPhiA(object):

    def setup_class(self):
        self.rng = mb.make_rng(6)
        self.pts = mb.random_points_in_ball(self.rng, 1000, 3, radius=0.99)

    def test_zero_centre(self):
        assert np.allclose(geo.eval_phi_a(np.zeros(3), self.pts), -self.pts)

    def test_swaps_zero_and_a(self):
        a = np.array([0.5, -0.1, 0.2])
        assert np.allclose(geo.eval_phi_a(a, np.zeros(3)), a, atol=1e-15)
        assert np.allclose(geo.eval_phi_a(a, a), 0.0, atol=1e-15)

    @pytest.mark.parametrize("shift", [0.3, 0.6, 0.9])
    def test_involution(self, shift):
        a = shift * mb.random_sphere_points(self.rng, 1, 3)[0]
        twice = geo.eval_phi_a(a, geo.eval_phi_a(a, self.pts))
        assert np.max(geo.norm(twice - self.pts)) < 1e-12

    def test_bad_centre(self):
        with pytest.raises(DomainError):
            geo.eval_phi_a([1.0, 0, 0], [0.1, 0, 0])

    @settings(max_examples=50, deadline=None)
    @given(coords, coords)
    def test_involution_property(self, a, x):
        a = np.array(a)
        x = np.array(x)
        twice = geo.eval_phi_a(a, geo.eval_phi_a(a, x))
        assert np.allclose(twice, x, rtol=0, atol=1e-12)


class TestBallMoebius(object):

    def setup_class(self):
        self.rng = mb.make_rng(7)
        self.pts = mb.random_points_in_ball(self.rng, 1000, 4, radius=0.99)

    def test_negation(self):
        m = geo.BallMoebius(np.eye(4), np.zeros(4))
        assert np.allclose(geo.eval_ball(m, self.pts), -self.pts)

    def test_identity(self):
        m = geo.BallMoebius.identity(4)
        assert np.allclose(m(self.pts), self.pts)

    def test_origin(self):
        m = mb.random_ball_moebius(self.rng, 4, 0.6)
        assert np.allclose(m(np.zeros(4)), m.A @ m.a)
        assert np.isclose(geo.norm(m(np.zeros(4))), 0.6)

    @pytest.mark.parametrize("shift", [0.0, 0.3, 0.6, 0.9])
    def test_round_trip(self, shift):
        m = mb.random_ball_moebius(self.rng, 4, shift)
        back = geo.eval_ball(geo.inverse_ball(m), geo.eval_ball(m, self.pts))
        assert np.max(geo.norm(back - self.pts)) < 1e-12

    def test_involution_inverse(self):
        a = np.array([0.1, 0.5, -0.2, 0.0])
        inv = geo.inverse_ball(geo.BallMoebius.involution(a))
        assert np.allclose(inv.a, a)
        assert np.allclose(inv.A, np.eye(4))

    def test_rotation_inverse(self):
        R = mb.random_orthogonal(self.rng, 4)
        inv = geo.BallMoebius(R, np.zeros(4)).inverse()
        assert np.allclose(inv.A, R.T)

    def test_closed_ball(self):
        m = mb.random_ball_moebius(self.rng, 4, 0.8)
        zeta = mb.random_sphere_points(self.rng, 100, 4)
        assert np.allclose(geo.norm(m(zeta)), 1.0, rtol=0, atol=1e-12)
        assert np.all(geo.norm(m(self.pts)) < 1.0)

    def test_invalid(self):
        with pytest.raises(DomainError):
            geo.BallMoebius(np.eye(3), [0.8, 0.8, 0.0])
        with pytest.raises(DomainError):
            geo.BallMoebius(np.ones((3, 3)), np.zeros(3))


class TestJacobian(object):

    def setup_class(self):
        self.rng = mb.make_rng(8)

    def test_fd_identity(self):
        x = mb.random_points_in_ball(self.rng, 10, 3)
        D = geo.jacobian_matrix_fd(lambda v: v, x)
        assert np.allclose(D, np.eye(3), rtol=0, atol=1e-10)

    def test_fd_hyperplane(self):
        D = geo.jacobian_matrix_fd(
            lambda v: geo.reflect_hyperplane([1.0, 0, 0], 0.0, v),
            [0.1, 0.2, 0.3])
        assert np.allclose(D, np.diag([-1.0, 1.0, 1.0]), rtol=0, atol=1e-10)

    def test_fd_origin(self):
        m = geo.BallMoebius.involution([0.5, 0, 0])
        D = geo.jacobian_matrix_fd(m, np.zeros(3))
        assert np.isclose(geo.conformal_scale(D), 0.75, rtol=0, atol=1e-8)

    def test_scalar_values(self):
        m = mb.random_ball_moebius(self.rng, 3, 0.4)
        assert np.isclose(geo.jacobian_scalar(m, np.zeros(3)), 1.0 - 0.16)
        rot = geo.BallMoebius(mb.random_orthogonal(self.rng, 3), np.zeros(3))
        x = mb.random_points_in_ball(self.rng, 20, 3)
        assert np.allclose(rot.jacobian_scalar(x), 1.0)

    @pytest.mark.parametrize("shift", [0.3, 0.6])
    def test_scalar_against_fd(self, shift):
        m = mb.random_ball_moebius(self.rng, 3, shift)
        x = mb.random_points_in_ball(self.rng, 100, 3, radius=0.8)
        D = geo.jacobian_matrix_fd(m, x)
        jx = geo.jacobian_scalar(m, x)
        assert np.max(np.abs(geo.conformal_scale(D) - jx) / jx) < 1e-6

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    @pytest.mark.parametrize("shift", [0.0, 0.3, 0.6, 0.9])
    def test_identities(self, n, shift):
        m = mb.random_ball_moebius(self.rng, n, shift)
        x = mb.random_points_in_ball(self.rng, 1000, n)
        y = mb.random_points_in_ball(self.rng, 1000, n)
        tol = geo.boundary_tolerance(x, 1e-10)
        assert np.all(geo.boundary_scaling_residual(m, x) < tol)
        tol = np.maximum(tol, geo.boundary_tolerance(y, 1e-10))
        assert np.all(geo.distance_distortion_residual(m, x, y) < tol)

        lo, hi, ratio = geo.jacobian_bounds(m)
        jx = geo.jacobian_scalar(m, x)
        jy = geo.jacobian_scalar(m, y)
        assert np.all(jx >= lo * (1 - 1e-12)) and np.all(jx <= hi * (1 + 1e-12))
        assert np.all(jy / jx <= ratio * (1 + 1e-12))

    def test_cr_residual(self):
        m = geo.BallMoebius.involution([0.5, 0, 0])
        x = mb.random_points_in_ball(self.rng, 100, 3, radius=0.5)
        assert np.max(geo.cr_residual(m, x)) < 1e-6

        R = mb.random_orthogonal(self.rng, 3)
        assert np.max(geo.cr_residual(lambda v: v @ R.T, x)) < 1e-10

        M = np.diag([1.0, 2.0, 3.0]) / 4.0
        assert np.min(geo.cr_residual(lambda v: v @ M.T, x)) > 1e-2

    def test_jacobian_sign(self):
        x = mb.random_points_in_ball(self.rng, 100, 3, radius=0.95)
        m = mb.random_ball_moebius(self.rng, 3, 0.5)
        assert geo.jacobian_sign_constant(m, x)

        def fold(v):
            res = v.copy()
            res[..., 0] = v[..., 0] ** 2
            return res
        assert not geo.jacobian_sign_constant(fold, x)

    def test_givens(self):
        R = geo.givens_rotation(4, [(0, 1, 0.3), (2, 3, -1.1), (0, 3, 2.0)])
        assert geo.is_orthogonal(R)
        with pytest.raises(DomainError):
            geo.givens_rotation(3, [(2, 1, 0.3)])


class TestCone(object):

    def setup_class(self):
        self.rng = mb.make_rng(9)
        self.zeta = np.array([0.0, 1.0, 0.0])

    def test_radial(self):
        c = geo.Cone(self.zeta, 1.5)
        r = np.array([0.5, 0.9, 0.99, 0.9999])
        assert np.all(geo.cone_contains(c, r[:, np.newaxis] * self.zeta))

    def test_origin(self):
        assert not geo.Cone(self.zeta, 1.9).contains(np.zeros(3))
        assert geo.Cone(self.zeta, 2.1).contains(np.zeros(3))

    def test_tangential(self):
        x = np.array([0.3, 0.8, 0.0])
        x = x * 0.9 / geo.norm(x)
        d = geo.norm(x - self.zeta)
        delta_edge = 2.0 * d / (1.0 - geo.dot(x, x))
        assert not geo.Cone(self.zeta, delta_edge * 0.99).contains(x)
        assert geo.Cone(self.zeta, delta_edge * 1.01).contains(x)

    def test_image_aperture(self):
        assert geo.cone_image_aperture(geo.BallMoebius.identity(3), 1.5) == 1.5
        m = geo.BallMoebius.involution([0.5, 0, 0])
        assert np.isclose(geo.cone_image_aperture(m, 1.5), 4.5)

    def test_sampled_inclusion(self):
        m = mb.random_ball_moebius(self.rng, 3, 0.5)
        cone = geo.Cone(self.zeta, 1.5)
        pts = mb.points_in_cone(self.rng, cone, 10000)
        assert np.all(cone.contains(pts))
        img = cone.image(m)
        assert np.all(img.contains(m(pts)))
