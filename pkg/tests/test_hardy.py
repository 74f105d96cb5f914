"""Unit Tests for the wcolab.hardy functions"""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis.strategies import floats

from wcolab import hardy
from wcolab import quadrature as qd
from wcolab import geometry as geo
from wcolab.wco import laplacian_fd, CHECK_ORDER
from wcolab.util import mock_ball as mb
from wcolab.util.errors import DomainError


class TestPoissonKernel(object):

    def setup_class(self):
        self.rng = mb.make_rng(21)
        self.zeta = mb.random_sphere_points(self.rng, 100, 3)

    def test_origin(self):
        assert np.allclose(hardy.poisson_kernel(np.zeros(3), self.zeta), 1.0)

    def test_radial(self):
        for r in (0.2, 0.5, 0.9):
            val = hardy.poisson_kernel(r * self.zeta[0], self.zeta[0])
            assert np.isclose(val, (1 + r) / (1 - r) ** 2, rtol=1e-12)

    def test_sup(self):
        x = np.array([0.0, 0.4, 0.3])
        r = geo.norm(x)
        vals = hardy.poisson_kernel(x, self.zeta)
        peak = (1 + r) / (1 - r) ** 2
        assert np.all(vals > 0) and np.all(vals <= peak * (1 + 1e-12))
        assert np.isclose(hardy.poisson_kernel(x, x / r), peak, rtol=1e-12)

    def test_unit_mass(self):
        rule = qd.product_rule(3, 48)
        for r in (0.0, 0.3, 0.6, 0.8, 0.9):
            x = r * np.array([0.6, 0.0, 0.8])
            val = qd.integrate(lambda z: hardy.poisson_kernel(x, z), rule)
            # the kernel peaks like (1 - r)^(1 - n) near the sphere
            assert abs(val - 1.0) < (1e-6 if r <= 0.8 else 1e-2)

    def test_outside(self):
        with pytest.raises(DomainError):
            hardy.poisson_kernel([1.0, 0, 0], self.zeta)


class TestExtendedPoisson(object):

    def setup_class(self):
        self.rng = mb.make_rng(22)
        self.pts = mb.random_points_in_ball(self.rng, 100, 3, radius=0.8)

    def test_zero_centre(self):
        assert np.allclose(hardy.extended_poisson(np.zeros(3), self.pts), 1.0)

    def test_boundary(self):
        y = np.array([0.1, -0.5, 0.2])
        zeta = mb.random_sphere_points(self.rng, 100, 3)
        assert np.allclose(hardy.extended_poisson(y, zeta),
                           hardy.poisson_kernel(y, zeta), rtol=1e-13)

    def test_symmetry(self):
        ys = mb.random_points_in_ball(self.rng, 100, 3)
        for x, y in zip(self.pts, ys):
            assert np.isclose(hardy.extended_poisson(y, x),
                              hardy.extended_poisson(x, y), rtol=1e-13)

    @pytest.mark.parametrize("radius", [0.3, 0.8])
    def test_harmonic(self, radius):
        y = radius * mb.random_sphere_points(self.rng, 1, 3)[0]
        lap = laplacian_fd(lambda x: hardy.extended_poisson(y, x), self.pts,
                           order=CHECK_ORDER)
        assert np.max(np.abs(lap)) < 1e-5


class TestBoundaryData(object):

    def setup_class(self):
        self.zeta = mb.random_sphere_points(mb.make_rng(23), 50, 3)

    def test_parse(self):
        d = hardy.BoundaryData.parse("0.5*z1 - 2*P[0.3,0,0] + 1", 3)
        expect = (0.5 * self.zeta[:, 0] -
                  2 * hardy.poisson_kernel([0.3, 0, 0], self.zeta) + 1)
        assert np.allclose(d(self.zeta), expect, rtol=1e-14)

    def test_parse_product_and_exponent(self):
        d = hardy.BoundaryData.parse("-z1*z2 + 1e-1*z3", 3)
        expect = -self.zeta[:, 0] * self.zeta[:, 1] + 0.1 * self.zeta[:, 2]
        assert np.allclose(d(self.zeta), expect, rtol=1e-14)

    def test_parse_constant(self):
        d = hardy.BoundaryData.parse("3", 3)
        assert np.allclose(d(self.zeta), 3.0)

    @pytest.mark.parametrize("expr", ["z4", "P[0.3,0]", "P[1.0,0,0]",
                                      "cos(z1)", "z1 + ", ""])
    def test_parse_bad(self, expr):
        with pytest.raises(DomainError):
            hardy.BoundaryData.parse(expr, 3)

    def test_combination(self):
        d = hardy.BoundaryData.combination([
            (2.0, hardy.BoundaryData.coordinate(1)),
            (-1.0, hardy.BoundaryData.constant(0.5))])
        assert np.allclose(d(self.zeta), 2.0 * self.zeta[:, 1] - 0.5)


class TestPoissonIntegral(object):

    def setup_class(self):
        self.rule = qd.product_rule(3, 32)
        self.x = np.array([[0.1, 0.2, -0.3], [0.0, 0.0, 0.5],
                           [-0.4, 0.1, 0.0]])

    def test_constant(self):
        val = hardy.poisson_integral(hardy.BoundaryData.constant(1.0),
                                     self.x, rule=self.rule)
        assert np.allclose(val, 1.0, rtol=0, atol=1e-10)

    def test_point_mass(self):
        eta = np.array([0.0, 0.6, 0.8])
        mu = hardy.DiscreteMeasure(eta, [1.0])
        assert np.allclose(hardy.poisson_integral(mu, self.x),
                           hardy.poisson_kernel(self.x, eta), rtol=1e-14)

    def test_reproducing(self):
        y = np.array([0.3, 0.0, 0.2])
        val = hardy.poisson_integral(hardy.BoundaryData.poisson(y), self.x,
                                     rule=self.rule)
        assert np.allclose(val, hardy.extended_poisson(y, self.x), rtol=1e-8)

    def test_coordinate(self):
        val = hardy.poisson_integral(hardy.BoundaryData.coordinate(2),
                                     self.x, rule=self.rule)
        assert np.allclose(val, self.x[:, 2], rtol=0, atol=1e-10)

    def test_needs_rule(self):
        with pytest.raises(DomainError):
            hardy.poisson_integral(hardy.BoundaryData.constant(1.0), self.x)


class TestDiscreteMeasure(object):

    def test_total_variation(self):
        mu = hardy.DiscreteMeasure([[1.0, 0, 0], [0, 1.0, 0]], [0.5, -1.5])
        assert mu.n == 3
        assert mu.total_variation == 2.0

    def test_invalid(self):
        with pytest.raises(DomainError):
            hardy.DiscreteMeasure([[0.5, 0, 0]], [1.0])
        with pytest.raises(DomainError):
            hardy.DiscreteMeasure([[1.0, 0, 0]], [0.0])
        with pytest.raises(DomainError):
            hardy.DiscreteMeasure([[1.0, 0, 0]], [1.0, 2.0])

    def test_random(self):
        mu = mb.random_measure(mb.make_rng(24), 4, 7)
        assert mu.n == 4
        assert len(mu.weights) == 7
        assert np.all(np.abs(mu.weights) >= 1e-3)


class TestHarmonicFn(object):

    def setup_class(self):
        self.rng = mb.make_rng(25)
        self.pts = mb.random_points_in_ball(self.rng, 100, 3, radius=0.8)
        rule = qd.product_rule(3, 16)
        mu = mb.random_measure(self.rng, 3, 5)
        self.funcs = [
            hardy.HarmonicFn.extended_poisson([0.2, 0.3, 0.0], scale=2.0),
            hardy.HarmonicFn.poisson_of_boundary(
                hardy.BoundaryData.parse("z1 + 0.5*P[0,0.2,0]", 3), rule),
            hardy.HarmonicFn.poisson_of_measure(mu),
            hardy.HarmonicFn.polynomial('constant', 3),
            hardy.HarmonicFn.polynomial('coordinate', 3, i=2),
            hardy.HarmonicFn.polynomial('product', 3, i=0, j=2),
            hardy.HarmonicFn.polynomial('difference', 3, i=1, j=0),
        ]

    def test_harmonic(self):
        pts = mb.random_points_in_ball(self.rng, 20, 3, radius=0.5)
        for f in self.funcs:
            lap = laplacian_fd(f, pts, order=CHECK_ORDER)
            scale = max(1.0, np.max(np.abs(f(pts))))
            assert np.max(np.abs(lap)) < 1e-5 * scale

    def test_polynomial_values(self):
        x = self.pts
        assert np.allclose(self.funcs[4](x), x[:, 2])
        assert np.allclose(self.funcs[5](x), x[:, 0] * x[:, 2])
        assert np.allclose(self.funcs[6](x), x[:, 1] ** 2 - x[:, 0] ** 2)

    def test_scaled(self):
        f = self.funcs[0]
        g = f.scaled(-0.5)
        assert np.allclose(g(self.pts), -0.5 * f(self.pts))
        assert g.kind == f.kind

    def test_boundary(self):
        zeta = mb.random_sphere_points(self.rng, 10, 3)
        f = self.funcs[0]
        assert np.allclose(f.boundary(zeta),
                           2.0 * hardy.poisson_kernel([0.2, 0.3, 0.0], zeta))
        with pytest.raises(DomainError):
            self.funcs[2].boundary(zeta)

    def test_invalid(self):
        with pytest.raises(DomainError):
            hardy.HarmonicFn.polynomial('cubic', 3)
        with pytest.raises(DomainError):
            hardy.HarmonicFn.polynomial('product', 3, i=1, j=1)
        with pytest.raises(DomainError):
            hardy.HarmonicFn.polynomial('coordinate', 3, i=3)


class TestNorms(object):

    def setup_class(self):
        self.rule3 = qd.product_rule(3, 48)
        self.rule4 = qd.product_rule(4, 48)
        self.mc4 = qd.monte_carlo_rule(4, 10 ** 6, seed=29)

    def test_constant(self):
        f = hardy.HarmonicFn.polynomial('constant', 3, scale=-2.5)
        for p in (1.0, 2.0, 3.5, np.inf):
            assert np.isclose(hardy.hp_norm_estimate(f, p, rule=self.rule3),
                              2.5, rtol=1e-12)

    def test_zero_kernel(self):
        f = hardy.HarmonicFn.extended_poisson(np.zeros(3))
        assert np.isclose(hardy.hp_norm_estimate(f, 2.0, rule=self.rule3),
                          1.0, rtol=1e-12)

    def test_closed_values(self):
        y = np.array([0.0, 0.5, 0.0])
        assert hardy.hp_norm_py_closed(y, 1.0) == 1.0
        assert np.isclose(hardy.hp_norm_py_closed(y, 2.0),
                          np.sqrt(1.25) / 0.75, rtol=1e-13)
        assert np.isclose(hardy.hp_norm_py_closed(y, 2.0), 1.49071198,
                          atol=1e-8)
        assert np.isclose(hardy.hp_norm_py_closed(y, np.inf), 1.5 / 0.25,
                          rtol=1e-14)
        for p in (1.0, 2.0, 5.0, np.inf):
            assert np.isclose(hardy.hp_norm_py_closed(np.zeros(3), p), 1.0)

    def test_estimate_vs_closed(self):
        f = hardy.HarmonicFn.extended_poisson([0.0, 0.0, 0.5])
        est = hardy.hp_norm_estimate(f, 2.0, rule=self.rule3)
        assert abs(est / hardy.hp_norm_py_closed([0.0, 0.0, 0.5], 2.0) -
                   1) < 0.01

    @pytest.mark.parametrize("n", [3, 4])
    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_closed_form_grid(self, n, p):
        rule = self.rule3 if n == 3 else self.rule4
        # one radius past the default cap keeps |y| = 0.8 inside 1%
        radii = hardy.default_radii() + [0.9999]
        for rho in (0.0, 0.3, 0.5, 0.7, 0.8):
            y = np.zeros(n)
            y[0] = rho
            f = hardy.HarmonicFn.extended_poisson(y)
            est = hardy.hp_norm_estimate(f, p, radii=radii, rule=rule)
            closed = hardy.hp_norm_py_closed(y, p)
            assert est <= closed * (1 + 1e-6)
            assert abs(est / closed - 1) < 0.01

    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_monte_carlo_grid(self, p):
        radii = hardy.default_radii() + [0.9999]
        for rho in (0.3, 0.5, 0.8):
            y = np.zeros(4)
            y[1] = rho
            f = hardy.HarmonicFn.extended_poisson(y)
            est = hardy.hp_norm_estimate(f, p, radii=radii, rule=self.mc4)
            assert abs(est / hardy.hp_norm_py_closed(y, p) - 1) < 0.01

    def test_terminating_case(self):
        # n = 3, p = 2, |y|^2 = 1/4
        y = np.array([0.0, 0.0, 0.5])
        assert abs(hardy.hp_norm_py_closed(y, 2.0) -
                   np.sqrt(1.25) / 0.75) < 1e-9

    @pytest.mark.parametrize("p", [1.0, 2.0, 4.0])
    def test_slice_identity(self, p):
        # P_y(r zeta) = P(r y, zeta), so each slice is a closed-form norm
        y = np.array([0.0, 0.8, 0.0])
        f = hardy.HarmonicFn.extended_poisson(y)
        for r in (0.5, 0.7, 0.9):
            mean = hardy.lp_mean(f, p, r, self.rule3)
            assert np.isclose(mean, hardy.hp_norm_py_closed(r * y, p),
                              rtol=1e-6)

    def test_monotone_means(self):
        f = hardy.HarmonicFn.extended_poisson([0.3, 0.3, 0.3])
        radii = hardy.default_radii()
        assert radii[0] == 0.0 and radii[-1] == hardy.RADIUS_CAP
        means = [hardy.lp_mean(f, 2.0, r, self.rule3) for r in radii]
        assert np.all(np.diff(means) >= -1e-12)
        assert np.isclose(hardy.hp_norm_estimate(f, 2.0, rule=self.rule3),
                          means[-1], rtol=1e-12)

    def test_sup_norm_lower_estimate(self):
        y = np.array([0.5, 0.0, 0.0])
        f = hardy.HarmonicFn.extended_poisson(y)
        est = hardy.hp_norm_estimate(f, np.inf, rule=self.rule3)
        closed = hardy.hp_norm_py_closed(y, np.inf)
        assert 0.9 * closed <= est <= closed * (1 + 1e-12)

    def test_invalid(self):
        f = hardy.HarmonicFn.polynomial('constant', 3)
        with pytest.raises(DomainError):
            hardy.hp_norm_estimate(f, 0.5, rule=self.rule3)
        with pytest.raises(DomainError):
            hardy.hp_norm_estimate(f, 2.0, radii=[0.5, 1.0], rule=self.rule3)
        with pytest.raises(DomainError):
            hardy.hp_norm_estimate(f, 2.0)


class TestChangeOfVariables(object):

    def setup_class(self):
        self.rng = mb.make_rng(26)
        self.rule = qd.product_rule(3, 48)

    def test_rotation(self):
        m = geo.BallMoebius(mb.random_orthogonal(self.rng, 3), np.zeros(3))
        f = hardy.BoundaryData.parse("z1*z2 + 0.3*z3 + P[0.2,0.1,0]", 3)
        assert hardy.change_of_variables_check(m, f, self.rule) < 1e-10

    def test_constant(self):
        m = mb.random_ball_moebius(self.rng, 3, 0.5)
        lhs, rhs = hardy.change_of_variables(m, hardy.BoundaryData.constant(1.0),
                                             self.rule)
        assert np.isclose(lhs, 1.0, rtol=1e-14)
        assert abs(rhs - 1.0) < 1e-8

    @pytest.mark.parametrize("expr", [
        "1 + z1*z3 - 0.5*z2 + P[0,0,0.3]",
        "z1*z2 + 0.3*z3 + P[0.2,0.1,0]",
        "z1*z1*z1 - 3*z1*z2*z2",
        "2*P[0.3,0,0] - P[0,-0.2,0.1]",
        "0.5 + z3*z3 - z2",
    ])
    @pytest.mark.parametrize("shift", [0.2, 0.4, 0.6])
    def test_smooth(self, expr, shift):
        m = mb.random_ball_moebius(self.rng, 3, shift)
        f = hardy.BoundaryData.parse(expr, 3)
        assert hardy.change_of_variables_check(m, f, self.rule) < 1e-6


class TestNormalizedKernel(object):

    def test_zero_centre(self):
        k = hardy.normalized_kernel(np.zeros(3), 2.0)
        pts = mb.random_points_in_ball(mb.make_rng(27), 20, 3)
        assert np.allclose(k(pts), 1.0)

    def test_unit_norm(self):
        y = np.array([0.0, 0.0, 0.6])
        k = hardy.normalized_kernel(y, 2.0)
        assert np.isclose(k.scale * hardy.hp_norm_py_closed(y, 2.0), 1.0)

    def test_decay(self):
        # sup over |x| <= 0.5 is attained at x = 0.5 y/|y|
        sups = []
        for rho in (0.9, 0.99, 0.999):
            y = np.array([rho, 0.0, 0.0])
            k = hardy.normalized_kernel(y, 2.0)
            sups.append(float(k(np.array([0.5, 0.0, 0.0]))))
        assert np.all(np.diff(sups) < 0)

    @settings(max_examples=30, deadline=None)
    @given(floats(min_value=0.0, max_value=0.95))
    def test_pairing_reproduces(self, rho):
        # <P_y, g> = g(y) for g harmonic and smooth up to the sphere
        rule = qd.product_rule(3, 48)
        y = np.array([0.0, rho, 0.0]) * 0.8
        g = hardy.HarmonicFn.polynomial('difference', 3, i=1, j=2)
        val = hardy.pairing(hardy.HarmonicFn.extended_poisson(y), g, rule)
        assert np.isclose(val, g(y), rtol=0, atol=1e-8)
