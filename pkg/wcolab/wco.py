#
# wco.py -- weighted composition operators W f = psi * (f o phi)
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
"""
Weighted composition operators on harmonic functions of the ball.

An operator is a map ``phi`` of the ball together with a weight ``psi``.
For a Moebius ``phi`` and ``psi = C |D phi|^((n-2)/2)`` the operator
preserves harmonic functions; this module checks that through the
finite-difference PDE system, evaluates the closed-form operator and
essential norms, and compares them with quadrature estimates and with
the analytic ratio ||W* P_y|| / ||P_y|| along the extremal direction.
"""
import json

import numpy as np

from ginga.misc import Bunch

from .util.errors import (DomainError, PoleError, OutOfScopeError,
                          BoundViolation)
from .util import mock_ball
from . import geometry as geo
from . import hardy
from .specfun import conjugate_exponent
from .quadrature import integrate

# second-derivative difference step
LAPLACIAN_STEP = 1.0e-3

# stencil order used by the harmonicity checks
CHECK_ORDER = 4

# sample sizes for the standing assumptions on phi
CLOSURE_POINTS = 1000
SIGN_POINTS = 100
CLOSURE_TOL = 1.0e-12

# relative slack for asserted inequalities
BOUND_TOL = 1.0e-6

# direction of the extremal family when phi(0) = 0
DEFAULT_DIRECTION = 0


class Weight(object):
    """
    The multiplier psi of a weighted composition operator.

    kinds: 'jacobian_power' (C |D phi|^((n-2)/2)), 'constant' and 'custom'.
    """

    def __init__(self, kind, func=None, phi=None, n=None, constant=1.0,
                 label=None):
        self.kind = kind
        self.func = func
        self.phi = phi
        self.n = n
        self.constant = constant
        self.label = label

    @classmethod
    def jacobian_power(cls, phi, n=None, constant=1.0):
        if n is None:
            n = phi.n
        if not constant > 0:
            raise DomainError("weight constant must be positive: C=%g" % (
                constant))
        return cls('jacobian_power', phi=phi, n=n, constant=constant)

    @classmethod
    def const(cls, c):
        return cls('constant', constant=c)

    @classmethod
    def unit(cls):
        return cls.const(1.0)

    @classmethod
    def custom(cls, func, label=None):
        return cls('custom', func=func, label=label)

    def __call__(self, x):
        x = geo.as_vector(x)
        if self.kind == 'jacobian_power':
            return (self.constant *
                    self.phi.jacobian_scalar(x) ** ((self.n - 2) / 2.0))
        if self.kind == 'constant':
            return np.full(x.shape[:-1], self.constant)
        return np.asarray(self.func(x))

    def __repr__(self):
        if self.kind == 'jacobian_power':
            return "Weight(%g*|Dphi|^%g)" % (self.constant,
                                             (self.n - 2) / 2.0)
        if self.kind == 'constant':
            return "Weight(%g)" % (self.constant)
        return "Weight(%s)" % (self.label)


def is_moebius(phi):
    if isinstance(phi, geo.BallMoebius):
        return True
    return isinstance(phi, geo.CanonicalMoebius) and phi.ball_compatible


class WcoOperator(object):
    """
    The operator f -> psi * (f o phi).

    Parameters
    ----------
    phi : BallMoebius, CanonicalMoebius or callable
        map of the ball into its closure, vectorized over points (..., n)

    psi : Weight or callable
        the multiplier

    n : int, optional
        dimension; taken from phi when it is a Moebius map

    validate : bool, optional, defaults to True
        sample the standing assumptions on phi (see `validate`)
    """

    def __init__(self, phi, psi, n=None, validate=True):
        if n is None:
            n = phi.n
        self.phi = phi
        if not isinstance(psi, Weight):
            psi = Weight.custom(psi)
        self.psi = psi
        self.n = int(n)
        if self.n < 2:
            raise DomainError("dimension must be >= 2: n=%d" % (self.n))
        if validate:
            self.validate()

    @classmethod
    def moebius(cls, m, constant=1.0):
        """W with psi = C |D phi|^((n-2)/2) for a Moebius map m."""
        if not is_moebius(m):
            raise DomainError("map does not preserve the ball: %s" % (
                repr(m)))
        return cls(m, Weight.jacobian_power(m, m.n, constant=constant), m.n)

    @property
    def phi_zero(self):
        return np.asarray(self.phi(np.zeros(self.n)))

    @property
    def shift(self):
        """|phi(0)|"""
        return float(geo.norm(self.phi_zero))

    @property
    def psi_zero(self):
        return float(np.abs(self.psi(np.zeros(self.n))))

    def validate(self, points=None, seed=None):
        """
        Check on samples that phi maps the open ball into the closed ball
        and that det D phi does not change sign.

        Raises
        ------
        DomainError
            if either assumption fails on the sample
        """
        rng = mock_ball.make_rng(seed)
        if points is None:
            points = mock_ball.random_points_in_ball(rng, CLOSURE_POINTS,
                                                     self.n)
        img = geo.norm(np.asarray(self.phi(points)))
        if np.any(img > 1.0 + CLOSURE_TOL):
            raise DomainError("phi leaves the closed ball: max |phi(x)|=%.17g" % (
                np.max(img)))

        inner = mock_ball.random_points_in_ball(rng, SIGN_POINTS, self.n,
                                                radius=0.95)
        if not geo.jacobian_sign_constant(self.phi, inner):
            raise DomainError("Jacobian of phi changes sign")

    def __call__(self, f):
        return image(self, f)

    def __repr__(self):
        return "WcoOperator(phi=%s, psi=%s, n=%d)" % (
            repr(self.phi), repr(self.psi), self.n)


def apply(W, f, x):
    """psi(x) f(phi(x))"""
    x = geo.as_vector(x)
    return W.psi(x) * np.asarray(f(np.asarray(W.phi(x))))


def image(W, f):
    """W f as a callable on points of shape (..., n)."""
    def wf(x):
        return apply(W, f, x)
    return wf


def laplacian_fd(g, x, h=LAPLACIAN_STEP, order=2):
    """
    Central difference Laplacian of a scalar or vector valued function.

    Parameters
    ----------
    g : callable
        function of points (..., n), values (...) or (..., m)

    x : array_like
        point(s) of shape (..., n)

    h : float, optional
        difference step

    order : int, optional
        2 for the three-point stencil, 4 for the five-point stencil

    Returns
    -------
    lap : ndarray
    """
    x = geo.as_vector(x)
    if not h > 0:
        raise DomainError("difference step must be positive: h=%s" % (h))
    n = x.shape[-1]
    g0 = np.asarray(g(x))
    total = 0.0
    for i in range(n):
        e = np.zeros(n)
        e[i] = h
        if order == 2:
            total = total + (np.asarray(g(x + e)) - 2.0 * g0 +
                             np.asarray(g(x - e)))
        elif order == 4:
            total = total + (-np.asarray(g(x + 2 * e)) +
                             16.0 * np.asarray(g(x + e)) - 30.0 * g0 +
                             16.0 * np.asarray(g(x - e)) -
                             np.asarray(g(x - 2 * e))) / 12.0
        else:
            raise DomainError("stencil order must be 2 or 4: %s" % (order))
    return total / h ** 2


def pde_conditions_check(W, x, h=LAPLACIAN_STEP, h1=geo.JACOBIAN_STEP,
                         order=CHECK_ORDER):
    """
    Residuals of the system characterizing harmonicity preservation,

        r1 = |Delta psi|
        r2 = max_i |psi Delta phi + 2 (D phi)(grad psi)|_i
        r3 = max_ij |D phi (D phi)^t - |D phi|^2 I|_ij

    evaluated by finite differences at the point(s) x.

    Returns
    -------
    (r1, r2, r3) : tuple of ndarray
    """
    x = geo.as_vector(x)
    r1 = np.abs(laplacian_fd(W.psi, x, h=h, order=order))

    lap_phi = laplacian_fd(W.phi, x, h=h, order=order)
    D = geo.jacobian_matrix_fd(W.phi, x, h=h1)
    grad_psi = geo.gradient_fd(W.psi, x, h=h1)
    psi = np.asarray(W.psi(x))
    term = (psi[..., np.newaxis] * lap_phi +
            2.0 * np.einsum('...ij,...j->...i', D, grad_psi))
    r2 = np.max(np.abs(term), axis=-1)

    r3 = geo.cr_residual(W.phi, x, h=h1)
    return r1, r2, r3


def harmonicity_preservation_check(W, f, points, h=LAPLACIAN_STEP,
                                   order=CHECK_ORDER):
    """Largest |Delta (W f)| over the sample points."""
    lap = laplacian_fd(image(W, f), points, h=h, order=order)
    return float(np.max(np.abs(lap)))


def sphere_reflection_derivatives(a, r, x):
    """
    Closed-form derivatives of the reflection phi in S(a, r) and of
    psi = |D phi|^((n-2)/2) = r^(n-2) / |x - a|^(n-2):

        Delta phi = 2 (2-n) r^2 (x-a) / |x-a|^4
        grad psi  = (2-n) r^(n-2) (x-a) / |x-a|^n
        D phi     = r^2 / |x-a|^2 (I - 2 Q(x-a)),  Q(v) = v v^t / |v|^2

    Returns
    -------
    (lap_phi, grad_psi, D) : tuple of ndarray
    """
    a = geo.as_vector(a)
    x = geo.as_vector(x)
    n = x.shape[-1]
    d = x - a
    d2 = geo.dot(d, d)
    if np.any(d2 == 0.0):
        raise PoleError("reflection in S(a, r) evaluated at its centre")
    d2 = d2[..., np.newaxis]
    lap_phi = 2.0 * (2 - n) * r ** 2 * d / d2 ** 2
    grad_psi = (2 - n) * r ** (n - 2) * d / d2 ** (n / 2.0)
    Q = d[..., :, np.newaxis] * d[..., np.newaxis, :] / d2[..., np.newaxis]
    D = (r ** 2 / d2[..., np.newaxis]) * (np.eye(n) - 2.0 * Q)
    return lap_phi, grad_psi, D


def sphere_reflection_weight(a, r, x):
    """psi(x) = r^(n-2) / |x - a|^(n-2) for the reflection in S(a, r)."""
    x = geo.as_vector(x)
    n = x.shape[-1]
    return r ** (n - 2) / geo.norm(x - geo.as_vector(a)) ** (n - 2)


def poisson_sup_inequality_check(W, rule, r, eta, tol=BOUND_TOL):
    """
    Both sides of

        int P(phi(r zeta), eta) psi(r zeta) dsigma(zeta)
            <= (1 + |phi(0)|) / (1 - |phi(0)|)^(n-1) |psi(0)|

    Raises
    ------
    BoundViolation
        if the quadrature left side exceeds the right side by more than
        the relative slack ``tol``
    """
    n = W.n
    eta = geo.as_vector(eta)
    s = W.shift

    def integrand(zeta):
        x = r * zeta
        return hardy.poisson_kernel(np.asarray(W.phi(x)), eta) * W.psi(x)

    lhs = integrate(integrand, rule)
    rhs = (1.0 + s) / (1.0 - s) ** (n - 1) * W.psi_zero
    if lhs > rhs * (1.0 + tol):
        raise BoundViolation("Poisson sup inequality fails: %g > %g" % (
            lhs, rhs), lhs=lhs, rhs=rhs)
    return lhs, rhs


def norm_exponent(p, n):
    """|(n-1)/p - (n-2)/2|, with (n-1)/inf = 0."""
    if not p >= 1.0:
        raise DomainError("exponent must be >= 1: p=%g" % (p))
    inv_p = 0.0 if np.isinf(p) else 1.0 / p
    return abs((n - 1) * inv_p - (n - 2) / 2.0)


def norm_formula(m, p, n=None, C=1.0):
    """
    Operator norm of W on h^p for phi = m in Moeb(B) and
    psi = C |D phi|^((n-2)/2),

        ||W|| = |C| ((1 + |phi(0)|) / (1 - |phi(0)|))^|(n-1)/p - (n-2)/2|
    """
    if n is None:
        n = m.n
    s = m.shift
    return abs(C) * ((1.0 + s) / (1.0 - s)) ** norm_exponent(p, n)


def essential_norm_formula(m, p, n=None, C=1.0):
    """Essential norm of W on h^p; known only for 1 < p < inf."""
    if not (1.0 < p < np.inf):
        raise OutOfScopeError(
            "essential norm formula holds only for 1 < p < inf: p=%g" % (p))
    return norm_formula(m, p, n=n, C=C)


def psi_sup(W, seed=None, count=10000):
    """
    ||psi||_inf over the ball; closed form for Jacobian-power weights of
    Moebius maps, otherwise the max over a seeded sample (a lower
    estimate).
    """
    psi = W.psi
    if psi.kind == 'constant':
        return abs(psi.constant)
    if psi.kind == 'jacobian_power':
        phi = psi.phi
        expo = (psi.n - 2) / 2.0
        if isinstance(phi, geo.BallMoebius):
            hi = geo.jacobian_bounds(phi)[1]
            return psi.constant * hi ** expo
        if isinstance(phi, geo.CanonicalMoebius) and phi.ball_compatible:
            if phi.epsilon == 0:
                return psi.constant * abs(phi.alpha) ** expo
            dist = geo.norm(phi.a) - 1.0
            return psi.constant * (abs(phi.alpha) / dist ** 2) ** expo

    rng = mock_ball.make_rng(seed)
    pts = np.concatenate([
        mock_ball.random_points_in_ball(rng, count, W.n),
        hardy.RADIUS_CAP * mock_ball.random_sphere_points(rng, count, W.n)])
    return float(np.max(np.abs(psi(pts))))


def upper_bound_h1(W, mu, rule, radii=None, tol=BOUND_TOL):
    """
    Quadrature ratio ||W P[mu]||_{h^1} / ||mu|| and the closed-form bound
    (1 + |phi(0)|) / (1 - |phi(0)|)^(n-1) |psi(0)|.

    Raises
    ------
    BoundViolation
        if ratio > bound * (1 + tol)
    """
    n = W.n
    tv = mu.total_variation
    pmu = hardy.HarmonicFn.poisson_of_measure(mu)
    ratio = hardy.hp_norm_estimate(image(W, pmu), 1, radii=radii,
                                   rule=rule) / tv
    s = W.shift
    bound = (1.0 + s) / (1.0 - s) ** (n - 1) * W.psi_zero
    if ratio > bound * (1.0 + tol):
        raise BoundViolation("h^1 estimate exceeds bound: %g > %g" % (
            ratio, bound), lhs=ratio, rhs=bound)
    return ratio, bound


def hp_bound(W, p):
    """
    {(1 + |phi(0)|) / (1 - |phi(0)|)^(n-1) |psi(0)|}^(1/p) ||psi||_inf^(1-1/p)
    """
    if not (1.0 < p < np.inf):
        raise DomainError("estimate needs 1 < p < inf: p=%g" % (p))
    n = W.n
    s = W.shift
    h1 = (1.0 + s) / (1.0 - s) ** (n - 1) * W.psi_zero
    return h1 ** (1.0 / p) * psi_sup(W) ** (1.0 - 1.0 / p)


def quadrature_ratio(W, f, p, rule, radii=None):
    """||W f||_{h^p} / ||f||_{h^p}, both by `hardy.hp_norm_estimate`."""
    num = hardy.hp_norm_estimate(image(W, f), p, radii=radii, rule=rule)
    den = hardy.hp_norm_estimate(f, p, radii=radii, rule=rule)
    if den == 0.0:
        raise DomainError("test function has zero norm estimate")
    return num / den


def upper_bound_hp(W, f, p, rule, radii=None, tol=BOUND_TOL):
    """
    Quadrature ratio ||W f|| / ||f|| on h^p, 1 < p < inf, and the bound
    from the Jensen step.

    Raises
    ------
    BoundViolation
        if ratio > bound * (1 + tol)
    """
    bound = hp_bound(W, p)
    ratio = quadrature_ratio(W, f, p, rule, radii=radii)
    if ratio > bound * (1.0 + tol):
        raise BoundViolation("h^%g estimate exceeds bound: %g > %g" % (
            p, ratio, bound), lhs=ratio, rhs=bound)
    return ratio, bound


def hinf_bounds(W, rule):
    """
    On h^inf, ||psi||_inf >= ||W|| >= ||W 1|| = ||psi||_inf.

    Returns
    -------
    (lower, upper) : quadrature estimate of ||psi||_inf and `psi_sup`
    """
    lower = hardy.hp_norm_estimate(W.psi, np.inf, rule=rule)
    return lower, psi_sup(W)


def adjoint_on_kernel(W, y):
    """W* P_y = psi(y) P_{phi(y)}"""
    y = geo.as_vector(y)
    scale = float(W.psi(y))
    return hardy.HarmonicFn.extended_poisson(np.asarray(W.phi(y)),
                                             scale=scale)


def adjoint_integral(W, f, y, rule):
    """
    (W* f)(y) = int f*(zeta) psi(zeta) (1 - |y|^2) / |y - phi(zeta)|^n dsigma

    by quadrature over ``rule``.
    """
    y = geo.as_vector(y)

    def integrand(zeta):
        return (hardy.boundary_values(f, zeta) * W.psi(zeta) *
                hardy.poisson_kernel(y, np.asarray(W.phi(zeta))))

    return integrate(integrand, rule)


def adjoint_integral_moebius(W, f, y, rule):
    """
    (W* f)(y) after the substitution zeta = phi^-1(eta): the Poisson
    integral at y of f(phi^-1) psi(phi^-1) |D phi^-1|^(n-1).

    Agrees with `adjoint_integral` up to quadrature error.
    """
    if not isinstance(W.phi, geo.BallMoebius):
        raise DomainError("substitution needs a ball Moebius map, got %s" % (
            repr(W.phi)))
    n = W.n
    minv = geo.inverse_ball(W.phi)

    def pulled(eta):
        zeta = geo.eval_ball(minv, eta)
        return (hardy.boundary_values(f, zeta) * W.psi(zeta) *
                geo.jacobian_scalar(minv, eta) ** (n - 1))

    return hardy.poisson_integral(hardy.BoundaryData(pulled), y, rule)


def duality_check(W, z, y, rule):
    """
    <W P_z, P_y> and <P_z, W* P_y> by quadrature.

    Returns
    -------
    (lhs, rhs) : tuple of float
    """
    pz = hardy.HarmonicFn.extended_poisson(z)
    py = hardy.HarmonicFn.extended_poisson(y)
    lhs = hardy.pairing(image(W, pz), py, rule)
    rhs = hardy.pairing(pz, adjoint_on_kernel(W, y), rule)
    return lhs, rhs


def ratio_curve(m, p, y, C=1.0):
    """
    ||W* P_y|| / ||P_y|| in h^p', from closed forms only:

        ||P_{phi(y)}||_{p'} psi(y) / ||P_y||_{p'}
    """
    if not (1.0 <= p < np.inf):
        raise DomainError("ratio curve needs 1 <= p < inf: p=%g" % (p))
    y = geo.as_vector(y)
    n = m.n
    q = conjugate_exponent(p)
    psi = C * geo.jacobian_scalar(m, y) ** ((n - 2) / 2.0)
    return (hardy.hp_norm_py_closed(geo.eval_ball(m, y), q, n) * psi /
            hardy.hp_norm_py_closed(y, q, n))


def extremal_direction(m):
    """b = phi^-1(0) / |phi^-1(0)|, or e_1 when phi(0) = 0."""
    s = m.shift
    if s == 0.0:
        b = np.zeros(m.n)
        b[DEFAULT_DIRECTION] = 1.0
        return b
    return m.a / s


def ratio_curve_max(m, p, t_max=0.9999, count=200, C=1.0):
    """
    Largest value of `ratio_curve` over y = +-t b, t in [0, t_max].

    Returns
    -------
    res : Bunch
        with attributes ``value``, ``t`` and ``sign``
    """
    b = extremal_direction(m)
    ts = np.linspace(0.0, t_max, count)
    best = Bunch.Bunch(value=-np.inf, t=0.0, sign=1)
    for sign in (1, -1):
        for t in ts:
            val = ratio_curve(m, p, sign * t * b, C=C)
            if val > best.value:
                best = Bunch.Bunch(value=float(val), t=float(t), sign=sign)
    return best


def weak_null_sups(p, n, radii, compact_radius, rule=None):
    """
    sup_{|x| <= c} |k_y(x)| for |y| in ``radii``, y along e_1.

    |k_y| is positive and subharmonic, so the sup sits on |x| = c; it is
    evaluated at x = c y/|y| unless a rule is given, in which case the
    max over the nodes of the sphere of radius c is taken.
    """
    if not 0.0 <= compact_radius < 1.0:
        raise DomainError("compact radius must lie in [0, 1): %g" % (
            compact_radius))
    res = []
    for rho in radii:
        y = np.zeros(n)
        y[DEFAULT_DIRECTION] = rho
        k = hardy.normalized_kernel(y, p, n)
        if rule is None:
            x = np.zeros(n)
            x[DEFAULT_DIRECTION] = compact_radius
            res.append(float(np.abs(k(x))))
        else:
            res.append(float(np.max(np.abs(k(compact_radius * rule.nodes)))))
    return res


def _anisotropic_map(n):
    M = np.diag([1.0] + [0.5] * (n - 1))

    def phi(x):
        return x @ M.T
    return phi


def _quadratic_map(n):
    def phi(x):
        res = 0.5 * x
        res[..., 0] += 0.25 * x[..., 0] ** 2
        return res
    return phi


def positive_cases(n):
    """
    Moebius maps with psi = |D phi|^((n-2)/2): ball automorphisms at
    three shifts, orthogonal sphere reflections centred at distance
    1.5 and 3, the identity and a similarity.

    Returns
    -------
    cases : list of Bunch
        with attributes ``name`` and ``W``
    """
    e1 = np.zeros(n)
    e1[0] = 1.0
    rot = geo.givens_rotation(n, [(0, 1, 0.3), (n - 2, n - 1, -0.7)])
    cases = []
    for s in (0.3, 0.5, 0.7):
        a = s * (rot @ e1)
        m = geo.BallMoebius(rot, a)
        cases.append(Bunch.Bunch(name='moebius_%g' % (s),
                                 W=WcoOperator.moebius(m)))
    for dist in (1.5, 3.0):
        a = dist * e1
        m = geo.CanonicalMoebius.sphere_reflection(
            a, geo.orthogonal_sphere_radius(a))
        cases.append(Bunch.Bunch(name='reflection_%g' % (dist),
                                 W=WcoOperator.moebius(m)))
    cases.append(Bunch.Bunch(name='identity',
                             W=WcoOperator.moebius(geo.BallMoebius.identity(n))))
    cases.append(Bunch.Bunch(name='similarity',
                             W=WcoOperator.moebius(
                                 geo.CanonicalMoebius.affine(0.5, n=n))))
    return cases


def witness_cases(n):
    """
    Operators that do not preserve harmonic functions, each with a
    harmonic f for which Delta (W f) != 0.

    Returns
    -------
    cases : list of Bunch
        with attributes ``name``, ``W`` and ``f``
    """
    if n < 3:
        raise DomainError("characterization needs n >= 3: n=%d" % (n))
    HF = hardy.HarmonicFn
    a = np.zeros(n)
    a[0] = 0.5
    return [
        Bunch.Bunch(name='anisotropic',
                    W=WcoOperator(_anisotropic_map(n), Weight.unit(), n),
                    f=HF.polynomial('difference', n, 0, 1)),
        Bunch.Bunch(name='moebius_unit_weight',
                    W=WcoOperator(geo.BallMoebius.involution(a),
                                  Weight.unit(), n),
                    f=HF.polynomial('coordinate', n, 0)),
        Bunch.Bunch(name='quadratic',
                    W=WcoOperator(_quadratic_map(n), Weight.unit(), n),
                    f=HF.polynomial('coordinate', n, 0)),
    ]


def _map_record(phi):
    if isinstance(phi, geo.BallMoebius):
        return dict(form='ball', A=phi.A.tolist(), a=phi.a.tolist())
    if isinstance(phi, geo.CanonicalMoebius):
        return dict(form='canonical', b=phi.b.tolist(), alpha=float(phi.alpha),
                    A=phi.A.tolist(), a=phi.a.tolist(),
                    epsilon=int(phi.epsilon))
    raise DomainError("only Moebius maps can be recorded: %s" % (repr(phi)))


def _map_from_record(rec):
    form = rec.get('form')
    if form == 'ball':
        return geo.BallMoebius(rec['A'], rec['a'])
    if form == 'canonical':
        return geo.CanonicalMoebius(rec['b'], rec['alpha'], rec['A'],
                                    rec['a'], rec['epsilon'])
    raise DomainError("unknown map form %r" % (form))


def operator_record(W):
    """
    Declarative description of an operator: dimension, the map in ball
    or canonical form, the weight kind and constant C.

    Raises
    ------
    DomainError
        for maps or weights given only as Python callables
    """
    psi = W.psi
    if psi.kind not in ('jacobian_power', 'constant'):
        raise DomainError("custom weights cannot be recorded")
    if psi.kind == 'jacobian_power' and psi.phi is not W.phi:
        raise DomainError("weight is the Jacobian power of another map")
    return dict(n=W.n, phi=_map_record(W.phi),
                psi=dict(kind=psi.kind, constant=float(psi.constant)))


def operator_from_record(rec):
    phi = _map_from_record(rec['phi'])
    n = int(rec['n'])
    if phi.n != n:
        raise DomainError("map has dimension %d, record says %d" % (phi.n, n))
    psi = rec['psi']
    if psi['kind'] == 'jacobian_power':
        weight = Weight.jacobian_power(phi, n, constant=psi['constant'])
    elif psi['kind'] == 'constant':
        weight = Weight.const(psi['constant'])
    else:
        raise DomainError("unknown weight kind %r" % (psi['kind']))
    return WcoOperator(phi, weight, n)


def dumps_operator(W):
    return json.dumps(operator_record(W), sort_keys=True)


def loads_operator(text):
    try:
        rec = json.loads(text)
    except ValueError as e:
        raise DomainError("bad operator record: %s" % (str(e)))
    return operator_from_record(rec)
