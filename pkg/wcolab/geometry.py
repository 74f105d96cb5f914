#
# geometry.py -- Moebius transformations of the extended space and the ball
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
"""
Moebius geometry of R^n and of the unit ball B.

Points are numpy arrays whose last axis holds the n coordinates; every
map and scalar function here accepts a stack of points of shape
``(..., n)`` and works on all of them at once.
"""
import numpy as np

from .util.errors import PoleError, DomainError

# central difference step for first derivatives
JACOBIAN_STEP = 1.0e-4

# identities are checked with tolerances widened by BOUNDARY_WIDENING
# for points with |x| > BOUNDARY_RADIUS
BOUNDARY_RADIUS = 0.99
BOUNDARY_WIDENING = 100.0

ORTHO_TOL = 1.0e-12
UNIT_TOL = 1.0e-12


def as_vector(x):
    """
    Convert ``x`` to a float array of points in R^n, n >= 2.

    Raises
    ------
    DomainError
        if the last axis is shorter than 2 or a component is not finite
    """
    x = np.asarray(x, dtype=float)
    if x.ndim < 1 or x.shape[-1] < 2:
        raise DomainError("points need at least 2 components: shape=%s" % (
            str(x.shape)))
    if not np.all(np.isfinite(x)):
        raise DomainError("point components must be finite")
    return x


def norm(x):
    return np.linalg.norm(x, axis=-1)


def dot(x, y):
    return np.sum(x * y, axis=-1)


def is_orthogonal(A, tol=ORTHO_TOL):
    A = np.asarray(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        return False
    return np.allclose(A @ A.T, np.eye(A.shape[0]), rtol=0.0, atol=tol)


def givens_rotation(n, planes):
    """
    Build an orthogonal matrix as a product of Givens rotations.

    Parameters
    ----------
    n : int
        dimension

    planes : list of (i, j, theta)
        rotation by ``theta`` radians in the coordinate plane (i, j),
        0 <= i < j < n; applied in list order

    Returns
    -------
    R : ndarray
        n x n orthogonal matrix
    """
    R = np.eye(n)
    for i, j, theta in planes:
        i, j = int(i), int(j)
        if not (0 <= i < j < n):
            raise DomainError("rotation plane (%d, %d) invalid for n=%d" % (
                i, j, n))
        c, s = np.cos(theta), np.sin(theta)
        G = np.eye(n)
        G[i, i] = c
        G[j, j] = c
        G[i, j] = -s
        G[j, i] = s
        R = G @ R
    return R


def reflect_sphere(a, r, x):
    """Reflection a + r^2 (x - a)/|x - a|^2 in the sphere S(a, r)."""
    a = as_vector(a)
    x = as_vector(x)
    if not r > 0:
        raise DomainError("sphere radius must be positive: r=%s" % (r))
    d = x - a
    d2 = dot(d, d)
    if np.any(d2 == 0.0):
        raise PoleError("reflection in S(a, r) evaluated at its centre")
    return a + r ** 2 * d / d2[..., np.newaxis]


def reflect_hyperplane(a, t, x):
    """Reflection x - 2 (x.a - t) a in the hyperplane {x.a = t}, |a| = 1."""
    a = as_vector(a)
    x = as_vector(x)
    if abs(norm(a) - 1.0) > UNIT_TOL:
        raise DomainError("hyperplane normal is not a unit vector: |a|=%.17g" % (
            norm(a)))
    return x - 2.0 * (dot(x, a) - t)[..., np.newaxis] * a


def orthogonal_sphere_radius(a):
    """
    Radius of the sphere centred at ``a`` (|a| > 1) that meets the unit
    sphere at right angles; reflection in it maps the ball onto itself.
    """
    a = as_vector(a)
    ra = norm(a)
    if ra <= 1.0:
        raise DomainError("centre must lie outside the closed ball: |a|=%g" % (
            ra))
    return float(np.sqrt(ra ** 2 - 1.0))


class CanonicalMoebius(object):
    """
    A Moebius map in Liouville's canonical form

        phi(x) = b + alpha * A (x - a) / |x - a|^epsilon

    with A orthogonal, alpha != 0 and epsilon in {0, 2}.
    """

    def __init__(self, b, alpha, A, a, epsilon):
        self.b = as_vector(b)
        self.a = as_vector(a)
        self.A = np.asarray(A, dtype=float)
        self.alpha = float(alpha)
        self.epsilon = int(epsilon)

        n = self.b.shape[-1]
        if self.b.shape != (n,) or self.a.shape != (n,):
            raise DomainError("b and a must be single points of equal length")
        if self.A.shape != (n, n):
            raise DomainError("A must be %dx%d: shape=%s" % (
                n, n, str(self.A.shape)))
        if self.epsilon not in (0, 2):
            raise DomainError("epsilon must be 0 or 2: epsilon=%s" % (epsilon))
        if self.alpha == 0.0:
            raise DomainError("alpha must be nonzero")
        if not is_orthogonal(self.A):
            raise DomainError("A is not orthogonal")
        self.n = n

    @classmethod
    def sphere_reflection(cls, a, r):
        """The reflection in S(a, r) written in canonical form."""
        a = as_vector(a)
        if not r > 0:
            raise DomainError("sphere radius must be positive: r=%s" % (r))
        return cls(a, r ** 2, np.eye(a.shape[-1]), a, 2)

    @classmethod
    def affine(cls, alpha, A=None, b=None, n=None):
        """The similarity x -> b + alpha A x (epsilon = 0)."""
        if A is None:
            A = np.eye(n)
        A = np.asarray(A, dtype=float)
        n = A.shape[0]
        if b is None:
            b = np.zeros(n)
        return cls(b, alpha, A, np.zeros(n), 0)

    @property
    def ball_compatible(self):
        """For epsilon = 2 the pole must lie outside the closed ball."""
        return self.epsilon == 0 or norm(self.a) > 1.0

    def __call__(self, x):
        return eval_canonical(self, x)

    def jacobian_scalar(self, x):
        """|D phi(x)| = |alpha| / |x - a|^epsilon."""
        x = as_vector(x)
        if self.epsilon == 0:
            return np.full(x.shape[:-1], abs(self.alpha))
        d = x - self.a
        d2 = dot(d, d)
        if np.any(d2 == 0.0):
            raise PoleError("canonical map evaluated at its pole")
        return abs(self.alpha) / d2

    def __repr__(self):
        return "CanonicalMoebius(b=%s, alpha=%g, a=%s, epsilon=%d)" % (
            self.b, self.alpha, self.a, self.epsilon)


def eval_canonical(m, x):
    x = as_vector(x)
    d = x - m.a
    if m.epsilon == 2:
        d2 = dot(d, d)
        if np.any(d2 == 0.0):
            raise PoleError("canonical map evaluated at its pole")
        d = d / d2[..., np.newaxis]
    return m.b + m.alpha * (d @ m.A.T)


def bracket(x, a):
    """[x, a] = (1 - 2 x.a + |x|^2 |a|^2)^(1/2)."""
    x = as_vector(x)
    a = as_vector(a)
    rad = 1.0 - 2.0 * dot(x, a) + dot(x, x) * dot(a, a)
    if np.any(rad < 0.0):
        raise DomainError("negative radicand in [x, a]")
    return np.sqrt(rad)


def eval_phi_a(a, x):
    """
    The involution of the ball exchanging 0 and ``a``,

        phi_a(x) = (|x - a|^2 a - (1 - |a|^2)(x - a)) / [x, a]^2
    """
    a = as_vector(a)
    x = as_vector(x)
    if norm(a) >= 1.0:
        raise DomainError("centre must lie inside the ball: |a|=%.17g" % (
            norm(a)))
    d = x - a
    den = bracket(x, a) ** 2
    if np.any(den == 0.0):
        raise PoleError("phi_a evaluated at its pole a/|a|^2")
    num = dot(d, d)[..., np.newaxis] * a - (1.0 - dot(a, a)) * d
    return num / den[..., np.newaxis]


class BallMoebius(object):
    """
    A Moebius automorphism of the ball, phi = A o phi_a.

    ``a`` is phi^-1(0) and phi(0) = A a.
    """

    def __init__(self, A, a):
        self.a = as_vector(a)
        self.A = np.asarray(A, dtype=float)
        n = self.a.shape[-1]
        if self.a.shape != (n,):
            raise DomainError("a must be a single point")
        if self.A.shape != (n, n):
            raise DomainError("A must be %dx%d: shape=%s" % (
                n, n, str(self.A.shape)))
        if not is_orthogonal(self.A):
            raise DomainError("A is not orthogonal")
        if norm(self.a) >= 1.0:
            raise DomainError("centre must lie inside the ball: |a|=%.17g" % (
                norm(self.a)))
        self.n = n

    @classmethod
    def identity(cls, n):
        # phi_0(x) = -x, so the identity is (-I) o phi_0
        return cls(-np.eye(n), np.zeros(n))

    @classmethod
    def involution(cls, a):
        a = as_vector(a)
        return cls(np.eye(a.shape[-1]), a)

    @property
    def phi_zero(self):
        return self.A @ self.a

    @property
    def shift(self):
        """|phi(0)| = |phi^-1(0)| = |a|."""
        return float(norm(self.a))

    def __call__(self, x):
        return eval_ball(self, x)

    def inverse(self):
        return inverse_ball(self)

    def jacobian_scalar(self, x):
        return jacobian_scalar(self, x)

    def __repr__(self):
        return "BallMoebius(a=%s)" % (self.a)


def eval_ball(m, x):
    return eval_phi_a(m.a, x) @ m.A.T


def inverse_ball(m):
    """
    Inverse of A o phi_a.

    phi_a commutes with rotations in the sense phi_{Aa}(Ax) = A phi_a(x),
    so (A o phi_a)^-1 = phi_a o A^t = A^t o phi_{Aa}.
    """
    return BallMoebius(m.A.T, m.A @ m.a)


def jacobian_scalar(m, x):
    """|D phi(x)| = (1 - |a|^2) / [x, a]^2 for phi = A o phi_a."""
    x = as_vector(x)
    return (1.0 - dot(m.a, m.a)) / bracket(x, m.a) ** 2


def jacobian_bounds(m):
    """
    Two-sided bound on |D phi| over the closed ball and the bound on
    the ratio |D phi(y)| / |D phi(x)|.

    Returns
    -------
    (lo, hi, ratio) : tuple of float
    """
    r = m.shift
    hi = (1.0 + r) / (1.0 - r)
    return 1.0 / hi, hi, hi ** 2


def boundary_scaling_residual(m, x):
    """| 1 - |phi(x)|^2 - |D phi(x)| (1 - |x|^2) |"""
    x = as_vector(x)
    y = eval_ball(m, x)
    return np.abs(1.0 - dot(y, y) - jacobian_scalar(m, x) * (1.0 - dot(x, x)))


def distance_distortion_residual(m, x, y):
    """| |phi(x) - phi(y)| - |D phi(x)|^1/2 |D phi(y)|^1/2 |x - y| |"""
    x = as_vector(x)
    y = as_vector(y)
    lhs = norm(eval_ball(m, x) - eval_ball(m, y))
    rhs = np.sqrt(jacobian_scalar(m, x) * jacobian_scalar(m, y)) * norm(x - y)
    return np.abs(lhs - rhs)


def boundary_tolerance(x, tol):
    """Per-point tolerance, widened near the sphere."""
    return np.where(norm(as_vector(x)) > BOUNDARY_RADIUS,
                    tol * BOUNDARY_WIDENING, tol)


def jacobian_matrix_fd(phi, x, h=JACOBIAN_STEP):
    """
    Central difference Jacobian of a map.

    Parameters
    ----------
    phi : callable
        map taking points ``(..., n)`` to points ``(..., m)``

    x : array_like
        point(s) of shape ``(..., n)``

    h : float, optional
        difference step

    Returns
    -------
    D : ndarray
        shape ``(..., m, n)``; entry (i, j) approximates d phi_i / d x_j
    """
    x = as_vector(x)
    if not h > 0:
        raise DomainError("difference step must be positive: h=%s" % (h))
    n = x.shape[-1]
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        cols.append((np.asarray(phi(x + e)) - np.asarray(phi(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def gradient_fd(g, x, h=JACOBIAN_STEP):
    """Central difference gradient of a scalar function, shape (..., n)."""
    x = as_vector(x)
    n = x.shape[-1]
    cols = []
    for j in range(n):
        e = np.zeros(n)
        e[j] = h
        cols.append((np.asarray(g(x + e)) - np.asarray(g(x - e))) / (2 * h))
    return np.stack(cols, axis=-1)


def conformal_scale(D):
    """|D phi| = |det D phi|^(1/n) from a Jacobian matrix."""
    n = D.shape[-1]
    return np.abs(np.linalg.det(D)) ** (1.0 / n)


def cr_residual(phi, x, h=JACOBIAN_STEP):
    """
    Max-entry residual of the Cauchy-Riemann system
    D phi (D phi)^t = |D phi|^2 I, with D phi by finite differences.
    """
    D = jacobian_matrix_fd(phi, x, h=h)
    n = D.shape[-1]
    s2 = conformal_scale(D) ** 2
    R = D @ np.swapaxes(D, -1, -2) - s2[..., np.newaxis, np.newaxis] * np.eye(n)
    return np.max(np.abs(R), axis=(-2, -1))


def jacobian_sign(phi, points, h=JACOBIAN_STEP):
    """Signs of det D phi at the sample points (0 where degenerate)."""
    D = jacobian_matrix_fd(phi, points, h=h)
    return np.sign(np.linalg.det(D))


def jacobian_sign_constant(phi, points, h=JACOBIAN_STEP):
    s = np.ravel(jacobian_sign(phi, points, h=h))
    return bool(np.all(s > 0) or np.all(s < 0))


class Cone(object):
    """Nontangential approach region {|x - zeta| < (delta/2)(1 - |x|^2)}."""

    def __init__(self, vertex, aperture):
        self.vertex = as_vector(vertex)
        if abs(norm(self.vertex) - 1.0) > UNIT_TOL:
            raise DomainError("cone vertex must lie on the sphere")
        if not aperture > 1.0:
            raise DomainError("cone aperture must exceed 1: delta=%s" % (
                aperture))
        self.aperture = float(aperture)

    def contains(self, x):
        return cone_contains(self, x)

    def image(self, m):
        """A cone at phi(zeta) containing phi of this cone."""
        vertex = eval_ball(m, self.vertex)
        vertex = vertex / norm(vertex)
        return Cone(vertex, cone_image_aperture(m, self.aperture))


def cone_contains(c, x):
    x = as_vector(x)
    return norm(x - c.vertex) < 0.5 * c.aperture * (1.0 - dot(x, x))


def cone_image_aperture(m, delta):
    if not delta > 1.0:
        raise DomainError("cone aperture must exceed 1: delta=%s" % (delta))
    r = m.shift
    return (1.0 + r) / (1.0 - r) * delta
