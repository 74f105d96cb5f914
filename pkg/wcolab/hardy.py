#
# hardy.py -- Poisson kernels, Poisson integrals and h^p norms on the ball
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
import re

import numpy as np

from .util.errors import DomainError
from . import geometry as geo
from .specfun import phi_p, conjugate_exponent
from .quadrature import integrate

# radii 1 - 2^-k, k = 0..RADIUS_STEPS, capped at RADIUS_CAP
RADIUS_STEPS = 10
RADIUS_CAP = 0.999

# points evaluated per block in Poisson integrals over a rule
EVAL_BLOCK = 256

POLYNOMIAL_KINDS = ('constant', 'coordinate', 'product', 'difference')


def _inside(x, what='point'):
    x = geo.as_vector(x)
    r = geo.norm(x)
    if np.any(r >= 1.0):
        raise DomainError("%s must lie in the open ball: |x|=%.17g" % (
            what, np.max(r)))
    return x


def poisson_kernel(x, zeta):
    """P(x, zeta) = (1 - |x|^2) / |x - zeta|^n, broadcasting over points."""
    x = _inside(x)
    zeta = geo.as_vector(zeta)
    n = x.shape[-1]
    d = geo.norm(x - zeta)
    return (1.0 - geo.dot(x, x)) / d ** n


def extended_poisson(y, x):
    """
    P_y(x) = (1 - |x|^2 |y|^2) / (1 - 2 x.y + |x|^2 |y|^2)^(n/2)

    Harmonic in x with boundary values P(y, .) on the sphere.
    """
    y = _inside(y, what='kernel centre')
    x = geo.as_vector(x)
    n = x.shape[-1]
    xy = geo.dot(x, x) * geo.dot(y, y)
    return (1.0 - xy) / (1.0 - 2.0 * geo.dot(x, y) + xy) ** (n / 2.0)


class BoundaryData(object):
    """
    A function on the sphere, vectorized over nodes of shape (count, n).
    """

    def __init__(self, func, label=None):
        self.func = func
        self.label = label

    def __call__(self, zeta):
        return self.func(geo.as_vector(zeta))

    @classmethod
    def constant(cls, c):
        return cls(lambda zeta: np.full(zeta.shape[:-1], c),
                   label=repr(c))

    @classmethod
    def coordinate(cls, i, coeff=1.0):
        return cls(lambda zeta: coeff * zeta[..., i],
                   label="%r*z%d" % (coeff, i + 1))

    @classmethod
    def poisson(cls, y):
        y = _inside(y, what='kernel centre')
        return cls(lambda zeta: poisson_kernel(y, zeta),
                   label="P[%s]" % (','.join(["%r" % v for v in y])))

    @classmethod
    def combination(cls, terms):
        """Linear combination from a list of (coefficient, BoundaryData)."""
        terms = list(terms)

        def combo(zeta):
            return sum([c * d(zeta) for c, d in terms])

        label = ' + '.join(["%r*(%s)" % (c, d.label) for c, d in terms])
        return cls(combo, label=label)

    @classmethod
    def parse(cls, expr, n):
        """
        Build boundary data from a small expression language.

        Terms are joined with ``+`` or ``-``; each term is a product
        (``*``) of numbers, coordinates ``z1`` .. ``zn`` and Poisson
        kernels ``P[y1,...,yn]``.  Example: ``0.5*z1 - 2*P[0.3,0,0] + 1``.
        """
        terms = []
        for sign, text in _split_terms(expr):
            factors = [_parse_factor(f.strip(), n) for f in text.split('*')]
            terms.append((sign, factors))
        if len(terms) == 0:
            raise DomainError("empty boundary expression")

        def evaluate(zeta):
            total = 0.0
            for sign, factors in terms:
                val = sign
                for factor in factors:
                    val = val * factor(zeta)
                total = total + val
            return np.broadcast_to(total, zeta.shape[:-1])

        return cls(evaluate, label=expr.strip())

    def __repr__(self):
        return "BoundaryData(%s)" % (self.label)


def _split_terms(expr):
    terms = []
    depth, start, sign = 0, 0, 1.0
    text = expr.strip()
    for i, ch in enumerate(text):
        if ch == '[':
            depth += 1
        elif ch == ']':
            depth -= 1
        elif ch in '+-' and depth == 0:
            prev = text[:i].rstrip()
            # exponent sign, leading sign or sign after '*'
            if prev == '' or prev[-1] in '*eE':
                continue
            terms.append((sign, text[start:i]))
            sign = -1.0 if ch == '-' else 1.0
            start = i + 1
    terms.append((sign, text[start:]))

    res = []
    for sign, term in terms:
        term = term.strip()
        if term.startswith('-'):
            sign, term = -sign, term[1:].strip()
        elif term.startswith('+'):
            term = term[1:].strip()
        if term == '':
            raise DomainError("empty term in boundary expression %r" % (expr))
        res.append((sign, term))
    return res


def _parse_factor(text, n):
    match = re.fullmatch(r'z(\d+)', text)
    if match:
        i = int(match.group(1))
        if not 1 <= i <= n:
            raise DomainError("coordinate %s out of range for n=%d" % (
                text, n))
        return lambda zeta: zeta[..., i - 1]

    match = re.fullmatch(r'P\[(.*)\]', text)
    if match:
        try:
            y = np.array([float(v) for v in match.group(1).split(',')])
        except ValueError:
            raise DomainError("bad kernel centre in %r" % (text))
        if y.shape != (n,):
            raise DomainError("kernel centre %r needs %d components" % (
                text, n))
        y = _inside(y, what='kernel centre')
        return lambda zeta: poisson_kernel(y, zeta)

    try:
        c = float(text)
    except ValueError:
        raise DomainError("cannot parse boundary term %r" % (text))
    return lambda zeta: c


class DiscreteMeasure(object):
    """Finite list of point masses on the sphere."""

    def __init__(self, points, weights):
        self.points = geo.as_vector(points)
        if self.points.ndim == 1:
            self.points = self.points[np.newaxis, :]
        self.weights = np.atleast_1d(np.asarray(weights))
        if self.weights.shape != (len(self.points),):
            raise DomainError("need one weight per atom: %d != %d" % (
                len(self.weights), len(self.points)))
        dev = np.abs(geo.norm(self.points) - 1.0)
        if np.any(dev > geo.UNIT_TOL):
            raise DomainError("atoms must lie on the unit sphere")
        if not np.all(np.isfinite(self.weights)):
            raise DomainError("atom weights must be finite")
        if not self.total_variation > 0.0:
            raise DomainError("measure has zero total variation")

    @property
    def n(self):
        return self.points.shape[-1]

    @property
    def total_variation(self):
        return float(np.sum(np.abs(self.weights)))

    def __repr__(self):
        return "DiscreteMeasure(atoms=%d, |mu|=%g)" % (
            len(self.weights), self.total_variation)


class HarmonicFn(object):
    """
    A harmonic function on the ball, one of

    - 'extended_poisson': scale * P_y
    - 'poisson_boundary': scale * P[f*] by quadrature over a rule
    - 'poisson_measure': scale * P[mu] for a discrete measure
    - 'polynomial': scale * (1 | x_i | x_i x_j | x_i^2 - x_j^2)

    Instances are callables on points of shape (..., n).
    """

    def __init__(self, kind, n, scale=1.0, **params):
        self.kind = kind
        self.n = int(n)
        self.scale = scale
        self.params = params

    @classmethod
    def extended_poisson(cls, y, scale=1.0):
        y = _inside(y, what='kernel centre')
        return cls('extended_poisson', y.shape[-1], scale=scale, y=y)

    @classmethod
    def poisson_of_boundary(cls, data, rule, scale=1.0):
        values = np.broadcast_to(np.asarray(data(rule.nodes)),
                                 rule.weights.shape)
        return cls('poisson_boundary', rule.n, scale=scale, data=data,
                   rule=rule, values=values)

    @classmethod
    def poisson_of_measure(cls, measure, scale=1.0):
        return cls('poisson_measure', measure.n, scale=scale,
                   measure=measure)

    @classmethod
    def polynomial(cls, kind, n, i=0, j=1, scale=1.0):
        if kind not in POLYNOMIAL_KINDS:
            raise DomainError("unknown harmonic polynomial %r" % (kind))
        if not (0 <= i < n and 0 <= j < n):
            raise DomainError("indices (%d, %d) out of range for n=%d" % (
                i, j, n))
        if kind in ('product', 'difference') and i == j:
            raise DomainError("%s polynomial needs i != j" % (kind))
        return cls('polynomial', n, scale=scale, form=kind, i=i, j=j)

    def scaled(self, c):
        return HarmonicFn(self.kind, self.n, scale=self.scale * c,
                          **self.params)

    def __call__(self, x):
        return self.scale * _eval_unscaled(self, geo.as_vector(x))

    def boundary(self, zeta):
        """Boundary function f* on the sphere."""
        zeta = geo.as_vector(zeta)
        if self.kind == 'extended_poisson':
            return self.scale * poisson_kernel(self.params['y'], zeta)
        if self.kind == 'poisson_boundary':
            return self.scale * np.asarray(self.params['data'](zeta))
        if self.kind == 'polynomial':
            return self.scale * _eval_unscaled(self, zeta)
        raise DomainError("a discrete measure has no boundary function")

    def __repr__(self):
        return "HarmonicFn(%s, n=%d, scale=%g)" % (self.kind, self.n,
                                                   abs(self.scale))


def _eval_unscaled(f, x):
    par = f.params
    if f.kind == 'extended_poisson':
        return extended_poisson(par['y'], x)

    if f.kind == 'polynomial':
        i, j = par['i'], par['j']
        form = par['form']
        if form == 'constant':
            return np.ones(x.shape[:-1])
        if form == 'coordinate':
            return x[..., i].copy()
        if form == 'product':
            return x[..., i] * x[..., j]
        return x[..., i] ** 2 - x[..., j] ** 2

    if f.kind == 'poisson_measure':
        mu = par['measure']
        return _poisson_sum(x, mu.points, mu.weights)

    if f.kind == 'poisson_boundary':
        rule = par['rule']
        return _poisson_sum(x, rule.nodes, rule.weights * par['values'])

    raise DomainError("unknown harmonic function kind %r" % (f.kind))


def _poisson_sum(x, nodes, coeffs):
    shape = x.shape[:-1]
    pts = _inside(x).reshape(-1, x.shape[-1])
    out = []
    for k in range(0, len(pts), EVAL_BLOCK):
        blk = pts[k:k + EVAL_BLOCK]
        P = poisson_kernel(blk[:, np.newaxis, :], nodes[np.newaxis, :, :])
        out.append(P @ coeffs)
    return np.concatenate(out).reshape(shape)


def poisson_integral(d, x, rule=None):
    """
    Poisson integral P[d](x) of boundary data (by quadrature over ``rule``)
    or of a discrete measure (exact atom sum).
    """
    x = _inside(x)
    if isinstance(d, DiscreteMeasure):
        return _poisson_sum(x, d.points, d.weights)
    if rule is None:
        raise DomainError("boundary data needs a quadrature rule")
    values = np.asarray(d(rule.nodes))
    return _poisson_sum(x, rule.nodes, rule.weights * values)


def lp_mean(f, p, r, rule):
    """{int |f(r zeta)|^p dsigma(zeta)}^(1/p); the max over nodes if p = inf."""
    vals = np.abs(np.asarray(f(r * rule.nodes)))
    if np.isinf(p):
        return float(np.max(vals))
    return float(integrate(lambda zeta: vals ** p, rule) ** (1.0 / p))


def default_radii():
    radii = [min(1.0 - 2.0 ** -k, RADIUS_CAP) for k in range(RADIUS_STEPS + 1)]
    return sorted(set(radii))


def hp_norm_estimate(f, p, radii=None, rule=None):
    """
    Lower estimate of ||f||_{h^p}: the largest L^p mean over the radii.

    Parameters
    ----------
    f : callable
        function on the ball (a `HarmonicFn` or any vectorized callable)

    p : float
        exponent, 1 <= p <= inf

    radii : list of float, optional
        radii in [0, 1), defaults to `default_radii`

    rule : `wcolab.quadrature.SphericalRule`
        rule for the sphere integrals

    Returns
    -------
    norm : float
    """
    if not p >= 1.0:
        raise DomainError("exponent must be >= 1: p=%g" % (p))
    if rule is None:
        raise DomainError("a quadrature rule is required")
    if radii is None:
        radii = default_radii()
    radii = np.asarray(radii, dtype=float)
    if len(radii) == 0 or np.any(radii < 0.0) or np.any(radii >= 1.0):
        raise DomainError("radii must lie in [0, 1)")
    return max([lp_mean(f, p, r, rule) for r in radii])


def hp_norm_py_closed(y, p, n=None):
    """
    Closed-form h^p norm of the extended Poisson kernel,

        ||P_y|| = Phi_p(|y|^2) (1 - |y|^2)^((1-n)/p'),   1 <= p < inf
        ||P_y|| = (1 + |y|) / (1 - |y|)^(n-1),           p = inf

    the latter being sup P(y, .).
    """
    y = _inside(y, what='kernel centre')
    if n is None:
        n = y.shape[-1]
    if not p >= 1.0:
        raise DomainError("exponent must be >= 1: p=%g" % (p))
    rho = float(geo.norm(y))
    if p == 1:
        return 1.0
    if np.isinf(p):
        return (1.0 + rho) / (1.0 - rho) ** (n - 1)
    q = conjugate_exponent(p)
    return phi_p(p, n, rho ** 2) * (1.0 - rho ** 2) ** ((1.0 - n) / q)


def change_of_variables(m, f, rule):
    """
    Both sides of

        int f(phi(zeta)) dsigma = int f(zeta) |D phi^-1(zeta)|^(n-1) dsigma

    for a ball automorphism ``m`` and boundary data ``f``.
    """
    n = m.n
    minv = geo.inverse_ball(m)
    lhs = integrate(lambda zeta: f(geo.eval_ball(m, zeta)), rule)
    rhs = integrate(lambda zeta: (f(zeta) *
                                  geo.jacobian_scalar(minv, zeta) ** (n - 1)),
                    rule)
    return lhs, rhs


def change_of_variables_check(m, f, rule):
    lhs, rhs = change_of_variables(m, f, rule)
    return abs(lhs - rhs)


def normalized_kernel(y, p, n=None):
    """k_y = P_y / ||P_y||_{h^p}."""
    y = _inside(y, what='kernel centre')
    return HarmonicFn.extended_poisson(y, scale=1.0 / hp_norm_py_closed(
        y, p, n))


def boundary_values(f, zeta):
    if isinstance(f, HarmonicFn):
        return f.boundary(zeta)
    return np.asarray(f(zeta))


def pairing(f, g, rule):
    """Bilinear pairing <f, g> = int f* g* dsigma of boundary functions."""
    return integrate(lambda zeta: (boundary_values(f, zeta) *
                                   boundary_values(g, zeta)), rule)
