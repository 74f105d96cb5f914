#
# quadrature.py -- integration over the unit sphere against normalized
#                  surface measure
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
"""
Quadrature rules on the sphere S^{n-1} with sigma(S) = 1.

Two rule families are provided: Monte Carlo rules (isotropic gaussian
samples projected to the sphere, seeded PCG64 stream) and deterministic
product rules for n <= 5, built by splitting S^{n-1} into a polar
coordinate t in [-1, 1] (Gauss-Jacobi nodes for the weight
(1 - t^2)^((n-3)/2)) times a copy of S^{n-2}, down to an equispaced
circle.
"""
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from scipy import special
from astropy.table import Table

from .util.errors import QuadratureError, DomainError
from .util import mock_ball
from .specfun import hyp2f1

WEIGHT_SUM_TOL = 1.0e-12
NODE_NORM_TOL = 1.0e-14

PRODUCT_DIMENSIONS = (2, 3, 4, 5)


class SphericalRule(object):
    """
    Nodes and weights for integrals over S^{n-1}.

    Parameters
    ----------
    n : int
        dimension of the ambient space

    nodes : array_like
        array of shape (count, n) of unit vectors

    weights : array_like
        positive weights summing to 1

    kind : str
        'monte_carlo' or 'product'

    params : dict, optional
        construction parameters ({'seed', 'count'} or {'order'})
    """

    def __init__(self, n, nodes, weights, kind, params=None):
        self.n = int(n)
        self.nodes = np.asarray(nodes, dtype=float)
        self.weights = np.asarray(weights, dtype=float)
        self.kind = kind
        if params is None:
            params = {}
        self.params = dict(params)

        if self.nodes.ndim != 2 or self.nodes.shape[1] != self.n:
            raise DomainError("nodes must have shape (count, %d): %s" % (
                self.n, str(self.nodes.shape)))
        if len(self.nodes) == 0:
            raise QuadratureError("rule has no nodes")
        if self.weights.shape != (len(self.nodes),):
            raise DomainError("need one weight per node: %d != %d" % (
                len(self.weights), len(self.nodes)))
        if np.any(self.weights <= 0.0):
            raise DomainError("weights must be positive")
        wsum = np.sum(self.weights)
        if abs(wsum - 1.0) > WEIGHT_SUM_TOL:
            raise DomainError("weights sum to %.17g, not 1" % (wsum))
        dev = np.max(np.abs(np.linalg.norm(self.nodes, axis=1) - 1.0))
        if dev > NODE_NORM_TOL:
            raise DomainError("nodes are off the sphere by %g" % (dev))

    @property
    def count(self):
        return len(self.weights)

    @property
    def degree(self):
        """Polynomial degree integrated exactly (None for Monte Carlo)."""
        if self.kind == 'product':
            return 2 * self.params['order'] - 1
        return None

    def rotated(self, R):
        """The same rule with every node moved by the orthogonal map R."""
        nodes = self.nodes @ np.asarray(R, dtype=float).T
        nodes /= np.linalg.norm(nodes, axis=1)[:, np.newaxis]
        return SphericalRule(self.n, nodes, self.weights, self.kind,
                             params=self.params)

    def __repr__(self):
        return "SphericalRule(n=%d, kind=%s, count=%d)" % (
            self.n, self.kind, self.count)


def monte_carlo_rule(n, count, seed=None):
    """
    Equal-weight rule on i.i.d. uniform nodes.

    Parameters
    ----------
    n : int
        dimension

    count : int
        number of nodes, >= 1

    seed : int or None, optional
        PCG64 seed, defaults to `wcolab.util.mock_ball.DEFAULT_SEED`

    Returns
    -------
    rule : `SphericalRule`
    """
    if count < 1:
        raise QuadratureError("Monte Carlo rule needs count >= 1: %d" % (
            count))
    if n < 2:
        raise DomainError("dimension must be >= 2: n=%d" % (n))
    if seed is None:
        seed = mock_ball.DEFAULT_SEED
    rng = mock_ball.make_rng(seed)
    nodes = mock_ball.random_sphere_points(rng, count, n)
    weights = np.full(count, 1.0 / count)
    return SphericalRule(n, nodes, weights, 'monte_carlo',
                         params=dict(seed=int(seed), count=int(count)))


def _circle_rule(order):
    m = 2 * order
    theta = np.pi * (2.0 * np.arange(m) + 1.0) / m
    nodes = np.stack([np.cos(theta), np.sin(theta)], axis=-1)
    return nodes, np.full(m, 1.0 / m)


def _product_nodes(n, order):
    if n == 2:
        return _circle_rule(order)

    sub_nodes, sub_wts = _product_nodes(n - 1, order)
    alpha = (n - 3) / 2.0
    t, wt = special.roots_jacobi(order, alpha, alpha)
    wt = wt / np.sum(wt)

    # node (sqrt(1 - t^2) eta, t) for every pair (t, eta)
    m = len(sub_wts)
    s = np.repeat(np.sqrt(1.0 - t ** 2), m)
    eta = np.tile(sub_nodes, (order, 1))
    nodes = np.column_stack([s[:, np.newaxis] * eta, np.repeat(t, m)])
    weights = np.outer(wt, sub_wts).ravel()
    return nodes, weights


def product_rule(n, order):
    """
    Deterministic tensor rule exact for polynomials of degree
    2 * order - 1 on S^{n-1}, for 2 <= n <= 5.
    """
    if n not in PRODUCT_DIMENSIONS:
        raise DomainError("product rules support n in %s: n=%s" % (
            str(PRODUCT_DIMENSIONS), n))
    if order < 2:
        raise DomainError("product rule order must be >= 2: order=%d" % (
            order))
    nodes, weights = _product_nodes(n, int(order))
    nodes = nodes / np.linalg.norm(nodes, axis=1)[:, np.newaxis]
    weights = weights / np.sum(weights)
    return SphericalRule(n, nodes, weights, 'product',
                         params=dict(order=int(order)))


def _weighted_sum(f, nodes, weights):
    vals = np.asarray(f(nodes))
    vals = np.broadcast_to(vals, weights.shape)
    if not np.all(np.isfinite(vals)):
        bad = np.count_nonzero(~np.isfinite(vals))
        raise QuadratureError("integrand is not finite at %d of %d nodes" % (
            bad, len(weights)))
    return np.sum(weights * vals)


def integrate(f, rule, workers=None):
    """
    Sum of w_i f(zeta_i) over the rule.

    Parameters
    ----------
    f : callable
        boundary function taking an array of nodes (count, n) and
        returning real or complex values of shape (count,)

    rule : `SphericalRule`
        the rule

    workers : int or None, optional
        if > 1, node ranges are evaluated in a thread pool and the
        partial sums are added in node order

    Returns
    -------
    value : float or complex
    """
    if workers is None or workers <= 1:
        total = _weighted_sum(f, rule.nodes, rule.weights)
    else:
        chunks = np.array_split(np.arange(rule.count), workers)
        chunks = [idx for idx in chunks if len(idx) > 0]
        with ThreadPoolExecutor(max_workers=workers) as executor:
            parts = list(executor.map(
                lambda idx: _weighted_sum(f, rule.nodes[idx],
                                          rule.weights[idx]),
                chunks))
        total = parts[0]
        for part in parts[1:]:
            total = total + part

    if np.iscomplexobj(total):
        return complex(total)
    return float(total)


def riesz_integral(n, s, radius, rule):
    """
    Quadrature value and closed form of the Riesz-type integral

        int |x - zeta|^(-2s) dsigma(zeta) = 2F1(s, s - n/2 + 1; n/2; |x|^2)

    at x = radius * e_1.
    """
    if not 0.0 <= radius < 1.0:
        raise DomainError("point must lie inside the ball: |x|=%g" % (radius))
    if rule.n != n:
        raise DomainError("rule is for n=%d, not %d" % (rule.n, n))
    x = np.zeros(n)
    x[0] = radius

    def riesz(zeta):
        return np.sum((x - zeta) ** 2, axis=-1) ** (-s)

    quad = integrate(riesz, rule)
    closed = hyp2f1(s, s - n / 2.0 + 1.0, n / 2.0, radius ** 2)
    return quad, closed


def riesz_integral_check(n, s, radius, rule):
    """|quadrature - closed form| for `riesz_integral`."""
    quad, closed = riesz_integral(n, s, radius, rule)
    return abs(quad - closed)


def write_rule(rule, path):
    """Write a rule as an ECSV table, one node per row plus its weight."""
    tbl = Table()
    for i in range(rule.n):
        tbl['z%d' % (i + 1)] = rule.nodes[:, i]
    tbl['weight'] = rule.weights
    tbl.meta['n'] = rule.n
    tbl.meta['kind'] = rule.kind
    tbl.meta['params'] = dict(rule.params)
    tbl.write(path, format='ascii.ecsv', overwrite=True)


def read_rule(path):
    tbl = Table.read(path, format='ascii.ecsv')
    n = int(tbl.meta['n'])
    nodes = np.column_stack([np.asarray(tbl['z%d' % (i + 1)], dtype=float)
                             for i in range(n)])
    return SphericalRule(n, nodes, np.asarray(tbl['weight'], dtype=float),
                         tbl.meta['kind'], params=tbl.meta.get('params', {}))
