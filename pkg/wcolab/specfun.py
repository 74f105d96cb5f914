#
# specfun.py -- gamma, Gauss hypergeometric 2F1 on [0, 1] and the
#               hypergeometric factor of Poisson kernel norms
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
import numpy as np
from scipy import special

from ginga.misc import log

from .util.errors import (PoleError, DomainError, DivergenceError,
                          ConvergenceError)

# stop summing once |term| < SERIES_TOL * |partial sum|
SERIES_TOL = 1.0e-16
SERIES_MAX_TERMS = 10000

# above this argument the Euler transformation is applied first
EULER_THRESHOLD = 0.7

logger = log.get_logger('wcolab.specfun', null=True)


def _is_nonpositive_integer(x):
    return x <= 0 and x == np.floor(x)


def conjugate_exponent(p):
    """p' with 1/p + 1/p' = 1 (1 <-> inf)."""
    if p == 1:
        return np.inf
    if np.isinf(p):
        return 1.0
    if p < 1:
        raise DomainError("exponent must be >= 1: p=%g" % (p))
    return p / (p - 1.0)


def gamma_fn(x):
    """Gamma function for real x off the non-positive integers."""
    x = float(x)
    if _is_nonpositive_integer(x):
        raise PoleError("gamma has a pole at x=%g" % (x))
    return float(special.gamma(x))


class Hyp2F1Params(object):
    """Parameters (a, b; c; z) of 2F1 restricted to 0 <= z <= 1."""

    def __init__(self, a, b, c, z):
        self.a, self.b, self.c, self.z = float(a), float(b), float(c), float(z)
        if _is_nonpositive_integer(self.c):
            raise DivergenceError("c=%g is a non-positive integer" % (self.c))
        if not 0.0 <= self.z <= 1.0:
            raise DomainError("argument must lie in [0, 1]: z=%.17g" % (
                self.z))
        if (self.z == 1.0 and self.terminating is None and
                self.c - self.a - self.b <= 0.0):
            raise DivergenceError(
                "2F1(%g, %g; %g; 1) diverges: c-a-b=%g <= 0" % (
                    self.a, self.b, self.c, self.c - self.a - self.b))

    @property
    def terminating(self):
        """Degree of the polynomial when a or b is a non-positive integer."""
        return _terminating_degree(self.a, self.b)

    def __repr__(self):
        return "Hyp2F1Params(a=%g, b=%g, c=%g, z=%g)" % (
            self.a, self.b, self.c, self.z)


def _terminating_degree(a, b):
    degs = [-int(v) for v in (a, b) if _is_nonpositive_integer(v)]
    if len(degs) == 0:
        return None
    return min(degs)


def _polynomial_sum(a, b, c, z, degree):
    term, total = 1.0, 1.0
    for k in range(degree):
        term *= (a + k) * (b + k) / ((c + k) * (k + 1.0)) * z
        total += term
    return total


def hyp2f1_series(a, b, c, z, euler=False, tol=SERIES_TOL,
                  max_terms=SERIES_MAX_TERMS):
    """
    Sum the hypergeometric series of 2F1(a, b; c; z).

    Parameters
    ----------
    a, b, c, z : float
        series parameters, 0 <= z < 1

    euler : bool, optional, defaults to False
        sum (1 - z)^(c-a-b) 2F1(c-a, c-b; c; z) instead

    tol : float, optional
        relative truncation threshold on the last term

    max_terms : int, optional
        term budget

    Returns
    -------
    value : float

    Raises
    ------
    ConvergenceError
        if the truncation test is not met within ``max_terms`` terms
    """
    if euler:
        factor = (1.0 - z) ** (c - a - b)
        return factor * hyp2f1_series(c - a, c - b, c, z, tol=tol,
                                      max_terms=max_terms)

    degree = _terminating_degree(a, b)
    if degree is not None:
        return _polynomial_sum(a, b, c, z, degree)
    if z == 0.0:
        return 1.0

    k = np.arange(max_terms, dtype=float)
    with np.errstate(over='ignore', invalid='ignore'):
        terms = np.cumprod((a + k) * (b + k) / ((c + k) * (k + 1.0)) * z)
        partial = 1.0 + np.cumsum(terms)
        # factors (a+k)(b+k) can be small early on; only trust the test
        # once k is past both parameters
        done = ((np.abs(terms) < tol * np.abs(partial)) &
                (k + 1.0 > max(abs(a), abs(b))))
    if not np.any(done):
        raise ConvergenceError(
            "2F1(%g, %g; %g; %g) not converged after %d terms" % (
                a, b, c, z, max_terms),
            terms=max_terms, partial=partial[-1])
    return float(partial[np.argmax(done)])


def hyp2f1(a, b=None, c=None, z=None):
    """
    Gauss hypergeometric function 2F1(a, b; c; z) for 0 <= z <= 1.

    Accepts either a `Hyp2F1Params` or the four parameters.  Terminating
    series are summed as polynomials, z = 1 uses Gauss' formula, z above
    EULER_THRESHOLD goes through the Euler transformation.  Where the
    transformed series cannot converge within the term budget (z very
    close to 1) the value is continued with scipy.special.hyp2f1.
    """
    if isinstance(a, Hyp2F1Params):
        params = a
    else:
        params = Hyp2F1Params(a, b, c, z)
    a, b, c, z = params.a, params.b, params.c, params.z

    degree = params.terminating
    if degree is not None:
        return _polynomial_sum(a, b, c, z, degree)
    if z == 1.0:
        return gauss_at_one(a, b, c)
    if z <= EULER_THRESHOLD:
        return hyp2f1_series(a, b, c, z)

    try:
        return hyp2f1_series(a, b, c, z, euler=True)

    except ConvergenceError as e:
        logger.debug("series failed (%s); continuing with scipy" % (str(e)))
        value = float(special.hyp2f1(a, b, c, z))
        if not np.isfinite(value):
            raise ConvergenceError(
                "2F1(%g, %g; %g; %.17g) could not be evaluated" % (a, b, c, z))
        return value


def gauss_at_one(a, b, c):
    """2F1(a, b; c; 1) = G(c) G(c-a-b) / (G(c-a) G(c-b)), c-a-b > 0."""
    if _is_nonpositive_integer(c):
        raise DivergenceError("c=%g is a non-positive integer" % (c))
    if c - a - b <= 0.0:
        raise DivergenceError("2F1(%g, %g; %g; 1) diverges: c-a-b=%g <= 0" % (
            a, b, c, c - a - b))
    if _is_nonpositive_integer(c - a) or _is_nonpositive_integer(c - b):
        return 0.0
    args = np.array([c, c - a - b, c - a, c - b])
    lg = special.gammaln(args)
    sgn = special.gammasgn(args)
    return float(sgn[0] * sgn[1] * sgn[2] * sgn[3] *
                 np.exp(lg[0] + lg[1] - lg[2] - lg[3]))


class PhiSpec(object):
    """Arguments of the norm factor Phi_p(r) in dimension n."""

    def __init__(self, p, n, r):
        self.p = float(p)
        self.n = int(n)
        self.r = float(r)
        if not self.p >= 1.0:
            raise DomainError("exponent must be >= 1: p=%g" % (self.p))
        if self.n < 2 or self.n != n:
            raise DomainError("dimension must be an integer >= 2: n=%s" % (n))
        if not 0.0 <= self.r <= 1.0:
            raise DomainError("argument must lie in [0, 1]: r=%.17g" % (
                self.r))

    @property
    def conjugate(self):
        return conjugate_exponent(self.p)


def phi_p(p, n=None, r=None):
    """
    Hypergeometric factor in the h^p norm of the extended Poisson kernel,

        Phi_p(r) = 2F1(n(1-p)/2, (2n-2-np)/2; n/2; r)^(1/p),  p < inf
        Phi_p(r) = (1 + r)^n,                               p = inf
    """
    spec = p if isinstance(p, PhiSpec) else PhiSpec(p, n, r)
    p, n, r = spec.p, spec.n, spec.r

    if np.isinf(p):
        return (1.0 + r) ** n
    if r == 1.0:
        return phi_p_limit(p, n)

    # c - a - b = n(p - 1) + 1 > 0, so the series is summable up to r = 1
    value = hyp2f1(n * (1.0 - p) / 2.0, (2.0 * n - 2.0 - n * p) / 2.0,
                   n / 2.0, r)
    if not value > 0.0:
        raise ConvergenceError("Phi_p(%g) evaluated non-positive: %g" % (
            r, value))
    return value ** (1.0 / p)


def phi_p_limit(p, n):
    """Limit of Phi_p(r) as r -> 1-."""
    if np.isinf(p):
        return 2.0 ** n
    if not p >= 1.0:
        raise DomainError("exponent must be >= 1: p=%g" % (p))
    lg = special.gammaln
    logv = (lg(n / 2.0) + lg(n * p + 1.0 - n) - lg(n * p / 2.0) -
            lg((n * p + 2.0 - n) / 2.0))
    return float(np.exp(logv / p))
