#
# cli.py -- batch verification suites for weighted composition operators
#
# This is open-source software licensed under a BSD license.
# Please see the file LICENSE.txt for details.
#
"""
Command line driver.

Every suite appends records (suite, case, residual, tolerance, pass) to
a report; some suites also produce tables.  The report is written as CSV
(astropy ascii.csv) or as a JSON summary with sorted keys and no
timestamps, so a run is reproducible from its configuration and seed.
The JSON summary also records the configured operator.

Exit status is 0 if every record passed, 1 otherwise and 2 for an
invalid configuration.
"""
import os
import sys
import json
import argparse
from concurrent.futures import ThreadPoolExecutor

import numpy as np
from astropy.table import Table

from ginga.misc import Bunch, log

from .util.errors import (UsageError, WcoLabError, BoundViolation,
                          OutOfScopeError)
from .util import mock_ball
from . import geometry as geo
from . import quadrature as quad
from . import hardy
from . import wco

DEFAULT_SEED = mock_ball.DEFAULT_SEED
SEED_ENV = 'WCO_LAB_SEED'

COMMANDS = ('identities', 'norms', 'pde', 'opnorm', 'adjoint')

RECORD_NAMES = ['suite', 'case', 'residual', 'tolerance', 'pass']
RECORD_DTYPES = ['U16', 'U64', 'f8', 'f8', 'bool']

# |phi(0)| along e_1 when --a is not given
DEFAULT_SHIFT = 0.5

# base tolerances, multiplied by --tol-scale
TOLERANCES = dict(
    jacobian_fd=1.0e-6,
    boundary_scaling=1.0e-10,
    distance_distortion=1.0e-10,
    jacobian_bounds=1.0e-12,
    involution=1.0e-12,
    round_trip=1.0e-12,
    cr_system=1.0e-6,
    poisson_norm=1.0e-2,
    poisson_norm_sup=1.0e-1,
    operator_norm=1.0e-2,
    pde=1.0e-4,
    derivatives=1.0e-5,
    opnorm_lower=1.0e-2,
    opnorm_upper=2.0e-2,
    essential=0.0,
    adjoint=1.0e-2,
    change_of_variables=1.0e-6,
    bound=1.0e-6,
)

# boundary data of the adjoint suite when --boundary is not given
DEFAULT_BOUNDARY = '1 + z1*z2 - 0.5*z1'

# residuals the negative witnesses must exceed
WITNESS_THRESHOLD = 1.0e-2

NUM_IDENTITY_POINTS = 1000
NUM_FD_POINTS = 100
FD_RADIUS = 0.5
PDE_RADIUS = 0.6
KERNEL_RADII = (0.0, 0.2, 0.4, 0.6, 0.8)
SWEEP_RADII = (0.0, 0.3, 0.6, 0.8)
NUM_SWEEP_FUNCTIONS = 20


def parse_exponent(text):
    if text.strip().lower() in ('inf', 'infinity'):
        return np.inf
    try:
        p = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError("bad exponent: %r" % (text))
    return p


def parse_vector(text):
    try:
        return np.array([float(v) for v in text.split(',')])
    except ValueError:
        raise argparse.ArgumentTypeError("bad vector: %r" % (text))


def parse_rotations(text):
    planes = []
    for item in text.split(';'):
        item = item.strip()
        if item == '':
            continue
        try:
            i, j, theta = item.split(',')
            planes.append((int(i), int(j), float(theta)))
        except ValueError:
            raise argparse.ArgumentTypeError("bad rotation %r, want i,j,theta" % (
                item))
    return planes


def make_parser():
    parser = argparse.ArgumentParser(
        prog='wco_lab',
        description="Verify the formula apparatus of weighted composition "
        "operators on harmonic Hardy spaces of the ball.")
    parser.add_argument("--cmd", dest="command", default='all',
                        choices=COMMANDS + ('all',),
                        help="Suite to run")
    parser.add_argument("--dim", dest="n", type=int, default=3,
                        help="Dimension n >= 2")
    parser.add_argument("--p", dest="p", type=parse_exponent, default=2.0,
                        help="Hardy space exponent (1 <= p, 'inf' allowed)")
    parser.add_argument("--a", dest="a", type=parse_vector, default=None,
                        help="Moebius centre a as x1,x2,... (|a| < 1)")
    parser.add_argument("--rot", dest="rot", type=parse_rotations,
                        default=[], help="Rotation as i,j,theta;...")
    parser.add_argument("--C", dest="C", type=float, default=1.0,
                        help="Weight constant C > 0")
    parser.add_argument("--boundary", dest="boundary",
                        default=DEFAULT_BOUNDARY,
                        help="Boundary data for the adjoint suite, e.g. "
                        "'1 + z1*z2 - 2*P[0.3,0,0]'")
    parser.add_argument("--quad", dest="quad", default='product',
                        choices=('mc', 'product'), help="Sphere rule kind")
    parser.add_argument("--samples", dest="samples", type=int,
                        default=100000, help="Monte Carlo node count")
    parser.add_argument("--order", dest="order", type=int, default=48,
                        help="Product rule order")
    parser.add_argument("--seed", dest="seed", type=int, default=DEFAULT_SEED,
                        help="Random seed (%s overrides)" % (SEED_ENV))
    parser.add_argument("--tol-scale", dest="tol_scale", type=float,
                        default=1.0, help="Multiply all tolerances")
    parser.add_argument("--format", dest="fmt", default='json',
                        choices=('csv', 'json'), help="Report format")
    parser.add_argument("--out", dest="out", default=None,
                        help="Report file (default: stdout)")
    parser.add_argument("--parallel", dest="parallel", type=int, nargs='?',
                        const=4, default=0,
                        help="Evaluate cases with this many threads")
    parser.add_argument("--loglevel", dest="loglevel", type=int, default=30,
                        help="Logging level")
    parser.add_argument("--stderr", dest="stderr", default=False,
                        action="store_true", help="Log to stderr")
    return parser


class RunConfig(object):
    """Validated run configuration."""

    def __init__(self, command='all', n=3, p=2.0, a=None, rot=None, C=1.0,
                 boundary=DEFAULT_BOUNDARY,
                 quad='product', samples=100000, order=48, seed=DEFAULT_SEED,
                 tol_scale=1.0, fmt='json', out=None, parallel=0,
                 loglevel=30, stderr=False):
        self.command = command
        self.n = n
        self.p = p
        if a is None:
            a = np.zeros(n)
            a[0] = DEFAULT_SHIFT
        self.a = np.asarray(a, dtype=float)
        self.rot = list(rot or [])
        self.C = C
        self.boundary = boundary
        self.quad = quad
        self.samples = samples
        self.order = order
        self.seed = seed
        self.tol_scale = tol_scale
        self.fmt = fmt
        self.out = out
        self.parallel = parallel
        self.loglevel = loglevel
        self.stderr = stderr
        self.check()

    @classmethod
    def from_args(cls, args, environ=None):
        if environ is None:
            environ = os.environ
        seed = args.seed
        if environ.get(SEED_ENV, '') != '':
            try:
                seed = int(environ[SEED_ENV])
            except ValueError:
                raise UsageError("%s is not an integer: %r" % (
                    SEED_ENV, environ[SEED_ENV]))
        return cls(command=args.command, n=args.n, p=args.p, a=args.a,
                   rot=args.rot, C=args.C, boundary=args.boundary,
                   quad=args.quad,
                   samples=args.samples, order=args.order, seed=seed,
                   tol_scale=args.tol_scale, fmt=args.fmt, out=args.out,
                   parallel=args.parallel, loglevel=args.loglevel,
                   stderr=args.stderr)

    def check(self):
        if self.n < 2:
            raise UsageError("dimension must be >= 2: --dim %d" % (self.n))
        if not self.p >= 1.0:
            raise UsageError("exponent must be >= 1: --p %g" % (self.p))
        if self.a.shape != (self.n,):
            raise UsageError("--a needs %d components, got %d" % (
                self.n, self.a.size))
        if not geo.norm(self.a) < 1.0:
            raise UsageError("--a must lie in the open ball: |a|=%g" % (
                geo.norm(self.a)))
        if not self.C > 0.0:
            raise UsageError("--C must be positive: %g" % (self.C))
        if self.quad == 'product' and self.n not in quad.PRODUCT_DIMENSIONS:
            raise UsageError("product rules support --dim 2..5; use --quad mc")
        if self.order < 2:
            raise UsageError("--order must be >= 2: %d" % (self.order))
        if self.samples < 1:
            raise UsageError("--samples must be >= 1: %d" % (self.samples))
        if not self.tol_scale > 0.0:
            raise UsageError("--tol-scale must be positive: %g" % (
                self.tol_scale))
        try:
            self.rotation = geo.givens_rotation(self.n, self.rot)
        except WcoLabError as e:
            raise UsageError("bad --rot: %s" % (str(e)))
        try:
            self.boundary_data = hardy.BoundaryData.parse(self.boundary,
                                                          self.n)
        except WcoLabError as e:
            raise UsageError("bad --boundary: %s" % (str(e)))

    @property
    def moebius(self):
        return geo.BallMoebius(self.rotation, self.a)

    def make_operator(self):
        return wco.WcoOperator.moebius(self.moebius, constant=self.C)

    def make_rule(self):
        if self.quad == 'mc':
            return quad.monte_carlo_rule(self.n, self.samples, seed=self.seed)
        return quad.product_rule(self.n, self.order)

    def tolerance(self, name):
        return TOLERANCES[name] * self.tol_scale


def _rel_err(est, closed):
    return abs(est - closed) / abs(closed)


class SuiteRunner(object):
    """
    Runs verification suites for one configuration and collects the
    report.
    """

    def __init__(self, cfg, logger=None):
        super(SuiteRunner, self).__init__()

        if logger is None:
            logger = log.get_logger('wco_lab', level=cfg.loglevel,
                                    log_stderr=cfg.stderr)
        self.logger = logger
        self.cfg = cfg

        self.records = []
        self.tables = {}
        self._rule = None

    @property
    def rule(self):
        if self._rule is None:
            self.logger.debug("building %s rule" % (self.cfg.quad))
            self._rule = self.cfg.make_rule()
        return self._rule

    def rng(self):
        return mock_ball.make_rng(self.cfg.seed)

    def map_cases(self, func, cases):
        """func over cases, threaded if --parallel; order is preserved."""
        if self.cfg.parallel and self.cfg.parallel > 1:
            with ThreadPoolExecutor(max_workers=self.cfg.parallel) as executor:
                return list(executor.map(func, cases))
        return [func(case) for case in cases]

    def record(self, suite, case, residual, tolerance, passed=None):
        residual = float(residual)
        if passed is None:
            passed = bool(residual <= tolerance)
        rec = Bunch.Bunch(suite=suite, case=case, residual=residual,
                          tolerance=float(tolerance), passed=bool(passed))
        if not rec.passed:
            self.logger.warning("%s/%s failed: residual %g, tolerance %g" % (
                suite, case, residual, tolerance))
        self.records.append(rec)
        return rec

    @property
    def all_passed(self):
        return all([rec.passed for rec in self.records])

    def cmd_identities(self):
        cfg = self.cfg
        m = cfg.moebius
        n = cfg.n
        rng = self.rng()
        self.logger.info("identities: n=%d |a|=%g" % (n, m.shift))

        x = mock_ball.random_points_in_ball(rng, NUM_IDENTITY_POINTS, n)
        y = mock_ball.random_points_in_ball(rng, NUM_IDENTITY_POINTS, n)
        widen_x = geo.boundary_tolerance(x, 1.0)
        widen_xy = np.maximum(widen_x, geo.boundary_tolerance(y, 1.0))

        res = geo.boundary_scaling_residual(m, x) / widen_x
        self.record('identities', 'boundary_scaling', np.max(res),
                    cfg.tolerance('boundary_scaling'))

        res = geo.distance_distortion_residual(m, x, y) / widen_xy
        self.record('identities', 'distance_distortion', np.max(res),
                    cfg.tolerance('distance_distortion'))

        lo, hi, ratio_hi = geo.jacobian_bounds(m)
        jx = geo.jacobian_scalar(m, x)
        jy = geo.jacobian_scalar(m, y)
        excess = np.concatenate([lo / jx - 1.0, jx / hi - 1.0,
                                 (jy / jx) / ratio_hi - 1.0])
        self.record('identities', 'jacobian_bounds',
                    max(0.0, np.max(excess)), cfg.tolerance('jacobian_bounds'))

        inner = x[geo.norm(x) <= geo.BOUNDARY_RADIUS]
        back = geo.eval_ball(geo.inverse_ball(m), geo.eval_ball(m, inner))
        self.record('identities', 'round_trip',
                    np.max(geo.norm(back - inner)), cfg.tolerance('round_trip'))

        twice = geo.eval_phi_a(m.a, geo.eval_phi_a(m.a, inner))
        self.record('identities', 'involution',
                    np.max(geo.norm(twice - inner)), cfg.tolerance('involution'))

        pts = mock_ball.random_points_in_ball(rng, NUM_FD_POINTS, n,
                                              radius=FD_RADIUS)
        D = geo.jacobian_matrix_fd(m, pts)
        j = geo.jacobian_scalar(m, pts)
        self.record('identities', 'jacobian_fd',
                    np.max(np.abs(geo.conformal_scale(D) - j) / j),
                    cfg.tolerance('jacobian_fd'))
        self.record('identities', 'cr_system',
                    np.max(geo.cr_residual(m, pts) / j ** 2),
                    cfg.tolerance('cr_system'))

        ok = geo.jacobian_sign_constant(m, pts)
        self.record('identities', 'jacobian_sign', 0.0 if ok else 1.0, 0.0)

    def cmd_norm_table(self):
        cfg = self.cfg
        n = cfg.n
        rule = self.rule
        self.logger.info("norms: n=%d p=%g rule=%s" % (n, cfg.p, repr(rule)))

        exponents = [1.0] if cfg.p == 1.0 else [1.0, cfg.p]
        cases = [(p, rho) for p in exponents for rho in KERNEL_RADII]

        def kernel_row(case):
            p, rho = case
            y = np.zeros(n)
            y[0] = rho
            closed = hardy.hp_norm_py_closed(y, p, n)
            est = hardy.hp_norm_estimate(hardy.HarmonicFn.extended_poisson(y),
                                         p, rule=rule)
            return dict(quantity='poisson_norm', n=n, p=p, radius=rho,
                        closed_form=closed, quadrature_estimate=est,
                        rel_err=_rel_err(est, closed))

        rows = self.map_cases(kernel_row, cases)

        m = cfg.moebius
        closed = wco.norm_formula(m, cfg.p, n, C=cfg.C)
        if np.isinf(cfg.p):
            W = wco.WcoOperator.moebius(m, constant=cfg.C)
            est = wco.hinf_bounds(W, rule)[0]
        else:
            est = wco.ratio_curve_max(m, cfg.p, C=cfg.C).value
        rows.append(dict(quantity='operator_norm', n=n, p=cfg.p,
                         radius=m.shift, closed_form=closed,
                         quadrature_estimate=est,
                         rel_err=_rel_err(est, closed)))

        for row in rows:
            if row['quantity'] == 'operator_norm':
                tol = cfg.tolerance('operator_norm')
            elif np.isinf(row['p']):
                # node max is a lower estimate of the sup
                tol = cfg.tolerance('poisson_norm_sup')
            else:
                tol = cfg.tolerance('poisson_norm')
            self.record('norms', "%s n=%d p=%g r=%g" % (
                row['quantity'], row['n'], row['p'], row['radius']),
                row['rel_err'], tol)

        self.tables['norms'] = rows

    def cmd_pde_check(self):
        cfg = self.cfg
        n = cfg.n
        if n < 3:
            self.logger.warning("PDE characterization needs n >= 3; "
                                "skipping for n=%d" % (n))
            return
        rng = self.rng()
        pts = mock_ball.random_points_in_ball(rng, NUM_FD_POINTS, n,
                                              radius=PDE_RADIUS)
        HF = hardy.HarmonicFn
        y = np.full(n, 0.3 / np.sqrt(n))
        families = [('constant', HF.polynomial('constant', n)),
                    ('coordinate', HF.polynomial('coordinate', n, 0)),
                    ('product', HF.polynomial('product', n, 0, 1)),
                    ('difference', HF.polynomial('difference', n, 0, 1)),
                    ('kernel', HF.extended_poisson(y))]

        cases = wco.positive_cases(n)
        cases.append(Bunch.Bunch(name='configured',
                                 W=cfg.make_operator()))
        tol = cfg.tolerance('pde')

        def positive(case):
            r1, r2, r3 = wco.pde_conditions_check(case.W, pts)
            scale = max(1.0, case.W.psi_zero)
            harm = max([wco.harmonicity_preservation_check(case.W, f, pts)
                        for name, f in families])
            r12 = max(np.max(r1), np.max(r2)) / scale
            return case.name, r12, np.max(r3), harm / scale

        for name, r12, r3, harm in self.map_cases(positive, cases):
            self.record('pde', name + ' conditions', max(r12, r3), tol)
            self.record('pde', name + ' harmonicity', harm, tol)

        def negative(case):
            r1, r2, r3 = wco.pde_conditions_check(case.W, pts)
            resid = max(np.max(r1), np.max(r2), np.max(r3))
            harm = wco.harmonicity_preservation_check(case.W, case.f, pts)
            return case.name, resid, harm

        for name, resid, harm in self.map_cases(negative,
                                                wco.witness_cases(n)):
            # a witness passes when it fails the characterization
            self.record('pde_witness', name + ' conditions', resid,
                        WITNESS_THRESHOLD, passed=resid > WITNESS_THRESHOLD)
            self.record('pde_witness', name + ' harmonicity', harm,
                        WITNESS_THRESHOLD, passed=harm > WITNESS_THRESHOLD)

        # closed-form derivatives of sphere reflections against FD
        for case in cases:
            phi = case.W.phi
            if not (isinstance(phi, geo.CanonicalMoebius) and
                    phi.epsilon == 2):
                continue
            r = np.sqrt(phi.alpha)
            lap, grad, D = wco.sphere_reflection_derivatives(phi.a, r, pts)
            psi = case.W.psi
            err = max(
                np.max(np.abs(lap - wco.laplacian_fd(phi, pts,
                                                     order=wco.CHECK_ORDER))),
                np.max(np.abs(grad - geo.gradient_fd(psi, pts))),
                np.max(np.abs(D - geo.jacobian_matrix_fd(phi, pts))))
            self.record('pde', case.name + ' derivatives', err,
                        cfg.tolerance('derivatives'))

    def sweep_functions(self, m):
        """Test functions for the quadrature upper sweep."""
        n = self.cfg.n
        HF = hardy.HarmonicFn
        b = wco.extremal_direction(m)
        fns = [HF.polynomial('constant', n),
               HF.polynomial('coordinate', n, 0),
               HF.polynomial('product', n, 0, 1),
               HF.polynomial('difference', n, 0, 1)]
        for t in SWEEP_RADII:
            for sign in (1, -1):
                if t == 0.0 and sign < 0:
                    continue
                fns.append(HF.extended_poisson(sign * t * b))
        rng = self.rng()
        while len(fns) < NUM_SWEEP_FUNCTIONS:
            z = mock_ball.random_points_in_ball(rng, 1, n, radius=0.8)[0]
            fns.append(HF.extended_poisson(z))
        return fns

    def cmd_opnorm(self):
        cfg = self.cfg
        n, p = cfg.n, cfg.p
        m = cfg.moebius
        W = wco.WcoOperator.moebius(m, constant=cfg.C)
        rule = self.rule
        closed = wco.norm_formula(m, p, n, C=cfg.C)
        self.logger.info("opnorm: n=%d p=%g |a|=%g closed=%.10g" % (
            n, p, m.shift, closed))

        if np.isinf(p):
            lower, upper = wco.hinf_bounds(W, rule)
        else:
            lower = wco.ratio_curve_max(m, p, C=cfg.C).value
            ratios = self.map_cases(
                lambda f: wco.quadrature_ratio(W, f, p, rule),
                self.sweep_functions(m))
            upper = max(ratios)

        self.record('opnorm', 'lower', max(0.0, 1.0 - lower / closed),
                    cfg.tolerance('opnorm_lower'))
        self.record('opnorm', 'upper', max(0.0, upper / closed - 1.0),
                    cfg.tolerance('opnorm_upper'))

        lo_ok = lower >= closed * (1.0 - cfg.tolerance('opnorm_lower'))
        hi_ok = upper <= closed * (1.0 + cfg.tolerance('opnorm_upper'))
        row = dict(n=n, p=p, radius=m.shift, closed_form=closed,
                   lower_curve_max=lower, upper_sweep_max=upper,
                   essential=np.nan, verdict=bool(lo_ok and hi_ok))
        try:
            ess = wco.essential_norm_formula(m, p, n, C=cfg.C)
            row['essential'] = ess
            self.record('opnorm', 'essential', abs(ess - closed),
                        cfg.tolerance('essential'))
        except OutOfScopeError as e:
            self.logger.info("no essential norm: %s" % (str(e)))
        self.tables['opnorm'] = [row]

    def cmd_adjoint(self):
        cfg = self.cfg
        n = cfg.n
        m = cfg.moebius
        W = wco.WcoOperator.moebius(m, constant=cfg.C)
        rule = self.rule
        rng = self.rng()
        tol = cfg.tolerance('adjoint')

        pairs = [(mock_ball.random_points_in_ball(rng, 1, n, radius=0.5)[0],
                  mock_ball.random_points_in_ball(rng, 1, n, radius=0.5)[0])
                 for i in range(3)]
        pairs.insert(0, (np.zeros(n), np.zeros(n)))

        def adjoint_case(pair):
            z, y = pair
            kernel = wco.adjoint_on_kernel(W, z)(y)
            integral = wco.adjoint_integral(
                W, hardy.BoundaryData.poisson(z), y, rule)
            lhs, rhs = wco.duality_check(W, z, y, rule)
            return _rel_err(integral, kernel), _rel_err(lhs, rhs)

        for k, (r_int, r_dual) in enumerate(self.map_cases(adjoint_case,
                                                           pairs)):
            self.record('adjoint', 'kernel_integral %d' % (k), r_int, tol)
            self.record('adjoint', 'duality %d' % (k), r_dual, tol)

        data = cfg.boundary_data
        self.logger.info("adjoint: boundary data %s" % (data.label))
        centres = [np.zeros(n), 0.4 * geo.as_vector(m.phi_zero)]
        for k, y in enumerate(centres):
            direct = wco.adjoint_integral(W, data, y, rule)
            moved = wco.adjoint_integral_moebius(W, data, y, rule)
            self.record('adjoint', 'boundary_data %d' % (k),
                        abs(direct - moved) / max(1.0, abs(moved)), tol)
        self.record('adjoint', 'change_of_variables',
                    hardy.change_of_variables_check(m, data, rule),
                    cfg.tolerance('change_of_variables'))

        bound_tol = cfg.tolerance('bound')
        eta = mock_ball.random_sphere_points(rng, 1, n)[0]
        for r in (0.0, 0.5):
            try:
                lhs, rhs = wco.poisson_sup_inequality_check(W, rule, r, eta,
                                                            tol=bound_tol)
                self.record('adjoint', 'poisson_sup r=%g' % (r),
                            max(0.0, lhs / rhs - 1.0), bound_tol)
            except BoundViolation as e:
                self.record('adjoint', 'poisson_sup r=%g' % (r),
                            e.lhs / e.rhs - 1.0, bound_tol)

        mu = mock_ball.random_measure(rng, n, 5)
        try:
            ratio, bound = wco.upper_bound_h1(W, mu, rule, radii=SWEEP_RADII,
                                              tol=bound_tol)
            self.record('adjoint', 'h1_bound', max(0.0, ratio / bound - 1.0),
                        bound_tol)
        except BoundViolation as e:
            self.record('adjoint', 'h1_bound', e.lhs / e.rhs - 1.0, bound_tol)

    def run(self):
        cmds = dict(identities=self.cmd_identities,
                    norms=self.cmd_norm_table,
                    pde=self.cmd_pde_check,
                    opnorm=self.cmd_opnorm,
                    adjoint=self.cmd_adjoint)
        names = COMMANDS if self.cfg.command == 'all' else [self.cfg.command]
        for name in names:
            try:
                cmds[name]()

            except WcoLabError as e:
                # a suite that cannot finish fails; the others still run
                self.logger.error("suite %s aborted: %s" % (name, str(e)))
                self.record(name, "error: %s" % (e.__class__.__name__),
                            np.inf, 0.0, passed=False)
        return self.all_passed

    def report_rows(self):
        return [{'suite': rec.suite, 'case': rec.case,
                 'residual': rec.residual, 'tolerance': rec.tolerance,
                 'pass': rec.passed} for rec in self.records]

    def write_report(self, out=None, fmt=None):
        if out is None:
            out = self.cfg.out
        if fmt is None:
            fmt = self.cfg.fmt
        if fmt == 'json':
            text = report_json(self.report_rows(), self.tables,
                               self.all_passed,
                               operator=wco.operator_record(
                                   self.cfg.make_operator()))
            if out is None:
                sys.stdout.write(text)
            else:
                with open(out, 'w') as out_f:
                    out_f.write(text)
            return

        write_table(rows_to_table(self.report_rows(), RECORD_NAMES,
                                  dtype=RECORD_DTYPES), out)
        for name, rows in sorted(self.tables.items()):
            tbl = rows_to_table(rows, list(rows[0].keys()))
            if out is None:
                sys.stdout.write("\n")
                write_table(tbl, None)
            else:
                stem, ext = os.path.splitext(out)
                write_table(tbl, "%s_%s%s" % (stem, name, ext or '.csv'))


def _plain(val):
    if isinstance(val, (bool, np.bool_)):
        return bool(val)
    if isinstance(val, (int, np.integer)):
        return int(val)
    if isinstance(val, (float, np.floating)):
        return float(val)
    return val


def report_json(rows, tables, passed, operator=None):
    doc = dict(passed=bool(passed), operator=operator,
               records=[{k: _plain(v) for k, v in row.items()} for row in rows],
               tables={name: [{k: _plain(v) for k, v in row.items()}
                              for row in trows]
                       for name, trows in tables.items()})
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def rows_to_table(rows, names, dtype=None):
    if len(rows) == 0:
        return Table(names=names, dtype=dtype)
    cols = [[_plain(row[name]) for row in rows] for name in names]
    return Table(cols, names=names)


def write_table(tbl, out):
    if out is None:
        tbl.write(sys.stdout, format='ascii.csv')
    else:
        tbl.write(out, format='ascii.csv', overwrite=True)


def main(argv=None, environ=None):
    parser = make_parser()
    args = parser.parse_args(argv)

    logger = log.get_logger('wco_lab', level=args.loglevel,
                            log_stderr=args.stderr)
    try:
        cfg = RunConfig.from_args(args, environ=environ)

    except UsageError as e:
        sys.stderr.write("wco_lab: %s\n" % (str(e)))
        return 2

    runner = SuiteRunner(cfg, logger=logger)
    try:
        passed = runner.run()
    finally:
        runner.write_report()
    return 0 if passed else 1


if __name__ == '__main__':
    sys.exit(main(sys.argv[1:]))
