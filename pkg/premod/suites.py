"""Invariant suites run by `premod verify`.

Each suite queues named checks; a check returns a residual (or a
(residual, value) pair) that passes when it is at most its tolerance.
Checks run on a thread pool and are reported in the order they were
queued.
"""
import cmath
import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from tqdm import tqdm

from premod import asymptotics, counting, painleve, premodular, recursion, zeros
from premod.elliptic import (cusp_expansions, delta_product, j_expansion,
                             lattice_data, make_point, torsion_points, wp,
                             wp_prime)
from premod.errors import PoleProximityError, PremodError
from premod.report import ERROR, FAIL, PASS

logger = logging.getLogger(__name__)

SUITES = ('elliptic', 'recursion', 'premodular', 'painleve', 'asymptotics',
          'counting', 'zeros')

RHO = cmath.exp(1j * math.pi / 3)
ORDER_POINTS = (Fraction(1, 3), Fraction(1, 4), Fraction(1, 5), Fraction(2, 5))
ZERO_RECT = zeros.Rect(-0.5, 0.5, 0.7, 2.0)


def _gap(a, b):
    a, b = complex(a), complex(b)
    scale = max(abs(a), abs(b))
    return abs(a - b) / scale if scale else 0.0


class SuiteRunner(object):
    """
    Collects checks and runs them.

    Attributes:
        report (Report): where results go
        n_max (int): largest level the suites exercise
        rng (random.Random): seeded source of random samples
    """
    def __init__(self, report, config, n_max):
        self.report = report
        self.config = config
        self.n_max = n_max
        self.rng = random.Random(config.seed)
        self.checks = []

    def check(self, name, fn, tolerance, above=False):
        self.checks.append((name, fn, tolerance, above))

    def point(self):
        return make_point(self.rng.uniform(0.05, 0.95), self.rng.uniform(0.05, 0.95))

    def tau(self, im_lo=0.5, im_hi=2.0):
        return complex(self.rng.uniform(-0.5, 0.5), self.rng.uniform(im_lo, im_hi))

    def _run_one(self, item):
        name, fn, tolerance, above = item
        try:
            out = fn()
        except PremodError as e:
            return name, None, None, tolerance, ERROR, '%s: %s' % (type(e).__name__, e)
        residual, value = out if isinstance(out, tuple) else (out, None)
        ok = residual >= tolerance if above else residual <= tolerance
        return name, value, residual, tolerance, PASS if ok else FAIL, None

    def run(self):
        logger.info('***** Running %d checks *****', len(self.checks))
        logger.info('  threads = %d', self.config.threads)
        logger.info('  seed = %d', self.config.seed)
        bar = tqdm(total=len(self.checks), desc='verify', disable=None)

        def task(item):
            result = self._run_one(item)
            bar.update(1)
            return result

        if self.config.threads > 1:
            with ThreadPoolExecutor(max_workers=self.config.threads) as executor:
                results = list(executor.map(task, self.checks))
        else:
            results = [task(item) for item in self.checks]
        bar.close()
        for (name, value, residual, tolerance, status, message) in results:
            self.report.add(name, value=value, residual=residual, tolerance=tolerance,
                            status=status, message=message)
            if status != PASS:
                logger.warning('  %s: %s %s', name, status, message or residual)
        self.checks = []


def elliptic_suite(run):
    tau = run.tau()
    ld = lattice_data(tau)

    def e_sum():
        return abs(ld.e1 + ld.e2 + ld.e3) / max(abs(ld.e1), abs(ld.e2), abs(ld.e3))

    def legendre():
        return abs(ld.tau * ld.eta1 - ld.eta2 - 2j * math.pi) / (2 * math.pi)

    z = run.rng.uniform(0.1, 0.9) + tau * run.rng.uniform(0.1, 0.4)

    def wp_ode():
        p, dp = wp(z, ld), wp_prime(z, ld)
        return _gap(dp ** 2, 4 * p ** 3 - ld.g2 * p - ld.g3)

    def j_cusp():
        high = lattice_data(3j)
        return _gap(high.j, j_expansion(high.q))

    def e_cusp():
        high = lattice_data(6j)
        expected = cusp_expansions(complex(high.q), cmath.exp(1j * math.pi * 6j))
        return max(_gap(x, y) for (x, y) in zip((high.e1, high.e2, high.e3), expected))

    run.check('elliptic/e_sum', e_sum, 1e-10)
    run.check('elliptic/legendre', legendre, 1e-10)
    run.check('elliptic/delta_product', lambda: _gap(ld.delta, delta_product(ld)), 1e-9)
    run.check('elliptic/wp_ode', wp_ode, 1e-8)
    run.check('elliptic/j_expansion', j_cusp, 1e-9)
    run.check('elliptic/cusp_expansions', e_cusp, 1e-9)


def recursion_suite(run):
    division = run.config.tol('division')
    for n in range(1, run.n_max + 1):
        pt, tau = run.point(), run.tau()

        def invariants(n=n, pt=pt, tau=tau):
            level = recursion.build_to(n, pt, lattice_data(tau))
            report = recursion.level_invariants(level)
            worst = max(v for (k, v) in report.items()
                        if k not in ('degree', 'no_common_zero'))
            return worst, report

        def interpolation(n=n, pt=pt, tau=tau):
            return recursion.cross_check(recursion.build_to(n, pt, lattice_data(tau)))

        def residues(n=n, pt=pt, tau=tau):
            level = recursion.build_to(n, pt, lattice_data(tau))
            return max(recursion.pole_residue_identity(level))

        def margin(n=n, pt=pt, tau=tau):
            level = recursion.build_to(n, pt, lattice_data(tau))
            return recursion.level_invariants(level)['no_common_zero']

        run.check('recursion/invariants/n=%d' % n, invariants, division)
        run.check('recursion/interpolation/n=%d' % n, interpolation, run.config.tol('cross_check'))
        run.check('recursion/pole_residues/n=%d' % n, residues, 1e-6)
        run.check('recursion/no_common_zero/n=%d' % n, margin,
                  run.config.tol('pole_proximity'), above=True)


def premodular_suite(run, samples=200):
    for n in range(1, min(4, run.n_max) + 1):
        cases = [(run.point(), run.tau(0.5, 5.0)) for _ in range(samples)]

        def closed(n=n, cases=cases):
            return max(_gap(premodular.z_n(n, pt, tau).value,
                            premodular.z_n_closed(n, pt, tau).value) for (pt, tau) in cases)

        run.check('premodular/closed_form/n=%d' % n, closed, 1e-7)

    pt = make_point(Fraction(1, 5), Fraction(2, 5), 5)
    for n in range(1, min(3, run.n_max) + 1):
        tau = run.tau(1.0, 2.0)
        for (label, matrix) in (('T', ((1, 1), (0, 1))), ('S', ((0, -1), (1, 0)))):
            run.check('premodular/modular_%s/n=%d' % (label, n),
                      lambda n=n, tau=tau, matrix=matrix:
                      premodular.modular_check(n, pt, tau, matrix), 1e-8)

    tau = run.tau(1.0, 2.0)

    def product_t():
        a = premodular.m_product(2, 5, tau)
        b = premodular.m_product(2, 5, tau + 1)
        return abs(a.log_abs - b.log_abs) + abs(math.remainder(a.arg - b.arg, 2 * math.pi))

    run.check('premodular/m_product_T', product_t, 1e-8)

    def product_conjugate():
        a = premodular.m_product(2, 5, tau)
        b = premodular.m_product(2, 5, -tau.conjugate())
        return abs(a.log_abs - b.log_abs) + abs(math.remainder(a.arg + b.arg, 2 * math.pi))

    run.check('premodular/m_product_conjugate', product_conjugate, 1e-8)


def _sampled(run, fn, samples):
    """Largest fn(pt, tau) over `samples` draws, skipping draws near a pole."""
    candidates = [(run.point(), run.tau(0.8, 1.6)) for _ in range(2 * samples)]

    def call():
        residuals = []
        for (pt, tau) in candidates:
            try:
                residuals.append(fn(pt, tau))
            except PoleProximityError:
                continue
            if len(residuals) == samples:
                break
        if len(residuals) < samples:
            raise PoleProximityError('only %d of %d draws were away from the poles'
                                     % (len(residuals), samples))
        return max(residuals), len(residuals)
    return call


def _retrying(run, fn, attempts=5):
    """Calls fn(pt, tau) on the drawn samples until one is far from the poles."""
    candidates = [(run.point(), run.tau(0.8, 1.6)) for _ in range(attempts)]

    def call():
        for (pt, tau) in candidates[:-1]:
            try:
                return fn(pt, tau)
            except PoleProximityError:
                continue
        return fn(*candidates[-1])
    return call


def _random_state(rng):
    def c():
        return complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
    return painleve.PviState(c(), c(), c(), painleve.ThetaParams(*[c() for _ in range(5)]))


def painleve_suite(run, samples=50):
    for j in range(5):
        st = _random_state(run.rng)

        def involution(j=j, st=st):
            back = painleve.okamoto_apply(j, painleve.okamoto_apply(j, st))
            return max([_gap(back.lam, st.lam), _gap(back.mu, st.mu)]
                       + [_gap(x, y) for (x, y) in zip(back.theta, st.theta)])

        run.check('painleve/kappa%d_squared' % j, involution, 1e-10)

    def kappa5():
        st = painleve.PviState(0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.5j, painleve.theta_n(2))
        theta = painleve.okamoto_apply(5, st).theta
        th = st.theta
        expected = (th.theta0 - 1, th.theta1, th.theta2, th.theta3, th.theta4 + 2)
        return 0.0 if tuple(theta) == expected else 1.0

    run.check('painleve/kappa5_parameters', kappa5, 0.0)
    for n in range(7):
        def chain(n=n):
            st = painleve.PviState(0.3 + 0.2j, 0.7 - 0.4j, 1.1 + 0.5j, painleve.theta_n(0))
            return 0.0 if painleve.okamoto_chain(n, st).theta == painleve.theta_n(n) else 1.0
        run.check('painleve/kappa_chain/n=%d' % n, chain, 0.0)

    for n in range(1, max(5, run.n_max) + 1):
        def lift(pt, tau, n=n):
            st = painleve.sample_state(painleve.pvi_sample(0, pt, tau))
            for _ in range(n):
                st = painleve.lift_step(st)
            sample = painleve.pvi_sample(n, pt, tau)
            if sample.flagged:
                raise PoleProximityError('flagged sample')
            return max(_gap(st.lam, sample.lam), _gap(st.mu, sample.mu))
        run.check('painleve/lift_vs_sample/n=%d' % n, _retrying(run, lift), 1e-6)

    for n in range(run.n_max + 1):
        run.check('painleve/hamiltonian/n=%d' % n,
                  _sampled(run, lambda pt, tau, n=n:
                           max(painleve.hamiltonian_residual(n, pt, tau)), samples), 1e-4)
        run.check('painleve/pvi/n=%d' % n,
                  _sampled(run, lambda pt, tau, n=n: painleve.pvi_residual(n, pt, tau), samples),
                  1e-3)

    for n in range(7):
        def quarter(n=n):
            q = painleve.quarter_family(n, 1.2j)
            return max(q.lam_gap, q.product_gap * 10), complex(q.lam)
        run.check('painleve/quarter_family/n=%d' % n, quarter, 1e-7)

    def quarter_lambda0():
        q = painleve.quarter_family(0, 3j)
        return _gap(q.lam, painleve.quarter_lambda0_expansion(math.exp(-3 * math.pi)))

    run.check('painleve/quarter_lambda0_expansion', quarter_lambda0, 1e-6)
    for n in range(3):
        run.check('painleve/quarter_mu_expansion/n=%d' % n,
                  lambda n=n: _gap(painleve.quarter_family(n, 3j).mu,
                                   painleve.quarter_mu_expansion(n, math.exp(-3 * math.pi))),
                  1e-10)

    pt, tau = make_point(Fraction(1, 5), Fraction(2, 5)), 0.1 + 1.3j
    for n in range(3):
        run.check('painleve/closed_wp/n=%d' % n,
                  lambda n=n: _gap(painleve.pvi_sample(n, pt, tau).wp_p,
                                   painleve.wp_p_closed(n, pt, tau)), 1e-7)

    def t_cusp():
        ld = lattice_data(8j)
        return abs(complex(painleve.t_of_tau(ld)) - painleve.t_expansion(cmath.exp(-8 * math.pi)))

    run.check('painleve/t_expansion', t_cusp, 1e-8)

    def pole_limit():
        limit = painleve.pole_limit_check(2, make_point(Fraction(1, 3), Fraction(1, 3)), RHO)
        return abs(limit.limit - float(limit.expected)), limit.limit

    run.check('painleve/pole_limit/n=2', pole_limit, 1e-3)


def asymptotics_suite(run, samples=5):
    for n in range(1, 9):
        ss = [complex(run.rng.uniform(-1, 1), run.rng.uniform(-1, 1)) for _ in range(samples)]
        run.check('asymptotics/identities/n=%d' % n,
                  lambda n=n, ss=ss: max(max(asymptotics.limit_identities(n, s).values())
                                         for s in ss), 1e-10)
        run.check('asymptotics/limit_routes/n=%d' % n,
                  lambda n=n, ss=ss: max(asymptotics.check_limit_routes(n, s) for s in ss), 1e-10)
        run.check('asymptotics/c_identity/n=%d' % n,
                  lambda n=n, ss=ss: max(_gap(asymptotics.c_coeff(n, s),
                                              asymptotics.c_from_limits(n, s)) for s in ss),
                  1e-10)

    pt = make_point(Fraction(1, 5), Fraction(1, 5))
    for n in range(1, min(4, run.n_max) + 1):
        run.check('asymptotics/limit/n=%d' % n,
                  lambda n=n: asymptotics.limit_convergence(n, pt, [6j, 12j]), 1e-3)
    for n in range(min(3, run.n_max) + 1):
        run.check('asymptotics/c_ratio/n=%d' % n,
                  lambda n=n: abs(asymptotics.c_ratio(n, pt, 10j) - 1), 0.05)

    for n in range(1, 7):
        for r in ORDER_POINTS:
            for s in (0, Fraction(1, 2)):
                def order(n=n, r=r, s=s):
                    est = asymptotics.vanishing_order(n, make_point(r, s))
                    return (abs(est.slope_order - float(asymptotics.expected_order(n, s))),
                            est.slope_order)
                run.check('asymptotics/order/n=%d/r=%s/s=%s' % (n, r, s), order, 0.05)
    for n in range(1, 6):
        def lead(n=n):
            est = asymptotics.vanishing_order(n, painleve.QUARTER_POINT)
            return _gap(est.leading_coeff, asymptotics.quarter_leading_coeff(n)), est.leading_coeff
        run.check('asymptotics/quarter_leading/n=%d' % n, lead, 1e-3)
    for (n, N) in ((1, 3), (1, 4), (2, 3), (2, 4), (2, 5), (3, 3)):
        def total(n=n, N=N):
            result = asymptotics.total_order(n, N)
            return float(abs(result.total - result.expected)), result.total
        run.check('asymptotics/total_order/n=%d/N=%d' % (n, N), total, 0.0)
    run.check('asymptotics/quarter_identities/n=3',
              lambda: max(asymptotics.quarter_identities(3, 4j)), 1e-7)
    for n in range(1, 5):
        def conservation(n=n):
            got, expected = asymptotics.order_conservation(n, Fraction(1, 3))
            return float(abs(got - expected)), float(got)
        run.check('asymptotics/order_conservation/n=%d' % n, conservation, 0.0)
    for n in range(1, 4):
        def g_order(n=n):
            est = asymptotics.quarter_g_order(n)
            expected = n * (n + 1) // 2 - counting.ab_coeffs(n)[0]
            return abs(est.slope_order - expected), est.slope_order
        run.check('asymptotics/quarter_g_order/n=%d' % n, g_order, 0.05)
    for n in (1, 2):
        run.check('asymptotics/no_rational_zero/n=%d' % n,
                  lambda n=n: asymptotics.alpha_no_rational_zero(n, N_max=8)[1], 1e-6, above=True)


def counting_suite(run, n_top=10, N_top=30):
    def parity():
        bad = 0
        for n in range(1, n_top + 1):
            for N in range(3, N_top + 1):
                if not counting.count_L(n, N).parity_ok:
                    bad += 1
        return float(bad)

    def u_chain():
        bad = 0
        for n in range(1, n_top + 1):
            for N in range(3, N_top + 1):
                if counting.count_U(n, N, counting.vinf_pred(n, N)) != counting.count_L(n, N).L:
                    bad += 1
        return float(bad)

    def shortcut():
        return float(sum(1 for n in range(1, n_top + 1) for N in range(4, N_top + 1, 4)
                         if not counting.count_L(n, N).shortcut_ok))

    def values():
        got = (counting.count_L(1, 3).L, counting.count_L(2, 5).L, counting.count_L(2, 4).L)
        return (0.0 if got == (1, 1, 0) else 1.0), list(got)

    run.check('counting/parity_relation', parity, 0.0)
    run.check('counting/u_chain', u_chain, 0.0)
    run.check('counting/four_divides_N', shortcut, 0.0)
    run.check('counting/values', values, 0.0)


def _simple_zeros(n, N):
    """Locates the zeros of Z^(n) over Q(N) in ZERO_RECT; refine_zero rejects non-simple ones."""
    seen = set()
    found = 0
    for pt in torsion_points(N):
        reduced, _ = premodular.sign_reduce(pt, n)
        if (reduced.r, reduced.s) in seen:
            continue
        seen.add((reduced.r, reduced.s))
        records = zeros.locate_zeros(lambda tau, pt=reduced: premodular.z_n(n, pt, tau).value,
                                     ZERO_RECT)
        found += len(records)
    return 0.0, found


def zeros_suite(run):
    quarter = painleve.QUARTER_POINT

    def no_zeros_high():
        rect = zeros.Rect(0.1, 0.9, 5.0, 9.0)
        return float(zeros.winding_count(lambda tau: premodular.z_n(1, quarter, tau).value, rect))

    def hexagonal_zero():
        pt = make_point(Fraction(1, 3), Fraction(1, 3))
        record = zeros.refine_zero(lambda tau: premodular.z_n(1, pt, tau).value, 0.52 + 0.85j)
        return abs(record.tau0 - RHO), record.tau0

    run.check('zeros/none_near_cusp', no_zeros_high, 0.0)
    run.check('zeros/hexagonal_zero', hexagonal_zero, 1e-7)
    for n in range(1, 4):
        for N in range(3, 6):
            run.check('zeros/simple/n=%d/N=%d' % (n, N),
                      lambda n=n, N=N: _simple_zeros(n, N), 0.0)
    for (n, N) in ((1, 4), (1, 5), (2, 4), (2, 5), (3, 4)):
        def fit(n=n, N=N):
            result = zeros.ell_degree_fit(n, N)
            return float(abs(result.degree - counting.count_L(n, N).L)), result.degree
        run.check('zeros/ell_degree/n=%d/N=%d' % (n, N), fit, 0.0)


SUITE_FUNCTIONS = {
    'elliptic': elliptic_suite,
    'recursion': recursion_suite,
    'premodular': premodular_suite,
    'painleve': painleve_suite,
    'asymptotics': asymptotics_suite,
    'counting': counting_suite,
    'zeros': zeros_suite,
}


def run_suites(names, report, config, n_max):
    """Queue and run the named suites; returns the runner."""
    runner = SuiteRunner(report, config, n_max)
    for name in names:
        logger.info('***** Suite %s *****', name)
        SUITE_FUNCTIONS[name](runner)
        runner.run()
    return runner
