"""Painleve VI solutions built from the polynomial ladder.

For a point (r, s) and level n the ladder gives, with X = Z_{r,s}(tau),

    lambda = R_n / (Q_{n-2} Q_n),   mu = Q_{n-2} Q_{n-1} Q_n / G_n

and wp(p) = (e2 - e1) lambda + e1. As functions of t = (e3 - e1)/(e2 - e1)
they solve the Hamiltonian system of PVI with theta = theta^n.
"""
import logging
from collections import namedtuple
from fractions import Fraction

from premod import config
from premod.backend import backend_for_order, get_backend
from premod.counting import ab_coeffs
from premod.elliptic import hecke_Z, make_point, modular_lambda
from premod.errors import (DomainError, PoleProximityError,
                           SingularTransformationError)
from premod.premodular import as_lattice, z_n_closed
from premod.recursion import build_to

logger = logging.getLogger(__name__)


ThetaParams = namedtuple('ThetaParams', 'theta0 theta1 theta2 theta3 theta4')

PviState = namedtuple('PviState', 't lam mu theta')

PviSample = namedtuple('PviSample', 'n point tau t lam mu wp_p flagged')

PoleLimit = namedtuple('PoleLimit', 'kind expected samples limit')

QuarterCheck = namedtuple('QuarterCheck', 'n tau lam mu lam_pred lam_gap product_gap')

QUARTER_POINT = make_point(Fraction(1, 4), 0)

# Coefficients of t in powers of q^(1/2) near the cusp.
T_SERIES = (1, -16, 128, -704, 3072, -11488, 38400, -117632, 335872)


def theta_n(n):
    """theta^n = (-(n+1)/2, 1/2, 1/2, 1/2, n + 1/2), exactly."""
    half = Fraction(1, 2)
    return ThetaParams(Fraction(-(n + 1), 2), half, half, half, n + half)


def theta_sum(theta):
    """2 theta0 + theta1 + theta2 + theta3 + theta4, which is 1 on the family."""
    return 2 * theta.theta0 + theta.theta1 + theta.theta2 + theta.theta3 + theta.theta4


def pvi_params(theta):
    """(alpha, beta, gamma, delta) of PVI from theta."""
    return (theta.theta4 ** 2 / 2, -theta.theta1 ** 2 / 2,
            theta.theta2 ** 2 / 2, (1 - theta.theta3 ** 2) / 2)


def t_of_tau(ld):
    return modular_lambda(ld)


def t_expansion(sqrt_q):
    """t as a truncated series in q^(1/2) = exp(pi i tau)."""
    total = 0
    for (k, c) in enumerate(T_SERIES):
        total = total + c * sqrt_q ** k
    return total


def _coerce(value, like):
    """Fractions become numbers of the same kind as `like`."""
    if isinstance(value, Fraction):
        ctx = getattr(like, 'context', None)
        if ctx is not None:
            return ctx.mpf(value.numerator) / value.denominator
        return value.numerator / value.denominator
    return value


def _theta(st):
    return [_coerce(x, st.lam) for x in st.theta]


def hamiltonian(st):
    """
    The PVI Hamiltonian K(lambda, mu, t) for the parameters st.theta.

    t(t-1) K = lambda(lambda-1)(lambda-t) mu^2 + theta0(theta0+theta4)(lambda-t)
               - [theta1 (lambda-1)(lambda-t) + theta2 lambda(lambda-t)
                  + (theta3-1) lambda(lambda-1)] mu
    """
    th0, th1, th2, th3, th4 = _theta(st)
    lam, mu, t = st.lam, st.mu, st.t
    linear = th1 * (lam - 1) * (lam - t) + th2 * lam * (lam - t) + (th3 - 1) * lam * (lam - 1)
    value = lam * (lam - 1) * (lam - t) * mu ** 2 + th0 * (th0 + th4) * (lam - t) - linear * mu
    return value / (t * (t - 1))


def hamiltonian_gradient(st):
    """(dK/dlambda, dK/dmu) at the state."""
    th0, th1, th2, th3, th4 = _theta(st)
    lam, mu, t = st.lam, st.mu, st.t
    denom = t * (t - 1)
    linear = th1 * (lam - 1) * (lam - t) + th2 * lam * (lam - t) + (th3 - 1) * lam * (lam - 1)
    dmu = 2 * lam * (lam - 1) * (lam - t) * mu - linear
    dlinear = th1 * (2 * lam - 1 - t) + th2 * (2 * lam - t) + (th3 - 1) * (2 * lam - 1)
    dlam = (3 * lam ** 2 - 2 * (1 + t) * lam + t) * mu ** 2 + th0 * (th0 + th4) - dlinear * mu
    return dlam / denom, dmu / denom


def _shift(den, coef, k):
    if coef != 0 and abs(den) == 0:
        raise SingularTransformationError('kappa%d: vanishing denominator' % k)
    return coef / den if coef != 0 else 0


def _kappa(k, st):
    th = st.theta
    lam, mu, t = st.lam, st.mu, st.t
    if k == 0:
        c = _coerce(th.theta0, lam)
        theta = ThetaParams(-th.theta0, th.theta1 + th.theta0, th.theta2 + th.theta0,
                            th.theta3 + th.theta0, th.theta4 + th.theta0)
        return PviState(t, lam + _shift(mu, c, 0), mu, theta)
    if k == 4:
        theta = ThetaParams(th.theta0 + th.theta4, th.theta1, th.theta2, th.theta3, -th.theta4)
        return PviState(t, lam, mu, theta)
    # k = 1, 2, 3 flip theta_k and shift mu by theta_k over lambda - {0, 1, t}
    values = list(th)
    values[0] = th.theta0 + th[k]
    values[k] = -th[k]
    den = lam - (0, 1, t)[k - 1]
    return PviState(t, lam, mu - _shift(den, _coerce(th[k], lam), k), ThetaParams(*values))


# kappa5 = kappa0 (kappa3 kappa2 kappa1 kappa0)^2 kappa4, applied right to left
KAPPA5_ORDER = (4, 0, 1, 2, 3, 0, 1, 2, 3, 0)

# kappa^{0,1} = kappa0 kappa3 kappa2 kappa1
KAPPA01_ORDER = (1, 2, 3, 0)


def okamoto_apply(k, st):
    """
    Apply the Okamoto transformation kappa_k, k = 0..5, to (theta, lambda, mu).

    Args:
        k (int): which transformation
        st (PviState): the state; theta may hold Fractions, which stay exact
    Returns:
        PviState
    Raises:
        SingularTransformationError: a denominator the map divides by is zero
    """
    if k == 5:
        for j in KAPPA5_ORDER:
            st = _kappa(j, st)
        return st
    if k not in (0, 1, 2, 3, 4):
        raise DomainError('unknown Okamoto transformation kappa%s' % k)
    return _kappa(k, st)


def okamoto_chain(n, st):
    """kappa^{0,n}: kappa5^m kappa^{0,1} for n = 2m+1, kappa5^m for n = 2m."""
    if n < 0:
        raise DomainError('okamoto_chain needs n >= 0, got %d' % n)
    if n % 2 == 1:
        for j in KAPPA01_ORDER:
            st = _kappa(j, st)
    for _ in range(n // 2):
        st = okamoto_apply(5, st)
    return st


def _nonzero(x, what):
    if abs(x) == 0:
        raise SingularTransformationError('lift step: %s vanishes' % what)
    return x


def lift_step(prev):
    """
    Lift a level n-1 solution to level n:

        L       = lambda + (n-1)/(2 mu)
        mu_n    = mu - n/2 (1/L + 1/(L-1) + 1/(L-t))
        lambda_n = L + (n+1)/(2 mu_n)

    The level is read off theta4 = n - 1/2 of the input state.
    """
    n = int(prev.theta.theta4 + Fraction(1, 2))
    lam, mu, t = prev.lam, prev.mu, prev.t

    def half(k):
        return _coerce(Fraction(k, 2), lam)

    L = lam + half(n - 1) / _nonzero(mu, 'mu')
    inv = 1 / _nonzero(L, 'L') + 1 / _nonzero(L - 1, 'L - 1') + 1 / _nonzero(L - t, 'L - t')
    mu_n = mu - half(n) * inv
    lam_n = L + half(n + 1) / _nonzero(mu_n, 'mu_n')
    return PviState(t, lam_n, mu_n, theta_n(n))


def _near_zero(poly, x, tol):
    scale = poly.magnitude(x)
    return poly.degree > 0 and scale > 0 and float(abs(poly(x))) < tol * scale


def pvi_sample(n, pt, tau, backend=None):
    """
    Evaluate lambda^(n), mu^(n) and wp(p^(n)) at (r, s, tau).

    The sample is flagged, not rejected, when Z sits within the
    pole_proximity tolerance of a zero of Q_{n-2}, Q_n or G_n.

    Args:
        n (int): the level, n >= 0
        pt (TorsionPoint): the point, outside the 2-torsion
        tau: complex tau or a LatticeData
    Returns:
        PviSample
    """
    if n < 0:
        raise DomainError('pvi_sample needs n >= 0, got %d' % n)
    ld = as_lattice(tau, backend)
    level = build_to(n, pt, ld)
    X = level.hv.Z
    Q2, Q1, Q, R, G = (level.Q_prev2(X), level.Q_prev1(X), level.Q(X),
                       level.R(X), level.G(X))
    tol = config.tol('pole_proximity')
    flagged = any(_near_zero(p, X, tol) for p in (level.Q_prev2, level.Q, level.G))
    if abs(Q2 * Q) == 0 or abs(G) == 0:
        raise PoleProximityError('Z sits exactly on a pole at tau = %s' % ld.tau)
    lam = R / (Q2 * Q)
    mu = Q2 * Q1 * Q / G
    E = ld.e2 - ld.e1
    return PviSample(n, pt, ld.tau, level.t, lam, mu, E * lam + ld.e1, flagged)


def sample_state(sample):
    return PviState(sample.t, sample.lam, sample.mu, theta_n(sample.n))


def hitchin_wp(pt, tau, backend=None):
    """wp(p^0) = wp(a) + wp'(a)/(2 Z)."""
    ld = as_lattice(tau, backend)
    hv = hecke_Z(pt, ld)
    return hv.wp + hv.wp_prime / (2 * hv.Z)


def wp_p_closed(n, pt, tau, backend=None):
    """The printed closed forms of wp(p^n) for n = 0, 1, 2."""
    if n == 0:
        return hitchin_wp(pt, tau, backend)
    if n not in (1, 2):
        raise DomainError('closed forms of wp(p^n) exist for n in 0..2, got %d' % n)
    ld = as_lattice(tau, backend)
    hv = hecke_Z(pt, ld)
    Z, p, dp, g2, g3 = hv.Z, hv.wp, hv.wp_prime, ld.g2, ld.g3
    if n == 1:
        num = 3 * dp * Z ** 2 + (12 * p ** 2 - g2) * Z + 3 * p * dp
        return p + num / (2 * (Z ** 3 - 3 * p * Z - dp))
    xi = (28 * dp * Z ** 6 + (288 * p ** 2 - 24 * g2) * Z ** 5 + 300 * p * dp * Z ** 4
          + (640 * p ** 3 - 88 * g2 * p - 52 * g3) * Z ** 3
          + (180 * p ** 2 - 3 * g2) * dp * Z ** 2 + 24 * p * dp ** 2 * Z + dp ** 3)
    z3 = z_n_closed(3, pt, ld).value
    return p + xi / (8 * Z * z3)


def _tau_samples(n, pt, tau, h, offsets, backend):
    bk = backend
    samples = {}
    for k in offsets:
        sample = pvi_sample(n, pt, tau + k * h, bk)
        if sample.flagged:
            raise PoleProximityError(
                'tau = %s is too close to a pole of lambda^(%d); try another tau'
                % (complex(tau + k * h), n))
        samples[k] = sample
    return samples


def _derivatives(samples, name, h, richardson):
    f = dict((k, getattr(s, name)) for (k, s) in samples.items())
    d1 = (f[1] - f[-1]) / (2 * h)
    if not richardson:
        return d1
    d2 = (f[2] - f[-2]) / (4 * h)
    return (4 * d1 - d2) / 3


def _relative_gap(a, b):
    scale = max(abs(a), abs(b))
    return float(abs(a - b) / scale) if scale else 0.0


def hamiltonian_residual(n, pt, tau, h=None, richardson=True, backend=None):
    """
    Finite-difference check of d lambda/dt = dK/dmu and d mu/dt = -dK/dlambda.

    Derivatives in t go through central differences in tau and the chain
    rule; `richardson` extrapolates the h and 2h stencils once.

    Args:
        n (int): the level
        pt (TorsionPoint): the point
        tau (complex): where to evaluate
        h (float): step in tau (default fd_step * max(1, |tau|))
    Returns:
        (float, float): the two relative residuals
    Raises:
        PoleProximityError: a stencil point is flagged
    """
    bk = backend or get_backend()
    tau = bk.c(tau)
    h = h or config.tol('fd_step') * max(1.0, abs(complex(tau)))
    offsets = (-2, -1, 0, 1, 2) if richardson else (-1, 0, 1)
    samples = _tau_samples(n, pt, tau, h, offsets, bk)
    t_tau = _derivatives(samples, 't', h, richardson)
    lam_t = _derivatives(samples, 'lam', h, richardson) / t_tau
    mu_t = _derivatives(samples, 'mu', h, richardson) / t_tau
    k_lam, k_mu = hamiltonian_gradient(sample_state(samples[0]))
    res1 = _relative_gap(lam_t, k_mu)
    res2 = _relative_gap(mu_t, -k_lam)
    logger.debug('hamiltonian_residual n=%d tau=%s: %.3g %.3g', n, complex(tau), res1, res2)
    return res1, res2


def pvi_rhs_terms(lam, lam_t, t, params):
    """The three groups of terms on the right of PVI, for residual scaling."""
    alpha, beta, gamma, delta = [_coerce(x, lam) for x in params]
    first = (1 / lam + 1 / (lam - 1) + 1 / (lam - t)) * lam_t ** 2 / 2
    second = -(1 / t + 1 / (t - 1) + 1 / (lam - t)) * lam_t
    bracket = (alpha + beta * t / lam ** 2 + gamma * (t - 1) / (lam - 1) ** 2
               + delta * t * (t - 1) / (lam - t) ** 2)
    third = lam * (lam - 1) * (lam - t) / (t ** 2 * (t - 1) ** 2) * bracket
    return first, second, third


def pvi_residual(n, pt, tau, h=None, backend=None):
    """
    Residual of PVI with parameters (1/2 (n+1/2)^2, -1/8, 1/8, 3/8).

    lambda_t and lambda_tt come from five-point stencils in tau mapped
    through t(tau); the residual is normalized by the largest term.
    """
    bk = backend or get_backend()
    tau = bk.c(tau)
    h = h or 10 * config.tol('fd_step') * max(1.0, abs(complex(tau)))
    samples = _tau_samples(n, pt, tau, h, (-2, -1, 0, 1, 2), bk)

    def stencils(name):
        f = dict((k, getattr(s, name)) for (k, s) in samples.items())
        first = (-f[2] + 8 * f[1] - 8 * f[-1] + f[-2]) / (12 * h)
        second = (-f[2] + 16 * f[1] - 30 * f[0] + 16 * f[-1] - f[-2]) / (12 * h ** 2)
        return first, second

    t_tau, t_tautau = stencils('t')
    lam_tau, lam_tautau = stencils('lam')
    lam_t = lam_tau / t_tau
    lam_tt = (lam_tautau * t_tau - lam_tau * t_tautau) / t_tau ** 3
    lam, t = samples[0].lam, samples[0].t
    terms = pvi_rhs_terms(lam, lam_t, t, pvi_params(theta_n(n)))
    scale = max([abs(lam_tt)] + [abs(x) for x in terms])
    residual = lam_tt - terms[0] - terms[1] - terms[2]
    return float(abs(residual) / scale) if scale else 0.0


def pole_limit_check(n, pt, tau0, deltas=(1e-2, 1e-3, 1e-4), nearby=1e-3, backend=None):
    """
    lambda^(n) mu^(n) at tau0 + delta for shrinking delta.

    tau0 must put Z_{r,s} on a zero of Q_n (a negative pole of lambda, where
    lambda mu -> (n+1)/2) or of Q_{n-2} (a positive pole, lambda mu -> -n/2).
    lambda mu = R_n Q_{n-1} / G_n is evaluated in that cancelled form.

    Returns:
        PoleLimit: kind, the expected limit, (delta, value) pairs and the
        value at the smallest delta
    Raises:
        DomainError: neither factor vanishes within `nearby` at tau0
    """
    bk = backend or get_backend()
    tau0 = bk.c(tau0)
    level = build_to(n, pt, as_lattice(tau0, bk))
    X = level.hv.Z

    def margin(poly):
        if poly.degree <= 0:
            return float('inf')
        return float(abs(poly(X))) / poly.magnitude(X)

    negative, positive = margin(level.Q), margin(level.Q_prev2)
    if min(negative, positive) > nearby:
        raise DomainError('tau0 = %s is not near a zero of Q_%d or Q_%d'
                          % (complex(tau0), n, n - 2))
    if negative <= positive:
        kind, expected = 'negative', Fraction(n + 1, 2)
    else:
        kind, expected = 'positive', Fraction(-n, 2)

    samples = []
    for delta in deltas:
        lv = build_to(n, pt, as_lattice(tau0 + delta, bk))
        x = lv.hv.Z
        samples.append((delta, complex(lv.R(x) * lv.Q_prev1(x) / lv.G(x))))
    logger.info('  pole limit n=%d (%s): %s -> %s', n, kind, samples[-1][1], expected)
    return PoleLimit(kind, expected, samples, samples[-1][1])


def _sqrt_t_branch(t, sqrt_q, bk):
    """t^(1/2) on the branch that tends to 1 as tau -> i infinity."""
    root = bk.sqrt(t)
    if abs(sqrt_q) < 0.25:
        series = 1 - 8 * sqrt_q + 32 * sqrt_q ** 2 - 96 * sqrt_q ** 3
        if abs(-root - series) < abs(root - series):
            root = -root
    return root


def quarter_lambda0_expansion(sqrt_q):
    return 1 - 8 * sqrt_q


def quarter_mu_expansion(n, sqrt_q):
    """mu^(n) at (1/4, 0) to order q^(3/2)."""
    x = sqrt_q
    return (-1) ** n * (2 * n + 1) / 4.0 * (1 + 8 * x + 32 * x ** 2 + 96 * x ** 3)


def quarter_family(n, tau, backend=None):
    """
    Compare the (1/4, 0) solution with lambda = (-1)^n/(2n+1) t^(1/2) and
    lambda mu = 1/4.

    Returns:
        QuarterCheck: the sample, the predicted lambda and both relative gaps
    """
    if backend is None and not hasattr(tau, 'backend'):
        # Q_n(Z) is of size q^{a_{n+1}} at this point
        backend = backend_for_order(ab_coeffs(n + 1)[0], complex(tau).imag)
    ld = as_lattice(tau, backend)
    bk = ld.backend
    sample = pvi_sample(n, QUARTER_POINT, ld)
    sqrt_q = bk.exp(1j * bk.pi * ld.tau)
    lam_pred = (-1) ** n * _sqrt_t_branch(sample.t, sqrt_q, bk) / (2 * n + 1)
    lam_gap = float(abs(sample.lam - lam_pred) / abs(sample.lam))
    product_gap = float(abs(sample.lam * sample.mu - bk.c(Fraction(1, 4))))
    return QuarterCheck(n, ld.tau, sample.lam, sample.mu, lam_pred, lam_gap, product_gap)
