"""Behaviour of the ladder as tau -> i infinity.

For Re s in (0, 1/2) every quantity has a polynomial limit in s, written
here as products; for s in {0, 1/2} the pre-modular forms vanish at the
cusp and `vanishing_order` measures to which power of q.
"""
import cmath
import functools
import logging
import math
from collections import namedtuple
from fractions import Fraction

import numpy as np

from premod import config
from premod.backend import backend_for_order
from premod.counting import ab_coeffs, vinf_pred
from premod.elliptic import make_point, torsion_points
from premod.errors import DomainError, InconclusiveOrderError, PoleError
from premod.painleve import QUARTER_POINT, pvi_sample
from premod.premodular import as_lattice, sign_reduce, z_n
from premod.recursion import build_to, lead_exponents

logger = logging.getLogger(__name__)


LimitPolynomials = namedtuple('LimitPolynomials', 'n q_check g_check r_check z_check')

OrderEstimate = namedtuple('OrderEstimate',
                           'n point slope_order leading_coeff rounded_order fit_residual')

TotalOrder = namedtuple('TotalOrder', 'n N total expected estimates')

# e2 - e1 at the cusp
E_LIMIT = -math.pi ** 2


def _pii(s):
    return 1j * math.pi * (2 * s - 1)


def q_check(n, s):
    """Limit of Q_n(Z_{r,s}(tau)); 1 for n < 0."""
    if n < 0:
        return 1
    s = complex(s)
    m = n // 2
    if n % 2 == 0:
        value = _pii(s) ** (m + 1)
        for k in range(m):
            value *= ((s + k) * (s + k + 0.5) * (s - k - 1) * (s - k - 1.5)) ** (m - k)
        return value
    value = _pii(s) ** (m + 1) * s ** (m + 1) * (s - 1) ** (m + 1)
    for k in range(m):
        value *= ((s + k + 0.5) * (s + k + 1) * (s - k - 1.5) * (s - k - 2)) ** (m - k)
    return value


def g_check(n, s):
    """G_n(Z_{r,s}(tau)) divided by x = exp(2 pi i (r + s tau)), in the limit."""
    s = complex(s)
    m = n // 2
    if n % 2 == 0:
        value = 8j * math.pi * _pii(s) ** (3 * m)
        for k in range(m):
            e = 3 * (m - k)
            value *= ((s + k) ** e * (s + k + 0.5) ** (e - 1) * (s - k - 1) ** (e - 2)
                      * (s - k - 1.5) ** (e - 3))
        return value
    value = 8j * math.pi * _pii(s) ** (3 * m + 1) * s ** (3 * m + 2) * (s - 1) ** (3 * m)
    for k in range(m):
        e = 3 * (m - k)
        value *= ((s + k + 0.5) ** e * (s + k + 1) ** (e - 1) * (s - k - 1.5) ** (e - 2)
                  * (s - k - 2) ** (e - 3))
    return value


def r_check(n, s):
    s = complex(s)
    m = n // 2
    if n % 2 == 0:
        value = 8j * math.pi * _pii(s) ** (2 * m) * s ** (2 * m + 1) * (s + 0.5) ** (2 * m)
        for k in range(1, m):
            value *= ((s + k) * (s + k + 0.5) * (s - k) * (s - k - 0.5)) ** (2 * (m - k))
        return value
    value = (8j * math.pi * _pii(s) ** (2 * m) * s ** (2 * m + 3) * (s + 0.5) ** (2 * m)
             * (s + 1) ** (2 * m) * (s - 1) ** (2 * m))
    for k in range(1, m):
        value *= ((s + k + 0.5) * (s + k + 1) * (s - k - 0.5) * (s - k - 1)) ** (2 * (m - k))
    return value


def _z_product(n, s):
    s = complex(s)
    if n % 2 == 1:
        m = (n - 1) // 2
        value = (2 * math.pi) ** (2 * m * (m + 1)) * _pii(s) ** (m + 1)
        for k in range(m):
            value *= ((s + k) * (s + k + 0.5) * (s - k - 1) * (s - k - 1.5)) ** (m - k)
        return value
    m = n // 2
    value = ((-1) ** (m * m) * (2 * math.pi) ** (2 * m * m) * _pii(s) ** m
             * s ** m * (s - 1) ** m)
    for k in range(m - 1):
        value *= ((s + k + 0.5) * (s + k + 1) * (s - k - 1.5) * (s - k - 2)) ** (m - 1 - k)
    return value


def _z_quotient(n, s):
    (exp2, expE), _, _ = lead_exponents(n - 1)
    return q_check(n - 1, s) * 2 ** exp2 * E_LIMIT ** expE


def z_limit_polynomial(n, s, route='product'):
    """
    The limit of Z^(n)_{r,s}(tau) as tau -> i infinity, Re s in (0, 1/2).

    Args:
        n (int): the index, n >= -1
        s (complex): the second coordinate
        route (string): 'product' for the closed product, 'quotient' for
            the limit of Q_{n-1} over its leading coefficient at the cusp
    """
    if n <= 0:
        return 1
    if route == 'product':
        return _z_product(n, s)
    if route == 'quotient':
        return _z_quotient(n, s)
    raise ValueError('Unknown route: %s' % route)


def z_check(n, s):
    return z_limit_polynomial(n, s)


def check_limit_routes(n, s):
    """Relative gap between the two routes of `z_limit_polynomial`."""
    a = z_limit_polynomial(n, s, 'product')
    b = z_limit_polynomial(n, s, 'quotient')
    return _gap(a, b)


def limit_polys(n):
    if n < 0:
        raise DomainError('limit_polys needs n >= 0, got %d' % n)
    return LimitPolynomials(n, functools.partial(q_check, n), functools.partial(g_check, n),
                            functools.partial(r_check, n), functools.partial(z_check, n))


def _gap(a, b):
    scale = max(abs(a), abs(b))
    return float(abs(a - b) / scale) if scale else 0.0


def limit_identities(n, s):
    """
    Residuals of the four product identities between the limits at level n >= 1:

        r_n q_{n-1}              = s g_n
        g_n q_{n-3}^2            = (s + (n-1)/2)^2 g_{n-1} q_{n-2} q_{n-1}
        q_n q_{n-3}              = (s + (n-1)/2)(s - (n+1)/2) q_{n-2} q_{n-1}
        r_n q_{n-3}^2            = s (s + (n-1)/2)^2 g_{n-1} q_{n-2}
    """
    if n < 1:
        raise DomainError('limit_identities needs n >= 1, got %d' % n)
    s = complex(s)
    q = dict((k, q_check(k, s)) for k in range(n - 3, n + 1))
    g, g1, r = g_check(n, s), g_check(n - 1, s), r_check(n, s)
    shift = s + (n - 1) / 2.0
    return {
        'r_q': _gap(r * q[n - 1], s * g),
        'g_q': _gap(g * q[n - 3] ** 2, shift ** 2 * g1 * q[n - 2] * q[n - 1]),
        'q_q': _gap(q[n] * q[n - 3], shift * (s - (n + 1) / 2.0) * q[n - 2] * q[n - 1]),
        'r_g': _gap(r * q[n - 3] ** 2, s * shift ** 2 * g1 * q[n - 2]),
    }


def _checked_product(numerators, denominators):
    value = 1
    for d in denominators:
        if d == 0:
            raise PoleError('c_coeff: s sits on a pole of the formula')
        value /= d
    for x in numerators:
        value *= x
    return value


def c_coeff(n, s):
    """
    The coefficient C^(n)(s) of lambda^(n) - 1 ~ C e^{2 pi i r} ((1-t)/16)^{2s}.

    Raises:
        PoleError: s is a pole of the product
    """
    s = complex(s)
    m = n // 2
    if n % 2 == 0:
        num, den = [8 * s], [2 * s - 1]
        for k in range(m):
            num += [s + k, s + k + 0.5]
            den += [s - k - 1, s - k - 1.5]
    else:
        num, den = [8 * s * s], [2 * s - 1, s - 1]
        for k in range(m):
            num += [s + k + 0.5, s + k + 1]
            den += [s - k - 1.5, s - k - 2]
    return _checked_product(num, den)


def c_from_limits(n, s):
    """C^(n) as r_n / (q_{n-2} q_n)."""
    return r_check(n, s) / (q_check(n - 2, s) * q_check(n, s))


def _cusp_log(w, tau):
    """log w on the branch nearest pi i tau, where (1-t)/16 ~ q^(1/2) lives."""
    base = cmath.log(w)
    target = 1j * math.pi * complex(tau)
    k = round((target - base).imag / (2 * math.pi))
    return base + 2j * math.pi * k


def c_ratio(n, pt, tau, backend=None):
    """(lambda^(n) - 1) / (C^(n)(s) e^{2 pi i r} ((1-t)/16)^{2s}), which tends to 1."""
    sample = pvi_sample(n, pt, tau, backend)
    s, r = complex(pt.s), complex(pt.r)
    t = complex(sample.t)
    power = cmath.exp(2 * s * _cusp_log((1 - t) / 16, sample.tau))
    return (complex(sample.lam) - 1) / (c_coeff(n, s) * cmath.exp(2j * math.pi * r) * power)


def limit_gaps(n, pt, tau_ray, backend=None):
    """|Z^(n)(tau) - limit| / |limit| along the ray."""
    s = complex(pt.s)
    if not 0 < s.real < 0.5:
        raise DomainError('limit_convergence needs Re s in (0, 1/2), got %s' % pt.s)
    limit = z_check(n, s)
    if limit == 0:
        raise DomainError('the limit polynomial vanishes at s = %s' % pt.s)
    gaps = []
    for tau in tau_ray:
        value = complex(z_n(n, pt, tau, backend).value)
        gaps.append(abs(value - limit) / abs(limit))
    return gaps


def limit_convergence(n, pt, tau_ray, backend=None):
    """The relative gap to the limit at the last point of the ray."""
    return limit_gaps(n, pt, tau_ray, backend)[-1]


def expected_order(n, s):
    """a_n for s = 0 and b_n/2 for s = 1/2."""
    a, b = ab_coeffs(n)
    return Fraction(a) if s == 0 else Fraction(b, 2)


def _check_cusp_point(pt):
    if pt.s not in (0, Fraction(1, 2)):
        raise DomainError('vanishing_order needs s in {0, 1/2}, got %s' % pt.s)


def _fit_order(bk, ims, values, what):
    """Least-squares slope of log|value| against -2 pi Im(tau)."""
    if any(abs(v) == 0 for v in values):
        raise InconclusiveOrderError('%s vanished exactly on the ladder' % what)
    x = -2 * math.pi * np.asarray(ims, dtype=float)
    y = np.array([bk.log_abs(v) for v in values])
    A = np.vstack([x, np.ones_like(x)]).T
    (slope, intercept), _, _, _ = np.linalg.lstsq(A, y, rcond=None)
    residual = float(np.sqrt(np.mean((A.dot([slope, intercept]) - y) ** 2)))
    return float(slope), residual


def _round_order(slope, residual, what):
    if residual > config.tol('order_fit_residual'):
        raise InconclusiveOrderError('%s: fit residual %.3g is too large' % (what, residual))
    rounded = Fraction(round(2 * slope), 2)
    if abs(slope - float(rounded)) > config.tol('order_rounding'):
        raise InconclusiveOrderError('%s: slope %.4f is not near a half-integer' % (what, slope))
    return rounded


def _ladder(ladder):
    return list(ladder or config.active().order_ladder)


def vanishing_order(n, pt, ladder=None, re_tau=0.0, backend=None):
    """
    Estimate the q-order of Z^(n)_{r,s} at the cusp for s in {0, 1/2}.

    Z^(n) is evaluated on tau = re_tau + i*y for y in the ladder, in an
    extended backend with enough digits to resolve |q|^order.

    Args:
        n (int): the index, n >= 1
        pt (TorsionPoint): the point, s in {0, 1/2}
        ladder: Im(tau) values (default: config order_ladder)
    Returns:
        OrderEstimate
    Raises:
        InconclusiveOrderError: the fit is poor or the slope is not near a
            half-integer
    """
    _check_cusp_point(pt)
    ims = _ladder(ladder)
    a, b = ab_coeffs(n)
    bk = backend or backend_for_order(max(a, b / 2.0) + 1, max(ims))
    values = [z_n(n, pt, complex(re_tau, y), bk).value for y in ims]
    what = 'Z^(%d)_{%s,%s}' % (n, pt.r, pt.s)
    slope, residual = _fit_order(bk, ims, values, what)
    rounded = _round_order(slope, residual, what)
    tau = bk.c(complex(re_tau, ims[-1]))
    leading = values[-1] * bk.exp(-2j * bk.pi * tau * bk.c(rounded))
    logger.debug('  order %s = %.4f (fit residual %.2g)', what, slope, residual)
    return OrderEstimate(n, pt, slope, complex(leading), rounded, residual)


def quarter_leading_coeff(n):
    """(-1)^{C_n} 16^{a_n} pi^{n(n+1)/2} prod_{k=1}^{n-1} (2k+1)^{n-k} for Z^(n)_{1/4,0}."""
    a, _ = ab_coeffs(n)
    c = (n * n - 1) // 4 if n % 2 else n * n // 4
    value = (-1) ** c * 16 ** a * math.pi ** (n * (n + 1) // 2)
    for k in range(1, n):
        value *= (2 * k + 1) ** (n - k)
    return value


def total_order(n, N, ladder=None):
    """
    Sum of the cusp orders of Z^(n) over Q(N).

    Points with s outside {0, 1/2} contribute 0; their limit polynomial
    is checked to be nonzero instead.
    """
    estimates = []
    total = Fraction(0)
    for pt in torsion_points(N):
        if pt.s in (0, Fraction(1, 2)):
            est = vanishing_order(n, pt, ladder)
            estimates.append(est)
            total += est.rounded_order
            continue
        reduced, _ = sign_reduce(pt, n)
        if z_check(n, reduced.s) == 0:
            raise InconclusiveOrderError('limit polynomial vanishes at s = %s' % reduced.s)
    expected = vinf_pred(n, N)
    logger.info('  total order n=%d N=%d: %s (predicted %d)', n, N, total, expected)
    return TotalOrder(n, N, total, expected, estimates)


def order_conservation(n, r, ladder=None):
    """(2 ord_{s=0} + 2 ord_{s=1/2}, 2 a_n + b_n) at first coordinate r."""
    low = vanishing_order(n, make_point(r, 0), ladder).rounded_order
    high = vanishing_order(n, make_point(r, Fraction(1, 2)), ladder).rounded_order
    a, b = ab_coeffs(n)
    return 2 * low + 2 * high, 2 * a + b


def quarter_g_order(n, ladder=None):
    """q-order of G_n(Z) at (1/4, 0); it equals n(n+1)/2 - a_n."""
    ims = _ladder(ladder)
    a, _ = ab_coeffs(n)
    bk = backend_for_order(n * (n + 1) // 2 - a + 1, max(ims))
    values = []
    for y in ims:
        level = build_to(n, QUARTER_POINT, as_lattice(complex(0, y), bk))
        values.append(level.G(level.hv.Z))
    what = 'G_%d at (1/4, 0)' % n
    slope, residual = _fit_order(bk, ims, values, what)
    rounded = _round_order(slope, residual, what)
    return OrderEstimate(n, QUARTER_POINT, slope, complex(values[-1]), rounded, residual)


def quarter_identities(n, tau, backend=None):
    """
    Residuals of R_n Q_{n-1} = G_n/4 and phi_n = (2n+1)/4 G_n at X = Z_{1/4,0}(tau).

    Returns:
        (float, float)
    """
    if backend is None and not hasattr(tau, 'backend'):
        a, _ = ab_coeffs(n)
        backend = backend_for_order(n * (n + 1) // 2 - a + 1, complex(tau).imag)
    ld = as_lattice(tau, backend)
    bk = ld.backend
    level = build_to(n, QUARTER_POINT, ld)
    X = level.hv.Z
    G = level.G(X)
    res1 = _gap(level.R(X) * level.Q_prev1(X), G / 4)
    res2 = _gap(level.phi(X), G * bk.c(Fraction(2 * n + 1, 4)))
    return res1, res2


def alpha_no_rational_zero(n, N_max=12, s=0, ladder=None):
    """
    Leading cusp coefficients of Z^(n)_{r,s} for every r = k/N, N <= N_max,
    in (0, 1/2) or (1/2, 1).

    Returns:
        (list, float): (r, |coefficient|) pairs and the smallest modulus
        relative to the largest
    """
    seen = set()
    rows = []
    for N in range(2, N_max + 1):
        for k in range(1, N):
            r = Fraction(k, N)
            if r in seen or r == Fraction(1, 2):
                continue
            seen.add(r)
            est = vanishing_order(n, make_point(r, s), ladder)
            rows.append((r, abs(est.leading_coeff)))
    rows.sort()
    scale = max(v for (_, v) in rows)
    return rows, min(v for (_, v) in rows) / scale
