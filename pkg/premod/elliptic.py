"""Weierstrass lattice quantities for the lattice Z + Z*tau.

Everything is evaluated from truncated q-series, q = exp(2*pi*i*tau):

    g2    = 4/3 pi^4 (1 + 240 sum sigma_3(n) q^n)
    g3    = 8/27 pi^6 (1 - 504 sum sigma_5(n) q^n)
    eta1  = pi^2/3 (1 - 24 sum sigma_1(n) q^n),   eta2 = tau*eta1 - 2*pi*i
    wp(z) = -pi^2/3 - 4 pi^2 [w/(1-w)^2 + sum n q^n/(1-q^n) (w^n + w^-n - 2)]
    zeta(z) = eta1 z + pi cot(pi z) + 4 pi sum sin(2 pi n z) q^n/(1-q^n)

with w = exp(2*pi*i*z). The z-series only converge in a horizontal strip,
so every argument is first reduced by lattice shifts into
|Im z| <= Im(tau)/2.
"""
import logging
import math
import threading
from collections import OrderedDict, namedtuple
from fractions import Fraction

from premod import config
from premod.backend import get_backend
from premod.errors import (DomainError, InvalidPointError, PoleError,
                           SeriesNonConvergenceError)

logger = logging.getLogger(__name__)


TorsionPoint = namedtuple('TorsionPoint', 'r s exact_order')
TorsionPoint.__new__.__defaults__ = (None,)

HeckeValue = namedtuple('HeckeValue', 'point tau a x Z wp wp_prime')


class LatticeData(object):
    """All tau-derived quantities, computed once per (tau, backend).

    Attributes:
        tau: the lattice parameter, Im(tau) > 0
        q: exp(2*pi*i*tau)
        g2, g3: the invariants of the cubic 4x^3 - g2 x - g3
        e1, e2, e3: wp at 1/2, tau/2 and (1+tau)/2
        eta1, eta2: the quasi-periods of zeta along 1 and tau
        delta: g2^3 - 27 g3^2
        j: 1728 g2^3 / delta
        terms (int): largest number of series terms any field needed
        tol: relative truncation tolerance of every series on this lattice
        backend: the arithmetic backend the fields live in
    """
    __slots__ = ('tau', 'q', 'g2', 'g3', 'e1', 'e2', 'e3', 'eta1', 'eta2',
                 'delta', 'j', 'terms', 'tol', 'backend')

    def __init__(self, **fields):
        for name in self.__slots__:
            object.__setattr__(self, name, fields[name])

    def __setattr__(self, name, value):
        raise AttributeError('LatticeData is immutable')

    def __repr__(self):
        return 'LatticeData(tau=%s, backend=%s)' % (self.tau, self.backend.name)


def check_tau(tau, backend=None):
    """Validates tau against the Im(tau) floor and returns it in `backend`."""
    bk = backend or get_backend()
    tau = bk.c(tau)
    im = float(bk.to_complex(tau).imag)
    if im <= 0:
        raise DomainError('tau must lie in the upper half-plane, got %s' % tau)
    if im < config.tol('im_tau_floor'):
        raise SeriesNonConvergenceError(
            'Im(tau) = %g is below the floor %g; |q| too close to 1'
            % (im, config.tol('im_tau_floor')))
    return tau


def normalize_f2(tau, max_steps=10000):
    """Maps tau into F2 = {0 <= Re < 2, |tau-1/2| >= 1/2, |tau-3/2| > 1/2}.

    Uses tau -> tau + 2 and tau -> tau/(1 -+ 2 tau), which generate Gamma(2)
    up to sign; every inversion strictly increases Im(tau).
    """
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError('tau must lie in the upper half-plane, got %s' % tau)
    for _ in range(max_steps):
        tau = tau - 2 * math.floor((tau.real + 1) / 2)
        if abs(tau - 0.5) < 0.5:
            tau = tau / (1 - 2 * tau)
        elif abs(tau + 0.5) < 0.5:
            tau = tau / (1 + 2 * tau)
        else:
            break
    else:
        raise DomainError('tau did not reduce into F2 within %d steps' % max_steps)
    if tau.real < 0:
        tau = tau + 2
    # the boundary arc |tau - 3/2| = 1/2 belongs to the image of |tau + 1/2| = 1/2
    if abs(abs(tau - 1.5) - 0.5) < 1e-15 and tau.real >= 1:
        tau = tau - 2
        tau = tau / (1 + 2 * tau)
        if tau.real < 0:
            tau = tau + 2
    return tau


def _sum_series(bk, term, tol, cap):
    """Sums term(1), term(2), ... until the tail is negligible.

    term(n) returns (value, size) where size bounds |value| without the
    oscillating factor (w^n + w^-n - 2, sin(2 pi n z)), which vanishes at
    isolated n for real torsion arguments.

    Returns:
        the partial sum and the number of terms used
    """
    total = bk.c(0)
    n = 1
    while True:
        value, size = term(n)
        total = total + value
        if size < tol * (1 + abs(total)):
            return total, n
        n += 1
        if n > cap:
            raise SeriesNonConvergenceError(
                'series did not converge within %d terms' % cap)


def _lambert(bk, q, power, tol, cap):
    """sum_{n>=1} n^power q^n / (1 - q^n) = sum sigma_power(n) q^n."""
    state = {'qn': bk.c(1)}

    def term(n):
        state['qn'] = state['qn'] * q
        value = (n ** power) * state['qn'] / (1 - state['qn'])
        return value, abs(value)

    return _sum_series(bk, term, tol, cap)


def _geometric_size(state, n, power, offset=0):
    """n^power |q^n / (1 - q^n)| (|w^n| + |w^-n| + offset), the envelope of a z-series term."""
    qn = state['qn']
    return (n ** power) * abs(qn) / abs(1 - qn) * (abs(state['wn']) + abs(state['wm']) + offset)


CACHE_SIZE = 4096

_cache = OrderedDict()
_cache_lock = threading.Lock()


def lattice_data(tau, backend=None, tol=None):
    """
    Compute the lattice quantities of Z + Z*tau.

    Args:
        tau (complex): lattice parameter with Im(tau) above the floor
        backend: arithmetic backend (default: active configuration)
        tol (float): relative truncation tolerance of every series
    Returns:
        LatticeData: the cached, immutable lattice record
    """
    bk = backend or get_backend()
    tau = check_tau(tau, bk)
    tol = tol if tol is not None else bk.series_tol
    key = (bk.name, bk.dps, str(tau), str(tol))
    with _cache_lock:
        if key in _cache:
            _cache.move_to_end(key)
            return _cache[key]

    cap = int(config.tol('series_max_terms'))
    pi = bk.pi
    q = bk.exp(2j * pi * tau)

    s1, n1 = _lambert(bk, q, 1, tol, cap)
    s3, n3 = _lambert(bk, q, 3, tol, cap)
    s5, n5 = _lambert(bk, q, 5, tol, cap)
    g2 = pi ** 4 * 4 / 3 * (1 + 240 * s3)
    g3 = pi ** 6 * 8 / 27 * (1 - 504 * s5)
    eta1 = pi ** 2 / 3 * (1 - 24 * s1)
    eta2 = tau * eta1 - 2j * pi

    partial = _Lattice(bk, tau, q, tol, cap)
    e1, m1 = _wp_reduced(partial, bk.c(Fraction(1, 2)))
    e2, m2 = _wp_reduced(partial, tau / 2)
    e3, m3 = _wp_reduced(partial, (1 + tau) / 2)

    delta = g2 ** 3 - 27 * g3 ** 2
    if delta == 0:
        raise SeriesNonConvergenceError('discriminant vanished at tau = %s' % tau)
    j = 1728 * g2 ** 3 / delta

    ld = LatticeData(tau=tau, q=q, g2=g2, g3=g3, e1=e1, e2=e2, e3=e3,
                     eta1=eta1, eta2=eta2, delta=delta, j=j,
                     terms=max(n1, n3, n5, m1, m2, m3), tol=tol, backend=bk)
    with _cache_lock:
        _cache[key] = ld
        while len(_cache) > CACHE_SIZE:
            _cache.popitem(last=False)
    logger.debug('lattice_data tau=%s terms=%d', tau, ld.terms)
    return ld


class _Lattice(object):
    """The subset of lattice data the z-series need, before e_k exist."""

    def __init__(self, backend, tau, q, tol, cap):
        self.backend = backend
        self.tau = tau
        self.q = q
        self.tol = tol
        self.cap = cap


def _series_context(ld):
    if isinstance(ld, _Lattice):
        return ld
    return _Lattice(ld.backend, ld.tau, ld.q, ld.tol,
                    int(config.tol('series_max_terms')))


def reduce_argument(z, ld):
    """Splits z = z0 + k*tau + l with |Im z0| <= Im(tau)/2, |Re z0| <= 1/2.

    Returns:
        (z0, k, l) with k, l integers
    """
    bk = ld.backend
    zc = bk.to_complex(z)
    tc = bk.to_complex(ld.tau)
    k = int(round(zc.imag / tc.imag))
    l = int(round((zc - k * tc).real))
    return z - k * ld.tau - l, k, l


def _wp_reduced(ctx, z):
    """wp at an already reduced argument, with the term count."""
    bk = ctx.backend
    pi = bk.pi
    w = bk.exp(2j * pi * z)
    if abs(1 - w) < bk.eps * 16:
        raise PoleError('wp evaluated at a lattice point')
    winv = 1 / w
    state = {'qn': bk.c(1), 'wn': bk.c(1), 'wm': bk.c(1)}

    def term(n):
        state['qn'] = state['qn'] * ctx.q
        state['wn'] = state['wn'] * w
        state['wm'] = state['wm'] * winv
        value = n * state['qn'] / (1 - state['qn']) * (state['wn'] + state['wm'] - 2)
        return value, _geometric_size(state, n, 1, 2)

    total, used = _sum_series(bk, term, ctx.tol, ctx.cap)
    value = -pi ** 2 / 3 - 4 * pi ** 2 * (w / (1 - w) ** 2 + total)
    return value, used


def _wp_prime_reduced(ctx, z):
    bk = ctx.backend
    pi = bk.pi
    w = bk.exp(2j * pi * z)
    if abs(1 - w) < bk.eps * 16:
        raise PoleError('wp_prime evaluated at a lattice point')
    winv = 1 / w
    state = {'qn': bk.c(1), 'wn': bk.c(1), 'wm': bk.c(1)}

    def term(n):
        state['qn'] = state['qn'] * ctx.q
        state['wn'] = state['wn'] * w
        state['wm'] = state['wm'] * winv
        value = n * n * state['qn'] / (1 - state['qn']) * (state['wn'] - state['wm'])
        return value, _geometric_size(state, n, 2)

    total, _ = _sum_series(bk, term, ctx.tol, ctx.cap)
    return -8j * pi ** 3 * (w * (1 + w) / (1 - w) ** 3 + total)


def _zeta_series(ctx, z):
    """pi cot(pi z) + 4 pi sum sin(2 pi n z) q^n/(1-q^n) at a reduced z."""
    bk = ctx.backend
    pi = bk.pi
    if abs(bk.sin(pi * z)) < bk.eps * 16:
        raise PoleError('zeta evaluated at a lattice point')
    w = bk.exp(2j * pi * z)
    winv = 1 / w
    state = {'qn': bk.c(1), 'wn': bk.c(1), 'wm': bk.c(1)}

    def term(n):
        state['qn'] = state['qn'] * ctx.q
        state['wn'] = state['wn'] * w
        state['wm'] = state['wm'] * winv
        value = bk.sin(2 * pi * n * z) * state['qn'] / (1 - state['qn'])
        return value, _geometric_size(state, n, 0) / 2

    total, _ = _sum_series(bk, term, ctx.tol, ctx.cap)
    return pi * bk.cot(pi * z) + 4 * pi * total


def wp(z, ld):
    """Weierstrass wp(z | tau). Raises PoleError on lattice points."""
    z0, _, _ = reduce_argument(ld.backend.c(z), ld)
    return _wp_reduced(_series_context(ld), z0)[0]


def wp_prime(z, ld):
    """Derivative of wp in z, term-wise from the wp series."""
    z0, _, _ = reduce_argument(ld.backend.c(z), ld)
    return _wp_prime_reduced(_series_context(ld), z0)


def zeta(z, ld):
    """Weierstrass zeta(z | tau), continued from the strip by quasi-periodicity."""
    bk = ld.backend
    z0, k, l = reduce_argument(bk.c(z), ld)
    return ld.eta1 * z0 + _zeta_series(_series_context(ld), z0) + k * ld.eta2 + l * ld.eta1


def _fraction_or_complex(x):
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    return complex(x)


def make_point(r, s, exact_order=None):
    """Builds a TorsionPoint, keeping rational coordinates exact."""
    return TorsionPoint(_fraction_or_complex(r), _fraction_or_complex(s), exact_order)


def is_half_lattice(pt, tol=None):
    """True when (r, s) lies in (1/2)Z^2."""
    tol = tol if tol is not None else config.tol('half_lattice')
    for x in (pt.r, pt.s):
        if isinstance(x, Fraction):
            if (2 * x).denominator != 1:
                return False
        else:
            x = complex(x)
            if abs(x.imag) > tol or abs(2 * x.real - round(2 * x.real)) > tol:
                return False
    return True


def check_point(pt):
    if is_half_lattice(pt):
        raise InvalidPointError('(r, s) = (%s, %s) lies in (1/2)Z^2' % (pt.r, pt.s))
    if pt.exact_order is not None:
        N = pt.exact_order
        k1, k2 = pt.r * N, pt.s * N
        if not (isinstance(pt.r, Fraction) and isinstance(pt.s, Fraction)
                and k1.denominator == 1 and k2.denominator == 1
                and math.gcd(math.gcd(int(k1), int(k2)), N) == 1):
            raise InvalidPointError('(%s, %s) is not of exact order %d' % (pt.r, pt.s, N))
    return pt


def reduce_point(pt, ld):
    """Shifts (r, s) by integers so that r + s*tau sits in the central strip.

    Z_{r,s} and wp(r + s*tau) are unchanged by the shift.
    """
    bk = ld.backend
    a = bk.c(pt.r) + bk.c(pt.s) * ld.tau
    _, k, l = reduce_argument(a, ld)
    return TorsionPoint(pt.r - l, pt.s - k, pt.exact_order)


def hecke_Z(pt, ld):
    """
    Evaluate Z_{r,s}(tau) = zeta(r + s tau) - r eta1 - s eta2.

    On the reduced point this equals 2 pi i s + pi cot(pi a) + 4 pi sum
    sin(2 pi n a) q^n/(1-q^n), and the value is invariant under the
    reduction, so it is returned for the original (r, s).

    Args:
        pt (TorsionPoint): the point, outside (1/2)Z^2
        ld (LatticeData): the lattice
    Returns:
        HeckeValue: a, x = exp(2 pi i a), Z and wp, wp' at a
    """
    check_point(pt)
    bk = ld.backend
    pi = bk.pi
    reduced = reduce_point(pt, ld)
    a0 = bk.c(reduced.r) + bk.c(reduced.s) * ld.tau
    ctx = _series_context(ld)
    Z = 2j * pi * bk.c(reduced.s) + _zeta_series(ctx, a0)
    a = bk.c(pt.r) + bk.c(pt.s) * ld.tau
    return HeckeValue(point=pt, tau=ld.tau, a=a, x=bk.exp(2j * pi * a), Z=Z,
                      wp=_wp_reduced(ctx, a0)[0], wp_prime=_wp_prime_reduced(ctx, a0))


def torsion_points(N):
    """
    Enumerate Q(N) = {(k1/N, k2/N) : 0 <= k1, k2 < N, gcd(k1, k2, N) = 1}.

    Args:
        N (int): the exact order, N >= 3
    Returns:
        List: the points in lexicographic order of (k1, k2)
    """
    if N < 3:
        raise DomainError('torsion_points needs N >= 3, got %d' % N)
    points = []
    for k1 in range(N):
        for k2 in range(N):
            if math.gcd(math.gcd(k1, k2), N) == 1:
                points.append(TorsionPoint(Fraction(k1, N), Fraction(k2, N), N))
    return points


def delta_product(ld):
    """(2 pi)^12 q prod (1 - q^n)^24, an independent route to delta."""
    bk = ld.backend
    product = bk.c(1)
    qn = bk.c(1)
    cap = int(config.tol('series_max_terms'))
    for n in range(1, cap + 1):
        qn = qn * ld.q
        product = product * (1 - qn) ** 24
        if abs(qn) < bk.series_tol:
            break
    return (2 * bk.pi) ** 12 * ld.q * product


def j_expansion(q):
    """Leading terms of j: 1/q + 744 + 196884 q + 21493760 q^2 + 864299970 q^3."""
    return 1 / q + 744 + 196884 * q + 21493760 * q ** 2 + 864299970 * q ** 3


def cusp_expansions(q, sqrt_q):
    """Leading cusp behaviour of (e1, e2, e3), with pi taken in double."""
    pi2 = math.pi ** 2
    e1 = 2 * pi2 / 3 + 16 * pi2 * q
    e2 = -pi2 / 3 - 8 * pi2 * sqrt_q - 8 * pi2 * q
    e3 = -pi2 / 3 + 8 * pi2 * sqrt_q - 8 * pi2 * q
    return e1, e2, e3


def modular_lambda(ld):
    """t = (e3 - e1)/(e2 - e1), the Legendre parameter of the lattice."""
    return (ld.e3 - ld.e1) / (ld.e2 - ld.e1)
