"""Pre-modular forms Z^(n)_{r,s}(tau) and their products over torsion points.

Z^(n) = Q_{n-1}(Z_{r,s}(tau)) / q_{n-1}(tau), with Z^(0) = Z^(-1) = 1. For a
torsion point of exact order N, Z^(n) is modular of weight n(n+1)/2 for
Gamma(N).
"""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from premod import config
from premod.backend import get_backend
from premod.elliptic import (LatticeData, TorsionPoint, check_point, hecke_Z,
                             lattice_data, torsion_points)
from premod.errors import DomainError
from premod.recursion import build_to

logger = logging.getLogger(__name__)


PremodularValue = namedtuple('PremodularValue', 'n point tau value weight')

ProductValue = namedtuple('ProductValue', 'n N tau value log_abs arg factor_count')


def weight(n):
    return n * (n + 1) // 2


def as_lattice(tau, backend=None):
    if isinstance(tau, LatticeData):
        return tau
    return lattice_data(tau, backend or get_backend())


def z_n(n, pt, tau, backend=None):
    """
    Evaluate Z^(n)_{r,s}(tau) through the polynomial ladder.

    Args:
        n (int): the index, n >= -1
        pt (TorsionPoint): the point, outside (1/2)Z^2
        tau: complex tau or a LatticeData
        backend: arithmetic backend when tau is a plain number
    Returns:
        PremodularValue
    """
    ld = as_lattice(tau, backend)
    if n < -1:
        raise DomainError('pre-modular index must be >= -1, got %d' % n)
    if n <= 0:
        check_point(pt)
        return PremodularValue(n, pt, ld.tau, ld.backend.c(1), 0)
    level = build_to(n - 1, pt, ld)
    value = level.Q(level.hv.Z) / level.q_lead
    return PremodularValue(n, pt, ld.tau, value, weight(n))


def z_n_closed(n, pt, tau, backend=None):
    """The printed polynomials in Z, wp, wp', g2, g3 for n = 1..4."""
    if n not in (1, 2, 3, 4):
        raise DomainError('closed forms exist for n in 1..4, got %d' % n)
    ld = as_lattice(tau, backend)
    hv = hecke_Z(pt, ld)
    Z, p, dp, g2, g3 = hv.Z, hv.wp, hv.wp_prime, ld.g2, ld.g3
    if n == 1:
        value = Z
    elif n == 2:
        value = Z ** 3 - 3 * p * Z - dp
    elif n == 3:
        value = (Z ** 6 - 15 * p * Z ** 4 - 20 * dp * Z ** 3
                 + (g2 * 27 / 4 - 45 * p ** 2) * Z ** 2
                 - 12 * p * dp * Z - dp ** 2 * 5 / 4)
    else:
        value = (Z ** 10 - 45 * p * Z ** 8 - 120 * dp * Z ** 7
                 + (g2 * 399 / 4 - 630 * p ** 2) * Z ** 6
                 - 504 * p * dp * Z ** 5
                 - (280 * p ** 3 - 49 * g2 * p - 115 * g3) * Z ** 4 * 15 / 4
                 + 15 * (11 * g2 - 24 * p ** 2) * dp * Z ** 3
                 - (140 * p ** 4 - 245 * g2 * p ** 2 + 190 * g3 * p + 21 * g2 ** 2) * Z ** 2 * 9 / 4
                 - (40 * p ** 3 - 163 * g2 * p + 125 * g3) * dp * Z
                 + (25 * g2 - 3 * p ** 2) * dp ** 2 * 3 / 4)
    return PremodularValue(n, pt, ld.tau, value, weight(n))


def m_product(n, N, tau, backend=None, threads=None):
    """
    M_{n,N}(tau), the product of Z^(n) over the Psi(N) points of Q(N).

    The product is accumulated as (log|M|, arg M) in lexicographic order
    of the points; `value` is None when |M| is not representable.

    Args:
        n (int): the index
        N (int): the exact order, N >= 3
        tau: complex tau or a LatticeData
        threads (int): worker count for the factors (default: config)
    Returns:
        ProductValue
    """
    ld = as_lattice(tau, backend)
    points = torsion_points(N)
    threads = threads or config.active().threads

    def factor(pt):
        return z_n(n, pt, ld).value

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            values = list(executor.map(factor, points))
    else:
        values = [factor(pt) for pt in points]

    bk = ld.backend
    log_abs = 0.0
    arg = 0.0
    for v in values:
        if v == 0:
            return ProductValue(n, N, ld.tau, bk.c(0), float('-inf'), 0.0, len(points))
        log_abs += bk.log_abs(v)
        arg += bk.arg(v)
    arg = math.remainder(arg, 2 * math.pi)
    value = None
    if log_abs < 700:
        value = complex(math.exp(log_abs) * complex(math.cos(arg), math.sin(arg)))
    logger.debug('m_product n=%d N=%d log|M|=%.6g', n, N, log_abs)
    return ProductValue(n, N, ld.tau, value, log_abs, arg, len(points))


def _floor(x):
    if isinstance(x, Fraction):
        return math.floor(x)
    return math.floor(complex(x).real)


def _real(x):
    return x if isinstance(x, Fraction) else complex(x).real


def sign_reduce(pt, n):
    """
    Move (r, s) to a representative with Re s in [0, 1/2].

    Integer shifts of (r, s) leave Z^(n) unchanged; the reflection
    (r, s) -> (-r, -s) multiplies it by (-1)^(n(n+1)/2).

    Returns:
        (TorsionPoint, int): the representative and the induced sign
    """
    if 0 <= _real(pt.s) <= Fraction(1, 2):
        return pt, 1
    s = pt.s - _floor(pt.s)
    if _real(s) <= Fraction(1, 2):
        return TorsionPoint(pt.r, s, pt.exact_order), 1
    r = -pt.r
    r = r - _floor(r)
    s = 1 - s
    return TorsionPoint(r, s, pt.exact_order), (-1) ** weight(n)


def modular_check(n, pt, tau, matrix, backend=None):
    """
    Relative residual of the weight law under an SL(2, Z) matrix.

    Compares Z^(n)_{ar-bs, ds-cr}((a tau + b)/(c tau + d)) with
    (c tau + d)^(n(n+1)/2) Z^(n)_{r,s}(tau). The transformed point is
    sign-reduced before it is evaluated.

    Args:
        matrix: ((a, b), (c, d)) with integer entries and ad - bc = 1
    Returns:
        float: |lhs - rhs| / max(|lhs|, |rhs|)
    """
    (a, b), (c, d) = matrix
    if any(int(x) != x for x in (a, b, c, d)) or a * d - b * c != 1:
        raise DomainError('matrix %s is not in SL(2, Z)' % (matrix,))
    bk = backend or get_backend()
    tau = bk.c(tau)
    rhs = (c * tau + d) ** weight(n) * z_n(n, pt, tau, bk).value
    moved = TorsionPoint(a * pt.r - b * pt.s, d * pt.s - c * pt.r, pt.exact_order)
    moved, sign = sign_reduce(moved, n)
    lhs = sign * z_n(n, moved, (a * tau + b) / (c * tau + d), bk).value
    scale = max(abs(lhs), abs(rhs))
    if scale == 0:
        return 0.0
    return float(abs(lhs - rhs) / scale)
