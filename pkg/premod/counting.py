"""Closed-form counts attached to the torsion points of exact order N.

All arithmetic is exact (Fraction); every count must land on a
nonnegative integer, which is asserted, never rounded.
"""
import logging
from collections import namedtuple
from fractions import Fraction

import sympy

from premod.errors import DomainError, InternalInconsistencyError

logger = logging.getLogger(__name__)


CountReport = namedtuple('CountReport', [
    'n', 'N', 'phi_N', 'phi_halfN', 'psi_N', 'eps', 'a_n', 'b_n', 'L', 'PL',
    'v_inf_pred', 'k_nN', 'ell_degree_pred', 'parity_ok', 'shortcut_ok'])


def _as_natural(x):
    """x as a positive int, or None when x is not a natural number."""
    x = Fraction(x)
    if x.denominator != 1 or x <= 0:
        return None
    return int(x)


def euler_phi(x):
    """Euler's phi, extended by phi(x) = 0 off the natural numbers."""
    N = _as_natural(x)
    if N is None:
        return 0
    return int(sympy.totient(N))


def psi(N):
    """Psi(N) = N^2 prod_{p | N} (1 - 1/p^2), the size of Q(N)."""
    N = _as_natural(N)
    if N is None:
        return 0
    value = Fraction(N * N)
    for p in sympy.factorint(N):
        value *= Fraction(p * p - 1, p * p)
    return int(value)


def totients(N):
    """(phi(N), Psi(N))."""
    return euler_phi(N), psi(N)


def ab_coeffs(n):
    """a_{2k} = a_{2k+1} = k(k+1)/2 and b_{2k} = b_{2k-1} = k^2."""
    if n < 0:
        raise DomainError('ab_coeffs needs n >= 0, got %d' % n)
    k = n // 2
    j = (n + 1) // 2
    return k * (k + 1) // 2, j * j


def eps(n, N):
    return 1 if N == 3 and n % 3 == 1 else 0


def vinf_pred(n, N):
    """a_n phi(N) + b_n phi(N/2), the order of M_{n,N} at the cusp."""
    a, b = ab_coeffs(n)
    return a * euler_phi(N) + b * euler_phi(Fraction(N, 2))


def _integral(value, what, n, N):
    if value.denominator != 1 or value < 0:
        raise InternalInconsistencyError(
            '%s(n=%d, N=%d) = %s is not a nonnegative integer' % (what, n, N, value))
    return int(value)


def count_U(n, N, v_inf):
    """1/2 (n(n+1) Psi(N)/24 - v_inf) + 2/3 eps_n(N), for a supplied v_inf."""
    return (Fraction(n * (n + 1) * psi(N), 24) - v_inf) / 2 + Fraction(2, 3) * eps(n, N)


def _count_L(n, N):
    return _integral(count_U(n, N, vinf_pred(n, N)), 'L', n, N)


def count_PL(n, N):
    """The count of Theorem A: 0 for N in {1, 2}, else
    n(n+1)/12 (Psi(N) - 3 phi(N)) + 2/3 eps_n(N)."""
    if n < 1 or N < 1:
        raise DomainError('count_PL needs n >= 1 and N >= 1, got (%d, %d)' % (n, N))
    if N in (1, 2):
        return 0
    value = (Fraction(n * (n + 1), 12) * (psi(N) - 3 * euler_phi(N))
             + Fraction(2, 3) * eps(n, N))
    return _integral(value, 'PL', n, N)


def count_L(n, N):
    """
    The number of Lame equations with monodromy of order N at index n.

    Args:
        n (int): the index, n >= 1
        N (int): the order, N >= 3
    Returns:
        CountReport: L, PL and every quantity they are built from
    Raises:
        InternalInconsistencyError: L or PL is not a nonnegative integer
    """
    if n < 1 or N < 3:
        raise DomainError('count_L needs n >= 1 and N >= 3, got (%d, %d)' % (n, N))
    a, b = ab_coeffs(n)
    phi_N, psi_N = totients(N)
    L = _count_L(n, N)
    PL = count_PL(n, N)
    v_inf = vinf_pred(n, N)
    parity = L + _count_L(n, 2 * N) if N % 2 else _count_L(n, 2 * N)
    shortcut = None
    if N % 4 == 0:
        shortcut = v_inf == (2 * a + b) * euler_phi(N // 2)
    return CountReport(n=n, N=N, phi_N=phi_N, phi_halfN=euler_phi(Fraction(N, 2)),
                       psi_N=psi_N, eps=eps(n, N), a_n=a, b_n=b, L=L, PL=PL,
                       v_inf_pred=v_inf, k_nN=Fraction(n * (n + 1) * psi_N, 24),
                       ell_degree_pred=L, parity_ok=(parity == PL), shortcut_ok=shortcut)


def count_table(n_values, N_values):
    """CountReports for every (n, N) pair, n-major."""
    reports = []
    for n in n_values:
        for N in N_values:
            reports.append(count_L(n, N))
    logger.info('  count table: %d rows', len(reports))
    return reports
