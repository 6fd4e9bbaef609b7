"""Zeros of functions of tau: counting, refinement and the l(j)-degree fit."""
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg

from premod import config
from premod.backend import backend_for_order
from premod.counting import ab_coeffs, count_L, eps, psi
from premod.elliptic import lattice_data
from premod.errors import (BoundaryTooCloseError, DomainError,
                           IllConditionedFitError, NumericalBreakdownError,
                           SuspectedMultipleZeroError)
from premod.premodular import m_product

logger = logging.getLogger(__name__)


Rect = namedtuple('Rect', 're_min re_max im_min im_max')

ZeroRecord = namedtuple('ZeroRecord', 'tau0 residual derivative_mag multiplicity_claim')

EllFit = namedtuple('EllFit', 'degree fit_residual coeffs effective_degree samples')

# Phase steps above this are subdivided before they are summed.
MAX_PHASE_STEP = math.pi / 4
MAX_SUBDIVISION = 10


def check_rect(rect):
    floor = config.tol('im_tau_floor')
    if rect.im_min <= floor or rect.re_min >= rect.re_max or rect.im_min >= rect.im_max:
        raise DomainError('bad rectangle %s (Im floor %g)' % (rect, floor))
    return rect


def box(center, half_width):
    """The square of half-width `half_width` around `center`."""
    center = complex(center)
    return Rect(center.real - half_width, center.real + half_width,
                center.imag - half_width, center.imag + half_width)


def split_horizontal(rect, im_cut):
    return (Rect(rect.re_min, rect.re_max, rect.im_min, im_cut),
            Rect(rect.re_min, rect.re_max, im_cut, rect.im_max))


def _boundary(rect, samples_per_edge):
    corners = [complex(rect.re_min, rect.im_min), complex(rect.re_max, rect.im_min),
               complex(rect.re_max, rect.im_max), complex(rect.re_min, rect.im_max)]
    points = []
    for k in range(4):
        a, b = corners[k], corners[(k + 1) % 4]
        for j in range(samples_per_edge):
            points.append(a + (b - a) * j / float(samples_per_edge))
    return points


def _evaluate(f, points, threads):
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as executor:
            return [complex(v) for v in executor.map(f, points)]
    return [complex(f(p)) for p in points]


def _phase_step(f, a, b, fa, fb, depth):
    step = np.angle(fb / fa)
    if abs(step) <= MAX_PHASE_STEP or depth >= MAX_SUBDIVISION:
        return step
    mid = (a + b) / 2
    fm = complex(f(mid))
    return _phase_step(f, a, mid, fa, fm, depth + 1) + _phase_step(f, mid, b, fm, fb, depth + 1)


def _nudge(rect, attempt):
    delta = 0.01 * attempt * min(rect.re_max - rect.re_min, rect.im_max - rect.im_min)
    im_min = rect.im_min - delta
    if im_min <= config.tol('im_tau_floor'):
        im_min = rect.im_min + delta
    return Rect(rect.re_min - delta, rect.re_max + delta, im_min, rect.im_max + delta)


def winding_count(f, rect, samples_per_edge=64, scale=None, threads=None, nudges=3):
    """
    Number of zeros of f inside rect, by the argument principle.

    Args:
        f: callable tau -> complex, holomorphic near rect
        rect (Rect): the contour, traversed counter-clockwise
        samples_per_edge (int): initial samples per edge; steps whose phase
            jumps exceed pi/4 are bisected
        scale (float): reference magnitude (default: max |f| on the boundary)
    Returns:
        int
    Raises:
        BoundaryTooCloseError: the boundary passes near a zero after
            `nudges` enlargements, or the winding is not near an integer
    """
    threads = threads or config.active().threads
    check_rect(rect)
    for attempt in range(nudges + 1):
        points = _boundary(rect, samples_per_edge)
        values = _evaluate(f, points, threads)
        mags = np.abs(values)
        ref = scale or float(np.max(mags))
        if float(np.min(mags)) >= config.tol('winding_floor') * ref:
            break
        logger.info('  boundary of %s passes near a zero, nudging', rect)
        rect = _nudge(rect, attempt + 1)
    else:
        raise BoundaryTooCloseError('rectangle boundary stays within %g of a zero'
                                    % config.tol('winding_floor'))
    total = 0.0
    M = len(points)
    for k in range(M):
        total += _phase_step(f, points[k], points[(k + 1) % M],
                             values[k], values[(k + 1) % M], 0)
    winding = total / (2 * math.pi)
    count = int(round(winding))
    if abs(winding - count) > config.tol('winding_rounding'):
        raise BoundaryTooCloseError('winding %.4f is not near an integer; '
                                    'increase samples_per_edge' % winding)
    return count


def _derivative(f, tau, h):
    return (complex(f(tau + h)) - complex(f(tau - h))) / (2 * h)


def _ring_scale(f, center, radius=0.05, points=8):
    ring = [center + radius * complex(math.cos(2 * math.pi * k / points),
                                      math.sin(2 * math.pi * k / points))
            for k in range(points)]
    return max(abs(complex(f(p))) for p in ring)


def refine_zero(f, seed, h=1e-6, max_iter=50, scale=None, verify=True):
    """
    Newton's method with a central-difference derivative.

    Args:
        f: callable tau -> complex
        seed (complex): starting point
        h (float): difference step
        scale (float): reference magnitude (default: max |f| on a ring of
            radius 0.05 around the seed)
        verify (bool): re-check that a 1e-3 box around the zero winds once
    Returns:
        ZeroRecord
    Raises:
        NumericalBreakdownError: Newton diverged or did not converge
        SuspectedMultipleZeroError: the derivative at the zero is below the
            simplicity threshold
    """
    seed = complex(seed)
    scale = scale or _ring_scale(f, seed)
    tau = seed
    value = complex(f(tau))
    for _ in range(max_iter):
        if abs(value) < config.tol('newton') * scale:
            break
        d = _derivative(f, tau, h)
        if d == 0:
            raise NumericalBreakdownError('Newton: zero derivative at %s' % tau)
        tau = tau - value / d
        if abs(tau - seed) > 1 or tau.imag <= config.tol('im_tau_floor'):
            raise NumericalBreakdownError('Newton diverged from seed %s' % seed)
        value = complex(f(tau))
    else:
        raise NumericalBreakdownError('Newton did not converge from seed %s' % seed)
    derivative_mag = abs(_derivative(f, tau, h))
    if derivative_mag <= config.tol('simplicity') * scale:
        raise SuspectedMultipleZeroError(
            'derivative %.3g at tau0 = %s is below the simplicity threshold'
            % (derivative_mag, tau))
    if verify:
        count = winding_count(f, box(tau, 1e-3), samples_per_edge=16)
        if count > 1:
            raise SuspectedMultipleZeroError('%d zeros wind around tau0 = %s' % (count, tau))
        if count != 1:
            raise NumericalBreakdownError('no zero winds around tau0 = %s' % tau)
    return ZeroRecord(tau, abs(value) / scale, derivative_mag, 1)


def grid_scan(f, rect, nx=13, ny=13, threads=None):
    """Grid points where |f| is a local minimum, as Newton seeds."""
    threads = threads or config.active().threads
    res = np.linspace(rect.re_min, rect.re_max, nx)
    ims = np.linspace(rect.im_min, rect.im_max, ny)
    points = [complex(x, y) for y in ims for x in res]
    mags = np.abs(_evaluate(f, points, threads)).reshape(ny, nx)
    seeds = []
    for i in range(1, ny - 1):
        for j in range(1, nx - 1):
            if mags[i, j] <= mags[i - 1:i + 2, j - 1:j + 2].min():
                seeds.append(complex(res[j], ims[i]))
    return seeds


def locate_zeros(f, rect, nx=13, ny=13):
    """
    Refined zeros of f in rect, checked against the winding count.

    Raises:
        NumericalBreakdownError: the refined zeros do not account for the
            winding count
    """
    expected = winding_count(f, rect)
    zeros = []
    for seed in grid_scan(f, rect, nx, ny):
        try:
            record = refine_zero(f, seed)
        except NumericalBreakdownError:
            continue
        inside = (rect.re_min < record.tau0.real < rect.re_max
                  and rect.im_min < record.tau0.imag < rect.im_max)
        if inside and all(abs(record.tau0 - z.tau0) > 1e-6 for z in zeros):
            zeros.append(record)
    if len(zeros) != expected:
        raise NumericalBreakdownError('found %d zeros, the winding count is %d'
                                      % (len(zeros), expected))
    return zeros


def default_ell_samples():
    grid = config.active().ell_grid
    res = np.linspace(*grid['re'][:2], num=int(grid['re'][2]))
    ims = np.linspace(*grid['im'][:2], num=int(grid['im'][2]))
    return [complex(x, y) for y in ims for x in res]


def ell_degree_fit(n, N, tau_samples=None, backend=None):
    """
    Fit F = M_{n,N} / Delta^k as a polynomial in j and read off its degree.

    F is formed in log form, exp(log M - k log Delta). The j values are
    mapped affinely onto the unit disc before the least-squares fit of
    degree D = 2L + 4; the effective degree is the largest index whose
    coefficient exceeds ell_effective_degree times the largest.

    Args:
        n (int): the index
        N (int): the order, with eps_n(N) = 0
        tau_samples: where to sample (default: config ell_grid)
    Returns:
        EllFit: degree is the effective degree divided by 2
    Raises:
        IllConditionedFitError: too few distinct j values, an ill-conditioned
            Vandermonde matrix or an odd effective degree
    """
    if eps(n, N):
        raise DomainError('ell_degree_fit needs eps_n(N) = 0, got (n, N) = (%d, %d)' % (n, N))
    k_exact = n * (n + 1) * psi(N)
    if k_exact % 24:
        raise DomainError('Delta power n(n+1)Psi(N)/24 is not an integer for (%d, %d)' % (n, N))
    k = k_exact // 24
    L = count_L(n, N).L
    D = 2 * L + 4
    taus = list(tau_samples or default_ell_samples())
    if backend is None:
        a, b = ab_coeffs(n)
        backend = backend_for_order(max(a, b / 2.0), max(t.imag for t in taus))
    bk = backend

    js, logs = [], []
    for tau in taus:
        ld = lattice_data(tau, bk)
        prod = m_product(n, N, ld)
        log_f = (prod.log_abs - k * bk.log_abs(ld.delta)) + 1j * (prod.arg - k * bk.arg(ld.delta))
        js.append(complex(ld.j))
        logs.append(log_f)
    js = np.array(js)
    if len(set(np.round(js, 6))) < 2 * (2 * L + 2) + 1:
        raise IllConditionedFitError('need %d distinct j values, have %d; add samples'
                                     % (2 * (2 * L + 2) + 1, len(set(js))))
    # F is single-valued, so the arg branch of each sample does not matter
    values = np.exp(np.array(logs) - np.max(np.real(logs)))
    center = js.mean()
    radius = np.max(np.abs(js - center))
    u = (js - center) / radius
    V = np.vander(u, D + 1, increasing=True)
    if np.linalg.cond(V) > 1e12:
        raise IllConditionedFitError('Vandermonde matrix is ill-conditioned; '
                                     'spread the samples further')
    coeffs, _, _, _ = scipy.linalg.lstsq(V, values)
    residual = float(np.linalg.norm(V.dot(coeffs) - values) / np.linalg.norm(values))
    mags = np.abs(coeffs)
    effective = int(np.max(np.nonzero(mags > config.tol('ell_effective_degree') * mags.max())))
    if effective % 2:
        raise IllConditionedFitError('odd effective degree %d in j' % effective)
    logger.info('  ell fit n=%d N=%d: degree %d, residual %.3g', n, N, effective // 2, residual)
    return EllFit(effective // 2, residual, coeffs, effective, len(taus))
