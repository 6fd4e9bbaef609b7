"""The polynomial ladder (Q_n, G_n, R_n) in X = Z_{r,s}(tau).

Level 0 is seeded from wp(a), wp'(a) with a = r + s*tau; every further
level is produced from the previous three Q's by

    phi_{n-1} = R_{n-1} Q_{n-2} + (n-1)/2 G_{n-1}
    P         = Q_{n-3} Q_{n-2} Q_{n-1}
    H         = phi (phi - P) (phi - t P),  H' = dH/dphi
    G_n = H / (G_{n-1} Q_{n-3}^3)
    Q_n = (Q_{n-3}^3 G_n - n/2 H') / (G_{n-1} Q_{n-3}^2)
    R_n = (phi_{n-1} Q_n + (n+1)/2 Q_{n-3} G_n) / (Q_{n-3} Q_{n-1})

with Q_{-2} = Q_{-1} = 1. All three divisions are exact in exact arithmetic
and are checked to be so numerically.
"""
import logging
from fractions import Fraction

import numpy as np

from premod import config
from premod.elliptic import hecke_Z, is_half_lattice, modular_lambda
from premod.errors import NumericalBreakdownError, SingularConfigurationError
from premod.poly import ComplexPoly

logger = logging.getLogger(__name__)


def degree_q(n):
    return (n + 1) * (n + 2) // 2 if n >= 0 else 0


def degree_g(n):
    return 3 * n * (n + 1) // 2


def degree_r(n):
    return n * (n + 1) + 1


class RecursionLevel(object):
    """One rung of the ladder at fixed (r, s, tau).

    Attributes:
        n (int): the level
        Q_prev3, Q_prev2, Q_prev1, Q: Q_{n-3}, Q_{n-2}, Q_{n-1}, Q_n
        G, R: G_n and R_n
        phi: phi_n = R_n Q_{n-1} + n/2 G_n
        phi_prev, G_prev: phi_{n-1} and G_{n-1}, or None at level 0
        q_lead, g_lead, r_lead: the closed-form leading coefficients
        hv (HeckeValue): the point the ladder was seeded at
        ld (LatticeData): the lattice
        t: the Legendre parameter of the lattice
    """
    __slots__ = ('n', 'Q_prev3', 'Q_prev2', 'Q_prev1', 'Q', 'G', 'R', 'phi',
                 'phi_prev', 'G_prev', 'q_lead', 'g_lead', 'r_lead', 'hv', 'ld', 't')

    def __init__(self, **fields):
        for name in self.__slots__:
            object.__setattr__(self, name, fields.get(name))

    def __setattr__(self, name, value):
        raise AttributeError('RecursionLevel is immutable')

    def __repr__(self):
        return 'RecursionLevel(n=%d, deg Q=%d, deg G=%d, deg R=%d)' % (
            self.n, self.Q.degree, self.G.degree, self.R.degree)

    def Q_at(self, k):
        """Q_k for k in n-3..n."""
        offset = self.n - k
        if offset not in (0, 1, 2, 3):
            raise IndexError('level %d only keeps Q_%d..Q_%d' % (self.n, self.n - 3, self.n))
        return (self.Q, self.Q_prev1, self.Q_prev2, self.Q_prev3)[offset]


def lead_exponents(n):
    """Powers (of 2, of E) dividing the leading coefficients of Q_n, G_n, R_n."""
    if n % 2 == 0:
        return ((n * (n + 2) // 2, n * (n + 2) // 4),
                (3 * n * n // 2, 3 * n * n // 4 + 1),
                (n * n, n * n // 2 + 1))
    return (((n + 1) ** 2 // 2, (n + 1) ** 2 // 4),
            ((3 * n * n + 1) // 2, (3 * n * n + 1) // 4 + 1),
            (n * n + 1, (n * n + 1) // 2 + 1))


def leading_coeffs(n, ld, hv=None):
    """
    Closed forms of the leading coefficients of Q_n, G_n and R_n.

    With E = e2 - e1 every exponent below is an integer:
      n even: q = 2^(-n(n+2)/2) E^(-n(n+2)/4)
              g = 2^(-3n^2/2) E^(-3n^2/4 - 1) wp'(a)
              r = 2^(-n^2) E^(-n^2/2 - 1) (wp(a) - e1)
      n odd:  q = 2^(-(n+1)^2/2) E^(-(n+1)^2/4)
              g = 2^(-(3n^2+1)/2) E^(-(3n^2+1)/4 - 1) wp'(a)
              r = 2^(-n^2-1) E^(-(n^2+1)/2 - 1) (wp(a) - e1)

    Args:
        n (int): the level, n >= 0
        ld (LatticeData): the lattice
        hv (HeckeValue): the point; without it only q_n is returned
    Returns:
        (q_n, g_n, r_n), with g_n and r_n None when hv is None
    """
    bk = ld.backend
    E = ld.e2 - ld.e1
    two = bk.c(2)
    if n < 0:
        return bk.c(1), None, None
    (q_exp2, q_expE), (g_exp2, g_expE), (r_exp2, r_expE) = lead_exponents(n)
    q_lead = 1 / (two ** q_exp2 * E ** q_expE)
    if hv is None:
        return q_lead, None, None
    g_lead = hv.wp_prime / (two ** g_exp2 * E ** g_expE)
    r_lead = (hv.wp - ld.e1) / (two ** r_exp2 * E ** r_expE)
    return q_lead, g_lead, r_lead


def seed_level0(hv, ld):
    """
    Level 0: Q_0 = X, G_0 = wp'(a)/E, R_0 = (wp(a) - e1)/E X + G_0/2.

    Raises:
        SingularConfigurationError: when a is a 2-torsion point
    """
    bk = ld.backend
    E = ld.e2 - ld.e1
    if is_half_lattice(hv.point):
        raise SingularConfigurationError(
            'a = %s is a half period: (r, s) = (%s, %s)' % (hv.a, hv.point.r, hv.point.s))
    one = ComplexPoly.constant(1, bk)
    G0 = hv.wp_prime / E
    R0 = ComplexPoly(bk.array([G0 / 2, (hv.wp - ld.e1) / E]))
    q_lead, g_lead, r_lead = leading_coeffs(0, ld, hv)
    return RecursionLevel(n=0, Q_prev3=one, Q_prev2=one, Q_prev1=one,
                          Q=ComplexPoly.monomial_x(bk),
                          G=ComplexPoly.constant(G0, bk), R=R0, phi=R0,
                          phi_prev=None, q_lead=q_lead, g_lead=g_lead,
                          r_lead=r_lead, hv=hv, ld=ld, t=modular_lambda(ld))


def _h_and_derivative(phi, P, t):
    a = phi
    b = phi - P
    c = phi - P * t
    return a * b * c, a * b + a * c + b * c


def _fit(poly, degree, n):
    if poly.degree < degree:
        raise NumericalBreakdownError(
            'expected degree %d, leading coefficients cancelled to degree %d'
            % (degree, poly.degree), level=n)
    return poly.fit_degree(degree, level=n)


def step(level, ld, t=None):
    """
    Advance the ladder from level n-1 to level n.

    Args:
        level (RecursionLevel): the valid level n-1
        ld (LatticeData): the lattice of the level
        t: Legendre parameter; defaults to the level's own
    Returns:
        RecursionLevel: level n
    Raises:
        NumericalBreakdownError: a division left a remainder, tagged with n
    """
    n = level.n + 1
    bk = ld.backend

    def half(k):
        return bk.c(Fraction(k, 2))

    t = level.t if t is None else t
    Q3, Q2, Q1 = level.Q_prev2, level.Q_prev1, level.Q
    phi_prev = level.phi
    P = Q3 * Q2 * Q1
    H, Hp = _h_and_derivative(phi_prev, P, t)
    Q3_sq = Q3 * Q3
    G = _fit(H.divide_exact(level.G * Q3_sq * Q3, level=n), degree_g(n), n)
    Q = _fit((Q3_sq * Q3 * G - Hp * half(n)).divide_exact(level.G * Q3_sq, level=n),
             degree_q(n), n)
    R = _fit((phi_prev * Q + Q3 * G * half(n + 1)).divide_exact(Q3 * Q1, level=n),
             degree_r(n), n)
    phi = R * Q1 + G * half(n)
    q_lead, g_lead, r_lead = leading_coeffs(n, ld, level.hv)
    logger.debug('  level %d: deg Q = %d, deg G = %d, deg R = %d', n, Q.degree, G.degree, R.degree)
    return RecursionLevel(n=n, Q_prev3=Q3, Q_prev2=Q2, Q_prev1=Q1, Q=Q, G=G, R=R,
                          phi=phi, phi_prev=phi_prev, G_prev=level.G, q_lead=q_lead, g_lead=g_lead,
                          r_lead=r_lead, hv=level.hv, ld=ld, t=t)


def build_to(n, pt, ld):
    """
    Iterate `step` from the seed up to level n.

    Args:
        n (int): the target level, n >= 0
        pt (TorsionPoint): the point (r, s)
        ld (LatticeData): the lattice
    Returns:
        RecursionLevel: level n
    """
    cap = config.active().level_cap_double
    if ld.backend.name == 'double' and n > cap:
        raise NumericalBreakdownError(
            'level %d exceeds the double-precision cap %d; use the extended backend'
            % (n, cap), level=n)
    level = seed_level0(hecke_Z(pt, ld), ld)
    while level.n < n:
        level = step(level, ld)
    return level


def interpolate_level(level, radius=None):
    """
    Rebuild G_n, Q_n, R_n by sampling the right-hand sides on a circle.

    The values at the M = deg + 1 points radius * exp(2 pi i k/M) are
    inverted with an FFT. Runs in double precision.

    Args:
        level (RecursionLevel): level n >= 1
        radius (float): circle radius, default max(1, |Z|)
    Returns:
        dict: name -> numpy array of coefficients, lowest first
    """
    n = level.n
    if n < 1:
        raise ValueError('interpolate_level needs n >= 1')
    radius = radius or max(1.0, abs(complex(level.hv.Z)))
    t = complex(level.t)
    c = {name: getattr(level, name).to_complex()
         for name in ('Q_prev3', 'Q_prev2', 'Q_prev1')}
    c['phi_prev'] = level.phi_prev.to_complex()
    G_prev = level.G_prev.to_complex()

    def rhs(x):
        q3 = np.polyval(c['Q_prev3'][::-1], x)
        q2 = np.polyval(c['Q_prev2'][::-1], x)
        q1 = np.polyval(c['Q_prev1'][::-1], x)
        ph = np.polyval(c['phi_prev'][::-1], x)
        gp = np.polyval(G_prev[::-1], x)
        p = q3 * q2 * q1
        a, b, cc = ph, ph - p, ph - t * p
        h = a * b * cc
        hp = a * b + a * cc + b * cc
        g = h / (gp * q3 ** 3)
        q = (q3 ** 3 * g - n / 2.0 * hp) / (gp * q3 ** 2)
        r = (ph * q + (n + 1) / 2.0 * q3 * g) / (q3 * q1)
        return g, q, r

    result = {}
    for (name, degree, index) in (('G', degree_g(n), 0), ('Q', degree_q(n), 1),
                                  ('R', degree_r(n), 2)):
        M = degree + 1
        xs = radius * np.exp(2j * np.pi * np.arange(M) / M)
        values = np.array([rhs(x)[index] for x in xs])
        coeffs = np.fft.fft(values) / M
        result[name] = coeffs / radius ** np.arange(M)
    return result


def cross_check(level, tol=None):
    """Largest relative gap between the division and interpolation paths."""
    tol = tol if tol is not None else config.tol('cross_check')
    interp = interpolate_level(level)
    worst = 0.0
    for name in ('G', 'Q', 'R'):
        poly = getattr(level, name)
        rho = poly.balance_scale()
        ref = poly.scaled(rho).to_complex()
        scale = rho ** np.arange(len(ref))
        gap = np.max(np.abs(interp[name] * scale - ref)) / np.max(np.abs(ref))
        worst = max(worst, float(gap))
    if worst > tol:
        raise NumericalBreakdownError(
            'division and interpolation paths disagree by %.3g' % worst, level=level.n)
    return worst


def _eval_margin(poly, x):
    """|p(x)| relative to its size without cancellation."""
    scale = poly.magnitude(x)
    if scale == 0:
        return 0.0
    return float(abs(np.polyval(poly.to_complex()[::-1], x)) / scale)


def _min_margin(roots_of, others):
    margins = [_eval_margin(p, x) for x in roots_of.roots() for p in others]
    return min(margins) if margins else float('inf')


def _relative(value, expected):
    value, expected = complex(value), complex(expected)
    return abs(value - expected) / max(abs(expected), 1e-300)


def level_invariants(level):
    """
    Residuals of every structural property of a level.

    Returns:
        dict: name -> residual (degree is a bool); smaller is better except
        for the no_common_zero margins, which must stay above the tolerance
    """
    n = level.n
    ld = level.ld
    bk = ld.backend
    report = {
        'degree': (level.Q.degree == degree_q(n) and level.G.degree == degree_g(n)
                   and level.R.degree == degree_r(n)),
        'lead_q': _relative(level.Q.lead, level.q_lead),
        'lead_g': _relative(level.G.lead, level.g_lead),
        'lead_r': _relative(level.R.lead, level.r_lead),
    }
    half_n1 = bk.c(Fraction(n + 1, 2))
    residue_poly = level.R * level.Q_prev1 - level.G * half_n1
    report['divides_rq'] = residue_poly.remainder_norm(level.Q)
    report['divides_phi'] = (level.phi.remainder_norm(level.Q_prev2)
                             if level.Q_prev2.degree > 0 else 0.0)

    if n >= 1:
        lhs = residue_poly * level.Q_prev3
        rhs = level.phi_prev * level.Q
        M = 2 * max(lhs.degree, rhs.degree) + 1
        radius = max(1.0, abs(complex(level.hv.Z)))
        xs = radius * np.exp(2j * np.pi * np.arange(M) / M)
        lv = np.array([complex(lhs(bk.c(x))) for x in xs])
        rv = np.array([complex(rhs(bk.c(x))) for x in xs])
        report['step_identity'] = float(np.max(np.abs(lv - rv)) / np.max(np.abs(rv)))

    q_prev_lead = leading_coeffs(n - 2, ld)[0]
    expected = level.r_lead - q_prev_lead * level.q_lead
    top = (level.R - level.Q_prev2 * level.Q).coeffs[degree_r(n)]
    report['degree_preserving'] = _relative(top, expected)
    expected_t = level.r_lead - level.t * q_prev_lead * level.q_lead
    top_t = (level.R - level.Q_prev2 * level.Q * level.t).coeffs[degree_r(n)]
    report['degree_preserving_t'] = _relative(top_t, expected_t)

    others = [level.R, level.G] + ([level.Q_prev2] if level.Q_prev2.degree > 0 else [])
    margin = _min_margin(level.Q, others)
    if level.Q_prev2.degree > 0:
        margin = min(margin, _min_margin(level.Q_prev2, [level.Q, level.R, level.G]))
    if level.G.degree > 0:
        margin = min(margin, _min_margin(level.G, [level.Q] + others[2:]))
    report['no_common_zero'] = margin
    return report


def check_level(level):
    """Raises NumericalBreakdownError when `level_invariants` fails its tolerances."""
    report = level_invariants(level)
    division = config.tol('division')
    failures = []
    if not report['degree']:
        failures.append('degree')
    for name in ('divides_rq', 'divides_phi', 'step_identity'):
        if report.get(name, 0.0) > division:
            failures.append(name)
    for name in ('lead_q', 'lead_g', 'lead_r', 'degree_preserving', 'degree_preserving_t'):
        if report[name] > division:
            failures.append(name)
    if report['no_common_zero'] < config.tol('pole_proximity'):
        failures.append('no_common_zero')
    if failures:
        raise NumericalBreakdownError('invariants failed: %s' % ', '.join(failures),
                                      level=level.n)
    return report


def pole_residue_identity(level):
    """
    R_n Q_{n-1} / G_n at the roots of Q_n and Q_{n-2}.

    The ratio is (n+1)/2 at every root of Q_n and -n/2 at every root of
    Q_{n-2}.

    Returns:
        (float, float): the largest deviations at the two root sets
    """
    n = level.n
    R, Q1, G = level.R.to_complex(), level.Q_prev1.to_complex(), level.G.to_complex()

    def ratio(x):
        return (np.polyval(R[::-1], x) * np.polyval(Q1[::-1], x)
                / np.polyval(G[::-1], x))

    at_q = [abs(ratio(x) - (n + 1) / 2.0) for x in level.Q.roots()]
    at_q2 = [abs(ratio(x) + n / 2.0) for x in level.Q_prev2.roots()]
    return max(at_q or [0.0]), max(at_q2 or [0.0])
