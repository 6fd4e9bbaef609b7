"""Dense complex polynomials, lowest degree first.

Coefficients are either a complex128 array (double backend) or an object
array of mpmath numbers (extended backend); arithmetic goes through
numpy.polynomial.polynomial, which handles both.
"""
import math

import numpy as np
from numpy.polynomial import polynomial as P

from premod import config
from premod.errors import NumericalBreakdownError


def _as_coeffs(values):
    arr = np.asarray(values)
    if arr.dtype != object:
        arr = arr.astype(np.complex128)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    return arr


def _abs_max(arr):
    return max(float(abs(c)) for c in arr) if len(arr) else 0.0


def _pow2(x):
    """Nearest power of two; scaling by it is exact in every backend."""
    if x <= 0 or not math.isfinite(x):
        return 1.0
    return 2.0 ** round(math.log2(x))


class ComplexPoly(object):
    """A polynomial sum_k coeffs[k] X^k.

    The stored length is the degree plus one; exact zeros at the top are
    trimmed on construction, numerically small ones only by `fit_degree`.
    """
    __slots__ = ('coeffs',)

    def __init__(self, coeffs):
        arr = _as_coeffs(coeffs)
        top = len(arr)
        while top > 1 and arr[top - 1] == 0:
            top -= 1
        object.__setattr__(self, 'coeffs', arr[:max(top, 1)].copy())

    def __setattr__(self, name, value):
        raise AttributeError('ComplexPoly is immutable')

    @classmethod
    def constant(cls, value, backend):
        return cls(backend.array([value]))

    @classmethod
    def monomial_x(cls, backend):
        return cls(backend.array([0, 1]))

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    def __repr__(self):
        return 'ComplexPoly(degree=%d)' % self.degree

    def __add__(self, other):
        if isinstance(other, ComplexPoly):
            return ComplexPoly(P.polyadd(self.coeffs, other.coeffs))
        return ComplexPoly(P.polyadd(self.coeffs, [other]))

    __radd__ = __add__

    def __neg__(self):
        return ComplexPoly(-self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, ComplexPoly):
            return ComplexPoly(P.polymul(self.coeffs, other.coeffs))
        return ComplexPoly(self.coeffs * other)

    __rmul__ = __mul__

    def __pow__(self, k):
        result = ComplexPoly(self.coeffs[:1] * 0 + 1)
        for _ in range(k):
            result = result * self
        return result

    def __call__(self, x):
        result = self.coeffs[-1]
        for c in self.coeffs[-2::-1]:
            result = result * x + c
        return result

    def norm(self):
        return _abs_max(self.coeffs)

    def magnitude(self, x):
        """sum |c_k| max(1, |x|)^k, the size p(x) would have without cancellation."""
        ax = max(1.0, float(abs(x)))
        total = 0.0
        for c in self.coeffs[::-1]:
            total = total * float(ax) + float(abs(c))
        return total

    def root_radius(self):
        """Cauchy-style bound max_k |c_k/c_d|^(1/(d-k)) on the root moduli."""
        d = self.degree
        if d <= 0:
            return 1.0
        lead = abs(complex(self.coeffs[-1]))
        if lead == 0:
            return 1.0
        radius = 0.0
        for k in range(d):
            ck = abs(complex(self.coeffs[k]))
            if ck:
                radius = max(radius, (ck / lead) ** (1.0 / (d - k)))
        return radius or 1.0

    def balance_scale(self):
        """The root radius rounded to a power of two."""
        return _pow2(self.root_radius())

    def scaled(self, rho):
        """Coefficients of p(rho * Y) as a polynomial in Y."""
        powers = [rho ** k for k in range(len(self.coeffs))]
        return ComplexPoly(np.array([c * w for (c, w) in zip(self.coeffs, powers)],
                                    dtype=self.coeffs.dtype))

    def balanced_norm(self, rho=None):
        rho = rho if rho is not None else self.balance_scale()
        return self.scaled(rho).norm()

    def fit_degree(self, degree, tol=None, level=None):
        """Drops the coefficients above `degree`, which must be negligible.

        Negligible is measured in the balanced variable X = rho*Y, where rho
        is the root radius of the kept part.
        """
        if self.degree <= degree:
            return self
        tol = tol if tol is not None else config.tol('coefficient_drop')
        kept = ComplexPoly(self.coeffs[:degree + 1])
        rho = kept.balance_scale()
        scaled = self.scaled(rho).coeffs
        ref = _abs_max(scaled[:degree + 1])
        dropped = _abs_max(scaled[degree + 1:])
        if dropped > tol * ref:
            raise NumericalBreakdownError(
                'coefficients above degree %d are not negligible (%.3g relative)'
                % (degree, dropped / ref), level=level)
        return kept

    def divide_exact(self, other, tol=None, level=None):
        """
        Long division that must leave no remainder.

        The division runs in the balanced variable Y = X/rho with rho the
        root radius of the divisor, both operands normalized to unit norm.

        Args:
            other (ComplexPoly): the divisor
            tol (float): allowed remainder norm relative to the dividend
            level (int): recursion level reported on failure
        Returns:
            ComplexPoly: the quotient
        """
        tol = tol if tol is not None else config.tol('division')
        rho = other.balance_scale()
        num = self.scaled(rho)
        den = other.scaled(rho)
        num_norm = _pow2(num.norm())
        den_norm = _pow2(den.norm())
        if den.norm() == 0:
            raise NumericalBreakdownError('division by the zero polynomial', level=level)
        if num.norm() == 0:
            return ComplexPoly(self.coeffs[:1] * 0)
        quot, rem = P.polydiv(num.coeffs / num_norm, den.coeffs / den_norm)
        rem_norm = _abs_max(rem)
        if rem_norm > tol:
            raise NumericalBreakdownError(
                'inexact division: remainder %.3g relative to the dividend' % rem_norm,
                level=level)
        quot = ComplexPoly(quot) * (num_norm / den_norm)
        return quot.scaled(1 / rho)

    def remainder_norm(self, other):
        """Relative norm of the remainder of self / other, in the balanced variable."""
        rho = other.balance_scale()
        num = self.scaled(rho)
        den = other.scaled(rho)
        if num.norm() == 0:
            return 0.0
        _, rem = P.polydiv(num.coeffs / num.norm(), den.coeffs / den.norm())
        return _abs_max(rem)

    def derivative(self):
        if self.degree == 0:
            return ComplexPoly(self.coeffs[:1] * 0)
        return ComplexPoly(np.array([self.coeffs[k] * k for k in range(1, len(self.coeffs))],
                                    dtype=self.coeffs.dtype))

    def to_complex(self):
        return np.array([complex(c) for c in self.coeffs], dtype=np.complex128)

    def roots(self):
        """Numerical roots, always in double precision."""
        if self.degree <= 0:
            return np.zeros(0, dtype=np.complex128)
        return np.roots(self.to_complex()[::-1])
