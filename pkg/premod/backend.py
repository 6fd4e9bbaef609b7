"""Complex arithmetic backends of the numeric kernel.

The kernel is written once against the small interface below. `double`
runs on numpy complex128 scalars; `extended` runs on an mpmath context of
configurable precision. Values of different backends must not be mixed.
"""
import math
import threading
from fractions import Fraction

import numpy as np
from mpmath.ctx_mp import MPContext

from premod import config


class DoubleBackend(object):
    name = 'double'
    dtype = np.complex128

    def __init__(self):
        self.pi = np.pi
        self.eps = np.finfo(np.float64).eps
        self.series_tol = config.tol('series')
        self.dps = 15

    def c(self, x):
        if isinstance(x, Fraction):
            return complex(x.numerator / x.denominator)
        return complex(x)

    def real(self, x):
        return float(x)

    def exp(self, z):
        return np.exp(complex(z))

    def log(self, z):
        return np.log(complex(z))

    def sin(self, z):
        return np.sin(complex(z))

    def cos(self, z):
        return np.cos(complex(z))

    def cot(self, z):
        return 1.0 / np.tan(complex(z))

    def sqrt(self, z):
        return np.sqrt(complex(z))

    def array(self, values):
        return np.array([self.c(v) for v in values], dtype=np.complex128)

    def zeros(self, size):
        return np.zeros(size, dtype=np.complex128)

    def to_complex(self, z):
        return complex(z)

    def log_abs(self, z):
        return float(np.log(abs(complex(z))))

    def arg(self, z):
        return float(np.angle(complex(z)))

    def __repr__(self):
        return 'DoubleBackend()'


class ExtendedBackend(object):
    """mpmath backend. Each instance owns its own context and precision."""
    name = 'extended'
    dtype = object

    def __init__(self, dps):
        self.ctx = MPContext()
        self.ctx.dps = dps
        self.dps = dps
        self.pi = self.ctx.pi
        self.eps = self.ctx.mpf(2) ** (-self.ctx.prec)
        self.series_tol = self.ctx.mpf(10) ** (-(dps + 5))

    def c(self, x):
        if isinstance(x, Fraction):
            return self.ctx.mpc(self.ctx.mpf(x.numerator) / x.denominator)
        if isinstance(x, (complex, np.complexfloating)):
            return self.ctx.mpc(complex(x).real, complex(x).imag)
        return self.ctx.mpc(x)

    def real(self, x):
        if isinstance(x, Fraction):
            return self.ctx.mpf(x.numerator) / x.denominator
        return self.ctx.mpf(x)

    def exp(self, z):
        return self.ctx.exp(z)

    def log(self, z):
        return self.ctx.log(z)

    def sin(self, z):
        return self.ctx.sin(z)

    def cos(self, z):
        return self.ctx.cos(z)

    def cot(self, z):
        return self.ctx.cot(z)

    def sqrt(self, z):
        return self.ctx.sqrt(z)

    def array(self, values):
        result = np.empty(len(values), dtype=object)
        for (i, v) in enumerate(values):
            result[i] = self.c(v)
        return result

    def zeros(self, size):
        return self.array([0] * size)

    def to_complex(self, z):
        return complex(self.ctx.mpc(z))

    def log_abs(self, z):
        return float(self.ctx.log(abs(z)))

    def arg(self, z):
        return float(self.ctx.arg(z))

    def __repr__(self):
        return 'ExtendedBackend(dps=%d)' % self.dps


_backends = {}
_lock = threading.Lock()


def get_backend(precision=None, dps=None):
    """Returns the shared backend instance for a precision setting.

    Args:
        precision (string): 'double' or 'extended' (None: active config)
        dps (int): decimal digits for 'extended' (None: active config)
    Returns:
        DoubleBackend or ExtendedBackend
    """
    cfg = config.active()
    precision = precision or cfg.precision
    if precision == 'double':
        key = ('double', None)
    elif precision == 'extended':
        key = ('extended', int(dps or cfg.extended_dps))
    else:
        raise ValueError('Unknown precision: %s' % precision)
    with _lock:
        if key not in _backends:
            if key[0] == 'double':
                _backends[key] = DoubleBackend()
            else:
                _backends[key] = ExtendedBackend(key[1])
        return _backends[key]


def backend_for_order(order, im_tau, guard=30):
    """
    Extended backend with enough digits to resolve a value of size
    |q|^order at Im(tau) = im_tau out of O(1) terms.
    """
    digits = int(math.ceil(2 * math.pi * order * im_tau / math.log(10))) + guard
    return get_backend('extended', max(digits, config.active().extended_dps))
