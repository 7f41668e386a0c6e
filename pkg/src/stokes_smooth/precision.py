"""Precision contexts: plain double arithmetic and one extended level.

Every algorithm in the toolkit is written against a :class:`Context` so the
same code path runs in IEEE double (numpy / cmath scalars) or in mpmath
extended precision (>= 30 significant digits, default 40).  The context is an
explicit argument everywhere; nothing reads ambient state except mpmath's own
working precision, which extended-mode operations set locally via
``mp.workdps``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import mpmath
import numpy as np
import scipy.special as sc
from mpmath import mp

from .errors import Overflow

DOUBLE = "double"
EXTENDED = "extended"

_EXTENDED_DPS = 40


def _wofz_erfc(z):
    """erfc on complex arguments via the Faddeeva function w(z).

    erfc(z) = exp(-z^2) w(iz) for Re z >= 0; the left half-plane goes through
    the reflection erfc(-z) = 2 - erfc(z) to dodge exp overflow.
    """
    z = np.asarray(z, dtype=complex)
    out = np.empty(z.shape, dtype=complex)
    right = z.real >= 0.0
    zr = z[right]
    out[right] = np.exp(-zr * zr) * sc.wofz(1j * zr)
    zl = z[~right]
    out[~right] = 2.0 - np.exp(-zl * zl) * sc.wofz(-1j * zl)
    return out if out.shape else complex(out)


@dataclass(frozen=True)
class Context:
    """One precision level.  ``kind`` is "double" or "extended"."""

    kind: str
    dps: int
    eps: float

    def guard(self, extra: int = 10):
        """Working-precision scope for algorithm bodies.

        mpmath arithmetic runs at the global precision current at operation
        time, so generic code wraps itself in this; a no-op in double mode.
        """
        if self.kind == DOUBLE:
            import contextlib
            return contextlib.nullcontext()
        return mp.workdps(max(mp.dps, self.dps + extra))

    def _scope(self):
        # never *reduce* precision inside an outer guard
        return mp.workdps(max(mp.dps, self.dps))

    # -- conversions ------------------------------------------------------

    def to_complex(self, x):
        """Coerce a number into this context's complex scalar type."""
        if self.kind == DOUBLE:
            return complex(x)
        with self._scope():
            return mp.mpc(x)

    def to_double(self, x) -> complex:
        return complex(x)

    def to_real(self, x):
        if self.kind == DOUBLE:
            return float(x)
        with self._scope():
            return mp.mpf(x)

    # -- elementary functions ---------------------------------------------

    def exp(self, x):
        if self.kind == DOUBLE:
            return np.exp(x) if isinstance(x, np.ndarray) else cmath.exp(x)
        with self._scope():
            return mp.exp(x)

    def log(self, x):
        """Principal branch."""
        if self.kind == DOUBLE:
            return np.log(x) if isinstance(x, np.ndarray) else cmath.log(x)
        with self._scope():
            return mp.log(x)

    def sqrt(self, x):
        if self.kind == DOUBLE:
            return np.sqrt(x) if isinstance(x, np.ndarray) else cmath.sqrt(x)
        with self._scope():
            return mp.sqrt(x)

    def power(self, x, y):
        """Principal-branch x**y."""
        if self.kind == DOUBLE:
            return np.power(x, y) if isinstance(x, np.ndarray) else complex(x) ** complex(y)
        with self._scope():
            return mp.power(x, y)

    def atan(self, x):
        if self.kind == DOUBLE:
            return math.atan(x) if not isinstance(x, complex) else cmath.atan(x)
        with self._scope():
            return mp.atan(x)

    def erfc(self, x):
        if self.kind == DOUBLE:
            return _wofz_erfc(x)
        with self._scope():
            return mp.erfc(x)

    def erf(self, x):
        if self.kind == DOUBLE:
            return 1.0 - _wofz_erfc(x)
        with self._scope():
            return mp.erf(x)

    def lngamma(self, x):
        """Principal-branch log-gamma (complex)."""
        if self.kind == DOUBLE:
            return complex(sc.loggamma(complex(x)))
        with self._scope():
            return mp.loggamma(x)

    def gamma(self, x):
        if self.kind == DOUBLE:
            return complex(sc.gamma(complex(x)))
        with self._scope():
            return mp.gamma(x)

    @property
    def pi(self):
        if self.kind == DOUBLE:
            return math.pi
        with self._scope():
            return +mp.pi

    # -- predicates ---------------------------------------------------------

    def is_finite(self, x) -> bool:
        if self.kind == DOUBLE:
            x = complex(x)
            return math.isfinite(x.real) and math.isfinite(x.imag)
        with self._scope():
            x = mp.mpc(x)
            return mp.isfinite(x.re) and mp.isfinite(x.im)

    def check_finite(self, x, what: str = "value"):
        if not self.is_finite(x):
            raise Overflow(f"non-finite {what}: {x!r}")
        return x


CTX_DOUBLE = Context(kind=DOUBLE, dps=16, eps=2.220446049250313e-16)
CTX_EXTENDED = Context(kind=EXTENDED, dps=_EXTENDED_DPS, eps=10.0 ** (1 - _EXTENDED_DPS))


def get_context(name: str) -> Context:
    if name == DOUBLE:
        return CTX_DOUBLE
    if name == EXTENDED:
        return CTX_EXTENDED
    raise ValueError(f"unknown precision level {name!r}")


# -- exact serialization of extended values ---------------------------------
#
# Extended-mode CSV/selftest output must round-trip exactly, so mpf values
# are serialized from their binary (mantissa, exponent) form.


def serialize_real(x, ctx: Context) -> str:
    if ctx.kind == DOUBLE:
        return format(float(x), ".17g")
    with mp.workdps(ctx.dps):
        x = mp.mpf(x)
        if x == 0:
            return "0*2^0"
        m, e = x.man_exp
        return f"{int(m)}*2^{int(e)}"


def deserialize_real(s: str, ctx: Context):
    if ctx.kind == DOUBLE:
        return float(s)
    with mp.workdps(ctx.dps):
        if "*2^" in s:
            m, e = s.split("*2^")
            return mp.mpf(int(m)) * mp.power(2, int(e))
        return mp.mpf(s)


def format_real(x, ctx: Context) -> str:
    """Decimal text at the full precision of the level (17 sig digits double)."""
    if ctx.kind == DOUBLE:
        return format(float(x), ".17g")
    with mp.workdps(ctx.dps):
        return mpmath.nstr(mp.mpf(x), ctx.dps, strip_zeros=False)
