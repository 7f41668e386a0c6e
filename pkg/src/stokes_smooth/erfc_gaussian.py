"""The Gaussian-convolved complementary error function erfc(x; y; lambda).

    erfc(x; y; lambda) = (2/sqrt(pi)) int_x^inf e^{-(tau-y)^2} erfc(lambda tau) d tau,

with the integration path chosen so arg(tau) -> 0 at infinity and analytic
continuation to lambda in C minus the rays {i t : |t| >= 1}.  This is the
universal prefactor of the smoothed higher-order Stokes phenomenon.

Four expansion regimes are implemented next to the defining quadrature:
a Maclaurin series in x, large-x and large-y asymptotic series, and the
fixed-ratio (y = mu x) expansion.  Asymptotic regimes truncate at the
smallest term and report the first omitted term as the error estimate.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (
    DegenerateParameters,
    ExcludedLambda,
    NonConvergence,
    OutOfSector,
)
from .numerics import QuadratureSettings, _adaptive_double, finite_difference
from .precision import CTX_DOUBLE, Context

__all__ = [
    "Erfc3Args",
    "erfc3",
    "erfc3_quadrature",
    "erfc3_maclaurin",
    "erfc3_large_x",
    "erfc3_large_y",
    "erfc3_fixed_ratio",
    "erfc3_identity_residual",
    "erfc3_at_x0",
    "maclaurin_coefficients",
    "large_x_coefficients",
    "large_x_coefficients_alt",
    "large_y_coefficients",
    "fixed_ratio_coefficients",
    "f_aux_coefficients",
]

_SQRT_PI = math.sqrt(math.pi)


@dataclass(frozen=True)
class Erfc3Args:
    x: complex
    y: complex
    lam: complex

    def __post_init__(self):
        l = complex(self.lam)
        if abs(l.real) < 1e-13 and abs(l.imag) >= 1.0 - 1e-13:
            raise ExcludedLambda(f"lambda = {l} lies on the excluded rays")


def _check_lambda(lam):
    l = complex(lam)
    if abs(l.real) < 1e-13 and abs(l.imag) >= 1.0 - 1e-13:
        raise ExcludedLambda(f"lambda = {l} lies on the excluded rays")
    return l


# ---------------------------------------------------------------------------
# Defining quadrature
# ---------------------------------------------------------------------------


def erfc3_quadrature(x, y, lam, settings: QuadratureSettings | None = None,
                     ctx: Context = CTX_DOUBLE, rotation: float | None = None):
    """The defining integral, deformed to keep the integrand decaying.

    The ray from x is rotated by -arg(lambda^2+1)/2 (clamped to +-pi/4) so
    both decay envelopes e^{-Re(tau-y)^2} and e^{-Re((tau-y)^2+lambda^2
    tau^2)} win; rotation invariance is a tested property.
    """
    lam = _check_lambda(lam)
    x = complex(x)
    y = complex(y)
    if settings is None:
        settings = QuadratureSettings(abs_tol=1e-250, rel_tol=5e-13,
                                      max_subdivisions=8000)
    l2p1 = lam * lam + 1.0
    if rotation is None:
        rotation = max(-math.pi / 4, min(math.pi / 4, -cmath.phase(l2p1) / 2.0))
    d = cmath.exp(1j * rotation)
    # decay rates of the two envelopes along the rotated ray
    rate = min((d * d).real, (l2p1 * d * d).real)
    if rate <= 1e-3:
        raise NonConvergence(f"no decaying direction at lambda = {lam}")
    S = (abs(x) + abs(y) + abs(lam * y) + 3.0) / math.sqrt(rate) \
        + math.sqrt(46.0 / rate)

    if ctx.kind != "double":
        from mpmath import mp
        with mp.workdps(ctx.dps + 8):
            xm, ym, lm, dm = (mp.mpc(x), mp.mpc(y), mp.mpc(lam), mp.mpc(d))

            def f(s):
                tau = xm + s * dm
                return mp.exp(-(tau - ym) ** 2) * mp.erfc(lm * tau) * dm

            val = mp.quad(f, [0, float(abs(x) + abs(y) + 1), S])
            return 2 / mp.sqrt(mp.pi) * val

    from .precision import _wofz_erfc

    def f(s):
        tau = x + s * d
        return np.exp(-(tau - y) ** 2) * _wofz_erfc(lam * tau) * d

    mid = min(S, abs(x) + abs(y) + 1.0)
    total = 0.0 + 0.0j
    for a0, b0 in ((0.0, mid), (mid, S)):
        if b0 > a0:
            val, _ = _adaptive_double(f, lambda s, a0=a0, b0=b0:
                                      (a0 + s * (b0 - a0), b0 - a0), 1.0, settings)
            total += val
    return 2.0 / _SQRT_PI * total


# ---------------------------------------------------------------------------
# Coefficient recurrences
# ---------------------------------------------------------------------------


def maclaurin_coefficients(y, lam, count: int, ctx: Context = CTX_DOUBLE):
    """a_n of the Maclaurin series, 4-term recurrence.

    a_{-1} = a_0 = 0, a_1 = 1, a_2 = y - lambda/sqrt(pi);
    (n+3)(n+2)(n+1) a_{n+3} = 4y(n+2)(n+1) a_{n+2}
        - 2((lambda^2+2) n + 2 y^2 + 1)(n+1) a_{n+1}
        + 4 (lambda^2+2) y n a_n - 4 (lambda^2+1)(n-1) a_{n-1}.
    """
    with ctx.guard():
        y = ctx.to_complex(y)
        lam = ctx.to_complex(lam)
        zero = ctx.to_complex(0)
        l2 = lam * lam
        a = [zero] * max(count + 2, 4)
        a[1] = ctx.to_complex(1)
        a[2] = y - lam / ctx.sqrt(ctx.pi)
        for n in range(count):
            am1 = a[n - 1] if n >= 1 else zero
            nxt = (4 * y * (n + 2) * (n + 1) * a[n + 2]
                   - 2 * ((l2 + 2) * n + 2 * y * y + 1) * (n + 1) * a[n + 1]
                   + 4 * (l2 + 2) * y * n * a[n]
                   - 4 * (l2 + 1) * (n - 1) * am1) / ((n + 3) * (n + 2) * (n + 1))
            if n + 3 < len(a):
                a[n + 3] = nxt
            else:
                a.append(nxt)
        return a[:count]


def large_x_coefficients(y, lam, count: int, field=complex):
    """b_n of the large-x expansion, 5-term recurrence.

    b_{-1} = b_0 = b_1 = 0, b_2 = 1/(pi lambda (lambda^2+1));
    4 lambda^2 (lambda^2+1) b_{n+2} = 4 y lambda^2 b_{n+1}
        - 2((2n-1)(lambda^2+1) - n) b_n + 2y(n-1) b_{n-1} - (n-1)(n-2) b_{n-2}.

    With ``field=Fraction`` the b_n are returned as exact rationals times
    1/pi (y, lambda must then be rational).
    """
    if field is Fraction:
        y = Fraction(y)
        lam = Fraction(lam)
        one = Fraction(1)
    else:
        y = complex(y)
        lam = complex(lam)
        one = 1.0 + 0.0j
    l2 = lam * lam
    inv_pi = one if field is Fraction else 1.0 / math.pi
    b = [0 * one] * max(count + 2, 5)
    b[2] = inv_pi / (lam * (l2 + 1))
    for n in range(1, count):
        bm2 = b[n - 2] if n >= 2 else 0 * one
        nxt = (4 * y * l2 * b[n + 1]
               - 2 * ((2 * n - 1) * (l2 + 1) - n) * b[n]
               + 2 * y * (n - 1) * b[n - 1]
               - (n - 1) * (n - 2) * bm2) / (4 * l2 * (l2 + 1))
        if n + 2 < len(b):
            b[n + 2] = nxt
        else:
            b.append(nxt)
    return b[:count]


def large_x_coefficients_alt(y, lam, count: int, field=complex):
    """b_n via the alternative two-line recursion (internal cross-check).

    (l^2+1) b_{2n+1} - y b_{2n} + (n - 1/2) b_{2n-1} = 0,
    (l^2+1) b_{2n+2} - y b_{2n+1} + n b_{2n} = (-1)^n (1/2)_n / (pi l^{2n+1}).
    """
    if field is Fraction:
        y = Fraction(y)
        lam = Fraction(lam)
        one = Fraction(1)
        half = Fraction(1, 2)
    else:
        y = complex(y)
        lam = complex(lam)
        one = 1.0 + 0.0j
        half = 0.5
    l2 = lam * lam
    inv_pi = one if field is Fraction else 1.0 / math.pi
    b = [0 * one] * max(count + 3, 5)
    b[2] = inv_pi / (lam * (l2 + 1))
    poch = one * half  # (1/2)_n, starts at n=1
    for n in range(1, (count + 2) // 2 + 1):
        if 2 * n + 1 < len(b):
            b[2 * n + 1] = (y * b[2 * n] - (n - half) * b[2 * n - 1]) / (l2 + 1)
        if 2 * n + 2 < len(b):
            rhs = (-1) ** n * poch * inv_pi / lam ** (2 * n + 1)
            b[2 * n + 2] = (rhs + y * b[2 * n + 1] - n * b[2 * n]) / (l2 + 1)
        poch = poch * (half + n)
    return b[:count]


def large_y_coefficients(x, lam, count: int):
    """(e_n, c_n) of the large-y expansion.

    e_0 = 0, e_1 = 2 lambda/pi,
    e_{n+1} = -(lambda^2+1)(x e_n + (n-1)/2 e_{n-1});
    c_0 = c_1 = 0, 2 c_{n+1} = 2 x c_n + (1-n) c_{n-1} - (-1)^n e_n.
    """
    x = complex(x)
    lam = complex(lam)
    l2p1 = lam * lam + 1.0
    e = [0.0 + 0.0j] * (count + 2)
    c = [0.0 + 0.0j] * (count + 2)
    e[1] = 2.0 * lam / math.pi
    for n in range(1, count):
        e[n + 1] = -l2p1 * (x * e[n] + 0.5 * (n - 1) * e[n - 1])
    for n in range(1, count + 1):
        c[n + 1] = (2 * x * c[n] + (1 - n) * c[n - 1] - (-1) ** n * e[n]) / 2.0
    return e[:count], c[:count]


def f_aux_coefficients(alpha, beta, count: int):
    """f_n of int_x^inf e^{-alpha^2 t^2} erfc(beta t) dt ~ e^{-(a^2+b^2)x^2}
    sum f_n / x^{2n} (the proof's auxiliary recurrence, exposed for tests).

    f_1 = 1/(2 sqrt(pi) beta (alpha^2+beta^2));
    (alpha^2+beta^2) f_{n+1} + n f_n = (-1)^n (1/2)_n / (2 sqrt(pi) beta^{2n+1}).
    """
    alpha = complex(alpha)
    beta = complex(beta)
    ab = alpha * alpha + beta * beta
    f = [0.0 + 0.0j] * (count + 1)
    if count >= 1:
        f[1] = 1.0 / (2.0 * _SQRT_PI * beta * ab)
    poch = 0.5
    for n in range(1, count):
        rhs = (-1) ** n * poch / (2.0 * _SQRT_PI * beta ** (2 * n + 1))
        f[n + 1] = (rhs - n * f[n]) / ab
        poch *= 0.5 + n
    return f[: count + 1]


def fixed_ratio_coefficients(mu, lam, count: int):
    """d_n of the y = mu x expansion.

    d_1 = 1/(pi lambda (lambda^2+1-mu));
    (lambda^2+(1-mu)^2) d_{n+1} + n d_n =
        (-1)^n (1/2)_n / pi * (mu l (l^2+1)^n / (l^2+1-mu)^{2n+1} + (1-mu)/l^{2n+1}).
    """
    mu = complex(mu)
    lam = complex(lam)
    l2 = lam * lam
    if abs(l2 + 1 - mu) < 1e-14:
        raise DegenerateParameters("lambda^2 + 1 = mu")
    ab = l2 + (1 - mu) ** 2
    d = [0.0 + 0.0j] * (count + 1)
    if count >= 1:
        d[1] = 1.0 / (math.pi * lam * (l2 + 1 - mu))
    poch = 0.5
    for n in range(1, count):
        rhs = (-1) ** n * poch / math.pi * (
            mu * lam * (l2 + 1) ** n / (l2 + 1 - mu) ** (2 * n + 1)
            + (1 - mu) / lam ** (2 * n + 1))
        d[n + 1] = (rhs - n * d[n]) / ab
        poch *= 0.5 + n
    return d[: count + 1]


# ---------------------------------------------------------------------------
# Regime evaluators
# ---------------------------------------------------------------------------


def erfc3_at_x0(y, lam, ctx: Context = CTX_DOUBLE, kmax: int = 60):
    """erfc(0; y; lambda) by the arctan/erf anchor plus the printed double sum.

    For |y|^2/|lambda^2+1| > 20 the series converges too slowly and the
    quadrature is used instead.
    """
    lam = _check_lambda(lam)
    y = ctx.to_complex(y)
    lamc = ctx.to_complex(lam)
    l2p1 = lamc * lamc + 1
    if abs(complex(y)) ** 2 / abs(complex(l2p1)) > 20.0:
        return erfc3_quadrature(0.0, y, lam, ctx=ctx)
    with ctx.guard():
        s = ctx.sqrt(l2p1)
        total = (1 - (2 / ctx.pi) * ctx.atan(lamc) + ctx.erf(y)
                 - ctx.erf(lamc * y / s))
        # double sum over k, m with early exit on the k-tail
        q = -y * y / l2p1
        pw = ctx.to_complex(1)
        fact = 1.0
        acc = ctx.to_complex(0)
        for k in range(kmax):
            pw = pw * q
            fact *= (k + 1)
            inner = ctx.to_complex(0)
            lpow = lamc
            for m in range(k + 1):
                binom = math.comb(k, m)
                inner = inner + binom * lpow / (2 * k - 2 * m + 1)
                lpow = lpow * lamc * lamc
            term = pw / fact * inner
            acc = acc + term
            if abs(term) < 1e-18 * max(1.0, abs(acc)) and k > 3:
                break
        else:
            raise NonConvergence("erfc(0; y; lambda) double series stalled")
        return total + (2 / ctx.pi) * acc


def erfc3_maclaurin(x, y, lam, truncation: int = 120, ctx: Context = CTX_DOUBLE):
    """Anchor at x = 0 minus (2/sqrt(pi)) e^{-y^2} sum a_n x^n."""
    lam = _check_lambda(lam)
    anchor = erfc3_at_x0(y, lam, ctx=ctx)
    if complex(x) == 0:
        return anchor
    a = maclaurin_coefficients(y, lam, truncation, ctx=ctx)
    with ctx.guard():
        x = ctx.to_complex(x)
        acc = ctx.to_complex(0)
        xp = ctx.to_complex(1)
        eps_stop = 1e-17 if ctx.kind == "double" else 10.0 ** (-ctx.dps - 4)
        converged = False
        for n in range(1, truncation):
            xp = xp * x
            term = a[n] * xp
            acc = acc + term
            if n > 8 and abs(term) < eps_stop * max(abs(acc), 1e-3):
                converged = True
                break
        if not converged:
            raise NonConvergence(f"Maclaurin series not converged at x = {x} "
                                 f"within {truncation} terms")
        yc = ctx.to_complex(y)
        return anchor - (2 / ctx.sqrt(ctx.pi)) * ctx.exp(-yc * yc) * acc


def _optimal_sum(coeffs, arg, start: int, powfun):
    """Sum an asymptotic series to its smallest term; returns (sum, first
    omitted magnitude, n_used)."""
    best = math.inf
    acc = 0.0 + 0.0j
    used = 0
    for n in range(start, len(coeffs)):
        term = coeffs[n] * powfun(n)
        mag = abs(term)
        if mag > best:
            return acc, mag, used
        acc += term
        best = mag
        used = n
    return acc, best, used


def erfc3_large_x(x, y, lam, truncation: int = 80, ctx: Context = CTX_DOUBLE,
                  with_error: bool = False):
    """e^{-lambda^2 x^2 - (x-y)^2} sum b_n / x^n, optimally truncated."""
    lam = _check_lambda(lam)
    x = complex(x)
    y = complex(y)
    l2 = complex(lam) ** 2
    if l2.real < 0 or lam == 0:
        raise OutOfSector("large-x expansion needs Re(lambda^2) >= 0, lambda != 0")
    if abs(cmath.phase(x)) > math.pi / 2 - 0.01:
        raise OutOfSector("large-x expansion needs |arg x| < pi/2")
    b = large_x_coefficients(y, lam, truncation)
    acc, omitted, _ = _optimal_sum(b, x, 2, lambda n: x ** (-n))
    pref = cmath.exp(-l2 * x * x - (x - y) ** 2)
    val = pref * acc
    if with_error:
        return val, abs(pref) * omitted
    return val


def erfc3_large_y(x, y, lam, truncation: int = 80, ctx: Context = CTX_DOUBLE,
                  with_error: bool = False):
    """erfc(lambda x) erfc(x-y) - e^{-lambda^2 x^2-(x-y)^2} sum c_n / y^n.

    Direct for |arg(-y)| < pi/2; for |arg y| < pi/2 the reflection formula
    erfc(x;y;l) = erfc(-x;-y;l) + 2 erfc(l y/sqrt(l^2+1)) - 2 erfc(y-x)
    maps onto the direct case.
    """
    lam = _check_lambda(lam)
    x = complex(x)
    y = complex(y)
    l2 = complex(lam) ** 2
    if (l2 + 1).real <= 0:
        raise OutOfSector("large-y expansion needs Re(lambda^2) > -1")
    if abs(cmath.phase(-y)) <= math.pi / 2 - 0.01:
        e, c = large_y_coefficients(x, lam, truncation)
        acc, omitted, _ = _optimal_sum(c, y, 2, lambda n: y ** (-n))
        pref = cmath.exp(-l2 * x * x - (x - y) ** 2)
        val = (complex(ctx.erfc(lam * x)) * complex(ctx.erfc(x - y))
               - pref * acc)
        if with_error:
            return val, abs(pref) * omitted
        return val
    if abs(cmath.phase(y)) <= math.pi / 2 - 0.01:
        sub = erfc3_large_y(-x, -y, lam, truncation, ctx, with_error)
        refl = (2.0 * complex(ctx.erfc(complex(lam) * y / cmath.sqrt(l2 + 1)))
                - 2.0 * complex(ctx.erfc(y - x)))
        if with_error:
            return sub[0] + refl, sub[1]
        return sub + refl
    raise OutOfSector("large-y expansion needs y away from the imaginary axis")


def erfc3_fixed_ratio(x, mu, lam, truncation: int = 60, ctx: Context = CTX_DOUBLE,
                      with_error: bool = False):
    """e^{-(lambda^2+(1-mu)^2) x^2} sum d_n / x^{2n} for y = mu x."""
    lam = _check_lambda(lam)
    x = complex(x)
    mu = complex(mu)
    l2 = complex(lam) ** 2
    if lam == 0:
        raise DegenerateParameters("lambda = 0")
    l2p1 = l2 + 1
    if (l2.real < 0 or ((l2p1 - mu) ** 2 / l2p1).real < 0
            or (l2 + (1 - mu) ** 2).real <= 0):
        raise OutOfSector("fixed-ratio sector conditions violated")
    if abs(cmath.phase(x)) > math.pi / 2 - 0.01:
        raise OutOfSector("fixed-ratio expansion needs |arg x| < pi/2")
    d = fixed_ratio_coefficients(mu, lam, truncation)
    acc, omitted, _ = _optimal_sum(d, x, 1, lambda n: x ** (-2 * n))
    pref = cmath.exp(-(l2 + (1 - mu) ** 2) * x * x)
    val = pref * acc
    if with_error:
        return val, abs(pref) * omitted
    return val


def erfc3(args_or_x, y=None, lam=None, ctx: Context = CTX_DOUBLE):
    """Regime-dispatching evaluator.

    Quadrature is the default and the only path near the excluded-lambda
    boundary; large-x for |x| >= 4 inside its sector, large-y for |y| >= 6,
    Maclaurin for |x| <= 0.75.  All regimes agree in the overlap boxes
    (tested property).
    """
    if isinstance(args_or_x, Erfc3Args):
        x, y, lam = args_or_x.x, args_or_x.y, args_or_x.lam
    else:
        x = args_or_x
    lam = _check_lambda(lam)
    x = complex(x)
    y = complex(y)
    l2 = complex(lam) ** 2
    near_excluded = abs(complex(lam).real) < 0.1 and abs(complex(lam).imag) > 0.8
    if not near_excluded:
        if (abs(x) >= 4.0 and l2.real >= 0 and lam != 0
                and abs(cmath.phase(x)) <= math.pi / 2 - 0.2
                and abs(y) <= 0.5 * abs(x)):
            return erfc3_large_x(x, y, lam, ctx=ctx)
        if abs(y) >= 6.0 and (l2 + 1).real > 0 and abs(x) <= 0.5 * abs(y) \
                and abs(abs(cmath.phase(y)) - math.pi / 2) > 0.2:
            return erfc3_large_y(x, y, lam, ctx=ctx)
        if abs(x) <= 0.75 and abs(y) <= 3.0:
            try:
                return erfc3_maclaurin(x, y, lam, ctx=ctx)
            except NonConvergence:
                pass
    return erfc3_quadrature(x, y, lam, ctx=ctx)


# ---------------------------------------------------------------------------
# Identity residuals
# ---------------------------------------------------------------------------


def erfc3_identity_residual(kind: str, x, y, lam, h: float = 1e-4,
                            ctx: Context = CTX_DOUBLE):
    """LHS - RHS of an Appendix identity, quadrature + finite differences.

    kinds: reflection2, reflect_x, reflect_lambda, ode, partial_x, partial_y,
    partial_lambda.
    """
    x = complex(x)
    y = complex(y)
    lam = complex(lam)
    E = erfc3_quadrature
    if kind == "reflection2":
        lhs = E(x, y, lam) + E(lam * (x - y), -lam * y, 1.0 / lam)
        rhs = complex(ctx.erfc(x - y)) * complex(ctx.erfc(lam * x))
        return lhs - rhs
    if kind == "reflect_x":
        lhs = E(-x, y, lam)
        rhs = (E(x, -y, lam)
               + 2 * complex(ctx.erfc(lam * y / cmath.sqrt(lam * lam + 1)))
               - 2 * complex(ctx.erfc(x + y)))
        return lhs - rhs
    if kind == "reflect_lambda":
        return E(x, y, -lam) + E(x, y, lam) - 2 * complex(ctx.erfc(x - y))
    if kind == "ode":
        # d/dx (e^{(x-y)^2} w'(x)) = (4 lambda/pi) e^{-lambda^2 x^2}
        def wp(t):
            return finite_difference(lambda u: E(u, y, lam), t, h)

        lhs = finite_difference(lambda t: cmath.exp((t - y) ** 2) * wp(t), x, h)
        rhs = 4 * lam / math.pi * cmath.exp(-lam * lam * x * x)
        return (lhs - rhs) / max(abs(lhs), abs(rhs), 1.0)
    if kind == "partial_x":
        fd = finite_difference(lambda t: E(t, y, lam), x, h)
        closed = -2 / _SQRT_PI * cmath.exp(-(x - y) ** 2) * complex(ctx.erfc(lam * x))
        return fd - closed
    if kind == "partial_y":
        fd = finite_difference(lambda t: E(x, t, lam), y, h)
        s = cmath.sqrt(lam * lam + 1)
        closed = (2 / _SQRT_PI * cmath.exp(-(x - y) ** 2) * complex(ctx.erfc(lam * x))
                  - 2 * lam / (_SQRT_PI * s) * cmath.exp(-lam**2 * y**2 / (lam**2 + 1))
                  * complex(ctx.erfc((lam**2 * x + x - y) / s)))
        return fd - closed
    if kind == "partial_lambda":
        fd = finite_difference(lambda t: E(x, y, t), lam, h)
        s = cmath.sqrt(lam * lam + 1)
        closed = (-2 * cmath.exp(-lam**2 * x**2 - (x - y) ** 2) / (math.pi * (lam**2 + 1))
                  - 2 * y / (_SQRT_PI * (lam**2 + 1) ** 1.5)
                  * cmath.exp(-lam**2 * y**2 / (lam**2 + 1))
                  * complex(ctx.erfc((lam**2 * x + x - y) / s)))
        return fd - closed
    raise ValueError(f"unknown identity kind {kind!r}")
