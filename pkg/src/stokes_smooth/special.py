"""Classical special functions on complex arguments.

Parameter boxes target what the toolkit actually uses (documented per
function); these are not full-plane uniformly optimal implementations.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np
from mpmath import mp

from .errors import NonConvergence, OnCutWithoutSide, PoleOfGamma
from .numerics import QuadratureSettings, _adaptive_double
from .precision import CTX_DOUBLE, Context

__all__ = [
    "BranchSide",
    "CoefficientTable",
    "ln_gamma",
    "erfc_complex",
    "upper_incomplete_gamma",
    "hyp2f1_1bc",
    "bessel_i",
    "stirling_coefficients",
]


def _active_eps(ctx: Context) -> float:
    """Unit roundoff at the precision actually in effect (guard-aware)."""
    if ctx.kind == "double":
        return ctx.eps
    return 10.0 ** (3 - mp.dps)


class BranchSide(enum.Enum):
    ABOVE_CUT = "above_cut"
    BELOW_CUT = "below_cut"
    PRINCIPAL = "principal"


@dataclass(frozen=True)
class CoefficientTable:
    """Indexed coefficient sequence with provenance.

    ``values`` are context scalars; ``exact`` (when the generator is exact)
    carries Fractions or (p, q) pairs in an exact field.  Indexing is 0-based
    and matches the source subscripting for each generator.
    """

    values: tuple
    generator: str
    params: dict = field(default_factory=dict)
    exact: tuple | None = None

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)


def ln_gamma(z, ctx: Context = CTX_DOUBLE):
    """Principal-branch log-gamma; raises PoleOfGamma at non-positive integers."""
    zc = complex(z)
    if zc.imag == 0.0 and zc.real <= 0.0 and zc.real == int(zc.real):
        raise PoleOfGamma(f"ln_gamma pole at {z}")
    return ctx.lngamma(z)


def erfc_complex(z, ctx: Context = CTX_DOUBLE):
    """Complementary error function, entire; accurate to ~1e-12 for |z| <= 10."""
    return ctx.erfc(z)


# ---------------------------------------------------------------------------
# Upper incomplete gamma
# ---------------------------------------------------------------------------


def _igamma_cf(a, z, ctx: Context, max_iter: int = 10000):
    """Legendre continued fraction via modified Lentz.

    Gamma(a, z) = e^{-z} z^a / (z+1-a - 1(1-a)/(z+3-a - 2(2-a)/(...)))
    Reliable for |arg z| < ~0.6*pi and |z| not small.
    """
    tiny = ctx.eps**3
    one = ctx.to_complex(1)
    with ctx.guard():
        b = z + 1 - a
        if abs(b) < tiny:
            b = ctx.to_complex(tiny)
        c = ctx.to_complex(1) / ctx.to_complex(tiny)
        d = one / b
        h = d
        for k in range(1, max_iter):
            an = -k * (k - a)
            b = b + 2
            d = an * d + b
            if abs(d) < tiny:
                d = ctx.to_complex(tiny)
            c = b + an / c
            if abs(c) < tiny:
                c = ctx.to_complex(tiny)
            d = one / d
            delta = d * c
            h = h * delta
            if abs(delta - 1) < 4 * _active_eps(ctx):
                return ctx.exp(-z + a * ctx.log(z)) * h
    raise NonConvergence(f"incomplete-gamma CF stalled at a={a}, z={z}")


def _igamma_series(a, z, ctx: Context, max_iter: int = 3000):
    """Gamma(a) - gamma(a, z) with the stable lower-incomplete series.

    gamma(a,z) = z^a e^{-z} sum_k z^k / (a (a+1) ... (a+k)).
    Good for |z| small relative to |a|; cancellation grows like
    e^{|z| - Re z}, which the caller budgets.
    """
    with ctx.guard():
        term = ctx.to_complex(1) / a
        total = term
        for k in range(1, max_iter):
            term = term * z / (a + k)
            total = total + term
            if abs(term) < _active_eps(ctx) * abs(total):
                lower = ctx.exp(a * ctx.log(z) - z) * total
                return ctx.gamma(a) - lower
    raise NonConvergence(f"incomplete-gamma series stalled at a={a}, z={z}")


def _igamma_series_boosted(a, z, ctx: Context):
    """Series route near arg z = +-pi, paying the e^{|z|-Re z} cancellation
    with an internal precision boost (used from double mode too)."""
    cancel_digits = int(0.4343 * (abs(complex(z)) - complex(z).real)) + 12
    base = 18 if ctx.kind == "double" else ctx.dps
    boosted = Context(kind="extended", dps=base + cancel_digits,
                      eps=10.0 ** -(base + cancel_digits - 3))
    val = _igamma_series(boosted.to_complex(a), boosted.to_complex(z), boosted)
    return ctx.to_complex(val) if ctx.kind != "double" else complex(val)


def upper_incomplete_gamma(a, z, ctx: Context = CTX_DOUBLE):
    """Gamma(a, z) on the principal sheet |arg z| < pi.

    Re(a) may be large and negative (the continued fraction stays diagonally
    dominant there); continuation beyond the principal sheet is the caller's
    job via DLMF 8.2.10.
    """
    a = ctx.to_complex(a)
    z = ctx.to_complex(z)
    if z == 0:
        raise ValueError("upper_incomplete_gamma requires z != 0")
    re_a = complex(a).real
    az = abs(complex(z))
    near_int = (abs(complex(a).imag) < 0.05
                and abs(complex(a) - round(complex(a).real)) < 0.05)
    if re_a <= 0.5:
        if near_int and re_a > -0.5 and az < 2.0:
            raise NonConvergence("Gamma(a, z) with a ~ 0 and small z is outside "
                                 "the implemented boxes")
        if az <= max(2.0, 0.25 * abs(complex(a))) and not near_int:
            return _igamma_series(a, z, ctx)
        if complex(z).real >= -0.25 * az:
            return _igamma_cf(a, z, ctx)
        return _igamma_series_boosted(a, z, ctx)
    if re_a > 0.9 and az <= max(2.0, 0.3 * re_a):
        return _igamma_series(a, z, ctx)
    if re_a > 1.0 and az > max(2.0, 1.2 * abs(complex(a))):
        return _igamma_cf(a, z, ctx)
    if re_a > 1.0:
        # moderate z, Re a > 1: climb up from the (0,1] strip
        m = int(math.ceil(re_a - 1.0))
        lo = a - m
        g = upper_incomplete_gamma(lo, z, ctx)
        with ctx.guard():
            bound = ctx.exp(lo * ctx.log(z) - z)
            for _ in range(m):
                g = lo * g + bound
                bound = bound * z
                lo = lo + 1
        return g
    # Re(a) in (0.5, 0.9]
    if az <= 2.0:
        return _igamma_series(a, z, ctx)
    if complex(z).real >= -0.25 * az:
        return _igamma_cf(a, z, ctx)
    return _igamma_series_boosted(a, z, ctx)


# ---------------------------------------------------------------------------
# Gauss hypergeometric 2F1(1, b; c; x) with branch-cut control
# ---------------------------------------------------------------------------


def _gauss_series_1bc(b, c, x, ctx: Context, max_iter: int = 40000):
    with ctx.guard():
        term = ctx.to_complex(1)
        total = term
        for k in range(max_iter):
            term = term * (b + k) / (c + k) * x
            total = total + term
            if abs(term) < ctx.eps * abs(total) * 0.5:
                return total
    raise NonConvergence(f"2F1 Gauss series stalled at b={b}, c={c}, x={x}")


def _hyp2f1_euler(b, c, x, side: BranchSide, ctx: Context):
    """2F1(1,b;c;x) by the Euler integral (saddle-near-pole form)

        2F1 = Gamma(c)/(Gamma(b) Gamma(c-b)) int_0^1 t^{b-1}(1-t)^{c-b-1}
              / (1 - x t) dt,

    valid for Re(b) > 0, Re(c-b) > 0, any x off the cut, and on the cut with
    an explicit side (the pole t = 1/x then sits inside (0, 1) and is removed
    by subtraction; the side fixes the log branch of the restored pole term).
    """
    if complex(x).imag == 0 and complex(x).real > 1 and side is BranchSide.PRINCIPAL:
        raise OnCutWithoutSide(f"2F1 argument {x} on the cut x > 1")
    bm1 = b - 1
    cm = c - b - 1  # (1-t) exponent
    re_b = complex(bm1).real
    re_c = complex(cm).real
    if re_b < 0.2 or re_c < 0.2:
        raise NonConvergence("Euler route needs Re(b) > 1.2 and Re(c-b) > 1.2")
    t_star = re_b / (re_b + re_c)  # mass concentration point

    def lng(t, lnfun):
        return bm1 * lnfun(t) + cm * lnfun(1 - t)

    with ctx.guard():
        ln_norm = lng(ctx.to_real(t_star), ctx.log)
        tp = 1.0 / complex(x)
        subtract = -0.05 < tp.real < 1.05 and abs(tp.imag) < 0.5

        if ctx.kind == "double":
            xb, bm1c, cmc = complex(x), complex(bm1), complex(cm)
            lnn = complex(ln_norm)

            def g(t):
                return np.exp(bm1c * np.log(t) + cmc * np.log(1 - t) - lnn)

            if subtract:
                gp = cmath.exp(bm1c * cmath.log(tp) + cmc * cmath.log(1 - tp) - lnn)

                def f(t):
                    return (g(t) - gp) / (1 - xb * t)
            else:
                def f(t):
                    return g(t) / (1 - xb * t)

            w = min(t_star, 1 - t_star, 3.0 / math.sqrt(re_b + re_c + 2))
            cuts = sorted({0.0, t_star - w, 0.5 * t_star, t_star, t_star + w,
                           0.5 * (1 + t_star), 1.0})
            cuts = [u for u in cuts if -1e-15 <= u <= 1 + 1e-15]
            qs = QuadratureSettings(abs_tol=1e-280, rel_tol=4e-13,
                                    max_subdivisions=8000)
            val = 0.0 + 0.0j
            for a0, b0 in zip(cuts[:-1], cuts[1:]):
                if b0 > a0 + 1e-16:
                    piece, _ = _adaptive_double(
                        f, lambda s, a0=a0, b0=b0: (a0 + s * (b0 - a0), b0 - a0),
                        1.0, qs)
                    val += piece
        else:
            xb = ctx.to_complex(x)

            def fm(t):
                if t <= 0 or t >= 1:
                    return ctx.to_complex(0)
                gv = ctx.exp(lng(t, ctx.log) - ln_norm)
                if subtract:
                    return (gv - gp_m) / (1 - xb * t)
                return gv / (1 - xb * t)

            if subtract:
                tpm = ctx.to_complex(tp)
                gp_m = ctx.exp(bm1 * ctx.log(tpm) + cm * ctx.log(1 - tpm) - ln_norm)
            with mp.workdps(ctx.dps + 8):
                val = mp.quad(fm, [0, t_star, 1])
            gp = gp_m if subtract else None

        if subtract:
            # int_0^1 dt/(1 - x t) = -(1/x) Log(1 - x); on the cut the side
            # supplies the branch (above: lim from Im x > 0)
            if complex(x).imag != 0:
                L = -ctx.log(1 - x) / x
            else:
                xr = complex(x).real
                ipi = ctx.to_complex(1j) * ctx.pi
                L = -(ctx.log(abs(1 - xr))
                      + (-ipi if side is BranchSide.ABOVE_CUT else ipi)) / x
            val = val + gp * L

        ln_pref = (ctx.lngamma(c) - ctx.lngamma(b) - ctx.lngamma(c - b) + ln_norm)
        return ctx.exp(ln_pref) * val


def hyp2f1_1bc(b, c, x, side: BranchSide = BranchSide.PRINCIPAL,
               ctx: Context = CTX_DOUBLE):
    """2F1(1, b; c; x) with an explicit branch side on the cut x > 1.

    Strategy: Gauss series for |x| <= 0.92; Pfaff transform into the series
    where it lands inside the disk; the saddle/pole integral representation
    near and on the cut.
    """
    b = ctx.to_complex(b)
    c = ctx.to_complex(c)
    x = ctx.to_complex(x)
    xc = complex(x)
    if xc == 0:
        return ctx.to_complex(1)
    if xc.imag == 0 and xc.real > 1 and side is BranchSide.PRINCIPAL:
        raise OnCutWithoutSide(f"x = {xc} lies on the cut; pass a BranchSide")
    if abs(xc) <= 0.92:
        return _gauss_series_1bc(b, c, x, ctx)
    w = x / (x - 1)
    if abs(complex(w)) <= 0.92 and xc.real < 0.55:
        return _gauss_series_1bc(c - b, c, w, ctx) / (1 - x)
    return _hyp2f1_euler(b, c, x, side, ctx)


# ---------------------------------------------------------------------------
# Modified Bessel I_n
# ---------------------------------------------------------------------------


def bessel_i(n: int, z, ctx: Context = CTX_DOUBLE, max_iter: int = 4000):
    """I_n(z) by the ascending series; targets |z| <= 60, n <= 200."""
    if n < 0:
        raise ValueError("bessel_i requires n >= 0")
    z = ctx.to_complex(z)
    if z == 0:
        return ctx.to_complex(1 if n == 0 else 0)
    with ctx.guard():
        q = z * z / 4
        term = ctx.exp(n * ctx.log(z / 2) - ctx.lngamma(n + 1))
        total = term
        for k in range(max_iter):
            term = term * q / ((k + 1) * (n + k + 1))
            total = total + term
            if abs(term) < 0.1 * ctx.eps * abs(total) and k > abs(complex(z)) / 2:
                return total
    raise NonConvergence(f"bessel_i series stalled at n={n}, z={z}")


# ---------------------------------------------------------------------------
# Stirling coefficients
# ---------------------------------------------------------------------------


def _bernoulli_fraction(n: int) -> Fraction:
    p, q = mpmath.bernfrac(n)
    return Fraction(int(p), int(q))


def stirling_coefficients(count: int, ctx: Context = CTX_DOUBLE) -> CoefficientTable:
    """gamma_0 .. gamma_{count-1}, exact rationals converted to the context.

    Generated by exponentiating the divergent Stirling exponent
    sum_k B_{2k} / (2k(2k-1) z^{2k-1}) formally:  the reciprocal-gamma series
    sum gamma_n x^n equals exp(-E(x)), so n g_n = -sum_j j E_j g_{n-j}.
    """
    if count < 1:
        raise ValueError("count >= 1")
    e = [Fraction(0)] * count  # E(x) coefficients
    for k in range(1, (count + 1) // 2 + 1):
        idx = 2 * k - 1
        if idx < count:
            e[idx] = _bernoulli_fraction(2 * k) / (2 * k * (2 * k - 1))
    g = [Fraction(0)] * count
    g[0] = Fraction(1)
    for n in range(1, count):
        acc = Fraction(0)
        for j in range(1, n + 1):
            if e[j]:
                acc += j * (-e[j]) * g[n - j]
        g[n] = acc / n
    if ctx.kind == "double":
        values = tuple(float(v) for v in g)
    else:
        with mp.workdps(ctx.dps):
            values = tuple(mp.mpf(v.numerator) / v.denominator for v in g)
    return CoefficientTable(values=values, generator="stirling",
                            params={"count": count}, exact=tuple(g))
