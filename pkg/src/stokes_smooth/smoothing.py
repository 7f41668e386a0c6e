"""Smoothing approximations for the ordinary and higher-order Stokes phenomena.

Everything is expressed for the *scaled* hyperterminants

    v1(z) = e^{-sigma0 z} z^{-N0} F1(z; N0+1; sigma0),
    v2(z) = e^{-(sigma0+sigma1) z} z^{-N0-N1} F2(z; N0+1, sigma0; N1+1, sigma1),

which are the quantities the figures plot.  The saddle-point variables
alpha_j are realized as alpha_j = (-1)^{j+1} i u_j r_j with
u_j = 1 + sigma_j z / N_j and r_j the principal square root of
-2(u + ln(1-u))/u^2 -> 1, which reproduces the stated local branch
(-1)^j a_j ~ alpha_j - i alpha_j^2/3 and stays on it throughout the
univalence sector |arg(e^{-pi i} sigma_j z / N_j)| < 2 pi.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass

from .errors import BranchSectorViolated, BreakdownRegion, NotCollinear
from .erfc_gaussian import erfc3_quadrature
from .hyperterminants import HyperArgs1, HyperArgs2, f1_scaled, f2_scaled
from .precision import CTX_DOUBLE, Context
from .special import BranchSide, hyp2f1_1bc

__all__ = [
    "NotationBundle",
    "SmoothingEstimate",
    "OrderTag",
    "notation",
    "alpha_branch",
    "ordinary_smoothing",
    "stokes2_smoothing",
    "hypergeom_I",
    "gamma_branch",
    "sigma_cross_smoothing",
    "uniform_smoothing",
    "extreme_collinear_smoothing",
    "ghost_multiplier",
    "telegraph_ghost_multiplier",
    "lemma_2f1_expansion",
    "erfc_error_scale",
]

_DELTA = 0.05  # sector guard (radians)


class OrderTag(enum.Enum):
    O_HALF = "O(N1^{-1/2})"
    O_ONE = "O(N1^{-1})"


@dataclass(frozen=True)
class SmoothingEstimate:
    value: complex
    error_scale: float
    order_tag: OrderTag


def alpha_branch(z, N, sigma, j: int, z_arg: float | None = None):
    """alpha_j(z) on the branch (-1)^j a_j ~ alpha_j - i alpha_j^2/3.

    Raises BranchSectorViolated outside |arg(e^{-pi i} sigma z/N)| < 2 pi.
    """
    z = complex(z)
    N = complex(N)
    sigma = complex(sigma)
    if z_arg is None:
        z_arg = cmath.phase(z)
    theta = z_arg + cmath.phase(sigma) - math.pi - cmath.phase(N)
    if abs(theta) >= 2.0 * math.pi:
        raise BranchSectorViolated(f"arg(e^{{-pi i}} sigma z/N) = {theta:.3f}")
    u = 1.0 + sigma * z / N
    if abs(u) < 1e-14:
        return 0.0 + 0.0j
    # 2w/u^2 with w = u + ln(1-u) = -u^2/2 - u^3/3 - ...; the log branch
    # follows theta so the ratio stays near 1 on the whole sector
    lg = cmath.log(abs(sigma * z / N)) + 1j * theta
    w = u + lg
    r = cmath.sqrt(-2.0 * w / (u * u))
    if r.real < 0:
        r = -r
    return (-1) ** (j + 1) * 1j * u * r


def _g_of(z, N, sigma, j: int, z_arg=None):
    """g_j(z) = 1/a_j - 1/alpha_j (removable at alpha_j = 0 only for even j)."""
    z = complex(z)
    u = 1.0 + complex(sigma) * z / complex(N)
    alpha = alpha_branch(z, N, sigma, j, z_arg)
    if abs(alpha) < 1e-5 and j % 2 == 0:
        return 1j / 3.0 + 0.0j
    a = -1j * u
    return 1.0 / a - 1.0 / alpha


@dataclass(frozen=True)
class NotationBundle:
    z: complex
    N0: complex
    N1: complex
    N2: complex
    sigma0: complex
    sigma1: complex
    sigma2: complex
    nu: complex
    zeta: tuple
    alpha: tuple      # alpha_j(z)
    a: tuple          # a_j(z)
    g: tuple          # g_j(z)
    d1: complex
    d2: complex
    r: complex
    z_arg: float


def notation(z, N0, sigma0, N1, sigma1, z_arg: float | None = None) -> NotationBundle:
    """The derived quantities of the uniform smoothing theorems."""
    z = complex(z)
    N0 = complex(N0)
    N1 = complex(N1)
    sigma0 = complex(sigma0)
    sigma1 = complex(sigma1)
    if z_arg is None:
        z_arg = cmath.phase(z)
    N2 = N0 + N1
    sigma2 = sigma0 + sigma1
    nu = -1j * cmath.log(sigma1 * N0 / (sigma0 * N1))
    Ns = (N0, N1, N2)
    sigmas = (sigma0, sigma1, sigma2)
    zeta = tuple(-Nj / sj for Nj, sj in zip(Ns, sigmas))
    alpha = tuple(alpha_branch(z, Nj, sj, j, z_arg) for j, (Nj, sj) in
                  enumerate(zip(Ns, sigmas)))
    a = tuple(-1j * (1.0 + sj * z / Nj) for Nj, sj in zip(Ns, sigmas))
    g = tuple(_g_of(z, Nj, sj, j, z_arg) for j, (Nj, sj) in
              enumerate(zip(Ns, sigmas)))
    # d1 = i alpha0(zeta1)/(1 - e^{-i nu}); collinear limit d1 -> r -> 1
    alpha0_at_zeta1 = alpha_branch(zeta[1], N0, sigma0, 0)
    denom = 1.0 - cmath.exp(-1j * nu)
    if abs(denom) < 1e-9:
        d1 = 1.0 + 0.0j if abs(alpha0_at_zeta1) < 1e-9 else 1j * alpha0_at_zeta1 / denom
        if abs(denom) < 1e-12:
            d1 = 1.0 + 0.0j
    else:
        d1 = 1j * alpha0_at_zeta1 / denom
    rz = 0.5 * alpha[1] ** 2 - 0.5 * d1 * d1 * (alpha[0] - alpha0_at_zeta1) ** 2
    # d2(z), removable at z = zeta1 (4-point Richardson there)
    d2 = _d2_of(z, z_arg, N0, sigma0, N1, sigma1, d1, alpha0_at_zeta1, zeta[1])
    return NotationBundle(z=z, N0=N0, N1=N1, N2=N2, sigma0=sigma0, sigma1=sigma1,
                          sigma2=sigma2, nu=nu, zeta=zeta, alpha=alpha, a=a, g=g,
                          d1=d1, d2=d2, r=rz, z_arg=z_arg)


def _d2_raw(z, z_arg, N0, sigma0, N1, sigma1, d1, a0z1, zeta1):
    alpha0 = alpha_branch(z, N0, sigma0, 0, z_arg)
    alpha1 = alpha_branch(z, N1, sigma1, 1, z_arg)
    rz = 0.5 * alpha1 ** 2 - 0.5 * d1 * d1 * (alpha0 - a0z1) ** 2
    u0 = 1.0 + sigma0 * z / N0
    # u0/alpha0 -> i as alpha0 -> 0 (alpha0 = -i u0 r with r -> 1);
    # alpha0(zeta1)/(1 - zeta1/zeta0) = d1/i covers the collinear limit
    ratio = 1j if abs(alpha0) < 1e-9 else u0 / alpha0
    num = 1j * (1.0 - (-1j * d1) * ratio * cmath.exp(N1 * rz))
    den = 1.0 + sigma1 * z / N1
    return num / den


def _d2_of(z, z_arg, N0, sigma0, N1, sigma1, d1, a0z1, zeta1):
    if abs(z - zeta1) > 1e-3 * abs(z):
        return _d2_raw(z, z_arg, N0, sigma0, N1, sigma1, d1, a0z1, zeta1)
    # removable 0/0 at z = zeta1: Richardson limit along a small circle
    h = 1e-3 * abs(z)
    vals = []
    for k in range(4):
        dz = h * cmath.exp(2j * math.pi * k / 4)
        vals.append(_d2_raw(z + dz, z_arg, N0, sigma0, N1, sigma1, d1, a0z1, zeta1))
    return sum(vals) / 4.0


# ---------------------------------------------------------------------------
# The smoothing formulas
# ---------------------------------------------------------------------------


def ordinary_smoothing(bundle: NotationBundle, ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """pi i erfc(alpha0 sqrt(N0/2)) + i sqrt(2 pi/N0) g0 e^{-alpha0^2 N0/2}.

    Approximates v1(z) = e^{-sigma0 z} z^{-N0} F1(z; N0+1; sigma0).
    """
    th = bundle.z_arg + cmath.phase(bundle.sigma0) - math.pi
    if abs(th) > 2 * math.pi - _DELTA:
        raise BranchSectorViolated("outside |arg(e^{-pi i} sigma0 z/N0)| <= 2pi - delta")
    a0 = bundle.alpha[0]
    N0 = bundle.N0
    e = cmath.exp(-0.5 * a0 * a0 * N0)
    val = (1j * math.pi * complex(ctx.erfc(a0 * cmath.sqrt(N0 / 2)))
           + 1j * cmath.sqrt(2 * math.pi / N0) * bundle.g[0] * e)
    scale = abs(e) * abs(N0) ** -1.5 * math.sqrt(2 * math.pi)
    return SmoothingEstimate(value=val, error_scale=scale, order_tag=OrderTag.O_ONE)


def stokes2_smoothing(bundle: NotationBundle, ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """The arg(sigma0 z) ~ pi higher-order smoothing, as a multiple of
    F1(z; N1+1; sigma1):

        F2 ~ [pi i erfc(alpha0 sqrt(N0/2))
              + sqrt(2 pi/N0) e^{-alpha0^2 N0/2} (i g0 + 1/(1 - sigma0 N1/(sigma1 N0)))]
             * e^{sigma0 z} z^{N0} F1(z; N1+1; sigma1).

    Returned value: the bracket (the normalized multiplier the figure plots).
    Breaks down when sigma0 N1/(sigma1 N0) approaches the positive reals.
    """
    v = bundle.sigma0 * bundle.N1 / (bundle.sigma1 * bundle.N0)
    if abs(cmath.phase(v)) < _DELTA:
        raise BreakdownRegion("sigma0 N1/(sigma1 N0) on the positive real axis")
    a0 = bundle.alpha[0]
    N0 = bundle.N0
    e = cmath.exp(-0.5 * a0 * a0 * N0)
    val = (1j * math.pi * complex(ctx.erfc(a0 * cmath.sqrt(N0 / 2)))
           + cmath.sqrt(2 * math.pi / N0) * e
           * (1j * bundle.g[0] + 1.0 / (1.0 - v)))
    scale = abs(e) * abs(N0) ** -1.5 * math.sqrt(2 * math.pi)
    return SmoothingEstimate(value=val, error_scale=scale, order_tag=OrderTag.O_ONE)


def gamma_branch(beta, N0, N1):
    """gamma(beta) with (1/2) gamma^2 = (1+1/s*) ln((1+s*)/(1+beta)) - ln(s*/beta),
    s* = N1/N0, on the branch gamma(s* e^{i nu}) ~ nu/sqrt(1+s*)."""
    beta = complex(beta)
    N0 = complex(N0)
    N1 = complex(N1)
    s = N1 / N0
    if abs(cmath.phase(beta)) >= math.pi:
        raise BreakdownRegion("gamma(beta) needs |arg beta| < pi")
    h2 = 2.0 * ((1 + 1 / s) * cmath.log((1 + s) / (1 + beta)) - cmath.log(s / beta))
    nu = -1j * cmath.log(beta / s)
    if abs(nu) < 1e-8:
        return nu / cmath.sqrt(1 + s)
    lead = nu / cmath.sqrt(1 + s)
    ratio = cmath.sqrt(h2 / (lead * lead))
    if ratio.real < 0:
        ratio = -ratio
    return lead * ratio


def _g0_beta(beta, N0, N1):
    """g(0, beta) of the hypergeometric theorem, removable at beta = s*."""
    beta = complex(beta)
    s = complex(N1) / complex(N0)
    gam = gamma_branch(beta, N0, N1)
    if abs(gam) < 1e-5:
        return (1 - s) / (3 * (1 + s) ** 1.5)
    return (1 + s) ** -0.5 / (1 - beta / s) - 1j / ((1 + beta) * gam)


def hypergeom_I(beta, N0, N1, ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """Two-term uniform approximation of

        I(beta) = Gamma(N0+1) Gamma(N1+1)/Gamma(N0+N1+2) 2F1(1, N0+1; N0+N1+2; 1+beta).
    """
    beta = complex(beta)
    N0 = complex(N0)
    N1 = complex(N1)
    gam = gamma_branch(beta, N0, N1)
    g0 = _g0_beta(beta, N0, N1)
    ln_stir = (N0 * cmath.log(N0) + N1 * cmath.log(N1)
               - (N0 + N1) * cmath.log(N0 + N1))
    term1 = (cmath.exp(N1 * cmath.log(beta) - (N0 + N1 + 1) * cmath.log(1 + beta))
             * 1j * math.pi * complex(ctx.erfc(gam * cmath.sqrt(N1 / 2))))
    term2 = g0 * cmath.exp(ln_stir) * cmath.sqrt(2 * math.pi / N1)
    scale = abs(cmath.exp(ln_stir)) * abs(2 * math.pi / N1)
    return SmoothingEstimate(value=term1 + term2, error_scale=scale / abs(N1) ** 0.5,
                             order_tag=OrderTag.O_ONE)


def hypergeom_I_exact(beta, N0, N1, side=BranchSide.PRINCIPAL, ctx: Context = CTX_DOUBLE):
    beta = complex(beta)
    N0 = complex(N0)
    N1 = complex(N1)
    F = hyp2f1_1bc(N0 + 1, N0 + N1 + 2, 1 + beta, side, ctx)
    ln = (complex(ctx.lngamma(N0 + 1)) + complex(ctx.lngamma(N1 + 1))
          - complex(ctx.lngamma(N0 + N1 + 2)))
    return cmath.exp(ln) * complex(F)


def sigma_cross_smoothing(bundle: NotationBundle, ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """The arg(sigma0) ~ arg(sigma1) smoothing, as the ratio
    F2 / F1(z; N0+N1+1; sigma0+sigma1)."""
    th = bundle.z_arg + cmath.phase(bundle.sigma0)
    if abs(th) > math.pi - _DELTA:
        raise BreakdownRegion("sigma0 z near the negative real axis")
    beta = bundle.sigma1 / bundle.sigma0
    N0, N1, N2 = bundle.N0, bundle.N1, bundle.N2
    gam = gamma_branch(beta, N0, N1)
    g0 = _g0_beta(beta, N0, N1)
    term1 = -1j * math.pi * complex(ctx.erfc(gam * cmath.sqrt(N1 / 2)))
    ln_big = (N2 * cmath.log(bundle.sigma2 / N2)
              - N0 * cmath.log(bundle.sigma0 / N0)
              - N1 * cmath.log(bundle.sigma1 / N1))
    term2 = (-cmath.sqrt(2 * math.pi / N0) * cmath.exp(ln_big)
             * (g0 * (1 + beta) * cmath.sqrt(N0 / N1)
                + cmath.sqrt(N1 / N2) / (1 + bundle.sigma0 * bundle.z / N0)))
    scale = abs(cmath.exp(ln_big)) * math.sqrt(abs(2 * math.pi / N0)) / abs(N1) ** 0.5
    return SmoothingEstimate(value=term1 + term2, error_scale=scale,
                             order_tag=OrderTag.O_HALF)


def erfc_error_scale(bundle: NotationBundle, ctx: Context = CTX_DOUBLE) -> float:
    """|Erfc| of the uniform theorem (same evaluators as the main terms)."""
    d1 = bundle.d1
    lam = cmath.sqrt(bundle.N0 / bundle.N1) / d1
    a0z1 = alpha_branch(bundle.zeta[1], bundle.N0, bundle.sigma0, 0)
    e3 = erfc3_quadrature(d1 * bundle.alpha[0] * cmath.sqrt(bundle.N1 / 2),
                          d1 * a0z1 * cmath.sqrt(bundle.N1 / 2), lam, ctx=ctx)
    e2 = complex(ctx.erfc(bundle.alpha[2] * cmath.sqrt(bundle.N2 / 2)))
    e0 = cmath.exp(-0.5 * bundle.alpha[0] ** 2 * bundle.N0
                   - 0.5 * bundle.alpha[1] ** 2 * bundle.N1)
    return abs(e3) + abs(e2) + abs(e0) / abs(cmath.sqrt(bundle.N2))


def uniform_smoothing(bundle: NotationBundle, with_correction: bool = False,
                      ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """The full uniform theorem for v2(z), blue 2F1*F1 term plus the red
    Gaussian-convolved erfc term (and optionally the R1 correction).
    """
    z = bundle.z
    N0, N1, N2 = bundle.N0, bundle.N1, bundle.N2
    s0, s1, s2 = bundle.sigma0, bundle.sigma1, bundle.sigma2
    psi0 = cmath.phase(s0)
    eps = max(abs(cmath.phase(N0)), abs(cmath.phase(N1)))
    if eps > math.pi / 2 - _DELTA:
        raise BreakdownRegion("|arg Nj| too large")
    v = s0 * N1 / (s1 * N0)
    if abs(cmath.phase(v)) > math.pi - 2 * eps - 2 * _DELTA:
        raise BreakdownRegion("|arg(sigma0 N1/(sigma1 N0))| constraint violated")
    for j, sj in enumerate((s0, s1, s2)):
        th = bundle.z_arg + cmath.phase(sj) - math.pi / 2
        if abs(th) > math.pi - _DELTA:
            raise BreakdownRegion(f"|arg(e^{{-pi i/2}} sigma_{j} z)| constraint violated")

    ratio = s1 / s0
    x = 1 + ratio
    on_cut = abs(ratio.imag) <= 1e-14 * abs(ratio) and ratio.real > 0
    side = BranchSide.ABOVE_CUT if on_cut else BranchSide.PRINCIPAL
    F = hyp2f1_1bc(N0 + 1, N2 + 2, x, side, ctx)
    psi2 = psi0 + cmath.phase(x)
    psi1 = psi0 + math.remainder(cmath.phase(s1) - psi0, 2 * math.pi)
    lnC = ((N2 + 1) * (math.log(abs(s2)) + 1j * psi2)
           - (N0 + 1) * (math.log(abs(s0)) + 1j * psi0)
           - N1 * (math.log(abs(s1)) + 1j * psi1)
           + complex(ctx.lngamma(N0 + 1)) + complex(ctx.lngamma(N1 + 1))
           - complex(ctx.lngamma(N2 + 2)))
    v2 = f1_scaled(z, N2 + 1, s2, z_arg=bundle.z_arg, sigma_arg=psi2, ctx=ctx)
    blue = -cmath.exp(lnC) * complex(F) * complex(v2)

    d1 = bundle.d1
    a0z1 = alpha_branch(bundle.zeta[1], N0, s0, 0)
    lam = cmath.sqrt(N0 / N1) / d1
    red = -math.pi ** 2 * erfc3_quadrature(
        d1 * bundle.alpha[0] * cmath.sqrt(N1 / 2),
        d1 * a0z1 * cmath.sqrt(N1 / 2), lam, ctx=ctx)

    val = blue + red
    scale = erfc_error_scale(bundle, ctx)
    tag = OrderTag.O_HALF
    if with_correction:
        a0, a1, a2 = bundle.alpha
        e01 = cmath.exp(-0.5 * a0 * a0 * N0 - 0.5 * a1 * a1 * N1)
        zeta2 = bundle.zeta[2]
        alpha0p_z2 = ((1.0 / zeta2 - 1.0 / bundle.zeta[0])
                      / alpha_branch(zeta2, N0, s0, 0))
        g0_z2 = _g_of(zeta2, N0, s0, 0)
        r1 = (-bundle.d2 * math.pi * cmath.sqrt(2 * math.pi / N1)
              * cmath.exp(-0.5 * a1 * a1 * N1)
              * complex(ctx.erfc(a0 * cmath.sqrt(N0 / 2))))
        r1 += ((bundle.d2 * alpha0p_z2 / s2 * cmath.sqrt(2 * math.pi * N0 * N2 / N1)
                + 1j * g0_z2 * cmath.sqrt(2 * math.pi * N1 / (N0 * N2)))
               * cmath.exp(0.5 * a2 * a2 * N2) * e01 * complex(v2))
        r1 += (2j * math.pi / s2 * cmath.sqrt(N1 / N0)
               * (bundle.g[0] - g0_z2) / (z - zeta2) * e01)
        val = val + r1
        tag = OrderTag.O_ONE
        scale = scale / abs(N1) ** 0.5
    return SmoothingEstimate(value=val, error_scale=float(scale / abs(N1) ** 0.5),
                             order_tag=tag)


def extreme_collinear_smoothing(bundle: NotationBundle, with_correction: bool = False,
                                ctx: Context = CTX_DOUBLE) -> SmoothingEstimate:
    """sigma1/sigma0 = N1/N0 exactly:

        v2 ~ pi^2 erfc(alpha0 sqrt(N2/2)) - pi^2 erfc(alpha0 sqrt(N1/2); 0; sqrt(N0/N1)).
    """
    ratio = bundle.sigma1 / bundle.sigma0 - bundle.N1 / bundle.N0
    if abs(ratio) > 1e-9 * abs(bundle.N1 / bundle.N0):
        raise NotCollinear("sigma1/sigma0 != N1/N0")
    a0 = bundle.alpha[0]
    N0, N1, N2 = bundle.N0, bundle.N1, bundle.N2
    blue = math.pi ** 2 * complex(ctx.erfc(a0 * cmath.sqrt(N2 / 2)))
    red = -math.pi ** 2 * erfc3_quadrature(a0 * cmath.sqrt(N1 / 2), 0.0,
                                           cmath.sqrt(N0 / N1), ctx=ctx)
    val = blue + red
    e3 = erfc3_quadrature(a0 * cmath.sqrt(N1 / 2), 0.0, cmath.sqrt(N0 / N1), ctx=ctx)
    e2 = complex(ctx.erfc(a0 * cmath.sqrt(N2 / 2)))
    e0 = cmath.exp(-0.5 * a0 * a0 * N2)
    scale = abs(e3) + abs(e2) + abs(e0) / abs(cmath.sqrt(N2))
    tag = OrderTag.O_HALF
    if with_correction:
        g0 = bundle.g[0]
        zeta2 = bundle.zeta[2]
        r1 = ((1j / 3 - g0) * math.pi * cmath.sqrt(2 * math.pi * N0 / (N1 * N2))
              * complex(ctx.erfc(a0 * cmath.sqrt(N2 / 2))))
        r1 += (-g0 * math.pi * cmath.sqrt(2 * math.pi / N1)
               * cmath.exp(-0.5 * a0 * a0 * N1)
               * complex(ctx.erfc(a0 * cmath.sqrt(N0 / 2))))
        r1 += ((2j * math.pi / bundle.sigma2 * cmath.sqrt(N1 / N0)
                * (g0 - 1j / 3) / (bundle.z - zeta2)
                + math.pi * g0 * cmath.sqrt(2 * math.pi / N2))
               * cmath.exp(-0.5 * a0 * a0 * N2))
        val = val + r1
        tag = OrderTag.O_ONE
    return SmoothingEstimate(value=val, error_scale=float(scale / abs(N1) ** 0.5),
                             order_tag=tag)


def ghost_multiplier(N0, N1, with_correction: bool = False):
    """The smooth multiplier at the collinear double-Stokes centre:

        2 pi arctan(sqrt(N0/N1)) - (pi i/3) sqrt(2 pi/N1) (1 - 1/sqrt(1+N0/N1)).
    """
    N0 = complex(N0)
    N1 = complex(N1)
    val = 2 * math.pi * cmath.atan(cmath.sqrt(N0 / N1))
    if with_correction:
        val -= (1j * math.pi / 3) * cmath.sqrt(2 * math.pi / N1) \
            * (1 - 1 / cmath.sqrt(1 + N0 / N1))
    return val


def telegraph_ghost_multiplier(beta):
    """1 - (1/pi) arctan(2 sqrt(beta)/|beta-1|), principal branches off x > 0.

    For 2x > t > 0 (beta > 1) this equals (2/pi) arctan(sqrt(beta)).  Off the
    positive axis the formula is reported as an extrapolation.
    """
    beta = complex(beta)
    if abs(beta - 1) < 1e-14:
        raise ZeroDivisionError("beta = 1: coalescent saddles")
    return 1 - (1 / math.pi) * cmath.atan(2 * cmath.sqrt(beta) / abs(beta - 1))


def lemma_2f1_expansion(N0, N1, nu):
    """pi i - i sqrt(2 pi N0 N1/(N0+N1)) nu + (N0-N1)/3 sqrt(2 pi/(N0 N1 (N0+N1)))."""
    N0 = complex(N0)
    N1 = complex(N1)
    nu = complex(nu)
    N2 = N0 + N1
    return (1j * math.pi - 1j * cmath.sqrt(2 * math.pi * N0 * N1 / N2) * nu
            + (N0 - N1) / 3 * cmath.sqrt(2 * math.pi / (N0 * N1 * N2)))
