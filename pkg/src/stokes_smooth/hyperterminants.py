"""First and second hyperterminants with full sheet/branch bookkeeping.

Conventions
-----------
All branch tracking is done through *effective arguments*: a point z together
with a real number arg_eff(z) that may leave (-pi, pi].  For HyperArgs1,
arg_eff(z) = Arg(z) + 2*pi*sheet.  The effective argument of sigma*z is
arg_eff(z) + Arg(sigma), except that the second singulant of F2 lives on the
sheet fixed by the convention arg(sigma1) - arg(sigma0) in [0, 2*pi).

F1 evaluation: the incomplete-gamma identity

    F1(z; a; sigma) = Gamma(a) e^{sigma z + a pi i} z^{a-1} Gamma(1-a, sigma z)

(the e^{+a pi i} sign was pinned numerically against the direct contour
quadrature) is used for small orders; for Re(a-1) >= 4 the canonical form

    e^{-sigma z} z^{1-a} F1 = e^{-alpha^2 N/2} *
        int_0^inf exp(-N(t - 1 - ln t)) / (t_p - t) dt,   t_p = e^{-pi i} sigma z / N

is integrated directly with pole subtraction, which stays uniformly accurate
through the Stokes transition where the pole parks on the saddle.

F2 evaluation: the variation-of-parameters representation (a 2F1-weighted
F1(z; N0+N1+1; sigma0+sigma1) term plus a tail integral of F1 along a
progressive path).  When the progressive direction points back through the
origin (collinear negative singulants), the tail contour is deformed to an
arc at radius |z| followed by an outbound radial ray.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np
from mpmath import mp

from .errors import (
    BranchAmbiguity,
    ConstraintViolated,
    NonConvergence,
    Overflow,
)
from .numerics import QuadratureSettings, _adaptive_double, finite_difference
from .precision import CTX_DOUBLE, Context
from .special import BranchSide, hyp2f1_1bc, upper_incomplete_gamma

__all__ = [
    "HyperArgs1",
    "HyperArgs2",
    "f1",
    "f1_scaled",
    "f1_at_zero",
    "f1_quadrature",
    "f2",
    "f2_scaled",
    "f2_quadrature",
    "f2_at_zero",
    "connection_residual",
    "hyperterminant_ode_residual",
]

_DELTA = 0.02  # sector guard (radians)
_EXP_CUT = 42.0  # integrand support: exp(-EXP_CUT) ~ 5.7e-19


@dataclass(frozen=True)
class HyperArgs1:
    z: complex
    a: complex
    sigma: complex
    sheet: int = 0

    def __post_init__(self):
        if complex(self.a).real <= 0:
            raise ValueError("HyperArgs1 requires Re(a) > 0")
        if self.sigma == 0:
            raise ValueError("sigma must be nonzero")


@dataclass(frozen=True)
class HyperArgs2:
    z: complex
    N0: complex
    sigma0: complex
    N1: complex
    sigma1: complex
    sigma_order: float | None = None  # arg(sigma1) - arg(sigma0) in [0, 2*pi)
    z_sheet: int = 0

    def __post_init__(self):
        if complex(self.N0).real <= -1 or complex(self.N1).real <= -1:
            raise ValueError("HyperArgs2 requires Re(N0) > -1 and Re(N1) > -1")
        if self.sigma0 == 0 or self.sigma1 == 0:
            raise ValueError("singulants must be nonzero")
        if self.sigma_order is None:
            rel = cmath.phase(complex(self.sigma1)) - cmath.phase(complex(self.sigma0))
            rel %= 2.0 * math.pi
            object.__setattr__(self, "sigma_order", rel)


# ---------------------------------------------------------------------------
# F1
# ---------------------------------------------------------------------------


def _solve_phi(target: float, upper: bool) -> float:
    """Solve t - 1 - ln(t) = target on the requested side of t = 1."""
    if upper:
        t = 1.0 + math.sqrt(2.0 * target) + 0.7 * target
        for _ in range(40):
            g = t - 1.0 - math.log(t) - target
            if abs(g) < 1e-10:
                break
            t -= g / (1.0 - 1.0 / t)
            t = max(t, 1.0 + 1e-9)
        return t
    return math.exp(-target - 1.0)


def _f1_canonical_double(re_n, n, t_p, theta_pos, side_on_axis, settings):
    """Integral of exp(-n(t-1-ln t))/(t_p - t) over [0, T], double precision."""
    T = _solve_phi(_EXP_CUT / re_n, upper=True)
    t_lo = _solve_phi(_EXP_CUT / re_n, upper=False)

    def h(t):
        return np.exp(-n * (t - 1.0 - np.log(t)))

    tp = complex(t_p)
    log_tp = cmath.log(abs(tp)) + 1j * theta_pos
    # subtract only when the pole term is of integrand scale; a pole deep in
    # the e^{-n phi} growth region makes h_p explode and the subtraction
    # would destroy all significant digits
    h_exp = -n * (tp - 1.0 - log_tp)
    subtract = ((0.02 < tp.real < T + 0.5) and abs(tp.imag) < 1.0
                and complex(h_exp).real < 4.0)

    if subtract:
        h_p = cmath.exp(h_exp)

        def f(t):
            return (h(t) - h_p) / (tp - t)
    else:
        h_p = 0.0

        def f(t):
            return h(t) / (tp - t)

    w = 3.0 / math.sqrt(re_n)
    cuts = sorted({t_lo, max(t_lo, 1 - w), min(T, 1 + w), T})
    total = 0.0 + 0.0j
    for a0, b0 in zip(cuts[:-1], cuts[1:]):
        if b0 - a0 <= 0:
            continue
        val, _ = _adaptive_double(f, _line_map(a0, b0), 1.0, settings)
        total += val
    # [0, t_lo] carries no h mass (h ~ t^n there); with subtraction active the
    # pole part over [0, T] is restored analytically:
    #   int_{t_lo}^T h_p/(t_p - t) dt = h_p (Log(t_p - t_lo) - Log(t_p - T)),
    # branch continuous along the real path (on-axis poles get the side limit).
    if subtract:
        total += h_p * (_log_on_path(tp - t_lo, side_on_axis)
                        - _log_on_path(tp - T, side_on_axis))
    return total


def _log_on_path(u, side):
    """log(u) where u = t_p - t with Im(u) = Im(t_p); side resolves Im = 0."""
    u = complex(u)
    if u.imag != 0.0 or u.real > 0.0:
        return cmath.log(u)
    return math.log(abs(u)) + 1j * side * math.pi


def _line_map(a, b):
    d = b - a

    def mapping(s):
        return a + s * d, d

    return mapping


def _f1_canonical_extended(n, t_p, theta_pos, side_on_axis, ctx: Context):
    re_n = float(complex(n).real)
    T = _solve_phi((_EXP_CUT + 2.4 * ctx.dps) / re_n, upper=True)
    t_lo = _solve_phi((_EXP_CUT + 2.4 * ctx.dps) / re_n, upper=False)
    with mp.workdps(ctx.dps + 10):
        tp = mp.mpc(t_p)
        log_tp = mp.log(abs(tp)) + 1j * mp.mpf(theta_pos)
        h_exp = -n * (tp - 1 - log_tp)
        subtract = ((0.02 < float(tp.real) < T + 0.5) and abs(float(tp.imag)) < 1.0
                    and float(h_exp.real) < 4.0)
        if subtract:
            h_p = mp.exp(h_exp)

            def f(t):
                if t <= 0:
                    return mp.mpc(0)
                return (mp.exp(-n * (t - 1 - mp.log(t))) - h_p) / (tp - t)
        else:
            h_p = mp.mpc(0)

            def f(t):
                if t <= 0:
                    return mp.mpc(0)
                return mp.exp(-n * (t - 1 - mp.log(t))) / (tp - t)

        total = mp.quad(f, [t_lo, 1, T])
        if subtract:
            total += -h_p * (mp.log(tp - t_lo) - mp.log(tp))
            if tp.imag != 0:
                L = mp.log(tp) - mp.log(tp - T)
            else:
                if tp.real > T:
                    L = mp.log(tp.real / (tp.real - T))
                else:
                    L = mp.log(tp.real / (T - tp.real)) - 1j * side_on_axis * mp.pi
            total += h_p * L
        return total


def f1_scaled(z, a, sigma, *, z_arg=None, sigma_arg=None, ctx: Context = CTX_DOUBLE):
    """e^{-sigma z} z^{1-a} F1(z; a; sigma) with tracked branches.

    ``z_arg``/``sigma_arg`` override the principal arguments to select sheets;
    supported window: arg_eff(sigma z) in (-3*pi + delta, 2*pi - delta).
    """
    zc = ctx.to_complex(z)
    sc_ = ctx.to_complex(sigma)
    ac = ctx.to_complex(a)
    if z_arg is None:
        z_arg = cmath.phase(complex(z))
    if sigma_arg is None:
        sigma_arg = cmath.phase(complex(sigma))
    w_arg = z_arg + sigma_arg
    n = ac - 1
    re_n = complex(n).real

    if re_n >= 4.0 and abs(complex(n).imag) <= 0.5 * re_n:
        theta_p = w_arg - math.pi - cmath.phase(complex(n))
        if theta_p >= 2 * math.pi - _DELTA or theta_p <= -4 * math.pi + _DELTA:
            raise BranchAmbiguity(f"arg_eff(sigma z) = {w_arg:.4f} outside the "
                                  "supported continuation window")
        # pole position angle and the number of contour crossings picked up
        # while continuing from the principal region theta_p in (-2*pi, 0)
        q = math.floor((theta_p + math.pi) / (2.0 * math.pi))
        theta_pos = theta_p - 2.0 * math.pi * q
        if abs(theta_pos - math.pi) < 1e-14:
            theta_pos = math.pi
        m_up = max(0, math.ceil(theta_p / (2.0 * math.pi) - 1e-15))
        m_down = max(0, math.ceil((-2.0 * math.pi - theta_p) / (2.0 * math.pi) - 1e-15))
        # on-axis pole: the side is the one the position was approached from
        # (q < 0 windings arrive from above, q >= 0 from below)
        side = +1.0 if (abs(theta_pos) < 1e-13 and q < 0) else -1.0
        with ctx.guard():
            tp_mod = abs(sc_ * zc) / abs(n)
            t_p = tp_mod * ctx.exp(ctx.to_complex(1j) * theta_pos)
            if ctx.kind == "double":
                I = _f1_canonical_double(re_n, complex(n), complex(t_p), theta_pos,
                                         side, QuadratureSettings(1e-15, 2e-13, 6000))
            else:
                I = _f1_canonical_extended(n, t_p, theta_pos, side, ctx)
            E = -n - sc_ * zc - n * (ctx.log(tp_mod) + ctx.to_complex(1j) * theta_p)
            v = ctx.exp(E) * I
            tpi = 2j * ctx.pi if ctx.kind == "double" else ctx.to_complex(2j) * ctx.pi
            rot = ctx.exp(ctx.to_complex(-2j) * ctx.pi * n)
            for j in range(m_up):
                v = v + tpi * rot ** j
            rot_dn = ctx.exp(ctx.to_complex(2j) * ctx.pi * n)
            for j in range(1, m_down + 1):
                v = v - tpi * rot_dn ** j
        return v

    # small orders: incomplete-gamma identity with DLMF 8.2.10 continuation
    with ctx.guard():
        w = sc_ * zc
        w_pos_arg = math.remainder(w_arg, 2.0 * math.pi)
        m = round((w_arg - w_pos_arg) / (2.0 * math.pi))
        g_pos = upper_incomplete_gamma(1 - ac, w, ctx)
        if m == 0:
            G = g_pos
        else:
            rot = ctx.exp(ctx.to_complex(2j) * ctx.pi * m * (1 - ac))
            a_near_int = (abs(complex(ac).imag) < 1e-12
                          and abs(complex(ac).real - round(complex(ac).real)) < 1e-8)
            if a_near_int:
                k = int(round(complex(ac).real)) - 1
                res = ((-1) ** k) / math.factorial(k) if k >= 0 else 0.0
                G = g_pos - ctx.to_complex(2j) * ctx.pi * m * res
            else:
                G = rot * g_pos + (1 - rot) * ctx.gamma(1 - ac)
        return ctx.gamma(ac) * ctx.exp(ctx.to_complex(1j) * ctx.pi * ac) * G


def f1(args: HyperArgs1, ctx: Context = CTX_DOUBLE):
    """F1(z; a; sigma) on the sheet selected by ``args.sheet``."""
    z_arg = cmath.phase(complex(args.z)) + 2.0 * math.pi * args.sheet
    v = f1_scaled(args.z, args.a, args.sigma, z_arg=z_arg, ctx=ctx)
    with ctx.guard():
        zc = ctx.to_complex(args.z)
        ac = ctx.to_complex(args.a)
        sc_ = ctx.to_complex(args.sigma)
        log_z = ctx.log(abs(zc)) + ctx.to_complex(1j) * z_arg
        out = v * ctx.exp(sc_ * zc + (ac - 1) * log_z)
    return ctx.check_finite(out, "f1")


def f1_at_zero(M, sigma, ctx: Context = CTX_DOUBLE):
    """F1(0; M+1; sigma) = -e^{M pi i} sigma^{-M} Gamma(M)."""
    with ctx.guard():
        Mc = ctx.to_complex(M)
        s = ctx.to_complex(sigma)
        return -ctx.exp(ctx.to_complex(1j) * ctx.pi * Mc - Mc * ctx.log(s)
                        + ctx.lngamma(Mc))


def f1_quadrature(z, a, sigma, *, z_arg=None, settings: QuadratureSettings | None = None):
    """Direct contour quadrature of F1 with pole subtraction (oracle path).

    The contour angle is chosen inside the decay sector so that its cut
    avoids arg_eff(sigma z); pole subtraction on [0, T] removes the near-path
    pole exactly at Stokes lines.  Double precision only.
    """
    if settings is None:
        settings = QuadratureSettings(abs_tol=1e-15, rel_tol=5e-13, max_subdivisions=9000)
    z = complex(z)
    a = complex(a)
    sigma = complex(sigma)
    if z_arg is None:
        z_arg = cmath.phase(z)
    s_arg = cmath.phase(sigma)
    p = z_arg + s_arg  # arg_eff(sigma z)
    lo, hi = math.pi / 2 + 0.12, 3 * math.pi / 2 - 0.12
    # cut angle: balance exponential decay (best at pi) against distance
    # from the pole direction, inside the window (p, p + 2*pi)
    best, angle_c = -1.0, None
    for cand in np.linspace(lo, hi, 141):
        d = cand - p
        if not 0.08 < d < 2 * math.pi - 0.08:
            continue
        score = min(-math.cos(cand), 0.6 * min(d, 2 * math.pi - d))
        if score > best:
            best, angle_c = score, float(cand)
    if angle_c is None or best < 0.05:
        raise BranchAmbiguity(f"no admissible contour for arg_eff(sigma z) = {p:.3f}")
    eta = angle_c - s_arg
    decay = -abs(sigma) * math.cos(angle_c)
    assert decay > 0

    # |g(s)| = e^{-decay*s} s^{Re a - 1}; T also clears the pole radius
    T = (abs(z) * 3.0 + (_EXP_CUT + max(0.0, (a.real - 1)) *
         math.log1p(abs(z) * 3.0 + 50.0 / decay)) / decay)
    # double precision cannot resolve the integral below eps * peak(|g|);
    # report to that honest floor instead of failing to converge
    s_peak = max((a.real - 1) / decay, 1e-6)
    ln_peak = -decay * s_peak + max(a.real - 1, 0.0) * math.log(max(s_peak, 1e-6))
    floor = 3e-15 * math.exp(min(ln_peak, 690.0))
    settings = QuadratureSettings(abs_tol=max(settings.abs_tol, floor),
                                  rel_tol=settings.rel_tol,
                                  max_subdivisions=settings.max_subdivisions)
    eiq = cmath.exp(1j * eta)

    def g(t):
        return np.exp(sigma * t + (a - 1) * (np.log(np.abs(t)) + 1j * eta))

    dphi = math.remainder(z_arg - eta, 2.0 * math.pi)
    z_branch_arg = eta + dphi
    gz = cmath.exp(sigma * z + (a - 1) * (math.log(abs(z)) + 1j * z_branch_arg))
    near_pole = abs(dphi) < 0.45

    def f_sub(s):
        t = s * eiq
        return (g(t) - gz) * eiq / (z - t)

    def f_plain(s):
        t = s * eiq
        return g(t) * eiq / (z - t)

    if near_pole:
        val, _ = _adaptive_double(f_sub, _line_map(0.0, T), 1.0, settings)
        # int_0^{T e^{i eta}} d tau/(z - tau), branch continuous along the ray
        zr = z * cmath.exp(-1j * eta)  # rotate so the ray is [0, T] real
        if zr.imag != 0.0:
            L = cmath.log(zr) - cmath.log(zr - T)
        else:
            L = (math.log(abs(zr / (zr - T))) +
                 (0.0 if zr.real > T or zr.real < 0 else
                  -1j * math.copysign(math.pi, dphi)))
        val += gz * L
    else:
        val, _ = _adaptive_double(f_plain, _line_map(0.0, T), 1.0, settings)

    # exponential tail from T e^{i eta}
    def f_tail(s):
        t = (T + s) * eiq
        return g(t) * eiq / (z - t)

    tail, _ = _adaptive_double(f_tail, _line_map(0.0, 30.0 / decay + T), 1.0, settings)
    return val + tail


# ---------------------------------------------------------------------------
# F2 via the variation-of-parameters representation
# ---------------------------------------------------------------------------


def _f2_branch_args(args: HyperArgs2, sigma_rel: float | None = None):
    """Branch data for the F2 representation.

    The defining double integral uses plain principal contour angles for both
    singulants; the [0, 2*pi) ``sigma_order`` convention only decides which
    side the inner contour passes the outer one at exact collinearity (limit
    from above, i.e. sigma0 rotated by -eps).  ``sigma_rel`` overrides the
    relative angle for continuation in arg(sigma1) (connect3 bookkeeping);
    the supported window is |sigma_rel| < 2*pi.
    """
    psi0 = cmath.phase(complex(args.sigma0))
    if sigma_rel is None:
        rel = math.remainder(args.sigma_order, 2.0 * math.pi)
    else:
        rel = sigma_rel
    if abs(rel) > math.pi:
        raise ConstraintViolated("relative singulant angle outside [-pi, pi]")
    psi1 = psi0 + rel
    ratio = complex(args.sigma1) / complex(args.sigma0)
    x = 1 + ratio
    on_cut = abs(ratio.imag) <= 1e-14 * abs(ratio) and ratio.real > 0
    if on_cut:
        # collinear: the side from the relative angle (exact 0 => the stated
        # limit from above, i.e. sigma0 rotated by -eps)
        side = BranchSide.ABOVE_CUT if rel >= 0.0 else BranchSide.BELOW_CUT
    else:
        side = BranchSide.PRINCIPAL
    psi2 = psi0 + cmath.phase(x)
    return psi0, psi1, psi2, x, side


def _plan_tail_path(z: complex, z_arg: float, sigma1: complex, psi1: float,
                    N1: complex, psi2: float, psi0: float):
    """Pick the tail contour: straight progressive ray, or arc + radial ray.

    The inner F1(t; N0+1; sigma0) limits the reachable arg(t) window to
    psi0 + arg(t) in (-2*pi + delta, 2*pi - delta); candidate arcs violating
    it are rejected.
    """
    R = abs(z)
    rate = lambda phi: (complex(sigma1) * cmath.exp(1j * phi)).real

    def arg_window_ok(lo, hi):
        # inner F1 continuation window: theta_p in (-4*pi, 2*pi) with margins
        return (-3.0 * math.pi + 0.15 < psi0 + lo
                and psi0 + hi < 3.0 * math.pi - 0.15)

    def envelope_ok(direction_phi):
        # ln|integrand| along z + s e^{i phi}; reject humps and
        # near-origin passes
        d = cmath.exp(1j * direction_phi)
        hump = 0.0
        last = 0.0
        for s in np.linspace(0.0, 6.0 * R, 61)[1:]:
            t = z + s * d
            if abs(t) < 0.35 * R:
                return False
            last = (-complex(sigma1) * (t - z)).real - \
                (complex(N1).real + 1) * math.log(abs(t) / R)
            hump = max(hump, last)
        return hump < 20.0 and (last < -_EXP_CUT / 2
                               or rate(direction_phi) > 0.05 * abs(sigma1))

    # The canonical contour class никогда winds around t = 0: the outbound
    # end-argument is the plain -psi representative (verified against the
    # double quadrature plus crossing residues on both sides of the Stokes
    # lines; a class that wraps with the pierced chord is NOT the
    # continuation).
    target2 = -psi2
    target1 = -psi1
    phi_straight = -psi2
    end_arg = z_arg + math.remainder(phi_straight - z_arg, 2.0 * math.pi)
    if (abs(end_arg - target2) < 1e-9 and envelope_ok(phi_straight)
            and arg_window_ok(min(z_arg, end_arg) - 0.2, max(z_arg, end_arg) + 0.2)):
        return [("ray", phi_straight)]
    # arc at radius |z| to an outbound target angle, taken as a plain real
    # number so the end branch is exact
    for target in (target2, target1):
        diff = target - z_arg
        if not 0.02 < abs(diff) <= 4.8:
            continue
        if rate(target) <= 0.1 * abs(sigma1):
            continue
        lo = min(z_arg, target) - 0.6
        hi = max(z_arg, target) + 0.6
        if not arg_window_ok(lo, hi):
            continue
        phis = np.linspace(z_arg, target, 41)
        env = np.array([(-complex(sigma1) * (R * cmath.exp(1j * p) - z)).real
                        for p in phis])
        if env.max() >= 20.0:
            continue
        return [("arc", R, z_arg, target), ("ray_from", target)]
    raise ConstraintViolated("no admissible tail contour for the F2 representation")


def f2_scaled(args: HyperArgs2, ctx: Context = CTX_DOUBLE,
              settings: QuadratureSettings | None = None,
              sigma_rel: float | None = None, sigma_continued: bool = False):
    """e^{-(sigma0+sigma1) z} z^{-N0-N1} F2(z; N0+1, sigma0; N1+1, sigma1).

    ``sigma_rel`` overrides the relative singulant angle (collinear side
    bookkeeping).  With ``sigma_continued`` the value is the analytic
    continuation in arg(sigma1/sigma0) from the positive side: crossing
    collinearity adds the 2F1 cut jump, which is what the sigma-sweep
    smoothing theorems describe.
    """
    if settings is None:
        # the tail integral is evaluated in a scaled form whose magnitude can
        # be far below 1; convergence must be relative-tolerance driven
        settings = QuadratureSettings(abs_tol=1e-280, rel_tol=2e-12, max_subdivisions=9000)
    if ctx.kind != "double":
        raise NonConvergence("f2 evaluation is double-precision only; the "
                             "extended workloads use f2_at_zero")
    psi0, psi1, psi2, x, side = _f2_branch_args(args, sigma_rel)
    z = complex(args.z)
    z_arg = cmath.phase(z) + 2 * math.pi * args.z_sheet
    N0 = complex(args.N0)
    N1 = complex(args.N1)
    N2 = N0 + N1
    s0 = complex(args.sigma0)
    s1 = complex(args.sigma1)
    s2 = s0 + s1

    if abs(z_arg + psi0) > 1.5 * math.pi - _DELTA:
        raise ConstraintViolated(f"|arg_eff(sigma0 z)| = {abs(z_arg + psi0):.3f} > 3pi/2")
    if abs(cmath.phase(x)) > math.pi - 1e-12:
        raise ConstraintViolated("1 + sigma1/sigma0 on the negative axis")

    with ctx.guard():
        # term 1: 2F1-weighted F1(z; N2+1; sigma2)
        F = hyp2f1_1bc(N0 + 1, N2 + 2, x, side, ctx)
        rel_now = sigma_rel if sigma_rel is not None \
            else math.remainder(args.sigma_order, 2.0 * math.pi)
        if sigma_continued and rel_now < 0.0:
            # continuation from the rel > 0 side across the 2F1 cut:
            # jump = 2 pi i Gamma(c)/(Gamma(b) Gamma(c-b)) (x-1)^{N1} x^{-N2-1}
            lnJ = (complex(ctx.lngamma(N2 + 2)) - complex(ctx.lngamma(N0 + 1))
                   - complex(ctx.lngamma(N1 + 1))
                   + N1 * (math.log(abs(x - 1)) + 1j * rel_now)
                   - (N2 + 1) * cmath.log(x))
            F = F + 2j * math.pi * cmath.exp(lnJ)
        lnC = ((N2 + 1) * (math.log(abs(s2)) + 1j * psi2)
               - (N0 + 1) * (math.log(abs(s0)) + 1j * psi0)
               - N1 * (math.log(abs(s1)) + 1j * psi1)
               + complex(ctx.lngamma(N0 + 1)) + complex(ctx.lngamma(N1 + 1))
               - complex(ctx.lngamma(N2 + 2)))
        v2 = f1_scaled(args.z, N2 + 1, s2, z_arg=z_arg, sigma_arg=psi2, ctx=ctx)
        term1 = -ctx.exp(ctx.to_complex(lnC)) * F * v2

        # term 2: tail integral of F1(t; N0+1; sigma0)
        ln_pref = (complex(ctx.lngamma(N1 + 1))
                   - N1 * (math.log(abs(s1)) + 1j * (psi1 - math.pi)))
        term2 = -_f2_tail(z, z_arg, N0, s0, psi0, N1, s1, psi1, psi2, ln_pref,
                          settings, ctx)
    return term1 + term2


def _f2_tail(z, z_arg, N0, s0, psi0, N1, s1, psi1, psi2, ln_pref, settings, ctx):
    """int_z^inf e^{-sigma1 t} t^{-N1-1} * [e^{-sigma0 t} t^{-N0} F1(t; N0+1; s0)] dt,
    premultiplied by exp(ln_pref); path planned to stay progressive."""
    plan = _plan_tail_path(z, z_arg, s1, psi1, N1, psi2, psi0)

    def w_of(t, argc):
        # scalar integrand value at t with continuous arg(t) = argc
        v0 = f1_scaled(t, N0 + 1, s0, z_arg=argc, sigma_arg=psi0, ctx=ctx)
        ln_t = math.log(abs(t)) + 1j * argc
        return complex(v0) * cmath.exp(complex(ln_pref) - complex(s1) * t
                                       - (complex(N1) + 1) * ln_t)

    # anchor the absolute tolerance to the integrand scale probed along the
    # path (mild humps are admitted by the planner, hence the wide net)
    fracs = (0.0, 0.05, 0.15, 0.3, 0.6, 1.0, 1.7, 2.6)
    if plan[0][0] == "ray":
        d0 = cmath.exp(1j * plan[0][1])
        probes = [z + s * abs(z) * d0 for s in fracs]
        pargs = [z_arg + cmath.phase(t / z) for t in probes]
    else:
        _, R0, a0_, a1_ = plan[0]
        probes = [R0 * cmath.exp(1j * (a0_ + u * (a1_ - a0_))) for u in fracs if u <= 1]
        pargs = [z_arg + u * (a1_ - a0_) for u in fracs if u <= 1]
    scale0 = max(abs(w_of(t, ac)) for t, ac in zip(probes, pargs)) * max(abs(z), 1.0)
    settings = QuadratureSettings(abs_tol=max(scale0, 1e-250) * 1e-12,
                                  rel_tol=settings.rel_tol,
                                  max_subdivisions=settings.max_subdivisions)
    total = 0.0 + 0.0j
    for piece in plan:
        if piece[0] == "ray":
            phi = piece[1]
            d = cmath.exp(1j * phi)
            rate = (complex(s1) * d).real
            alg = (complex(N1).real + 1)
            L = _tail_length(abs(z), rate, alg)

            def f(s):
                out = np.empty(len(s), dtype=complex)
                for i, si in enumerate(s):
                    t = z + si * d
                    argc = z_arg + cmath.phase(t / z)
                    out[i] = w_of(t, argc) * d
                return out

            R = abs(z)
            cuts = sorted({0.0, min(L, R / (alg + 1)), min(L, R), min(L, 4 * R), L})
            for a0, b0 in zip(cuts[:-1], cuts[1:]):
                if b0 > a0:
                    val, _ = _adaptive_double(f, _line_map(a0, b0), 1.0, settings)
                    total += val
        elif piece[0] == "arc":
            _, R, a0, a1 = piece

            def f(s):
                out = np.empty(len(s), dtype=complex)
                for i, si in enumerate(s):
                    phi = a0 + si * (a1 - a0)
                    t = (abs(z)) * cmath.exp(1j * phi)
                    dt = 1j * (a1 - a0) * t
                    out[i] = w_of(t, z_arg + (phi - a0)) * dt
                return out

            val, _ = _adaptive_double(f, _line_map(0.0, 1.0), 1.0, settings)
            total += val
        elif piece[0] == "ray_from":
            phi = piece[1]
            start = abs(z) * cmath.exp(1j * phi)  # exp is 2*pi-periodic in phi
            argc0 = z_arg + (phi - plan[0][2])
            d = cmath.exp(1j * phi)
            rate = (complex(s1) * d).real
            alg = (complex(N1).real + 1)
            L = _tail_length(abs(z), rate, alg)

            def f(s):
                out = np.empty(len(s), dtype=complex)
                for i, si in enumerate(s):
                    t = start + si * d
                    out[i] = w_of(t, argc0 + cmath.phase(t / start)) * d
                return out

            val, _ = _adaptive_double(f, _line_map(0.0, L), 1.0, settings)
            total += val
    return total


def _tail_length(R, rate, alg):
    """Arclength after which e^{-rate*s} (R+s)^{-alg} has spent EXP_CUT."""
    if rate <= 0:
        raise ConstraintViolated("tail direction is not progressive")
    L = (_EXP_CUT + 10.0) / rate
    for _ in range(60):
        if rate * L + alg * math.log1p(L / R) > _EXP_CUT + 8.0:
            break
        L *= 1.5
    return L


def f2(args: HyperArgs2, ctx: Context = CTX_DOUBLE):
    v = f2_scaled(args, ctx)
    z_arg = cmath.phase(complex(args.z)) + 2 * math.pi * args.z_sheet
    with ctx.guard():
        zc = ctx.to_complex(args.z)
        s2 = ctx.to_complex(args.sigma0) + ctx.to_complex(args.sigma1)
        N2 = ctx.to_complex(args.N0) + ctx.to_complex(args.N1)
        log_z = ctx.log(abs(zc)) + ctx.to_complex(1j) * z_arg
        out = v * ctx.exp(s2 * zc + N2 * log_z)
    return ctx.check_finite(out, "f2")


def f2_at_zero(N0, sigma0, N1, sigma1, sigma_order: float | None = None,
               ctx: Context = CTX_DOUBLE):
    """F2(0; N0+2, sigma0; N1+1, sigma1) closed form (Gammas and a 2F1)."""
    if sigma_order is None:
        sigma_order = (cmath.phase(complex(sigma1)) -
                       cmath.phase(complex(sigma0))) % (2.0 * math.pi)
    shim = HyperArgs2(z=1.0, N0=N0, sigma0=sigma0, N1=N1, sigma1=sigma1,
                      sigma_order=sigma_order)
    psi0, psi1, psi2, x, side = _f2_branch_args(shim)
    with ctx.guard():
        N0c = ctx.to_complex(N0)
        N1c = ctx.to_complex(N1)
        n21 = N0c + N1c + 1
        F = hyp2f1_1bc(N0c + 1, n21 + 1, ctx.to_complex(x), side, ctx)
        ln = (ctx.to_complex(1j) * ctx.pi * n21
              - (N0c + 1) * (ctx.log(abs(complex(sigma0))) + ctx.to_complex(1j) * psi0)
              - N1c * (ctx.log(abs(complex(sigma1))) + ctx.to_complex(1j) * psi1)
              + ctx.lngamma(N0c + 1) + ctx.lngamma(N1c + 1) - ctx.log(n21))
        return ctx.exp(ln) * F


# ---------------------------------------------------------------------------
# Direct double quadrature (oracle)
# ---------------------------------------------------------------------------


def f2_quadrature(args: HyperArgs2, settings: QuadratureSettings | None = None):
    """Iterated adaptive quadrature of the defining double integral.

    Oracle: both poles (tau0 = z and tau0 = tau1) must stay away from the
    contours.  Double precision only.
    """
    if settings is None:
        settings = QuadratureSettings(abs_tol=1e-16, rel_tol=5e-11, max_subdivisions=9000)
    psi0, psi1, _, _, _ = _f2_branch_args(args)
    z = complex(args.z)
    N0 = complex(args.N0)
    N1 = complex(args.N1)
    s0 = complex(args.sigma0)
    s1 = complex(args.sigma1)
    eta0 = math.pi - psi0
    eta1 = math.pi - psi1
    e0 = cmath.exp(1j * eta0)
    e1 = cmath.exp(1j * eta1)

    inner_peak = max((N1.real) / abs(s1), 1.0)
    T1 = inner_peak * 1.0
    for _ in range(80):
        if abs(s1) * T1 - (N1.real) * math.log(T1 / inner_peak) - abs(s1) * inner_peak \
                > _EXP_CUT + 6:
            break
        T1 *= 1.4

    inner_settings = QuadratureSettings(abs_tol=1e-18, rel_tol=1e-11,
                                        max_subdivisions=6000)

    def inner(tau0):
        def g(s):
            tau1 = s * e1
            return np.exp(s1 * tau1 + N1 * (np.log(s) + 1j * eta1)) * e1 / (tau0 - tau1)

        val, _ = _adaptive_double(g, _line_map(1e-12, T1), 1.0, inner_settings)
        return val

    outer_peak = max((N0.real) / abs(s0), 1.0)
    T0 = outer_peak * 1.0
    for _ in range(80):
        if abs(s0) * T0 - (N0.real) * math.log(T0 / outer_peak) - abs(s0) * outer_peak \
                > _EXP_CUT + 6:
            break
        T0 *= 1.4

    def outer(svec):
        out = np.empty(len(svec), dtype=complex)
        for i, s in enumerate(svec):
            tau0 = s * e0
            out[i] = (cmath.exp(s0 * tau0 + N0 * (math.log(s) + 1j * eta0)) * e0
                      * inner(tau0) / (z - tau0))
        return out

    val, _ = _adaptive_double(outer, _line_map(1e-10, T0), 1.0, settings)
    return val


# ---------------------------------------------------------------------------
# Connection formulas and ODE residuals
# ---------------------------------------------------------------------------


def connection_residual(kind: str, *, z, ctx: Context = CTX_DOUBLE, **kw):
    """LHS - RHS of a connection formula, each side by its own representation.

    connect1: F1(z e^{-2 pi i}) - F1(z) + 2 pi i e^{sigma z} z^{a-1}
    connect2: F2(z e^{-2 pi i}) - F2(z) + 2 pi i e^{sigma0 z} z^{N0} F1(z; N1+1; sigma1)
    connect3: F2[arg rel -> -2pi] - F2[arg rel -> 0] + 2 pi i F1(z; N0+N1+1; sigma0+sigma1)
    """
    z = complex(z)
    if kind == "connect1":
        a, sigma = kw["a"], kw["sigma"]
        lhs = f1(HyperArgs1(z=z, a=a, sigma=sigma, sheet=-1), ctx)
        rhs = f1(HyperArgs1(z=z, a=a, sigma=sigma), ctx)
        res = 2j * math.pi * cmath.exp(complex(sigma) * z) * z ** (complex(a) - 1)
        return lhs - rhs + res
    if kind == "connect2":
        a2 = HyperArgs2(z=z, N0=kw["N0"], sigma0=kw["sigma0"], N1=kw["N1"],
                        sigma1=kw["sigma1"])
        lhs = f2(HyperArgs2(z=z, N0=kw["N0"], sigma0=kw["sigma0"], N1=kw["N1"],
                            sigma1=kw["sigma1"], z_sheet=-1), ctx)
        rhs = f2(a2, ctx)
        v1pp = f1_scaled_pp(z, complex(kw["N1"]) + 1, kw["sigma1"], ctx)
        f1pp = complex(v1pp) * cmath.exp(complex(kw["sigma1"]) * z) \
            * z ** complex(kw["N1"])
        res = (2j * math.pi * cmath.exp(complex(kw["sigma0"]) * z)
               * z ** complex(kw["N0"]) * f1pp)
        return lhs - rhs + res
    if kind == "connect3":
        # the collinear side-pair: the input sigma1 is projected onto the
        # sigma0 direction and the two one-sided values are compared
        N0, s0, N1, s1 = kw["N0"], kw["sigma0"], kw["N1"], kw["sigma1"]
        s1c = abs(complex(s1)) * cmath.exp(1j * cmath.phase(complex(s0)))
        base = HyperArgs2(z=z, N0=N0, sigma0=s0, N1=N1, sigma1=s1c)
        scale = cmath.exp((complex(s0) + s1c) * complex(z)) \
            * complex(z) ** (complex(N0) + complex(N1))
        above = f2_scaled(base, ctx, sigma_rel=0.0) * scale
        below = f2_scaled(base, ctx, sigma_rel=-1e-15) * scale
        res = 2j * math.pi * f1(HyperArgs1(z=z, a=complex(N0) + complex(N1) + 1,
                                           sigma=complex(s0) + s1c), ctx)
        return above - below + res
    raise ValueError(f"unknown connection kind {kind!r}")


def hyperterminant_ode_residual(which: str, *, z, ctx: Context = CTX_DOUBLE,
                                h: float = 1e-4, **kw):
    """Normalized residual of the inhomogeneous hyperterminant ODE.

    F1:  z y' - (N0 + sigma0 z) y = Gamma(N0+1) / (e^{-pi i} sigma0)^{N0}
    F2:  z y'' + (1 - N0 - N1 - (sigma0+sigma1) z) y' - (sigma0+sigma1) y
         = Gamma(N1+1)/(e^{-pi i} sigma1)^{N1} * d/dz F1(z; N0+1; sigma0)

    Derivatives by central differences with the supplied step.
    """
    z = complex(z)
    if which == "F1":
        N0, s0 = complex(kw["N0"]), complex(kw["sigma0"])

        def y(t):
            return f1(HyperArgs1(z=t, a=N0 + 1, sigma=s0), ctx)

        yp = finite_difference(y, z, h)
        rhs = cmath.exp(complex(ctx.lngamma(N0 + 1))
                        - N0 * (cmath.log(s0) - 1j * math.pi))
        terms = [z * yp, -(N0 + s0 * z) * y(z), -rhs]
        return sum(terms) / max(abs(t) for t in terms)
    if which == "F2":
        N0, s0 = complex(kw["N0"]), complex(kw["sigma0"])
        N1, s1 = complex(kw["N1"]), complex(kw["sigma1"])
        s2 = s0 + s1

        def y(t):
            return f2(HyperArgs2(z=t, N0=N0, sigma0=s0, N1=N1, sigma1=s1), ctx)

        def y1(t):
            return f1(HyperArgs1(z=t, a=N0 + 1, sigma=s0), ctx)

        y0 = y(z)
        yp = finite_difference(y, z, h)
        ypp = (y(z + h) - 2 * y0 + y(z - h)) / h**2
        f1p = finite_difference(y1, z, h)
        rhs = cmath.exp(complex(ctx.lngamma(N1 + 1))
                        - N1 * (cmath.log(s1) - 1j * math.pi)) * f1p
        terms = [z * ypp, (1 - N0 - N1 - s2 * z) * yp, -s2 * y0, -rhs]
        return sum(terms) / max(abs(t) for t in terms)
    raise ValueError(f"unknown ODE kind {which!r}")


# ---------------------------------------------------------------------------
# Position-principal (defining-integral-at-position) variants
# ---------------------------------------------------------------------------


def principal_z_arg(z, sigma) -> float:
    """arg(z) + 2*pi*k such that arg(sigma z) lands in (-pi, pi]."""
    w = cmath.phase(complex(sigma)) + cmath.phase(complex(z))
    k = 0
    while w > math.pi:
        w -= 2.0 * math.pi
        k -= 1
    while w <= -math.pi:
        w += 2.0 * math.pi
        k += 1
    return cmath.phase(complex(z)) + 2.0 * math.pi * k


def f1_scaled_pp(z, a, sigma, ctx: Context = CTX_DOUBLE):
    """e^{-sigma z} z^{1-a} F1 with F1 the defining integral at the position
    (principal sheet of arg(sigma z)); jumps across arg(sigma z) = pi."""
    return f1_scaled(z, a, sigma, z_arg=principal_z_arg(z, sigma), ctx=ctx)


def f2_scaled_pp(args: HyperArgs2, ctx: Context = CTX_DOUBLE):
    """Scaled F2 as the defining double integral at the position."""
    shifted = HyperArgs2(z=args.z, N0=args.N0, sigma0=args.sigma0, N1=args.N1,
                         sigma1=args.sigma1, sigma_order=args.sigma_order,
                         z_sheet=0)
    z_arg = principal_z_arg(args.z, args.sigma0)
    k = round((z_arg - cmath.phase(complex(args.z))) / (2.0 * math.pi))
    shifted = HyperArgs2(z=args.z, N0=args.N0, sigma0=args.sigma0, N1=args.N1,
                         sigma1=args.sigma1, sigma_order=args.sigma_order,
                         z_sheet=k)
    return f2_scaled(shifted, ctx)
