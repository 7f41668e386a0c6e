"""Precision-parameterized contour quadrature and small dense solves.

The double-precision integrator is an adaptive Gauss-Kronrod (G7/K15) scheme
with a worst-panel-first refinement queue; integrands are called on numpy node
arrays so the hot loops stay vectorized.  Extended precision delegates each
panel to ``mpmath.quad`` behind the same interface.  Ray integrals use the
substitution tau = origin + s*exp(i*eta) on s in [0, R] and extend R until an
exponential tail estimate drops below the absolute tolerance.

The panel family and tail-bound constants are implementer-chosen (the source
material never states the scheme used for its figures).
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field

import numpy as np
from mpmath import mp

from .errors import NonConvergence, SingularMatrix, SuspectedPoleOnPath
from .precision import CTX_DOUBLE, Context

__all__ = [
    "RayPath",
    "QuadratureSettings",
    "integrate_ray",
    "integrate_segment",
    "integrate_path",
    "solve_linear_small",
    "finite_difference",
]

# G7/K15 nodes and weights on [-1, 1]; Gauss nodes are the odd-indexed
# Kronrod nodes.
_K15_NODES = np.array([
    -0.9914553711208126, -0.9491079123427585, -0.8648644233597691,
    -0.7415311855993945, -0.5860872354676911, -0.4058451513773972,
    -0.2077849550078985, 0.0, 0.2077849550078985, 0.4058451513773972,
    0.5860872354676911, 0.7415311855993945, 0.8648644233597691,
    0.9491079123427585, 0.9914553711208126,
])
_K15_WEIGHTS = np.array([
    0.02293532201052922, 0.06309209262997855, 0.1047900103222502,
    0.1406532597155259, 0.1690047266392679, 0.1903505780647854,
    0.2044329400752989, 0.2094821410847278, 0.2044329400752989,
    0.1903505780647854, 0.1690047266392679, 0.1406532597155259,
    0.1047900103222502, 0.06309209262997855, 0.02293532201052922,
])
_G7_WEIGHTS = np.array([
    0.1294849661688697, 0.2797053914892767, 0.3818300505051189,
    0.4179591836734694, 0.3818300505051189, 0.2797053914892767,
    0.1294849661688697,
])
_G7_IDX = np.arange(1, 15, 2)


@dataclass(frozen=True)
class RayPath:
    """Semi-infinite ray origin + s*e^{i*eta}, s >= 0.

    ``truncation_radius`` is the arclength beyond which the integrand tail is
    handled by the exponential estimate rather than panels.
    """

    origin: complex
    angle: float
    truncation_radius: float

    def __post_init__(self):
        if not self.truncation_radius > 0:
            raise ValueError("truncation_radius must be positive")
        a = math.remainder(self.angle, 2.0 * math.pi)
        if a <= -math.pi:
            a += 2.0 * math.pi
        object.__setattr__(self, "angle", a)


@dataclass(frozen=True)
class QuadratureSettings:
    abs_tol: float = 1e-13
    rel_tol: float = 1e-12
    max_subdivisions: int = 4000
    pole_exclusion_radius: float = 1e-3

    def __post_init__(self):
        if self.abs_tol <= 0 or self.rel_tol <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_subdivisions < 1:
            raise ValueError("max_subdivisions must be >= 1")

    def scaled(self, ctx: Context) -> "QuadratureSettings":
        """Tighten tolerances to the precision level (extended mode)."""
        if ctx.kind == "double":
            return self
        f = ctx.eps / 2.2e-16
        return QuadratureSettings(self.abs_tol * f, self.rel_tol * f,
                                  self.max_subdivisions, self.pole_exclusion_radius)


DEFAULT_SETTINGS = QuadratureSettings()


def _gk_panel(f, a: float, b: float, map_to_path):
    """One G7/K15 evaluation on [a, b] in parameter space.

    Returns (kronrod_value, error_estimate, max_sample_magnitude).
    """
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    s = mid + half * _K15_NODES
    t, dt = map_to_path(s)
    y = np.asarray(f(t), dtype=complex) * dt
    k = half * np.sum(_K15_WEIGHTS * y)
    g = half * np.sum(_G7_WEIGHTS * y[_G7_IDX])
    return k, abs(k - g), float(np.max(np.abs(y)))


def _adaptive_double(f, map_to_path, length: float, settings: QuadratureSettings):
    """Adaptive bisection on parameter in [0, length] (double precision)."""
    val, err, mx = _gk_panel(f, 0.0, length, map_to_path)
    # (neg-error, a, b, value, err, max|f|, depth)
    heap = [(-err, 0.0, length, val, err, mx, 0)]
    total = val
    total_err = err
    splits = 0
    while total_err > max(settings.abs_tol, settings.rel_tol * abs(total)):
        if splits >= settings.max_subdivisions:
            raise NonConvergence(
                f"quadrature: {splits} subdivisions, error {total_err:.3e} "
                f"> tol ({settings.abs_tol:.1e}, {settings.rel_tol:.1e})")
        _, a, b, v, e, m, depth = heapq.heappop(heap)
        mid = 0.5 * (a + b)
        vl, el, ml = _gk_panel(f, a, mid, map_to_path)
        vr, er, mr = _gk_panel(f, mid, b, map_to_path)
        if depth > 4 and max(ml, mr) > 1e3 * m and max(ml, mr) > 1e3:
            raise SuspectedPoleOnPath(
                f"sample magnitude grew {max(ml, mr) / max(m, 1e-300):.1e}x "
                f"on refinement near parameter {mid:.6g}")
        total += (vl + vr) - v
        total_err += (el + er) - e
        heapq.heappush(heap, (-el, a, mid, vl, el, ml, depth + 1))
        heapq.heappush(heap, (-er, mid, b, vr, er, mr, depth + 1))
        splits += 1
    return total, total_err


def _adaptive_extended(f, map_to_path, length, settings: QuadratureSettings, ctx: Context):
    """mpmath.quad on the mapped parameter interval."""
    with mp.workdps(ctx.dps + 8):
        def g(s):
            t, dt = map_to_path(s)
            return f(t) * dt

        val, err = mp.quad(g, [0, length], error=True)
    if abs(err) > max(settings.abs_tol, settings.rel_tol * abs(val)) * 100:
        raise NonConvergence(f"mpmath quadrature error estimate {err}")
    return val, abs(err)


def integrate_segment(f, a, b, settings: QuadratureSettings = DEFAULT_SETTINGS,
                      ctx: Context = CTX_DOUBLE):
    """Integral of an analytic f along the straight segment [a, b]."""
    settings = settings.scaled(ctx)
    if ctx.kind == "double":
        a = complex(a)
        b = complex(b)
        d = b - a

        def mapping(s):
            return a + s * d, d

        val, _ = _adaptive_double(f, mapping, 1.0, settings)
        return val
    a = ctx.to_complex(a)
    b = ctx.to_complex(b)
    d = b - a

    def mapping(s):
        return a + s * d, d

    val, _ = _adaptive_extended(f, mapping, 1.0, settings, ctx)
    return val


def _arc_map(center, radius, phi0, phi1, ctx):
    """Map s in [0,1] to the circular arc center + radius*e^{i phi}."""
    dphi = phi1 - phi0
    if ctx.kind == "double":
        def mapping(s):
            phi = phi0 + s * dphi
            e = radius * np.exp(1j * phi)
            return center + e, 1j * dphi * e
        return mapping

    i = ctx.to_complex(1j)

    def mapping(s):
        phi = phi0 + s * dphi
        e = radius * ctx.exp(i * phi)
        return center + e, i * dphi * e
    return mapping


def integrate_path(f, segments, settings: QuadratureSettings = DEFAULT_SETTINGS,
                   ctx: Context = CTX_DOUBLE):
    """Integrate f along a list of path pieces.

    Pieces are ("line", a, b) or ("arc", center, radius, phi0, phi1).
    """
    settings = settings.scaled(ctx)
    total = ctx.to_complex(0)
    for piece in segments:
        if piece[0] == "line":
            total = total + integrate_segment(f, piece[1], piece[2], settings, ctx)
        elif piece[0] == "arc":
            _, center, radius, phi0, phi1 = piece
            mapping = _arc_map(ctx.to_complex(center), ctx.to_real(radius),
                               ctx.to_real(phi0), ctx.to_real(phi1), ctx)
            if ctx.kind == "double":
                val, _ = _adaptive_double(f, mapping, 1.0, settings)
            else:
                val, _ = _adaptive_extended(f, mapping, 1.0, settings, ctx)
            total = total + val
        else:
            raise ValueError(f"unknown path piece {piece[0]!r}")
    return total


def integrate_ray(f, ray: RayPath, settings: QuadratureSettings = DEFAULT_SETTINGS,
                  ctx: Context = CTX_DOUBLE, max_extensions: int = 40):
    """Integral of f over the infinite ray, exponential decay assumed.

    Panels cover s in [0, R]; R starts at the ray's truncation radius and is
    doubled until the analytic tail estimate |f(R)| / decay_rate falls below
    abs_tol.  The estimate is added to the result only when it exceeds
    abs_tol (it then also forces another extension, so in practice the
    returned value carries a tail below tolerance).
    """
    settings = settings.scaled(ctx)
    direction = ctx.exp(ctx.to_complex(1j * ray.angle))
    origin = ctx.to_complex(ray.origin)
    R = ctx.to_real(ray.truncation_radius)

    def sample(s):
        pt = origin + s * direction
        if ctx.kind == "double":
            return abs(complex(np.asarray(f(np.array([pt])), dtype=complex)[0]))
        return abs(complex(f(pt)))

    for _ in range(max_extensions):
        f_end = sample(R)
        step = 0.05 * R
        f_next = sample(R + step)
        if f_next > 0 and f_end > 0:
            rate = -math.log(float(f_next) / float(f_end)) / float(step)
        else:
            rate = math.inf
        tail = f_end / rate if rate > 0 else math.inf
        if tail <= settings.abs_tol:
            break
        R = 2 * R
    else:
        raise NonConvergence("ray tail does not decay below abs_tol")

    if ctx.kind == "double":
        o = complex(origin)
        d = complex(direction)

        def mapping(s):
            return o + s * d, d

        val, _ = _adaptive_double(f, mapping, float(R), settings)
        return val

    def mapping(s):
        return origin + s * direction, direction

    val, _ = _adaptive_extended(f, mapping, R, settings, ctx)
    return val


def solve_linear_small(matrix, rhs, ctx: Context = CTX_DOUBLE):
    """Partial-pivot LU solve for n <= 8, generic over the precision context."""
    n = len(rhs)
    if n > 8:
        raise ValueError("solve_linear_small is for n <= 8")
    a = [[ctx.to_complex(matrix[i][j]) for j in range(n)] for i in range(n)]
    b = [ctx.to_complex(rhs[i]) for i in range(n)]
    scale = max(max(abs(a[i][j]) for j in range(n)) for i in range(n))
    if scale == 0:
        raise SingularMatrix("zero matrix")
    for k in range(n):
        p = max(range(k, n), key=lambda i: abs(a[i][k]))
        if abs(a[p][k]) < 8 * ctx.eps * float(scale):
            raise SingularMatrix(f"pivot {abs(a[p][k])} below threshold at column {k}")
        if p != k:
            a[k], a[p] = a[p], a[k]
            b[k], b[p] = b[p], b[k]
        for i in range(k + 1, n):
            m = a[i][k] / a[k][k]
            for j in range(k, n):
                a[i][j] = a[i][j] - m * a[k][j]
            b[i] = b[i] - m * b[k]
    x = [ctx.to_complex(0)] * n
    for i in range(n - 1, -1, -1):
        s = b[i]
        for j in range(i + 1, n):
            s = s - a[i][j] * x[j]
        x[i] = s / a[i][i]
    return x


def finite_difference(f, z, h: float, ctx: Context = CTX_DOUBLE):
    """Central difference (f(z+h) - f(z-h)) / (2h); the caller owns h."""
    z = ctx.to_complex(z)
    h = ctx.to_real(h)
    return (f(z + h) - f(z - h)) / (2 * h)
