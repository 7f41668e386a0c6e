import math

import numpy as np
import pytest

from stokes_smooth.errors import NonConvergence, SingularMatrix
from stokes_smooth.numerics import (
    QuadratureSettings,
    RayPath,
    finite_difference,
    integrate_path,
    integrate_ray,
    integrate_segment,
    solve_linear_small,
)
from stokes_smooth.precision import CTX_DOUBLE, CTX_EXTENDED
from stokes_smooth.special import upper_incomplete_gamma


def test_ray_plain_exponential():
    val = integrate_ray(lambda t: np.exp(-t), RayPath(0.0, 0.0, 30.0))
    assert val == pytest.approx(1.0, abs=1e-13)


def test_ray_gamma_two():
    val = integrate_ray(lambda t: np.exp(-t) * t, RayPath(0.0, 0.0, 40.0))
    assert val == pytest.approx(1.0, abs=1e-12)


def test_ray_matches_incomplete_gamma_closed_form():
    # F1(5; 1; i*sqrt2) = -e^{sigma z} Gamma(0, sigma z); the defining ray
    # integral (angle pi - arg sigma = pi/2) must land on the same value.
    import cmath
    sigma = 1j * math.sqrt(2.0)
    z = 5.0
    val = integrate_ray(lambda t: np.exp(sigma * t) / (z - t),
                        RayPath(0.0, math.pi / 2, 40.0))
    ref = -cmath.exp(sigma * z) * upper_incomplete_gamma(0.0, sigma * z)
    assert val == pytest.approx(ref, rel=1e-10)
    # two-angle consistency of the same contour integral
    val2 = integrate_ray(lambda t: np.exp(sigma * t) / (z - t),
                         RayPath(0.0, math.pi / 2 + 0.25, 40.0))
    assert val == pytest.approx(val2, rel=1e-10)


def test_segment_trivials():
    assert integrate_segment(lambda t: np.ones_like(t), 0.0, 1 + 1j) == pytest.approx(1 + 1j, abs=1e-13)
    assert integrate_segment(lambda t: t, 0.0, 2.0) == pytest.approx(2.0, abs=1e-13)
    assert integrate_segment(lambda t: np.exp(t), 0.0, 1j * math.pi) == pytest.approx(-2.0, abs=1e-12)


def test_path_arc_closed_circle():
    # int dz/z around |z|=1 is 2*pi*i
    val = integrate_path(lambda t: 1.0 / t,
                         [("arc", 0.0, 1.0, 0.0, 2.0 * math.pi)])
    assert val == pytest.approx(2j * math.pi, abs=1e-12)


def test_linearity_random():
    rng = np.random.default_rng(7)
    for _ in range(5):
        a, b = rng.normal(size=2) + 1j * rng.normal(size=2)
        f = lambda t: np.exp(-t) * np.cos(t)
        g = lambda t: np.exp(-1.3 * t) * t**2
        ray = RayPath(0.0, 0.0, 40.0)
        lhs = integrate_ray(lambda t: a * f(t) + b * g(t), ray)
        rhs = a * integrate_ray(f, ray) + b * integrate_ray(g, ray)
        assert lhs == pytest.approx(rhs, rel=1e-10, abs=1e-12)


def test_contour_rotation_invariance():
    f = lambda t: np.exp(-t) / (3.0 + t)
    v1 = integrate_ray(f, RayPath(0.0, 0.35, 40.0))
    v2 = integrate_ray(f, RayPath(0.0, -0.3, 40.0))
    assert v1 == pytest.approx(v2, rel=1e-10)


def test_refinement_monotonicity():
    f = lambda t: np.exp(-t) * np.sin(3 * t)
    exact = 3.0 / 10.0
    errs = []
    for tol in (1e-5, 1e-8, 1e-11):
        s = QuadratureSettings(abs_tol=tol, rel_tol=tol)
        errs.append(abs(integrate_ray(f, RayPath(0.0, 0.0, 35.0), s) - exact))
    assert errs[1] <= errs[0] + 1e-15
    assert errs[2] <= errs[1] + 1e-15


def test_extended_segment():
    from mpmath import mp
    val = integrate_segment(lambda t: mp.exp(t), 0.0, 1.0, ctx=CTX_EXTENDED)
    with mp.workdps(40):
        assert abs(val - (mp.e - 1)) < 1e-35


def test_nonconvergence_budget():
    s = QuadratureSettings(abs_tol=1e-15, rel_tol=1e-15, max_subdivisions=3)
    with pytest.raises(NonConvergence):
        integrate_segment(lambda t: np.cos(40 * t) / (1e-3 + t**2), -1.0, 1.0, s)


def test_solve_identity_and_diag():
    v = [1 + 2j, 3.0, -1j]
    x = solve_linear_small([[1, 0, 0], [0, 1, 0], [0, 0, 1]], v)
    assert np.allclose(x, v)
    x = solve_linear_small([[2, 0], [0, 4]], [2, 4])
    assert np.allclose(x, [1, 1])


def test_solve_multiply_back():
    rng = np.random.default_rng(3)
    a = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3)) + 4 * np.eye(3)
    b = rng.normal(size=3) + 1j * rng.normal(size=3)
    x = np.array(solve_linear_small(a.tolist(), b.tolist()))
    assert np.linalg.norm(a @ x - b) <= 1e-12 * (np.linalg.norm(a) * np.linalg.norm(x) + np.linalg.norm(b))


def test_solve_singular():
    with pytest.raises(SingularMatrix):
        solve_linear_small([[1, 1], [1, 1]], [1, 2])


def test_finite_difference():
    import cmath
    assert finite_difference(cmath.exp, 0.0, 1e-5) == pytest.approx(1.0, abs=1e-9)
    assert finite_difference(lambda z: z * z, 1 + 1j, 1e-5) == pytest.approx(2 + 2j, abs=1e-9)
