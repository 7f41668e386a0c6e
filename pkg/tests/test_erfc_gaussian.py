import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
import scipy.special as sc

from stokes_smooth.erfc_gaussian import (
    Erfc3Args,
    erfc3,
    erfc3_at_x0,
    erfc3_fixed_ratio,
    erfc3_identity_residual,
    erfc3_large_x,
    erfc3_large_y,
    erfc3_maclaurin,
    erfc3_quadrature,
    f_aux_coefficients,
    fixed_ratio_coefficients,
    large_x_coefficients,
    large_x_coefficients_alt,
    maclaurin_coefficients,
)
from stokes_smooth.errors import ExcludedLambda

SQPI = math.sqrt(math.pi)


class TestSpecialValues:
    def test_half(self):
        assert erfc3(0.0, 0.0, 1.0) == pytest.approx(0.5, abs=1e-12)

    def test_arctan_family(self):
        for lam in (0.25, 0.5, 0.75, 2.0):
            ref = 1 - 2 / math.pi * math.atan(lam)
            assert erfc3_quadrature(0.0, 0.0, lam) == pytest.approx(ref, abs=1e-12)

    def test_lambda_zero_reduction(self):
        rng = np.random.default_rng(2)
        for _ in range(10):
            x = rng.uniform(-3, 3)
            y = rng.uniform(-3, 3)
            assert erfc3_quadrature(x, y, 1e-15) == pytest.approx(
                sc.erfc(x - y), abs=1e-10)

    def test_half_square_reduction(self):
        rng = np.random.default_rng(3)
        for _ in range(10):
            x = rng.uniform(-2.5, 2.5)
            assert erfc3_quadrature(x, 0.0, 1.0) == pytest.approx(
                0.5 * sc.erfc(x) ** 2, abs=1e-10)

    def test_x_to_minus_infinity(self):
        y, lam = 0.7, 1.2
        ref = 2 * sc.erfc(lam * y / math.sqrt(lam * lam + 1))
        assert erfc3_quadrature(-9.0, y, lam) == pytest.approx(ref, abs=1e-11)

    def test_excluded_lambda(self):
        with pytest.raises(ExcludedLambda):
            erfc3(0.1, 0.2, 1.5j)
        with pytest.raises(ExcludedLambda):
            Erfc3Args(x=0.0, y=0.0, lam=-2j)

    def test_rotation_invariance(self):
        lam = 0.8 + 0.4j
        v0 = erfc3_quadrature(0.5, 0.2, lam, rotation=-cmath.phase(lam * lam + 1) / 2)
        v1 = erfc3_quadrature(0.5, 0.2, lam, rotation=0.1)
        assert v0 == pytest.approx(v1, rel=1e-9)


class TestMaclaurin:
    def test_a2_initial(self):
        a = maclaurin_coefficients(0.3, 1.0, 4)
        assert a[2] == pytest.approx(0.3 - 1 / SQPI, rel=1e-14)

    def test_x_zero_is_anchor(self):
        y, lam = 0.4, 0.8
        assert erfc3_maclaurin(0.0, y, lam) == pytest.approx(
            complex(erfc3_at_x0(y, lam)), rel=1e-12)

    def test_against_quadrature(self):
        v = erfc3_maclaurin(0.4, 0.3, 1.0)
        q = erfc3_quadrature(0.4, 0.3, 1.0)
        assert v == pytest.approx(q, abs=1e-10)

    def test_anchor_against_quadrature_complex(self):
        for y, lam in ((0.5, 0.9), (1.2 - 0.3j, 0.7 + 0.2j), (-0.8, 1.4)):
            va = complex(erfc3_at_x0(y, lam))
            vq = complex(erfc3_quadrature(0.0, y, lam))
            assert va == pytest.approx(vq, abs=5e-12)


class TestLargeX:
    def test_b2(self):
        b = large_x_coefficients(0.5, 1.0, 4)
        assert b[2] == pytest.approx(1 / (2 * math.pi), rel=1e-14)

    def test_dual_recurrence_exact_rationals(self):
        b1 = large_x_coefficients(Fraction(2, 5), Fraction(13, 10), 21, field=Fraction)
        b2 = large_x_coefficients_alt(Fraction(2, 5), Fraction(13, 10), 21, field=Fraction)
        assert b1 == b2  # exact equality in Q (up to the common 1/pi factor)

    def test_against_quadrature_with_bound(self):
        v, err = erfc3_large_x(6.0, 0.5, 1.0, with_error=True)
        q = erfc3_quadrature(6.0, 0.5, 1.0)
        assert abs(v - q) <= err

    def test_sector_guard(self):
        from stokes_smooth.errors import OutOfSector
        with pytest.raises(OutOfSector):
            erfc3_large_x(6.0 * cmath.exp(1.6j), 0.5, 1.0)


class TestLargeY:
    def test_c2(self):
        from stokes_smooth.erfc_gaussian import large_y_coefficients
        _, c = large_y_coefficients(0.4, math.pi, 4)
        assert c[2] == pytest.approx(1.0, rel=1e-14)

    def test_negative_y_direct(self):
        v, err = erfc3_large_y(0.4, -7.0, 1.0, with_error=True)
        q = erfc3_quadrature(0.4, -7.0, 1.0)
        assert abs(v - q) <= err

    def test_positive_y_via_reflection(self):
        v, err = erfc3_large_y(0.3, 8.0, 1.2, with_error=True)
        q = erfc3_quadrature(0.3, 8.0, 1.2)
        assert abs(v - q) <= max(err, 1e-13)

    def test_large_y_limit_trend(self):
        # erfc(x; y; lam) -> 2 erfc(lam y / sqrt(lam^2+1)) as y -> +inf
        x, lam = 0.3, 1.2
        rel = []
        for y in (6.0, 8.0, 10.0):
            ref = 2 * sc.erfc(lam * y / math.sqrt(lam * lam + 1))
            rel.append(abs(erfc3_quadrature(x, y, lam) - ref) / ref)
        assert rel[2] < rel[1] < rel[0]


class TestFixedRatio:
    def test_d1_reduces_to_b2_at_mu0(self):
        d = fixed_ratio_coefficients(0.0, 1.0, 3)
        assert d[1] == pytest.approx(1 / (2 * math.pi), rel=1e-14)

    def test_against_quadrature(self):
        v, err = erfc3_fixed_ratio(6.0, 0.4, 1.0, with_error=True)
        q = erfc3_quadrature(6.0, 2.4, 1.0)
        assert abs(v - q) <= err

    def test_f_aux_consistency(self):
        # the d_n assemble from two f_n families (proof structure)
        mu, lam = 0.4, 1.1
        l2p1 = lam * lam + 1
        d = fixed_ratio_coefficients(mu, lam, 8)
        f1v = f_aux_coefficients(1 - mu, lam, 8)
        f2v = f_aux_coefficients(mu * lam / math.sqrt(l2p1),
                                 (l2p1 - mu) / math.sqrt(l2p1), 8)
        for n in range(1, 8):
            combo = (2 * (1 - mu) / SQPI * f1v[n]
                     + 2 * mu * lam / (SQPI * math.sqrt(l2p1)) * f2v[n])
            assert d[n] == pytest.approx(combo, rel=1e-12)

    def test_decomposition_identity(self):
        x, mu, lam = 2.0, 0.5, 1.0
        lhs = erfc3_quadrature(x, mu * x, lam)
        rhs = (erfc3_quadrature((1 - mu) * x, 0.0, lam / (1 - mu))
               + erfc3_quadrature(mu * lam * x / math.sqrt(lam**2 + 1), 0.0,
                                  (lam**2 + 1 - mu) / (mu * lam)))
        assert abs(lhs - rhs) <= 1e-9


class TestIdentities:
    @pytest.mark.parametrize("kind,tol", [
        ("reflection2", 1e-9), ("reflect_x", 1e-9), ("reflect_lambda", 1e-9),
        ("partial_x", 1e-5), ("partial_y", 1e-5), ("partial_lambda", 1e-5),
        ("ode", 1e-5),
    ])
    def test_identity(self, kind, tol):
        r = erfc3_identity_residual(kind, 1.1, 0.4, 0.8)
        assert abs(r) < tol

    def test_partials_random_grid(self):
        rng = np.random.default_rng(17)
        for _ in range(10):
            x = rng.uniform(-1.5, 1.5)
            y = rng.uniform(-1.5, 1.5)
            lam = rng.uniform(0.3, 1.6)
            for kind in ("partial_x", "partial_y", "partial_lambda"):
                assert abs(erfc3_identity_residual(kind, x, y, lam)) < 1e-5


class TestDispatcher:
    def test_regime_agreement_overlap_box(self):
        # 4 <= |x| <= 6, |y| <= 1, lambda = 1: large-x vs quadrature agree
        # within first-omitted-term
        rng = np.random.default_rng(29)
        for _ in range(6):
            x = rng.uniform(4, 6)
            y = rng.uniform(-1, 1)
            v, err = erfc3_large_x(x, y, 1.0, with_error=True)
            q = erfc3_quadrature(x, y, 1.0)
            assert abs(v - q) <= max(err, 1e-15)

    def test_maclaurin_extended_vs_large_x(self):
        # the Maclaurin series evaluated in extended precision penetrates the
        # overlap box and meets the asymptotic branch
        from stokes_smooth.precision import CTX_EXTENDED
        x, y, lam = 4.5, 0.4, 1.0
        vm = complex(erfc3_maclaurin(x, y, lam, truncation=400, ctx=CTX_EXTENDED))
        vx, err = erfc3_large_x(x, y, lam, with_error=True)
        assert abs(vm - vx) <= 2 * err

    def test_dispatch_paths(self):
        # each regime window lands within 1e-9 of quadrature
        pts = [(0.3, 0.2, 0.9), (5.0, 0.3, 1.0), (0.5, -7.0, 1.1), (1.5, 0.8, 0.7)]
        for x, y, lam in pts:
            assert complex(erfc3(x, y, lam)) == pytest.approx(
                complex(erfc3_quadrature(x, y, lam)), abs=2e-9)
