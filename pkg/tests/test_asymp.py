"""Profile functions, asymptotic constants, and residual-decay tests."""

import math

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.special import erfc as sp_erfc

from mlcp import asymp
from mlcp.asymp import (
    c2_integrand,
    c3_integrand,
    coeff_C1,
    coeff_C2,
    coeff_C3,
    compute_coeffs,
    eval_G,
    positivity_scan,
    predict,
    residual,
)
from mlcp.params import Params

SQRT_2PI = math.sqrt(2.0 * math.pi)


def c1_trapezoid_oracle(params, panels=10**6):
    """Trapezoid C1 with the log singularity split off by parts:
    int ln|r-y| dF = [ln|r-y| (F - F(r))] - int (F - F(r))/(y-r) dy with
    smooth remaining integrands."""
    a, b, r, u = params.a, params.b, params.r, params.u
    edge = params.edge_radius
    F = lambda y: b * y ** (2.0 * b)
    Fr = F(r)
    y = np.linspace(0.0, r, panels + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = (Fr - F(y)) / (r - y)
    g[-1] = 2.0 * b * b * r ** (2.0 * b - 1.0)
    inner = u * Fr + a * (Fr * math.log(r) - np.trapezoid(g, y))
    y = np.linspace(r, edge, panels + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = (F(y) - Fr) / (y - r)
    g[0] = 2.0 * b * b * r ** (2.0 * b - 1.0)
    outer = a * (math.log(edge - r) * (F(edge) - Fr) - np.trapezoid(g, y))
    return inner + outer


def c2_simpson_oracle_a0(params, Y=40.0, h=1e-4):
    """Brute-force C2 for a = 0: exponential-tail integrand on |y| <= Y."""
    u, b, r = params.u, params.b, params.r
    c = math.exp(u) - 1.0
    total = 0.0
    for sgn in (1.0, -1.0):
        y = np.arange(0.0, Y + h, h) * sgn
        f = np.log1p(c * sp_erfc(y) / 2.0)
        if sgn < 0:
            f = f - u
        total += simpson(f, x=y) * sgn
    return math.sqrt(2.0) * b * r**b * total


class TestEvalG:
    def test_a0_closed_form(self):
        p = Params(1.0, 0.0, 0.5, 0.8, 0)
        for y in (-2.0, 0.0, 1.3):
            g = eval_G(y, p)
            assert g.g0 == pytest.approx(
                1.0 + (math.exp(0.8) - 1.0) * math.erfc(y) / 2.0, rel=1e-14
            )

    def test_even_a_u0_reduces_to_polynomial(self):
        p = Params(1.0, 0.0, 0.5, 0.0, 2)
        for y in (-1.1, 0.4, 2.0):
            s = -math.sqrt(2.0) * y
            assert eval_G(y, p).g0 == pytest.approx(s * s + 1.0, rel=1e-14)

    def test_origin_a1(self):
        p = Params(1.0, 0.0, 0.5, 0.7, 1)
        assert eval_G(0.0, p).g0 == pytest.approx(
            (math.exp(0.7) + 1.0) / SQRT_2PI, rel=1e-14
        )

    def test_positive_everywhere_spot(self):
        for a in range(5):
            p = Params(1.0, 0.0, 0.5, -3.0, a)
            for y in np.linspace(-10, 10, 101):
                assert eval_G(float(y), p).g0 > 0.0


class TestPositivityScan:
    def test_null_profile(self):
        scan = positivity_scan(Params(1.0, 0.0, 0.5, 0.0, 0))
        assert scan.all_positive
        assert scan.min_value == 1.0

    def test_deep_negative_u(self):
        scan = positivity_scan(Params(1.0, 0.0, 0.5, -10.0, 3))
        assert scan.all_positive
        assert scan.min_value > 0.0

    def test_large_positive_u(self):
        scan = positivity_scan(Params(1.0, 0.0, 0.5, 5.0, 4))
        assert scan.all_positive


class TestC1:
    def test_a0_closed_form(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 0)
        assert coeff_C1(p) == pytest.approx(1.0 * 1.0 * 0.25, abs=1e-12)

    def test_null(self):
        assert coeff_C1(Params(1.0, 0.0, 0.5, 0.0, 0)) == 0.0

    def test_vs_trapezoid_oracle(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 1)
        assert coeff_C1(p) == pytest.approx(c1_trapezoid_oracle(p), abs=1e-8)

    def test_vs_trapezoid_oracle_general_b(self):
        p = Params(2.0, 0.25, 0.6, -0.4, 3)
        assert coeff_C1(p) == pytest.approx(c1_trapezoid_oracle(p), abs=1e-8)


class TestC2:
    def test_null(self):
        assert coeff_C2(Params(1.0, 0.0, 0.5, 0.0, 0)) == pytest.approx(0.0, abs=1e-12)

    def test_vs_simpson_oracle_a0(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 0)
        assert coeff_C2(p) == pytest.approx(c2_simpson_oracle_a0(p), abs=1e-8)

    def test_exact_pi_case(self):
        # a=2, u=0, b=1, r=1/2: integrand is ln(1 + 1/(2y^2)), whose
        # integral is pi*sqrt(2), so C2 = sqrt(2)*(1/2)*pi*sqrt(2)/ ... = pi
        p = Params(1.0, 0.0, 0.5, 0.0, 2)
        assert coeff_C2(p) == pytest.approx(math.pi, abs=1e-9)

    def test_parity_even_a_u0(self):
        p = Params(1.0, 0.0, 0.5, 0.0, 2)
        for y in (0.3, 1.7, 9.0, 44.0):
            left = c2_integrand(-y, p)
            right = c2_integrand(y, p)
            assert left == pytest.approx(right, rel=1e-10)

    def test_integrand_continuity_across_switch(self):
        for a in (0, 1, 3):
            p = Params(1.0, 0.0, 0.5, 0.6, a)
            ys = 8.0  # switch for u=0.6 stays at 8
            lo = c2_integrand(ys - 1e-9, p)
            hi = c2_integrand(ys + 1e-9, p)
            assert lo == pytest.approx(hi, rel=1e-9, abs=1e-13)

    def test_tail_rate(self):
        # y^2 * integrand -> a(a-1)/4; for a=1 the tail decays faster
        for a in (2, 4):
            p = Params(1.0, 0.0, 0.5, 0.3, a)
            assert 200.0**2 * c2_integrand(200.0, p) == pytest.approx(
                a * (a - 1) / 4.0, rel=1e-3
            )
        p1 = Params(1.0, 0.0, 0.5, 0.3, 1)
        assert abs(200.0**2 * c2_integrand(200.0, p1)) < 1e-12


class TestC3:
    def test_null(self):
        assert coeff_C3(Params(1.0, 0.0, 0.5, 0.0, 0)) == pytest.approx(0.0, abs=1e-12)

    def test_exact_minus_one_case(self):
        # a=2, u=0, b=1, r=1/2: odd integrand, C3 = closed form = -1
        p = Params(1.0, 0.0, 0.5, 0.0, 2)
        assert coeff_C3(p) == pytest.approx(-1.0, abs=1e-9)

    def test_alpha_shift(self):
        # C3(alpha+1) - C3(alpha) = -u + a ln((b r^{2b})^{-1/(2b)} - 1)
        pa = Params(1.0, 0.3, 0.5, 0.7, 2)
        pb = Params(1.0, 1.3, 0.5, 0.7, 2)
        shift = coeff_C3(pb) - coeff_C3(pa)
        expected = -0.7 + 2.0 * math.log((1.0 * 0.25) ** -0.5 - 1.0)
        assert shift == pytest.approx(expected, abs=1e-9)

    def test_integrand_continuity_across_switch(self):
        p = Params(1.0, 0.0, 0.5, 0.6, 2)
        lo = c3_integrand(8.0 - 1e-9, p)
        hi = c3_integrand(8.0 + 1e-9, p)
        assert lo == pytest.approx(hi, rel=1e-8, abs=1e-13)


class TestCoeffBundle:
    def test_null_bundle(self):
        c = compute_coeffs(Params(2.0, 0.5, 0.4, 0.0, 0))
        assert (c.C1, c.C2, c.C3) == (0.0, 0.0, 0.0)
        assert max(c.err1, c.err2, c.err3) <= 1e-9

    def test_double_grid_consistency(self):
        # halving the base panel width moves C2, C3 by less than the
        # reported error estimates
        p = Params(1.0, 0.0, 0.5, 1.0, 1)
        c2, e2 = asymp._c2_with_err(p, 1e-9)
        c2r, _ = asymp._c2_with_err(p, 1e-9, refine=1)
        assert abs(c2 - c2r) <= e2
        c3, e3 = asymp._c3_with_err(p, 1e-9)
        c3r, _ = asymp._c3_with_err(p, 1e-9, refine=1)
        assert abs(c3 - c3r) <= e3

    def test_error_estimates_within_tol(self):
        c = compute_coeffs(Params(1.0, 0.0, 0.6, 0.5, 2), tol=1e-9)
        assert c.err1 <= 1e-9 and c.err2 <= 1e-9 and c.err3 <= 1e-9


class TestPredictResidual:
    def test_null_residuals(self):
        p = Params(1.0, 0.0, 0.5, 0.0, 0)
        c = compute_coeffs(p)
        for n in (1, 10, 1000):
            assert residual(p, n, c) == 0.0

    def test_predict_formula(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 0)
        c = compute_coeffs(p)
        n = 77
        assert predict(p, n, c) == c.C1 * 77 + c.C2 * math.sqrt(77.0) + c.C3

    def test_a0_residual_shrinks(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 0)
        c = compute_coeffs(p)
        assert abs(residual(p, 4096, c)) < abs(residual(p, 256, c))

    def test_a1_residual_slope(self):
        p = Params(1.0, 0.0, 0.5, 1.0, 1)
        c = compute_coeffs(p)
        pts = []
        for k in range(8, 14):  # n = 256 .. 8192
            n = 2**k
            pts.append((math.log(n), math.log(abs(residual(p, n, c)))))
        mean_x = sum(x for x, _ in pts) / len(pts)
        mean_y = sum(y for _, y in pts) / len(pts)
        slope = sum((x - mean_x) * (y - mean_y) for x, y in pts) / sum(
            (x - mean_x) ** 2 for x, _ in pts
        )
        assert slope <= -0.3
