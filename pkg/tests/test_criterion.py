import json
import math
from fractions import Fraction

import numpy as np
import pytest

from fracblow.criterion import (
    SystemParams,
    classify_integral,
    combine_F,
    condition_sides,
    criterion_report,
    divergence_test,
    eval_F,
    eval_f,
    literature_bounds,
    power_law_report,
    theta_exponents,
)
from fracblow.dilation import CoefficientFn
from fracblow.errors import ValidationError

FUJITA = SystemParams.power_law(1, (2, 2), (2, 2))


class TestCoefficients:
    def test_symmetric_values(self):
        assert eval_f(FUJITA, 0, 1.0) == pytest.approx(0.5, rel=1e-15)
        assert eval_f(FUJITA, 1, 4.0) == pytest.approx(0.25, rel=1e-15)

    def test_mixed_alpha(self):
        params = SystemParams.power_law(1, (1, 2), (2, 2))
        t = np.array([0.3, 1.0, 7.0])
        # G_1 = G_2 = t, b = second component
        np.testing.assert_allclose(eval_f(params, 0, t), (4 * t) ** -0.5, rtol=1e-14)
        np.testing.assert_allclose(eval_f(params, 1, t), t**-0.5 / (1 + t), rtol=1e-14)
        assert eval_f(params, 0, 1.0) == pytest.approx(0.5)
        assert eval_f(params, 1, 1.0) == pytest.approx(0.5)

    def test_F_examples(self):
        assert combine_F(1.0, 16.0, 1.0, 1.0) == pytest.approx(4.0, rel=1e-15)
        t = np.geomspace(0.1, 100, 7)
        np.testing.assert_allclose(eval_F(FUJITA, t), eval_f(FUJITA, 0, t), rtol=1e-14)

    def test_F_of_monomials(self):
        t = np.geomspace(0.1, 1e3, 9)
        e = (-0.7, 1.3)
        for bi, bj in ((1.0, 2.0), (2.5, 1.5)):
            expo = (e[0] * (bj + 1) + e[1] * (bi + 1)) / (bi + bj + 2)
            np.testing.assert_allclose(combine_F(t ** e[0], t ** e[1], bi, bj), t**expo, rtol=1e-13)

    def test_label_symmetry(self, power_law_tuples):
        for dim, alpha, beta, rho, sigma in power_law_tuples[:50]:
            p = SystemParams.power_law(dim, alpha, beta, rho, sigma)
            t = np.array([0.5, 3.0, 40.0])
            np.testing.assert_allclose(eval_F(p, t), eval_F(p.swapped(), t), rtol=1e-12)
            e0 = theta_exponents(dim, alpha, beta, rho, sigma, i=0).exponent_exact
            e1 = theta_exponents(dim, alpha, beta, rho, sigma, i=1).exponent_exact
            assert e0 == e1

    def test_theta_representation(self, power_law_tuples):
        # with g = rho t^{rho-1}, h = t^sigma the theta form is exact, prefactor 1
        t = np.geomspace(0.05, 1e4, 11)
        for dim, alpha, beta, rho, sigma in power_law_tuples[:200]:
            p = SystemParams.power_law(dim, alpha, beta, rho, sigma)
            t1, t2, t3, t4, t5, t6 = theta_exponents(dim, alpha, beta, rho, sigma).values
            ref = np.exp(t1 * np.log(t) - t4 * np.logaddexp(t2 * np.log(t), t3 * np.log(t)) - t6 * np.logaddexp(t5 * np.log(t), t3 * np.log(t)))
            np.testing.assert_allclose(eval_F(p, t), ref, rtol=1e-10)

    def test_validation(self):
        with pytest.raises(ValidationError):
            SystemParams.power_law(1, (2, 2), (1, 1))
        with pytest.raises(ValidationError):
            SystemParams.power_law(1, (2.5, 2), (2, 2))
        with pytest.raises(ValidationError):
            SystemParams.power_law(0, (2, 2), (2, 2))


class TestDivergence:
    def test_harmonic(self):
        assert classify_integral(lambda t: 1.0 / t).verdict == "blow_up"

    def test_convergent(self):
        assert classify_integral(lambda t: t**-1.2).verdict == "inconclusive"

    def test_fujita_exact(self):
        v = divergence_test(FUJITA)
        assert (v.verdict, v.method) == ("blow_up", "exact_power_law")
        assert v.exponent == -0.5

    def test_heuristic_path_for_shifted_coefficients(self):
        g = CoefficientFn.power_law(1.0, 0.0, shift=1.0)
        h = CoefficientFn.power_law(1.0, 0.0, shift=1.0)
        p = SystemParams(1, (2, 2), (2, 2), (g, g), (h, h))
        v = divergence_test(p)
        assert v.method == "numeric_heuristic" and v.verdict == "blow_up"
        assert v.window_slope == pytest.approx(0.5, abs=1e-3)

    def test_bounded_dilation_is_inapplicable(self):
        g = CoefficientFn.power_law(1.0, -2.0, shift=1.0)
        h = CoefficientFn.constant(1.0)
        p = SystemParams(1, (2, 2), (2, 2), (g, g), (h, h))
        assert divergence_test(p).verdict == "inapplicable"


class TestPowerLawReport:
    def test_fujita(self):
        r = power_law_report(FUJITA)
        assert r.theta == (0.5, 1.0, 1.0, 0.5, 1.0, 0.5)
        assert r.exponent == -0.5
        assert (r.condition8_lhs, r.condition8_rhs) == (1.5, 1.0)
        assert r.verdict == "blow_up" and r.method == "exact_power_law"
        assert r.bounds == (2.0, 2.0, 2.0)

    def test_boundary_case_counts_as_blow_up(self):
        r = power_law_report(SystemParams.power_law(1, (1, 2), (2, 2)))
        assert r.condition8_lhs == r.condition8_rhs == 1.5
        assert r.exponent == -1.0
        assert r.verdict == "blow_up"

    def test_sigma_minus_one_rejected(self):
        with pytest.raises(ValidationError):
            power_law_report(SystemParams.power_law(1, (2, 2), (2, 2), sigma=(-1.0, 0.0)))

    def test_json_round_trip(self):
        payload = json.dumps(criterion_report(FUJITA, include_bounds=True).to_json())
        back = json.loads(payload)
        assert back["bounds"] == {"C_U": 2.0, "C_A": 2.0, "C_V": 2.0}
        assert back["verdict"] == "blow_up"


def test_exponent_rule_equals_condition(power_law_tuples):
    assert len(power_law_tuples) >= 1000
    for dim, alpha, beta, rho, sigma in power_law_tuples:
        th = theta_exponents(dim, alpha, beta, rho, sigma)
        lhs, rhs = condition_sides(dim, alpha, beta, rho, sigma)
        assert (th.exponent_exact >= -1) == (lhs >= rhs)
        assert th.exponent_exact + 1 == lhs - rhs  # the two sides differ by exactly the exponent gap


def test_heuristic_agrees_outside_band(heuristic_agreement):
    outside = [r for r in heuristic_agreement if abs(r[0] + 1) >= 0.05]
    agree = sum(exact == heur for _, exact, heur in outside)
    assert agree / len(outside) >= 0.99


class TestBounds:
    def test_examples(self):
        assert literature_bounds((2, 2)) == (2.0, 2.0, 2.0)
        cu, ca, cv = literature_bounds((2, 3))
        assert (cu, ca, cv) == pytest.approx((1.6, 1.0, 1.4), rel=1e-15)

    def test_product_not_above_one(self):
        with pytest.raises(ValidationError):
            literature_bounds((1.0, 1.0))

    def test_ordering_grid(self):
        grid = np.linspace(1.0, 5.0, 50)
        for b1 in grid:
            for b2 in grid:
                if b1 * b2 <= 1:
                    continue
                cu, ca, cv = literature_bounds((b1, b2))
                assert ca <= cv * (1 + 1e-12) and cv <= cu * (1 + 1e-12)

    def test_symmetric_slice_matches_C_V(self):
        # alpha = 2, rho = 1, sigma = 0: condition holds iff d <= (b1+b2+2)/(b1 b2 - 1), exactly
        for b1 in np.linspace(1.1, 3.0, 20):
            for b2 in np.linspace(1.1, 3.0, 20):
                B1, B2 = Fraction(b1), Fraction(b2)
                cv = (B1 + B2 + 2) / (B1 * B2 - 1)
                for d in (1, 2, 3, 4):
                    lhs, rhs = condition_sides(d, (2, 2), (b1, b2), (1, 1), (0, 0))
                    assert (lhs >= rhs) == (d <= cv)
