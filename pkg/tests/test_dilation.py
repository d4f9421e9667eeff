import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fracblow.dilation import CoefficientFn, Dilation, check_dilation_divergence, window_log_slope
from fracblow.errors import DomainError, ValidationError


def test_power_law_antiderivative():
    g = CoefficientFn.power_law(2.0, 1.0)  # g = 2t, G = t^2
    assert Dilation(g).integrate(1.0, 2.0) == pytest.approx(3.0, rel=1e-15)


def test_constant():
    g = CoefficientFn.constant(1.0)
    assert Dilation(g).integrate(0.25, 7.5) == pytest.approx(7.25, rel=1e-15)


def test_tabulated_against_antiderivative():
    r = np.linspace(0.0, 9.0, 1_000_001)
    g = CoefficientFn.tabulated(r, 1.0 / (1.0 + r) ** 2)
    assert abs(Dilation(g).integrate(0.0, 9.0) - 0.9) <= 1e-10


def test_tabulated_held_constant_outside_knots():
    g = CoefficientFn.tabulated([1.0, 2.0], [3.0, 5.0])
    assert g(0.5) == 3.0 and g(10.0) == 5.0
    assert g.integral(0.0, 3.0) == pytest.approx(3.0 + 4.0 + 5.0)


def test_validation():
    with pytest.raises(ValidationError):
        CoefficientFn.constant(-1.0)
    with pytest.raises(ValidationError):
        CoefficientFn.tabulated([0.0, 0.0], [1.0, 1.0])
    with pytest.raises(ValidationError):
        CoefficientFn.tabulated([0.0, 1.0], [1.0, -1.0])
    with pytest.raises(ValidationError):
        CoefficientFn.from_dict({"kind": "spline"})
    with pytest.raises(DomainError):
        CoefficientFn.power_law(1.0, -1.0).integral(0.0, 1.0)
    with pytest.raises(DomainError):
        CoefficientFn.constant(1.0).integral(2.0, 1.0)


def test_dict_round_trip():
    for g in (CoefficientFn.power_law(2.0, 0.5, shift=1.0), CoefficientFn.constant(3.0), CoefficientFn.tabulated([0, 1], [1, 2])):
        back = CoefficientFn.from_dict(g.to_dict())
        assert back.to_dict() == g.to_dict()


@settings(max_examples=60, deadline=None)
@given(
    e=st.floats(-0.9, 3.0),
    s=st.floats(0.0, 5.0),
    a=st.floats(0.0, 5.0),
    b=st.floats(0.0, 5.0),
)
def test_monotone_in_both_ends(e, s, a, b):
    g = CoefficientFn.power_law(1.5, e)
    t1, t2 = s + a, s + a + b
    assert g.integral(s, t1) <= g.integral(s, t2) + 1e-12
    assert g.integral(s, t2) >= g.integral(s + a, t2) - 1e-12
    assert g.integral(s, t1) >= 0


@pytest.mark.parametrize(
    "g",
    [
        CoefficientFn.power_law(1.0, -0.5),
        CoefficientFn.power_law(2.0, 1.5),
        CoefficientFn.power_law(1.0, -0.5, shift=1.0),
        CoefficientFn.tabulated(np.linspace(0, 4, 5), [1.0, 3.0, 2.0, 0.5, 0.0]),
    ],
)
@pytest.mark.parametrize("s,t", [(0.0, 0.1), (0.3, 0.5), (1.0, 3.0), (2.0, 2.01)])
def test_step_weights(g, s, t):
    w0, w1 = g.step_weights(s, t)
    assert w0 >= 0 and w1 >= 0
    assert w0 + w1 == pytest.approx(g.integral(s, t), rel=1e-10)
    # first moment: ∫ g(r) (r - s) dr = (t - s) w1
    from scipy.integrate import quad

    m1, _ = quad(lambda r: float(g(r)) * (r - s), s, t, epsabs=1e-14, epsrel=1e-12, limit=200)
    assert (t - s) * w1 == pytest.approx(m1, rel=1e-8, abs=1e-14)


class TestDivergence:
    def test_constant_diverges(self):
        assert check_dilation_divergence(CoefficientFn.power_law(1.0, 0.0)).kind == "diverges"

    def test_convergent_shifted_power(self):
        v = check_dilation_divergence(CoefficientFn.power_law(1.0, -2.0, shift=1.0))
        assert v.kind == "exactly_known" and v.method == "exact"
        assert v.limit == pytest.approx(1.0, rel=1e-15)

    def test_tabulated_harmonic_diverges(self):
        r = np.geomspace(1e-3, 1e6, 20001)
        v = check_dilation_divergence(CoefficientFn.tabulated(r, 1.0 / (1.0 + r)))
        assert v.kind == "diverges" and v.method == "heuristic"
        assert abs(v.slope) < 0.025

    def test_tabulated_convergent(self):
        r = np.geomspace(1e-3, 1e6, 20001)
        v = check_dilation_divergence(CoefficientFn.tabulated(r, 1.0 / (1.0 + r) ** 2))
        assert v.kind == "bounded_on_horizon"
        assert v.limit == pytest.approx(1.0, abs=1e-3)

    def test_window_slope_recovers_exponent(self):
        g = CoefficientFn.power_law(1.0, -0.5)
        slope, w = window_log_slope(g.integral, 1.0, 1e6)
        assert slope == pytest.approx(0.5, abs=1e-12)
        assert len(w) == 6

    def test_short_horizon_rejected(self):
        with pytest.raises(ValidationError):
            window_log_slope(math.fsum, 1.0, 10.0)
