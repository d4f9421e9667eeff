import csv
import math

import numpy as np
import pytest
from scipy.optimize import minimize

from fracblow.criterion import SystemParams
from fracblow.errors import ValidationError
from fracblow.ode_blowup import (
    OdeSpec,
    am_gm_gap,
    blowup_time_bound,
    envelope_H,
    integrate_system,
    young_constant,
    young_ratio,
)

RICCATI = OdeSpec.constant(1.0, beta=(2, 2), k=1.0, t0=1.0, horizon=10.0)


class TestIntegrator:
    def test_riccati_blow_up(self):
        traj = integrate_system(RICCATI)
        assert traj.blowup_detected
        assert traj.t_blowup_numeric == pytest.approx(3.0, rel=5e-3)
        # much tighter in practice; keeps regressions visible
        assert abs(traj.t_blowup_numeric - 3.0) < 1e-8

    def test_zero_forcing(self):
        traj = integrate_system(OdeSpec.constant(0.0, k=0.6, t0=0.0, horizon=5.0))
        assert not traj.blowup_detected and traj.t_blowup_numeric is None
        np.testing.assert_array_equal(traj.z[0], 0.3)

    def test_integrable_forcing_stays_bounded(self):
        # z' = 0.1 t^-2 z^2 from z(1) = 0.05: 1/z(t) = 20 - 0.1 (1 - 1/t) > 0 for all t
        spec = OdeSpec((lambda t: t**-2.0, lambda t: t**-2.0), (2, 2), 0.1, 1.0, 1e4)
        traj = integrate_system(spec)
        assert not traj.blowup_detected
        assert traj.z[0][-1] == pytest.approx(1.0 / (20.0 - 0.1 * (1.0 - 1e-4)), rel=1e-9)

    @pytest.mark.parametrize(
        "f,beta,k",
        [
            ((lambda t: 1.0, lambda t: 1.0), (2.0, 2.0), 1.0),
            ((lambda t: 1.0, lambda t: t), (2.0, 3.0), 1.0),
            ((lambda t: 2.0 + math.sin(t), lambda t: 0.5), (1.5, 4.0), 0.7),
            ((lambda t: 1.0, lambda t: 1.0), (1.0, 2.0), 2.0),
        ],
    )
    def test_envelope_below_log_product(self, f, beta, k):
        traj = integrate_system(OdeSpec(f, beta, k, 1.0, 40.0))
        assert traj.blowup_detected
        finite = np.isfinite(traj.H) & np.isfinite(traj.Z)
        assert np.all(traj.H[finite] <= traj.Z[finite] + 1e-8)
        assert np.all(np.diff(traj.z[0]) >= 0) and np.all(np.diff(traj.z[1]) >= 0)
        assert np.all(np.diff(traj.Z) >= 0)
        assert traj.t_blowup_numeric <= traj.t_blowup_envelope + 1e-6

    def test_from_params(self):
        params = SystemParams.power_law(1, (2, 2), (2, 2))
        spec = OdeSpec.from_params(params, k=1.0, t0=1.0, horizon=1e3)
        assert spec.f[0](4.0) == pytest.approx(0.25)
        assert spec.F(4.0) == pytest.approx(0.25)

    def test_negative_forcing_rejected(self):
        with pytest.raises(ValidationError):
            integrate_system(OdeSpec((lambda t: -1.0, lambda t: 1.0), (2, 2), 1.0, 0.0, 1.0))

    def test_spec_validation(self):
        with pytest.raises(ValidationError):
            OdeSpec.constant(1.0, beta=(1, 1))
        with pytest.raises(ValidationError):
            OdeSpec.constant(1.0, k=0.0)
        with pytest.raises(ValidationError):
            OdeSpec.constant(1.0, t0=2.0, horizon=1.0)

    def test_csv(self, tmp_path):
        traj = integrate_system(RICCATI)
        path = tmp_path / "traj.csv"
        traj.to_csv(path)
        with open(path) as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["t", "z1", "z2", "Z", "H"]
        assert len(rows) == len(traj.times) + 1
        assert float(rows[1][1]) == 0.5


class TestEnvelope:
    def test_single_constant(self):
        assert envelope_H(RICCATI, 1.0, c=1.0) == 2 * math.log(0.5)
        for t in (1.5, 2.0, 4.0):
            assert envelope_H(RICCATI, t, c=1.0) == pytest.approx(-math.log(4.0 - (t - 1.0)), rel=1e-12)
        assert envelope_H(RICCATI, 5.5, c=1.0) == math.inf
        assert blowup_time_bound(RICCATI, c=1.0) == pytest.approx(5.0, rel=1e-13)

    def test_harmonic_forcing(self):
        spec = OdeSpec.constant(1.0, k=2.0, t0=1.0, horizon=10.0)
        assert blowup_time_bound(spec, F=lambda s: 1.0 / s, c=1.0) == pytest.approx(math.e, rel=1e-12)

    def test_linear_forcing(self):
        assert blowup_time_bound(RICCATI, F=lambda s: s, c=1.0) == pytest.approx(3.0, rel=1e-12)

    def test_zero_forcing(self):
        assert blowup_time_bound(RICCATI, F=lambda s: 0.0, c=1.0) == math.inf

    def test_default_constants_are_sharp_when_symmetric(self):
        # A = 2, gamma = 1/2: the envelope coincides with the Riccati solution
        assert blowup_time_bound(RICCATI) == pytest.approx(3.0, rel=1e-12)


BETAS = [(1.0, 1.0), (2.0, 2.0), (2.0, 3.0), (1.5, 4.0)]


class TestYoung:
    def test_closed_forms(self):
        assert young_constant(2, 2) == pytest.approx(2.0, rel=1e-15)
        assert young_constant(1, 1) == pytest.approx(2.0, rel=1e-15)
        a = 3 / 7
        assert young_constant(2, 3) == pytest.approx(math.exp(a * math.log(7 / 3) + (1 - a) * math.log(7 / 4)), rel=1e-15)

    @pytest.mark.parametrize("beta", BETAS)
    def test_brute_force(self, beta):
        c = young_constant(*beta)
        g = np.geomspace(1e-6, 1e6, 200)
        X, Y = np.meshgrid(g, g)
        lr = young_ratio(X, Y, *beta)
        assert np.all(lr >= math.log(c) + math.log1p(-1e-10))
        k = np.unravel_index(np.argmin(lr), lr.shape)
        start = np.log([X[k], Y[k]])
        res = minimize(lambda v: float(young_ratio(math.exp(v[0]), math.exp(v[1]), *beta)), start, method="Nelder-Mead", options={"xatol": 1e-10, "fatol": 1e-14})
        assert math.exp(res.fun) >= c * (1 - 1e-10)
        assert abs(math.exp(res.fun) - c) <= 1e-6

    def test_rejects_small_beta(self):
        with pytest.raises(ValidationError):
            young_constant(0.5, 2.0)

    def test_am_gm_gap(self):
        rng = np.random.default_rng(0)
        for p, q, w in rng.uniform(0.01, 5.0, (200, 3)) * [1, 1, 0.19]:
            w = 0.05 + w
            direct = p + q - (p / w) ** w * (q / (1 - w)) ** (1 - w)
            assert am_gm_gap(p, q, w) >= 0
            assert am_gm_gap(p, q, w) == pytest.approx(direct, rel=1e-9, abs=1e-12)
        assert am_gm_gap(0.5, 0.5, 0.5) == 0.0
