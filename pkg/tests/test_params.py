import numpy as np
import pytest

import slowsol as ss
from slowsol.errors import DomainError, InvalidParameterError


class TestMediumParams:
    def test_unit_coupling(self):
        med = ss.make_medium_params(nu0=8.0, gamma=0.0, delta=0.0, eps0=1.0)
        assert med.k == 1.0

    def test_sodium_scale_coupling(self):
        # oracle: nu0 / (8 eps0^2) evaluated independently
        med = ss.make_medium_params(nu0=5.06e21, gamma=6.3e7, delta=0.0,
                                    eps0=5.7 * 6.3e7)
        assert med.k == pytest.approx(4904.89505425, rel=1e-9)

    def test_validity_warning_flag(self):
        with pytest.warns(ss.ValidityWarning):
            med = ss.make_medium_params(nu0=8.0, gamma=10.0, delta=0.0, eps0=1.0)
        assert not med.validity_ok

    def test_no_warning_when_valid(self, recwarn):
        med = ss.make_medium_params(nu0=8.0, gamma=1.0, delta=0.0, eps0=1.0)
        assert med.validity_ok
        assert not [w for w in recwarn if issubclass(w.category, ss.ValidityWarning)]

    @pytest.mark.parametrize("kwargs", [
        dict(nu0=0.0, gamma=0.0, delta=0.0, eps0=1.0),
        dict(nu0=-1.0, gamma=0.0, delta=0.0, eps0=1.0),
        dict(nu0=8.0, gamma=0.0, delta=0.0, eps0=0.0),
        dict(nu0=8.0, gamma=-0.1, delta=0.0, eps0=1.0),
    ])
    def test_invalid_parameters(self, kwargs):
        with pytest.raises(InvalidParameterError):
            ss.MediumParams(**kwargs)

    def test_k_never_stale(self):
        med = ss.MediumParams(nu0=5.0, gamma=0.0, delta=0.3, eps0=1.2)
        expected = 5.0 / (8.0 * (1.2 ** 2 + 0.3 ** 2))
        assert med.k == expected
        assert med.k == expected  # repeated reads recompute the same value

    @pytest.mark.parametrize("s", [1e-6, 1.0, 3.7, 6.3e7])
    def test_k_dimensionless_under_rate_rescaling(self, s):
        # scaling all rates by s and nu0 by s^2 must leave k unchanged
        base = ss.MediumParams(nu0=5.06e21, gamma=6.3e7, delta=1e7, eps0=3.6e8)
        scaled = ss.MediumParams(nu0=base.nu0 * s * s, gamma=base.gamma * s,
                                 delta=base.delta * s, eps0=base.eps0 * s)
        assert scaled.k == pytest.approx(base.k, rel=1e-12)


class TestRetardedCoords:
    def test_origin(self):
        rc = ss.to_retarded(z=0.0, t=1.0, c=3e8)
        assert (rc.zeta, rc.tau) == (0.0, 1.0)

    def test_one_light_second(self):
        rc = ss.to_retarded(z=3e8, t=2.0, c=3e8)
        assert (rc.zeta, rc.tau) == (1.0, 1.0)

    def test_round_trip_cloud_scale(self):
        z, t = 2.0e-4, 9.55e-6
        zz, tt = ss.from_retarded(ss.to_retarded(z, t))
        assert zz == pytest.approx(z, rel=1e-12)
        assert tt == pytest.approx(t, rel=1e-12)

    def test_round_trip_random(self, rng):
        for _ in range(200):
            z = float(rng.uniform(-1.0, 1.0))
            t = float(rng.uniform(-1.0, 1.0))
            zz, tt = ss.from_retarded(ss.to_retarded(z, t))
            assert zz == pytest.approx(z, rel=1e-12, abs=1e-15)
            assert tt == pytest.approx(t, rel=1e-12, abs=1e-15)

    def test_positive_c_required(self):
        with pytest.raises(InvalidParameterError):
            ss.to_retarded(1.0, 1.0, c=0.0)


class TestSchedules:
    def test_constant(self):
        sch = ss.ControlSchedule.constant(18.4)
        for tau in (-5.0, 0.0, 2.5e-6):
            assert ss.eval_schedule(sch, tau) == (18.4, 0.0)

    def test_tabulated_linear(self):
        sch = ss.ControlSchedule.tabulated(np.linspace(0, 1, 5),
                                           np.linspace(0, 1, 5))
        p, dp = ss.eval_schedule(sch, 0.5)
        assert p == pytest.approx(0.5, abs=1e-15)
        assert dp == pytest.approx(1.0, abs=1e-12)

    def test_tabulated_node_values_exact(self, rng):
        taus = np.sort(rng.uniform(0, 1, 9))
        taus[0], taus[-1] = 0.0, 1.0
        vals = rng.uniform(1.0, 3.0, 9)
        sch = ss.ControlSchedule.tabulated(taus, vals)
        assert np.allclose(sch(taus), vals, rtol=0, atol=1e-14)

    def test_tabulated_domain_error(self):
        sch = ss.ControlSchedule.tabulated([0.0, 1.0], [1.0, 2.0])
        with pytest.raises(DomainError):
            sch(1.5)
        with pytest.raises(DomainError):
            sch.derivative(-0.5)

    def test_tabulated_requires_increasing_taus(self):
        with pytest.raises(InvalidParameterError):
            ss.ControlSchedule.tabulated([0.0, 0.0, 1.0], [1.0, 1.0, 1.0])
        with pytest.raises(InvalidParameterError):
            ss.ControlSchedule.tabulated([1.0, 0.5], [1.0, 1.0])

    def test_smooth_ramp_saturates(self):
        sch = ss.ControlSchedule.smooth_ramp(1.0, 2.0, tau_start=0.0, tau_end=1.0)
        assert ss.eval_schedule(sch, 5.0) == (2.0, 0.0)
        assert ss.eval_schedule(sch, -1.0) == (1.0, 0.0)
        p, dp = ss.eval_schedule(sch, 0.5)
        assert p == pytest.approx(1.5)
        assert dp == pytest.approx(1.5)  # peak slope of the cubic ramp

    def test_smooth_ramp_is_c1(self):
        sch = ss.ControlSchedule.smooth_ramp(1.0, 2.0, 0.0, 1.0)
        eps = 1e-9
        for edge in (0.0, 1.0):
            assert sch.derivative(edge - eps) == pytest.approx(
                sch.derivative(edge + eps), abs=1e-7)

    def test_schedule_dict_round_trip(self):
        for sch in (ss.ControlSchedule.constant(2.0),
                    ss.ControlSchedule.tabulated([0.0, 0.5, 1.0], [1.0, 1.5, 1.2]),
                    ss.ControlSchedule.smooth_ramp(1.0, 2.0, 0.0, 1.0)):
            back = ss.ControlSchedule.from_dict(sch.to_dict())
            assert back.to_dict() == sch.to_dict()

    def test_vectorized_evaluation(self):
        sch = ss.ControlSchedule.smooth_ramp(0.0, 1.0, 0.0, 2.0)
        taus = np.linspace(-1.0, 3.0, 11)
        p = sch(taus)
        assert p.shape == taus.shape
        assert p[0] == 0.0 and p[-1] == 1.0
