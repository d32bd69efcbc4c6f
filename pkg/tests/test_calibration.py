import math

import numpy as np
import pytest

import slowsol as ss
from slowsol.calibration import ARCSECH_HALF
from slowsol.errors import InvalidParameterError, NoSolutionError

GAMMA = 6.3e7


class TestCalibrate:
    def test_sodium_experiment_values(self, hau_calibration):
        # oracle: 50-digit root of the eliminated scalar equation
        assert hau_calibration.p0 == pytest.approx(18.366224321494612, rel=1e-10)
        assert hau_calibration.eps0 / GAMMA == pytest.approx(5.657788186264512,
                                                             rel=1e-10)
        assert hau_calibration.validity_ok

    def test_round_trip_residuals(self, hau_calibration):
        assert hau_calibration.residual_bg <= 1e-10
        assert hau_calibration.residual_width <= 1e-10

    def test_direct_substitution(self, hau_calibration):
        p0, eps0 = hau_calibration.p0, hau_calibration.eps0
        assert (2 * eps0 - GAMMA) * p0 / (p0 ** 2 + 1) == pytest.approx(
            0.56 * GAMMA, rel=1e-12)
        assert 1 / math.cosh(eps0 * 2.5e-6 / (2 * (p0 ** 2 + 1))) == pytest.approx(
            0.5, rel=1e-12)

    def test_degenerate_equal_root_case(self):
        # gamma = 0 with omega0 constructed for p0 = 1 (double root of the
        # background quadratic)
        t_p = 2.5e-6
        eps0 = 2 * ARCSECH_HALF * 2 / t_p
        omega0 = 2 * eps0 * 1.0 / 2.0
        cal = ss.calibrate(ss.ExperimentInputs(omega0=omega0, t_p=t_p, gamma=0.0))
        assert cal.p0 == pytest.approx(1.0, rel=1e-10)
        assert cal.eps0 == pytest.approx(eps0, rel=1e-10)

    def test_lower_background_field(self):
        cal = ss.calibrate(ss.ExperimentInputs(omega0=0.3 * GAMMA, t_p=2.5e-6,
                                               gamma=GAMMA))
        assert cal.residual_bg <= 1e-10
        assert cal.residual_width <= 1e-10

    def test_no_solution_for_zero_omega0(self):
        with pytest.raises(NoSolutionError):
            ss.calibrate(ss.ExperimentInputs(omega0=0.0, t_p=2.5e-6, gamma=GAMMA))

    @pytest.mark.parametrize("s", [0.1, 1.0, 17.3])
    def test_scaling_covariance(self, s, hau_calibration):
        scaled = ss.calibrate(ss.ExperimentInputs(
            omega0=0.56 * GAMMA * s, t_p=2.5e-6 / s, gamma=GAMMA * s))
        assert scaled.p0 == pytest.approx(hau_calibration.p0, rel=1e-9)
        assert scaled.eps0 == pytest.approx(hau_calibration.eps0 * s, rel=1e-9)

    def test_quadratic_branch_agreement(self, hau_calibration):
        # feeding the calibrated eps0 back into the explicit quadratic must
        # reproduce the joint root (well within the 2% regime statement)
        approx = ss.p0_approximation(hau_calibration.eps0, 0.56 * GAMMA, GAMMA)
        assert approx.exact == pytest.approx(hau_calibration.p0, rel=1e-9)
        assert abs(approx.simplified - hau_calibration.p0) / hau_calibration.p0 < 0.02

    def test_alternate_branch_reported(self, hau_calibration):
        assert hau_calibration.alternate_p0 == pytest.approx(
            1.0 / hau_calibration.p0, rel=1e-9)

    def test_invalid_inputs(self):
        with pytest.raises(InvalidParameterError):
            ss.ExperimentInputs(omega0=1.0, t_p=0.0, gamma=1.0)
        with pytest.raises(InvalidParameterError):
            ss.ExperimentInputs(omega0=1.0, t_p=1.0, gamma=-1.0)
        with pytest.raises(InvalidParameterError):
            ss.ExperimentInputs(omega0=-1.0, t_p=1.0, gamma=1.0)


class TestP0Approximation:
    def test_printed_example(self):
        # eps0 = 5.7 gamma, omega0 = 0.56 gamma
        approx = ss.p0_approximation(5.7 * GAMMA, 0.56 * GAMMA, GAMMA)
        assert approx.exact == pytest.approx(18.5174253837, rel=1e-9)
        assert approx.simplified == pytest.approx(18.5714285714, rel=1e-9)
        assert approx.exact_minus == pytest.approx(0.0540031877694, rel=1e-9)

    def test_double_root(self):
        # 2 eps0 - gamma = 2 omega0 makes the discriminant vanish
        gamma, omega0 = 1.0, 3.0
        eps0 = (2 * omega0 + gamma) / 2
        approx = ss.p0_approximation(eps0, omega0, gamma)
        assert approx.exact == pytest.approx(1.0, abs=1e-12)
        assert approx.exact_minus == pytest.approx(1.0, abs=1e-12)

    def test_negative_discriminant(self):
        with pytest.raises(NoSolutionError):
            ss.p0_approximation(1.0, 10.0, 1.0)


class TestEffectiveGamma:
    def test_suppression_factor(self):
        gstar = ss.effective_gamma(GAMMA, 18.4)
        assert GAMMA / gstar == pytest.approx(339.56, rel=1e-6)
        assert gstar * 340.0 / GAMMA == pytest.approx(1.0, abs=0.01)

    def test_p0_zero(self):
        assert ss.effective_gamma(GAMMA, 0.0) == GAMMA

    def test_relaxation_time_versus_pulse_width(self):
        gstar = ss.effective_gamma(GAMMA, 18.4)
        assert 1.0 / gstar == pytest.approx(5.39e-6, rel=1e-3)
        assert 1.0 / gstar / 2.5e-6 == pytest.approx(2.156, rel=1e-3)


class TestDecayRatio:
    def test_hau_delay_ratio(self):
        gstar = GAMMA / (18.4 ** 2 + 1)
        ratio = ss.decay_ratio(gstar, 7.05e-6 + 1.25e-6)
        assert ratio == pytest.approx(0.214395244127, rel=1e-9)
        assert ratio == pytest.approx(0.21, abs=0.03)

    def test_zero_time(self):
        assert ss.decay_ratio(1e5, 0.0) == 1.0

    def test_relaxation_time_definition(self):
        gstar = 1.8e5
        assert ss.decay_ratio(gstar, 1.0 / gstar) == pytest.approx(math.exp(-1))
