import numpy as np
import pytest

import slowsol as ss

HAU_GAMMA = 6.3e7
HAU_TP = 2.5e-6
HAU_OMEGA0 = 0.56 * HAU_GAMMA


@pytest.fixture(scope="session")
def hau_inputs():
    return ss.ExperimentInputs(omega0=HAU_OMEGA0, t_p=HAU_TP, gamma=HAU_GAMMA,
                               delta_t=7.05e-6)


@pytest.fixture(scope="session")
def hau_calibration(hau_inputs):
    return ss.calibrate(hau_inputs)


@pytest.fixture(scope="session")
def natural_medium():
    """Unit-scale medium: k = 1, eps0 = 1, no relaxation."""
    return ss.make_medium_params(8.0, 0.0, 0.0, 1.0)


@pytest.fixture(scope="session")
def unit_schedule():
    return ss.ControlSchedule.constant(1.0)


@pytest.fixture(scope="session")
def rng():
    return np.random.default_rng(20240911)
