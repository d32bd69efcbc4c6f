"""Slow-light soliton toolkit for a relaxing three-level Lambda medium.

Layers: closed-form soliton evaluation and its validity analysis
(:mod:`slowsol.soliton`), direct integration of the exact field-atom system
as a ground-truth oracle (:mod:`slowsol.mb`), recovery of soliton parameters
from experimental observables (:mod:`slowsol.calibration`), and a scenario
harness with CSV/JSON emission (:mod:`slowsol.scenario`, CLI in
:mod:`slowsol.cli`).
"""

from .calibration import (CalibrationResult, ExperimentInputs, calibrate,
                          decay_ratio, effective_gamma, p0_approximation)
from .errors import (ConfigError, DivergedError, DomainError,
                     InvalidParameterError, NoSolutionError, NumericsError,
                     SingularityError, SlowsolError)
from .mb import (AtomGrid, AtomState, ErrorReport, FieldGrid, SimulationPlan,
                 compare_to_analytic, ground_state_atoms, norm_decay_residual,
                 simulate, transformed_residuals)
from .params import (SPEED_OF_LIGHT, ControlSchedule, MediumParams,
                     RetardedCoords, SolitonConfig, ValidityWarning,
                     eval_schedule, from_retarded, make_medium_params,
                     to_retarded)
from .scenario import (Nu0Calibration, RunReport, ScenarioConfig,
                       analytic_trajectory, calibrate_nu0, emit_plot_data,
                       run_scenario, run_sweep, verify_run_dir)
from .soliton import (ARCSECH_HALF, AlphaTrajectory, LiouvilleData,
                      SolitonFieldSample, ValidityReport, group_velocity,
                      integrate_alpha, liouville_rho, phase3_quadrature,
                      phase_advance, soliton_atoms, soliton_center,
                      soliton_fields, soliton_fwhm, soliton_liouville_data,
                      validity_report)

__version__ = "0.1.0"

__all__ = [
    "ARCSECH_HALF", "AlphaTrajectory", "AtomGrid", "AtomState",
    "CalibrationResult", "ConfigError", "ControlSchedule", "DivergedError",
    "DomainError", "ErrorReport", "ExperimentInputs", "FieldGrid",
    "InvalidParameterError", "LiouvilleData", "MediumParams",
    "NoSolutionError", "Nu0Calibration", "NumericsError", "RetardedCoords",
    "RunReport", "SPEED_OF_LIGHT", "ScenarioConfig", "SimulationPlan",
    "SingularityError", "SlowsolError", "SolitonConfig", "SolitonFieldSample",
    "ValidityReport", "ValidityWarning", "analytic_trajectory", "calibrate",
    "calibrate_nu0", "compare_to_analytic", "decay_ratio", "effective_gamma",
    "emit_plot_data", "eval_schedule", "from_retarded", "ground_state_atoms",
    "group_velocity", "integrate_alpha", "liouville_rho", "make_medium_params",
    "norm_decay_residual", "p0_approximation", "phase3_quadrature",
    "phase_advance", "run_scenario", "run_sweep", "simulate", "soliton_atoms",
    "soliton_center", "soliton_fields", "soliton_fwhm",
    "soliton_liouville_data", "to_retarded", "transformed_residuals",
    "validity_report", "verify_run_dir",
]
