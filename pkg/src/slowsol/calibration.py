"""Recover soliton parameters from experimental observables.

The background control field and the pulse FWHM pin the two free soliton
parameters (p0, eps0) through a pair of closed-form conditions; everything
else (effective decay rate, decay ratios) follows algebraically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .errors import InvalidParameterError, NoSolutionError
from .params import VALIDITY_RATIO

#: arcsech(1/2) = log(2 + sqrt(3)); the half-width condition sech(x) = 1/2.
ARCSECH_HALF = math.log(2.0 + math.sqrt(3.0))

_SCAN_LO = 1e-3
_SCAN_HI = 1e5


@dataclass(frozen=True)
class ExperimentInputs:
    """Observables of a slow-light run.

    omega0  -- background control Rabi frequency [rad/s]
    t_p     -- pulse duration, FWHM of the sech amplitude [s]
    gamma   -- excited-level relaxation rate [1/s]
    delta_t -- reported pulse delay [s], optional, for scenario checks
    """

    omega0: float
    t_p: float
    gamma: float
    delta_t: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.t_p) and self.t_p > 0):
            raise InvalidParameterError(f"t_p must be positive, got {self.t_p!r}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise InvalidParameterError(f"gamma must be non-negative, got {self.gamma!r}")
        if not np.isfinite(self.omega0) or self.omega0 < 0:
            raise InvalidParameterError(f"omega0 must be non-negative, got {self.omega0!r}")
        if self.delta_t is not None and not self.delta_t > 0:
            raise InvalidParameterError(f"delta_t must be positive, got {self.delta_t!r}")


@dataclass(frozen=True)
class CalibrationResult:
    """Joint root of the background-field and pulse-width conditions.

    ``alternate_p0`` is the other branch of the background-field quadratic at
    the calibrated eps0 (it does not satisfy the width condition and is
    reported for diagnostics only).  Residuals are relative.
    """

    p0: float
    eps0: float
    gamma_star: float
    tau_rel_star: float
    validity_ok: bool
    residual_bg: float
    residual_width: float
    alternate_p0: float

    def as_dict(self) -> dict:
        return {
            "p0": self.p0,
            "eps0": self.eps0,
            "gamma_star": self.gamma_star,
            "tau_rel_star": self.tau_rel_star,
            "validity_ok": self.validity_ok,
            "residuals": {"bg_field": self.residual_bg,
                          "time_width": self.residual_width},
            "alternate_p0": self.alternate_p0,
        }


def effective_gamma(gamma: float, p0: float) -> float:
    """Effective soliton decay rate gamma / (p0^2 + 1)."""
    if not np.isfinite(p0):
        raise InvalidParameterError(f"p0 must be finite, got {p0!r}")
    return gamma / (p0 ** 2 + 1.0)


def decay_ratio(gamma_star: float, tau: float) -> float:
    """Peak-amplitude ratio e^{-gamma* tau} against the undamped reference."""
    if tau < 0:
        raise InvalidParameterError(f"tau must be non-negative, got {tau!r}")
    return math.exp(-gamma_star * tau)


@dataclass(frozen=True)
class P0Approximation:
    """Roots of the background-field quadratic for a given eps0."""

    exact: float
    simplified: float
    exact_minus: float


def p0_approximation(eps0: float, omega0: float, gamma: float) -> P0Approximation:
    """Explicit roots of omega0 (p^2+1) = (2 eps0 - gamma) p.

    ``exact`` is the large-p branch, ``exact_minus`` its reciprocal partner,
    ``simplified`` the large-argument form (2 eps0 - gamma)/omega0.  Used to
    seed the joint calibration.
    """
    if not omega0 > 0:
        raise NoSolutionError(f"omega0 must be positive, got {omega0!r}")
    if not 2.0 * eps0 > gamma:
        raise InvalidParameterError("requires 2 eps0 > gamma")
    x = (2.0 * eps0 - gamma) / (2.0 * omega0)
    disc = x * x - 1.0
    if disc < 0:
        raise NoSolutionError(
            f"no real root: (2 eps0 - gamma)/(2 omega0) = {x:g} < 1")
    root = math.sqrt(disc)
    return P0Approximation(exact=x + root, simplified=2.0 * x, exact_minus=x - root)


def _width_eps0(p0: float, t_p: float) -> float:
    """eps0 implied by the half-maximum condition at this p0."""
    return 2.0 * ARCSECH_HALF * (p0 ** 2 + 1.0) / t_p


def calibrate(inputs: ExperimentInputs) -> CalibrationResult:
    """Solve the background-field and pulse-width conditions jointly.

    Eliminating eps0 through the width condition leaves a scalar equation in
    p0, which is bracketed (from the explicit quadratic seed, falling back to
    a log-spaced scan of [1e-3, 1e5]) and polished to 1e-12 relative.  When
    several roots exist the largest-p0 one is selected.
    """
    om0, t_p, gamma = inputs.omega0, inputs.t_p, inputs.gamma
    if om0 <= 0:
        raise NoSolutionError("background field omega0 must be positive for a soliton root")
    beta = 2.0 * ARCSECH_HALF / t_p

    def f(p: float) -> float:
        return 2.0 * beta * p - gamma * p / (p * p + 1.0) - om0

    brackets: list[tuple[float, float]] = []

    # Seed from the simplified quadratic 2 beta p^2 - omega0 p + (2 beta - gamma) = 0.
    disc = om0 ** 2 - 8.0 * beta * (2.0 * beta - gamma)
    if disc >= 0:
        for seed in ((om0 + math.sqrt(disc)) / (4.0 * beta),
                     (om0 - math.sqrt(disc)) / (4.0 * beta)):
            if seed > 0:
                lo, hi = 0.5 * seed, 2.0 * seed
                if f(lo) * f(hi) < 0:
                    brackets.append((lo, hi))

    if not brackets:
        grid = np.geomspace(_SCAN_LO, _SCAN_HI, 512)
        vals = np.array([f(p) for p in grid])
        sign_change = np.nonzero(np.diff(np.signbit(vals)))[0]
        brackets = [(float(grid[i]), float(grid[i + 1])) for i in sign_change]

    if not brackets:
        raise NoSolutionError(
            f"no sign change of the calibration equation for p0 in "
            f"[{_SCAN_LO:g}, {_SCAN_HI:g}] (omega0 = {om0:g}, t_p = {t_p:g}, "
            f"gamma = {gamma:g})")

    roots = sorted({float(brentq(f, lo, hi, rtol=1e-15, maxiter=200))
                    for lo, hi in brackets})
    p0 = roots[-1]
    eps0 = _width_eps0(p0, t_p)

    residual_bg = abs((2.0 * eps0 - gamma) * p0 / (p0 ** 2 + 1.0) - om0) / om0
    residual_width = abs(1.0 / math.cosh(eps0 * t_p / (2.0 * (p0 ** 2 + 1.0)))
                         - 0.5) / 0.5
    gamma_star = effective_gamma(gamma, p0)
    try:
        alternate = p0_approximation(eps0, om0, gamma).exact_minus
    except (NoSolutionError, InvalidParameterError):
        alternate = p0
    return CalibrationResult(
        p0=p0,
        eps0=eps0,
        gamma_star=gamma_star,
        tau_rel_star=(math.inf if gamma_star == 0 else 1.0 / gamma_star),
        validity_ok=eps0 >= VALIDITY_RATIO * gamma,
        residual_bg=residual_bg,
        residual_width=residual_width,
        alternate_p0=alternate,
    )
