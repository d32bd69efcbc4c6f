"""Closed-form relaxing slow-light soliton.

Implements the damped-soliton solution of the three-level medium: the
relaxation exponent alpha(tau), both Rabi fields, the soliton center and
group velocity, the spatial validity window, the general solution of the
underlying integrable (Liouville) reduction, and the excited-state phase
quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np
from scipy.integrate import cumulative_simpson
from scipy.interpolate import CubicSpline

from .errors import DomainError, InvalidParameterError, SingularityError
from .params import (SPEED_OF_LIGHT, ControlSchedule, MediumParams,
                     SolitonConfig, eval_schedule)

#: sech(x) = 1/2 at x = log(2 + sqrt(3)); the amplitude FWHM of a sech pulse
#: spans twice this in phase units.
ARCSECH_HALF = float(np.log(2.0 + np.sqrt(3.0)))

#: Below gamma = GAMMA_SWITCH * eps0 the phase offset (1 - e^{2 alpha})/gamma
#: is replaced by its quadrature form, which is regular at gamma = 0.
GAMMA_SWITCH = 1e-6


def soliton_fwhm(medium: MediumParams) -> float:
    """Full width at half maximum of the sech amplitude, in zeta seconds."""
    return ARCSECH_HALF / (2.0 * medium.k * medium.eps0)


@dataclass(frozen=True, eq=False)
class AlphaTrajectory:
    """Relaxation exponent alpha(tau) sampled on a uniform grid.

    alpha solves d(alpha)/d(tau) = -(gamma/2)/(p(tau)^2 + 1) with
    alpha(0) = 0, so it is non-positive and non-increasing.  ``advances``
    holds the running integral of e^{2 alpha}/(p^2 + 1), which equals
    (1 - e^{2 alpha})/gamma identically for gamma > 0 and stays finite at
    gamma = 0; the soliton phase offset and center are both built from it.
    """

    taus: np.ndarray
    alphas: np.ndarray
    advances: np.ndarray
    gamma: float

    def __post_init__(self):
        if self.taus.ndim != 1 or self.taus.size < 3:
            raise InvalidParameterError("alpha trajectory needs >= 3 samples")
        if not np.all(np.diff(self.taus) > 0):
            raise InvalidParameterError("alpha trajectory taus must be strictly increasing")
        if self.alphas.shape != self.taus.shape or self.advances.shape != self.taus.shape:
            raise InvalidParameterError("alpha trajectory arrays must share one shape")
        if abs(self.alphas[0]) > 1e-14:
            raise InvalidParameterError("alpha(0) must vanish")
        if np.any(np.diff(self.alphas) > 1e-14):
            raise InvalidParameterError("alpha must be non-increasing")

    @property
    def tau_max(self) -> float:
        return float(self.taus[-1])

    @cached_property
    def _alpha_spline(self) -> CubicSpline:
        return CubicSpline(self.taus, self.alphas)

    @cached_property
    def _advance_spline(self) -> CubicSpline:
        return CubicSpline(self.taus, self.advances)

    def _checked(self, tau) -> np.ndarray:
        t = np.asarray(tau, dtype=float)
        slack = 1e-12 * max(self.tau_max, 1.0)
        if np.any(t < -slack) or np.any(t > self.tau_max + slack):
            raise DomainError(
                f"tau outside alpha trajectory domain [0, {self.tau_max:g}]")
        return t

    def alpha(self, tau):
        t = self._checked(tau)
        out = self._alpha_spline(t)
        return float(out) if t.ndim == 0 else out

    def exp2alpha(self, tau):
        return np.exp(2.0 * self.alpha(tau))

    def advance(self, tau):
        """Integral of e^{2 alpha}/(p^2+1) from 0 to tau (interpolated)."""
        t = self._checked(tau)
        out = self._advance_spline(t)
        return float(out) if t.ndim == 0 else out


def integrate_alpha(medium: MediumParams, schedule: ControlSchedule,
                    tau_max: float, n_steps: int) -> AlphaTrajectory:
    """Integrate the relaxation exponent with classical 4th-order steps.

    Returns alpha and its phase-advance integral on a uniform grid of
    ``n_steps`` intervals covering [0, tau_max].
    """
    if not tau_max > 0:
        raise InvalidParameterError(f"tau_max must be positive, got {tau_max!r}")
    if n_steps < 2:
        raise InvalidParameterError(f"n_steps must be >= 2, got {n_steps!r}")
    lo, hi = schedule.domain
    if lo > 0.0 or hi < tau_max:
        raise DomainError(
            f"schedule domain [{lo:g}, {hi:g}] does not cover [0, {tau_max:g}]")

    taus = np.linspace(0.0, tau_max, n_steps + 1)
    h = tau_max / n_steps
    w_node = 1.0 / (schedule(taus) ** 2 + 1.0)
    w_mid = 1.0 / (schedule(taus[:-1] + 0.5 * h) ** 2 + 1.0)

    g2 = 0.5 * medium.gamma
    alphas = np.empty_like(taus)
    advances = np.empty_like(taus)
    a = 0.0
    q = 0.0
    alphas[0] = a
    advances[0] = q
    for i in range(n_steps):
        w0, wm, w1 = w_node[i], w_mid[i], w_node[i + 1]
        # alpha' is a pure function of tau, so its RK4 stages collapse to
        # Simpson weights; q' = e^{2 alpha} w needs the staged alpha values.
        ka1 = -g2 * w0
        ka2 = -g2 * wm
        ka4 = -g2 * w1
        kq1 = np.exp(2.0 * a) * w0
        kq2 = np.exp(2.0 * (a + 0.5 * h * ka1)) * wm
        kq3 = np.exp(2.0 * (a + 0.5 * h * ka2)) * wm
        kq4 = np.exp(2.0 * (a + h * ka2)) * w1
        a += (h / 6.0) * (ka1 + 4.0 * ka2 + ka4)
        q += (h / 6.0) * (kq1 + 2.0 * (kq2 + kq3) + kq4)
        alphas[i + 1] = a
        advances[i + 1] = q
    return AlphaTrajectory(taus=taus, alphas=alphas, advances=advances,
                           gamma=medium.gamma)


def default_alpha_steps(medium: MediumParams, schedule: ControlSchedule,
                        tau_max: float) -> int:
    """Step count keeping gamma*h/(p_min^2+1) <= 1e-3, at least 512 steps."""
    lo, hi = schedule.domain
    probe = np.linspace(max(lo, 0.0), min(hi, tau_max), 4097)
    p_min = float(np.min(np.abs(schedule(probe))))
    rate = medium.gamma / (p_min ** 2 + 1.0)
    if rate > 0:
        n = int(np.ceil(rate * tau_max / 1e-3))
    else:
        n = 0
    return min(max(n, 512), 2_000_000)


def phase_advance(medium: MediumParams, alpha: AlphaTrajectory, tau):
    """Phase-offset integral of e^{2 alpha}/(p^2+1) over [0, tau].

    For resolvable gamma this is evaluated in the closed form
    (1 - e^{2 alpha})/gamma; for gamma < 1e-6 eps0 it switches to the
    quadrature samples, removing the 0/0 at gamma = 0.  The soliton phase,
    center, and velocity all derive from this one function, which keeps
    phi(tau, zeta_c(tau)) = 0 exact by construction.
    """
    if medium.gamma > GAMMA_SWITCH * medium.eps0:
        return (1.0 - alpha.exp2alpha(tau)) / medium.gamma
    return alpha.advance(tau)


@dataclass(frozen=True, eq=False)
class SolitonFieldSample:
    """Field values at one or more (tau, zeta) points.

    omega_a is real non-negative in this gauge (carrier phases live in the
    PDE module); omega_b is real; psi3_abs is the excited-state amplitude
    modulus; phi is the soliton phase; alpha the relaxation exponent used.
    """

    omega_a: np.ndarray | float
    omega_b: np.ndarray | float
    psi3_abs: np.ndarray | float
    phi: np.ndarray | float
    alpha: np.ndarray | float

    @property
    def rho(self):
        """-log |omega_a| (log-amplitude variable)."""
        with np.errstate(divide="ignore"):
            return -np.log(np.abs(self.omega_a))

    @property
    def eta(self):
        """Alias for the control field omega_b."""
        return self.omega_b

    @property
    def rho_tilde(self):
        """rho + alpha, the variable obeying the integrable reduction."""
        return self.rho + self.alpha


def soliton_fields(config: SolitonConfig, alpha: AlphaTrajectory,
                   tau, zeta) -> SolitonFieldSample:
    """Evaluate the closed-form soliton at (tau, zeta); inputs broadcast."""
    med = config.medium
    if not med.eps0 > 0:
        raise InvalidParameterError("eps0 must be positive")
    t = np.asarray(tau, dtype=float)
    z = np.asarray(zeta, dtype=float)
    a = alpha.alpha(t)
    e2a = np.exp(2.0 * np.asarray(a))
    p, dp = eval_schedule(config.schedule, t)
    p = np.asarray(p, dtype=float)
    dp = np.asarray(dp, dtype=float)
    psq = p * p + 1.0

    phi = (-4.0 * med.k * med.eps0 * (z - config.zeta0)
           + med.eps0 * np.asarray(phase_advance(med, alpha, t)))
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(phi)
    omega_a = 2.0 * med.eps0 * e2a * sech / np.sqrt(psq)
    omega_b = (-2.0 * med.eps0 * p * e2a * np.tanh(phi) / psq
               + (2.0 * dp - med.gamma * p) / psq)
    lam = 2.0 * np.sqrt(med.eps0 ** 2 + med.delta ** 2)
    psi3_abs = omega_a * np.exp(-np.asarray(a)) / lam

    scalar = t.ndim == 0 and z.ndim == 0
    if scalar:
        return SolitonFieldSample(float(omega_a), float(omega_b),
                                  float(psi3_abs), float(phi), float(a))
    return SolitonFieldSample(omega_a, omega_b, psi3_abs, phi,
                              np.broadcast_to(a, phi.shape))


def soliton_atoms(config: SolitonConfig, alpha: AlphaTrajectory, tau, zeta):
    """Atomic amplitudes consistent with the closed-form fields (on resonance).

    Returns (psi1, psi2, psi3) in the gauge where the ground-state amplitude
    tends to +1 ahead of the pulse, matching the medium's prepared state.
    The total population equals e^{2 alpha}.  Off resonance the relative
    field/atom phases are not fixed by the modulus relation, so delta != 0
    is rejected.
    """
    med = config.medium
    if med.delta != 0.0:
        raise InvalidParameterError("consistent atomic state implemented on resonance only")
    t = np.asarray(tau, dtype=float)
    z = np.asarray(zeta, dtype=float)
    a = np.asarray(alpha.alpha(t))
    p = np.asarray(config.schedule(t), dtype=float)
    phi = (-4.0 * med.k * med.eps0 * (z - config.zeta0)
           + med.eps0 * np.asarray(phase_advance(med, alpha, t)))
    ea = np.exp(a)
    with np.errstate(over="ignore"):
        sech = 1.0 / np.cosh(phi)
    root = np.sqrt(p * p + 1.0)
    psi1 = -ea * np.tanh(phi) + 0.0j
    psi2 = -ea * p * sech / root + 0.0j
    psi3 = 1j * ea * sech / root
    return psi1, psi2, psi3


def soliton_center(config: SolitonConfig, alpha: AlphaTrajectory, tau):
    """Position zeta_c(tau) of the soliton maximum, in zeta seconds."""
    adv = phase_advance(config.medium, alpha, tau)
    out = config.zeta0 + np.asarray(adv) / (4.0 * config.medium.k)
    return float(out) if np.ndim(tau) == 0 else out


def group_velocity(config: SolitonConfig, alpha: AlphaTrajectory, tau,
                   c: float = SPEED_OF_LIGHT):
    """Return (v_retarded, v_lab [m/s]).

    v_retarded = d(zeta_c)/d(tau) = e^{2 alpha}/(4k (p^2+1)) is dimensionless;
    the lab velocity follows from the chain rule through tau = t - z/c.
    """
    med = config.medium
    p = np.asarray(config.schedule(tau), dtype=float)
    v_ret = alpha.exp2alpha(tau) / (4.0 * med.k * (p * p + 1.0))
    v_lab = c * v_ret / (1.0 + v_ret)
    if np.ndim(tau) == 0:
        return float(v_ret), float(v_lab)
    return v_ret, v_lab


@dataclass(frozen=True)
class ValidityReport:
    """Spatial validity window of the approximation around the soliton center.

    window_half_width solves |sinh(8 k eps0 dz)| = 16 eps0 e^{2 alpha}/gamma;
    margin compares it to half the soliton FWHM; max_distance is the
    full-stop travel bound 1/(4 k gamma) (infinite at gamma = 0).
    """

    zeta_c: float
    window_half_width: float
    w_s: float
    margin: float
    max_distance_zeta: float
    max_distance_m: float


def validity_report(config: SolitonConfig, alpha: AlphaTrajectory,
                    tau: float, c: float = SPEED_OF_LIGHT) -> ValidityReport:
    """Validity window, FWHM margin, and travel bound at retarded time tau."""
    med = config.medium
    w_s = soliton_fwhm(med)
    zc = float(soliton_center(config, alpha, tau))
    if med.gamma > 0:
        e2a = float(alpha.exp2alpha(tau))
        half = float(np.arcsinh(16.0 * med.eps0 * e2a / med.gamma)
                     / (8.0 * med.k * med.eps0))
        max_zeta = 1.0 / (4.0 * med.k * med.gamma)
    else:
        half = np.inf
        max_zeta = np.inf
    return ValidityReport(
        zeta_c=zc,
        window_half_width=half,
        w_s=w_s,
        margin=half / (0.5 * w_s),
        max_distance_zeta=max_zeta,
        max_distance_m=max_zeta * c,
    )


@dataclass(frozen=True, eq=False)
class LiouvilleData:
    """Separable data entering the general solution of the integrable
    reduction, with explicit derivatives so the evaluation stays exact.

    a_plus must be negative and increasing, a_minus positive and
    non-decreasing; their product must stay below 1 everywhere.
    """

    a_plus: Callable
    da_plus: Callable
    a_minus: Callable
    da_minus: Callable
    k: float
    alpha: AlphaTrajectory | None = None


def liouville_rho(data: LiouvilleData, tau, zeta):
    """Evaluate rho_tilde from the general two-function solution.

    rho_tilde = -1/2 log[(1/k) A+'(zeta) A-'(tau) / (1 - A+ A-)^2].
    Raises :class:`SingularityError` where A+ A- >= 1 or the log argument
    is not positive.
    """
    ap = np.asarray(data.a_plus(zeta), dtype=float)
    am = np.asarray(data.a_minus(tau), dtype=float)
    prod = ap * am
    if np.any(prod >= 1.0):
        raise SingularityError("A+ A- >= 1: general solution is singular there")
    num = (np.asarray(data.da_plus(zeta), dtype=float)
           * np.asarray(data.da_minus(tau), dtype=float) / data.k)
    if np.any(num <= 0.0):
        raise SingularityError("log argument of the general solution must be positive")
    out = -0.5 * np.log(num / (1.0 - prod) ** 2)
    return float(out) if np.ndim(out) == 0 else out


def soliton_liouville_data(config: SolitonConfig,
                           alpha: AlphaTrajectory) -> LiouvilleData:
    """The soliton specialization of the two arbitrary functions.

    A+(zeta) = -exp[-8 eps0 k (zeta - zeta0)] (the zeta0 shift uses the
    constant-rescaling freedom A+ -> cA+, A- -> A-/c to place the center),
    A-(tau) = exp[2 eps0 * advance(tau)].
    """
    med = config.medium
    rate = 8.0 * med.eps0 * med.k

    def a_plus(zeta):
        return -np.exp(-rate * (np.asarray(zeta, dtype=float) - config.zeta0))

    def da_plus(zeta):
        return rate * np.exp(-rate * (np.asarray(zeta, dtype=float) - config.zeta0))

    def a_minus(tau):
        adv = np.asarray(phase_advance(med, alpha, tau))
        return np.exp(2.0 * med.eps0 * adv)

    def da_minus(tau):
        p = np.asarray(config.schedule(tau), dtype=float)
        return (2.0 * med.eps0 * alpha.exp2alpha(tau) / (p * p + 1.0)
                * a_minus(tau))

    return LiouvilleData(a_plus=a_plus, da_plus=da_plus, a_minus=a_minus,
                         da_minus=da_minus, k=med.k, alpha=alpha)


def phase3_quadrature(taus, psi3_abs_sq, omega_a_abs_sq, dphi_a_dzeta,
                      omega_b_abs_sq, dphi_b_dzeta, medium: MediumParams,
                      phi3_0: float = 0.0) -> np.ndarray:
    """Cumulatively integrate the excited-state phase equation on a tau grid.

    d(phi3)/d(tau) = -delta + (|Oa|^2 d(phi_a)/d(zeta)
                               + |Ob|^2 d(phi_b)/d(zeta)) / (2 nu0 |psi3|^2)

    All field inputs are arrays sampled on ``taus`` at a fixed zeta.  A node
    with |psi3|^2 = 0 makes the right-hand side undefined and raises
    :class:`SingularityError` naming the offending index.
    """
    t = np.asarray(taus, dtype=float)
    p3 = np.asarray(psi3_abs_sq, dtype=float)
    if t.ndim != 1 or t.size < 2 or not np.all(np.diff(t) > 0):
        raise InvalidParameterError("taus must be strictly increasing, length >= 2")
    if np.any(p3 <= 0.0):
        bad = int(np.argmax(p3 <= 0.0))
        raise SingularityError(
            f"|psi3|^2 vanishes at tau index {bad} (tau = {t[bad]:g}); the "
            "phase equation divides by it")
    oa2 = np.asarray(omega_a_abs_sq, dtype=float)
    ob2 = np.asarray(omega_b_abs_sq, dtype=float)
    sa = np.asarray(dphi_a_dzeta, dtype=float)
    sb = np.asarray(dphi_b_dzeta, dtype=float)
    rhs = -medium.delta + (oa2 * sa + ob2 * sb) / (2.0 * medium.nu0 * p3)
    return phi3_0 + cumulative_simpson(rhs, x=t, initial=0.0)
