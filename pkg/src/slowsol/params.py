"""Medium constants, retarded coordinates, and control-field schedules.

Units are SI throughout: the retarded coordinates zeta = z/c and
tau = t - z/c are both carried in seconds, Rabi frequencies in rad/s,
and the coupling constant nu0 in 1/s^2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import PchipInterpolator

from .errors import DomainError, InvalidParameterError

SPEED_OF_LIGHT = 299_792_458.0  # m/s

#: Heuristic lower bound on eps0/gamma below which the closed-form soliton
#: stops being trustworthy across its own half width.
VALIDITY_RATIO = 0.7


class ValidityWarning(UserWarning):
    """Parameters lie outside the soliton approximation's validity heuristic."""


@dataclass(frozen=True)
class MediumParams:
    """Constants of the Lambda medium and the soliton's spectral point.

    Attributes
    ----------
    nu0 : float
        Collective atom-field coupling constant [1/s^2].
    gamma : float
        Spontaneous-emission rate of the excited level [1/s].
    delta : float
        One-photon detuning [rad/s].
    eps0 : float
        Spectral parameter; the spectral point is purely imaginary,
        i*eps0 [rad/s].
    """

    nu0: float
    gamma: float
    delta: float
    eps0: float

    def __post_init__(self):
        if not (np.isfinite(self.nu0) and self.nu0 > 0):
            raise InvalidParameterError(f"nu0 must be positive, got {self.nu0!r}")
        if not (np.isfinite(self.eps0) and self.eps0 > 0):
            raise InvalidParameterError(f"eps0 must be positive, got {self.eps0!r}")
        if not (np.isfinite(self.gamma) and self.gamma >= 0):
            raise InvalidParameterError(f"gamma must be non-negative, got {self.gamma!r}")
        if not np.isfinite(self.delta):
            raise InvalidParameterError(f"delta must be finite, got {self.delta!r}")

    @property
    def k(self) -> float:
        """Dimensionless coupling nu0 / (8 (eps0^2 + delta^2)), never cached."""
        return self.nu0 / (8.0 * (self.eps0 ** 2 + self.delta ** 2))

    @property
    def validity_ok(self) -> bool:
        """True when eps0 >= 0.7 gamma (approximation-validity heuristic)."""
        return self.eps0 >= VALIDITY_RATIO * self.gamma


def make_medium_params(nu0: float, gamma: float, delta: float,
                       eps0: float) -> MediumParams:
    """Build MediumParams, warning when eps0 < 0.7 gamma.

    The bound guards the closed-form approximation, not the arithmetic, so
    violating it emits :class:`ValidityWarning` instead of raising.
    """
    params = MediumParams(nu0=nu0, gamma=gamma, delta=delta, eps0=eps0)
    if not params.validity_ok:
        warnings.warn(
            f"eps0 = {eps0:g} < 0.7 * gamma = {VALIDITY_RATIO * gamma:g}; the "
            "closed-form soliton is unreliable over its own half width",
            ValidityWarning,
            stacklevel=2,
        )
    return params


@dataclass(frozen=True)
class RetardedCoords:
    """Characteristic coordinates zeta = z/c, tau = t - z/c, both in seconds."""

    zeta: float
    tau: float


def to_retarded(z: float, t: float, c: float = SPEED_OF_LIGHT) -> RetardedCoords:
    """Map lab coordinates (z [m], t [s]) to retarded coordinates."""
    if not c > 0:
        raise InvalidParameterError(f"speed of light must be positive, got {c!r}")
    return RetardedCoords(zeta=z / c, tau=t - z / c)


def from_retarded(coords: RetardedCoords, c: float = SPEED_OF_LIGHT) -> tuple[float, float]:
    """Inverse of :func:`to_retarded`; returns (z [m], t [s])."""
    if not c > 0:
        raise InvalidParameterError(f"speed of light must be positive, got {c!r}")
    z = coords.zeta * c
    return z, coords.tau + coords.zeta


@dataclass(frozen=True, eq=False)
class ControlSchedule:
    """Control-field profile p(tau) with derivative access.

    Three kinds are supported:

    * ``constant``: p(tau) = p0 everywhere, zero derivative.
    * ``tabulated``: monotone cubic interpolation of (taus, values) nodes;
      evaluation outside the node range raises :class:`DomainError`.
    * ``smooth-ramp``: a C^1 cubic ramp from p_start to p_end over
      [tau_start, tau_end], saturated (zero derivative) beyond either end.
    """

    kind: str
    p0: float | None = None
    taus: np.ndarray | None = None
    values: np.ndarray | None = None
    p_start: float | None = None
    p_end: float | None = None
    tau_start: float | None = None
    tau_end: float | None = None

    @classmethod
    def constant(cls, p0: float) -> "ControlSchedule":
        if not np.isfinite(p0):
            raise InvalidParameterError(f"constant schedule needs finite p0, got {p0!r}")
        return cls(kind="constant", p0=float(p0))

    @classmethod
    def tabulated(cls, taus, values) -> "ControlSchedule":
        t = np.asarray(taus, dtype=float)
        v = np.asarray(values, dtype=float)
        if t.ndim != 1 or t.shape != v.shape or t.size < 2:
            raise InvalidParameterError("tabulated schedule needs matching 1-d arrays of length >= 2")
        if not np.all(np.diff(t) > 0):
            raise InvalidParameterError("tabulated taus must be strictly increasing with no duplicates")
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(v))):
            raise InvalidParameterError("tabulated schedule nodes must be finite")
        return cls(kind="tabulated", taus=t, values=v)

    @classmethod
    def smooth_ramp(cls, p_start: float, p_end: float, tau_start: float,
                    tau_end: float) -> "ControlSchedule":
        if not tau_end > tau_start:
            raise InvalidParameterError("smooth-ramp needs tau_end > tau_start")
        if not (np.isfinite(p_start) and np.isfinite(p_end)):
            raise InvalidParameterError("smooth-ramp endpoints must be finite")
        return cls(kind="smooth-ramp", p_start=float(p_start), p_end=float(p_end),
                   tau_start=float(tau_start), tau_end=float(tau_end))

    @cached_property
    def _interp(self) -> PchipInterpolator:
        return PchipInterpolator(self.taus, self.values)

    @cached_property
    def _interp_deriv(self):
        return self._interp.derivative()

    @property
    def domain(self) -> tuple[float, float]:
        """(tau_min, tau_max); infinite for constant and smooth-ramp kinds."""
        if self.kind == "tabulated":
            return float(self.taus[0]), float(self.taus[-1])
        return -np.inf, np.inf

    def _check_domain(self, tau: np.ndarray) -> None:
        lo, hi = self.domain
        if np.isinf(lo):
            return
        slack = 1e-12 * max(abs(lo), abs(hi), hi - lo)
        if np.any(tau < lo - slack) or np.any(tau > hi + slack):
            raise DomainError(
                f"tau outside tabulated schedule domain [{lo:g}, {hi:g}]")

    def __call__(self, tau):
        t = np.asarray(tau, dtype=float)
        scalar = t.ndim == 0
        if self.kind == "constant":
            out = np.full_like(t, self.p0, dtype=float)
        elif self.kind == "tabulated":
            self._check_domain(t)
            out = self._interp(np.clip(t, *self.domain))
        else:
            s = np.clip((t - self.tau_start) / (self.tau_end - self.tau_start), 0.0, 1.0)
            out = self.p_start + (self.p_end - self.p_start) * s * s * (3.0 - 2.0 * s)
        return float(out) if scalar else np.asarray(out, dtype=float)

    def derivative(self, tau):
        t = np.asarray(tau, dtype=float)
        scalar = t.ndim == 0
        if self.kind == "constant":
            out = np.zeros_like(t, dtype=float)
        elif self.kind == "tabulated":
            self._check_domain(t)
            out = self._interp_deriv(np.clip(t, *self.domain))
        else:
            width = self.tau_end - self.tau_start
            s = np.clip((t - self.tau_start) / width, 0.0, 1.0)
            out = (self.p_end - self.p_start) * 6.0 * s * (1.0 - s) / width
        return float(out) if scalar else np.asarray(out, dtype=float)

    def to_dict(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "p0": self.p0}
        if self.kind == "tabulated":
            return {"kind": "tabulated", "taus": list(map(float, self.taus)),
                    "values": list(map(float, self.values))}
        return {"kind": "smooth-ramp", "p_start": self.p_start, "p_end": self.p_end,
                "tau_start": self.tau_start, "tau_end": self.tau_end}

    @classmethod
    def from_dict(cls, spec: dict) -> "ControlSchedule":
        kind = spec.get("kind")
        if kind == "constant":
            return cls.constant(spec["p0"])
        if kind == "tabulated":
            return cls.tabulated(spec["taus"], spec["values"])
        if kind == "smooth-ramp":
            return cls.smooth_ramp(spec["p_start"], spec["p_end"],
                                   spec["tau_start"], spec["tau_end"])
        raise InvalidParameterError(f"unknown schedule kind {kind!r}")


def eval_schedule(schedule: ControlSchedule, tau):
    """Return (p(tau), dp/dtau) for scalar or array tau."""
    return schedule(tau), schedule.derivative(tau)


@dataclass(frozen=True)
class SolitonConfig:
    """Everything the closed-form soliton needs: medium, control schedule,
    and the initial center position zeta0 [s] (negative means the soliton
    starts outside the medium)."""

    zeta0: float
    medium: MediumParams
    schedule: ControlSchedule
