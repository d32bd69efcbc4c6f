"""Direct integration of the exact field-atom system on a (zeta, tau) grid.

The fields obey first-order propagation equations in zeta driven by the
atomic coherences; the amplitudes obey a linear non-Hermitian Schrodinger
equation in tau driven by the local fields.  Atoms are initialized at
tau = 0 for every zeta, fields are prescribed at zeta = 0 for every tau,
and the solution is marched in zeta with a Heun predictor-corrector wrapped
around per-column 4th-order tau sweeps.  This module is the ground-truth
oracle for the closed-form soliton and hosts the residual diagnostics.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ._kernels import sweep_column
from .errors import (DivergedError, DomainError, InvalidParameterError,
                     NumericsError)
from .params import MediumParams, SolitonConfig
from .soliton import (AlphaTrajectory, soliton_center, soliton_fwhm,
                      soliton_fields, validity_report)


@dataclass(frozen=True)
class AtomState:
    """Amplitudes of one atom; populations sum to 1 before relaxation acts."""

    psi1: complex
    psi2: complex
    psi3: complex

    @property
    def norm(self) -> float:
        return abs(self.psi1) ** 2 + abs(self.psi2) ** 2 + abs(self.psi3) ** 2


@dataclass(frozen=True, eq=False)
class FieldGrid:
    """Complex Rabi fields on the (zeta, tau) lattice, axis 0 = zeta."""

    zetas: np.ndarray
    taus: np.ndarray
    omega_a: np.ndarray
    omega_b: np.ndarray

    @property
    def dzeta(self) -> float:
        return float(self.zetas[1] - self.zetas[0])

    @property
    def dtau(self) -> float:
        return float(self.taus[1] - self.taus[0])


@dataclass(frozen=True, eq=False)
class AtomGrid:
    """Atomic amplitudes on the same lattice as :class:`FieldGrid`."""

    zetas: np.ndarray
    taus: np.ndarray
    psi1: np.ndarray
    psi2: np.ndarray
    psi3: np.ndarray

    def norm(self) -> np.ndarray:
        return (np.abs(self.psi1) ** 2 + np.abs(self.psi2) ** 2
                + np.abs(self.psi3) ** 2)

    def at(self, zeta_index: int, tau_index: int) -> AtomState:
        return AtomState(complex(self.psi1[zeta_index, tau_index]),
                         complex(self.psi2[zeta_index, tau_index]),
                         complex(self.psi3[zeta_index, tau_index]))


def ground_state_atoms(zetas: np.ndarray):
    """Default initial condition: every atom in the lower dark state."""
    n = np.shape(zetas)[0]
    return (np.ones(n, dtype=complex), np.zeros(n, dtype=complex),
            np.zeros(n, dtype=complex))


@dataclass(frozen=True, eq=False)
class SimulationPlan:
    """Grid, boundary data, and scheme controls for one simulation.

    boundary_a/boundary_b map a tau array to the complex fields at zeta = 0;
    initial_atoms maps a zeta array to (psi1, psi2, psi3) at tau = 0 and
    defaults to the ground state.  A zeta step whose relative field change
    exceeds ``max_step_change`` is redone as two half steps (recursively, up
    to ``max_bisections`` levels); fields growing past ``max_growth`` times
    the boundary peak abort the run.
    """

    medium: MediumParams
    n_zeta: int
    n_tau: int
    zeta_max: float
    tau_max: float
    boundary_a: Callable
    boundary_b: Callable
    initial_atoms: Callable | None = None
    max_growth: float = 10.0
    max_step_change: float = 0.05
    max_bisections: int = 8

    def __post_init__(self):
        if self.n_zeta < 8 or self.n_tau < 8:
            raise InvalidParameterError("grid sizes must be at least 8 nodes per axis")
        if not (self.zeta_max > 0 and self.tau_max > 0):
            raise InvalidParameterError("grid extents must be positive")
        if not (self.max_growth > 0 and self.max_step_change > 0):
            raise InvalidParameterError("scheme guards must be positive")
        if self.max_bisections < 0:
            raise InvalidParameterError("max_bisections must be non-negative")


class _Marcher:
    """Owns the per-run state of the zeta march."""

    def __init__(self, plan: SimulationPlan, taus: np.ndarray,
                 boundary_peak: float):
        self.plan = plan
        self.taus = taus
        self.dtau = float(taus[1] - taus[0])
        self.boundary_peak = boundary_peak
        self.nu0 = plan.medium.nu0
        self.delta = plan.medium.delta
        self.gamma = plan.medium.gamma
        init = plan.initial_atoms or ground_state_atoms
        self._initial_atoms = init

    def atoms_at(self, zeta: float, omega_a: np.ndarray, omega_b: np.ndarray):
        """tau sweep of one column; returns amplitudes and field sources."""
        n = self.taus.shape[0]
        p1 = np.empty(n, dtype=complex)
        p2 = np.empty(n, dtype=complex)
        p3 = np.empty(n, dtype=complex)
        i1, i2, i3 = self._initial_atoms(np.asarray([zeta]))
        sweep_column(complex(i1[0]), complex(i2[0]), complex(i3[0]),
                     omega_a, omega_b, self.dtau, self.delta, self.gamma,
                     p1, p2, p3)
        src_a = 1j * self.nu0 * p3 * np.conj(p1)
        src_b = 1j * self.nu0 * p3 * np.conj(p2)
        return p1, p2, p3, src_a, src_b

    def _guard(self, a: np.ndarray, b: np.ndarray, zeta: float) -> None:
        """NaN -> numeric error; growth past the envelope -> diverged error."""
        if np.any(np.isnan(a.view(float))) or np.any(np.isnan(b.view(float))):
            raise NumericsError(f"non-finite field at zeta = {zeta:g}")
        if self.boundary_peak > 0:
            mag = np.maximum(np.abs(a), np.abs(b))
            peak = float(np.max(mag))
            if peak > self.plan.max_growth * self.boundary_peak:
                worst = int(np.argmax(mag))
                raise DivergedError(
                    f"field magnitude {peak:g} exceeded {self.plan.max_growth:g}x "
                    f"the boundary peak at zeta = {zeta:g}, tau index {worst}",
                    zeta=zeta, tau_index=worst)

    def _troubled(self, a: np.ndarray, b: np.ndarray) -> bool:
        if np.any(np.isnan(a.view(float))) or np.any(np.isnan(b.view(float))):
            return True
        if self.boundary_peak > 0:
            peak = max(float(np.max(np.abs(a))), float(np.max(np.abs(b))))
            return peak > self.plan.max_growth * self.boundary_peak
        return False

    def advance(self, zeta: float, dzeta: float, a0, b0, sa0, sb0, depth: int):
        """One Heun step zeta -> zeta + dzeta, bisecting when too violent.

        Bisection gets a chance to rescue overshooting steps; the hard
        guards only fire once the recursion depth is exhausted.
        """
        can_split = depth < self.plan.max_bisections

        def bisect():
            a_half, b_half = self.advance(zeta, 0.5 * dzeta, a0, b0,
                                          sa0, sb0, depth + 1)
            _, _, _, sah, sbh = self.atoms_at(zeta + 0.5 * dzeta,
                                              a_half, b_half)
            return self.advance(zeta + 0.5 * dzeta, 0.5 * dzeta,
                                a_half, b_half, sah, sbh, depth + 1)

        with np.errstate(over="ignore", invalid="ignore"):
            a_pred = a0 + dzeta * sa0
            b_pred = b0 + dzeta * sb0
        if self._troubled(a_pred, b_pred):
            if can_split:
                return bisect()
            self._guard(a_pred, b_pred, zeta + dzeta)

        _, _, _, sa1, sb1 = self.atoms_at(zeta + dzeta, a_pred, b_pred)
        with np.errstate(over="ignore", invalid="ignore"):
            a1 = a0 + 0.5 * dzeta * (sa0 + sa1)
            b1 = b0 + 0.5 * dzeta * (sb0 + sb1)
        if can_split:
            if self._troubled(a1, b1):
                return bisect()
            if self.boundary_peak > 0:
                change = max(np.max(np.abs(a1 - a0)), np.max(np.abs(b1 - b0)))
                if change > self.plan.max_step_change * self.boundary_peak:
                    return bisect()
        self._guard(a1, b1, zeta + dzeta)
        return a1, b1


def simulate(plan: SimulationPlan) -> tuple[FieldGrid, AtomGrid]:
    """Run the marching scheme; returns the completed field and atom grids.

    The stored atoms of every column are integrated with that column's final
    (corrected) fields, so the pair of grids is mutually consistent.  The
    boundary column of the field grid equals the prescribed boundary samples
    exactly, and identical plans produce bit-identical grids.
    """
    zetas = np.linspace(0.0, plan.zeta_max, plan.n_zeta)
    taus = np.linspace(0.0, plan.tau_max, plan.n_tau)
    ba = np.asarray(plan.boundary_a(taus), dtype=complex)
    bb = np.asarray(plan.boundary_b(taus), dtype=complex)
    if ba.shape != taus.shape or bb.shape != taus.shape:
        raise InvalidParameterError("boundary functions must return one value per tau node")
    if not (np.all(np.isfinite(ba.view(float))) and np.all(np.isfinite(bb.view(float)))):
        raise NumericsError("boundary fields must be finite")

    boundary_peak = float(max(np.max(np.abs(ba)), np.max(np.abs(bb))))
    marcher = _Marcher(plan, taus, boundary_peak)

    shape = (plan.n_zeta, plan.n_tau)
    oa = np.empty(shape, dtype=complex)
    ob = np.empty(shape, dtype=complex)
    g1 = np.empty(shape, dtype=complex)
    g2 = np.empty(shape, dtype=complex)
    g3 = np.empty(shape, dtype=complex)

    dzeta = float(zetas[1] - zetas[0])
    cur_a = ba.copy()
    cur_b = bb.copy()
    for j in range(plan.n_zeta):
        p1, p2, p3, sa, sb = marcher.atoms_at(float(zetas[j]), cur_a, cur_b)
        oa[j] = cur_a
        ob[j] = cur_b
        g1[j] = p1
        g2[j] = p2
        g3[j] = p3
        if j == plan.n_zeta - 1:
            break
        cur_a, cur_b = marcher.advance(float(zetas[j]), dzeta,
                                       cur_a, cur_b, sa, sb, depth=0)

    for name, arr in (("omega_a", oa), ("omega_b", ob)):
        if not np.all(np.isfinite(arr.view(float))):
            raise NumericsError(f"non-finite values in {name} after the run")
    fields = FieldGrid(zetas=zetas, taus=taus, omega_a=oa, omega_b=ob)
    atoms = AtomGrid(zetas=zetas, taus=taus, psi1=g1, psi2=g2, psi3=g3)
    return fields, atoms


@dataclass(frozen=True)
class NormResidual:
    """Worst violation of d(norm)/d(tau) = -gamma |psi3|^2 on the grid."""

    max_abs: float
    zeta_index: int
    tau_index: int


def norm_decay_residual(atoms: AtomGrid, gamma: float,
                        dtau: float | None = None) -> NormResidual:
    """Central-difference residual of the exact population-loss law."""
    if dtau is None:
        dtau = float(atoms.taus[1] - atoms.taus[0])
    nrm = atoms.norm()
    res = ((nrm[:, 2:] - nrm[:, :-2]) / (2.0 * dtau)
           + gamma * np.abs(atoms.psi3[:, 1:-1]) ** 2)
    flat = int(np.argmax(np.abs(res)))
    jz, it = np.unravel_index(flat, res.shape)
    return NormResidual(max_abs=float(np.abs(res[jz, it])),
                        zeta_index=int(jz), tau_index=int(it) + 1)


@dataclass(frozen=True, eq=False)
class TransformedResiduals:
    """Finite-difference residuals of the transformed field-atom system.

    r1/r2 are the wave-equation residuals for the probe and control channels
    (complex, NaN where the excited amplitude is below the mask floor); r3 is
    the population-flux law residual (real, defined everywhere).  All live on
    the interior nodes, shape (n_zeta - 2, n_tau - 2).
    """

    r1: np.ndarray
    r2: np.ndarray
    r3: np.ndarray
    mask: np.ndarray
    masked_fraction: float
    scale1: float
    scale2: float
    scale3: float

    def _scaled(self, res: np.ndarray, scale: float, masked: bool) -> float:
        vals = np.abs(res[self.mask]) if masked else np.abs(res)
        if vals.size == 0:
            return 0.0
        top = float(np.max(vals))
        if scale == 0.0:
            return 0.0 if top == 0.0 else np.inf
        return top / scale

    @property
    def max_scaled_r1(self) -> float:
        return self._scaled(self.r1, self.scale1, masked=True)

    @property
    def max_scaled_r2(self) -> float:
        return self._scaled(self.r2, self.scale2, masked=True)

    @property
    def max_scaled_r3(self) -> float:
        return self._scaled(self.r3, self.scale3, masked=False)


def transformed_residuals(fields: FieldGrid, atoms: AtomGrid,
                          medium: MediumParams,
                          psi3_floor: float = 1e-12) -> TransformedResiduals:
    """Central-difference residuals of the three transformed equations.

    The two wave equations divide by the excited amplitude; nodes where any
    |psi3| sample used by the stencil is below ``psi3_floor`` are masked
    (reported, not hidden).  For a converged simulation every residual tends
    to zero at the scheme's order on the unmasked nodes.
    """
    if fields.omega_a.shape != atoms.psi3.shape:
        raise InvalidParameterError("field and atom grids must share one shape")
    dz = fields.dzeta
    dt = fields.dtau
    oa = fields.omega_a
    obf = fields.omega_b
    p3 = atoms.psi3

    ok = np.abs(p3) >= psi3_floor
    mask = ok[1:-1, :-2] & ok[1:-1, 1:-1] & ok[1:-1, 2:]

    with np.errstate(divide="ignore", invalid="ignore"):
        ga = (oa[2:, :] - oa[:-2, :]) / (2.0 * dz) / p3[1:-1, :]
        gb = (obf[2:, :] - obf[:-2, :]) / (2.0 * dz) / p3[1:-1, :]
        conj_mid = np.conj(p3[1:-1, 1:-1])
        r1 = ((ga[:, 2:] - ga[:, :-2]) / (2.0 * dt) / conj_mid
              - 0.5 * medium.nu0 * oa[1:-1, 1:-1])
        r2 = ((gb[:, 2:] - gb[:, :-2]) / (2.0 * dt) / conj_mid
              - 0.5 * medium.nu0 * obf[1:-1, 1:-1])
    r1 = np.where(mask, r1, np.nan + 0j)
    r2 = np.where(mask, r2, np.nan + 0j)

    pop = np.abs(p3) ** 2
    flux = np.abs(oa) ** 2 + np.abs(obf) ** 2
    dpop = (pop[1:-1, 2:] - pop[1:-1, :-2]) / (2.0 * dt)
    dflux = (flux[2:, 1:-1] - flux[:-2, 1:-1]) / (2.0 * dz) / (2.0 * medium.nu0)
    r3 = dpop + medium.gamma * pop[1:-1, 1:-1] + dflux

    scale1 = float(0.5 * medium.nu0 * np.max(np.abs(oa)))
    scale2 = float(0.5 * medium.nu0 * np.max(np.abs(obf)))
    scale3 = float(max(np.max(np.abs(dpop)), np.max(np.abs(dflux)),
                       medium.gamma * np.max(pop), 0.0))
    return TransformedResiduals(
        r1=r1, r2=r2, r3=r3, mask=mask,
        masked_fraction=float(1.0 - np.count_nonzero(mask) / mask.size),
        scale1=scale1, scale2=scale2, scale3=scale3)


@dataclass(frozen=True)
class ErrorReport:
    """Relative deviation of |Omega_a| from the closed form.

    Maximum errors are normalized by the peak analytic amplitude over the
    compared region; L2 errors by the analytic L2 norm of the same region.
    The in/out split follows the moving window |zeta - zeta_c(tau)| <= w_s/2.
    """

    linf_in: float
    l2_in: float
    linf_out: float
    linf_global: float
    l2_global: float
    ref_peak: float
    in_nodes: int
    out_nodes: int
    rows: int
    margin_first: float
    margin_last: float


def compare_to_analytic(fields: FieldGrid, config: SolitonConfig,
                        alpha: AlphaTrajectory,
                        tau_max: float | None = None) -> ErrorReport:
    """Compare a simulated probe field against the closed-form soliton.

    Only tau rows up to ``tau_max`` (defaulting to the full grid) enter the
    comparison; the alpha trajectory must cover them.
    """
    taus = fields.taus
    if tau_max is not None:
        rows = int(np.searchsorted(taus, tau_max, side="right"))
        if rows < 2:
            raise DomainError("tau_max leaves fewer than two rows to compare")
        taus = taus[:rows]
    if alpha.tau_max < taus[-1] * (1.0 - 1e-12):
        raise DomainError(
            f"alpha trajectory covers tau <= {alpha.tau_max:g} but the grid "
            f"needs {taus[-1]:g}")

    sample = soliton_fields(config, alpha, taus[None, :], fields.zetas[:, None])
    ref = np.abs(sample.omega_a)
    num = np.abs(fields.omega_a[:, :taus.size])
    diff = np.abs(num - ref)
    ref_peak = float(np.max(ref))

    zc = soliton_center(config, alpha, taus)
    half = 0.5 * soliton_fwhm(config.medium)
    window = np.abs(fields.zetas[:, None] - zc[None, :]) <= half
    n_in = int(np.count_nonzero(window))
    n_out = int(window.size - n_in)

    def _linf(sel) -> float:
        return float(np.max(diff[sel]) / ref_peak) if np.count_nonzero(sel) else np.nan

    def _l2(sel) -> float:
        if not np.count_nonzero(sel):
            return np.nan
        denom = float(np.linalg.norm(ref[sel]))
        return float(np.linalg.norm(diff[sel]) / denom) if denom > 0 else np.nan

    every = np.ones_like(window)
    rep_first = validity_report(config, alpha, float(taus[0]))
    rep_last = validity_report(config, alpha, float(taus[-1]))
    return ErrorReport(
        linf_in=_linf(window), l2_in=_l2(window), linf_out=_linf(~window),
        linf_global=_linf(every), l2_global=_l2(every), ref_peak=ref_peak,
        in_nodes=n_in, out_nodes=n_out, rows=int(taus.size),
        margin_first=rep_first.margin, margin_last=rep_last.margin)
