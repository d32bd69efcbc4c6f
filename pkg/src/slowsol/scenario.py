"""Scenario configuration, the experiment-reproduction pipeline, and emission.

A scenario either carries explicit medium parameters plus a control schedule,
or experiment observables (background Rabi frequency, pulse width, relaxation
rate) together with a distance anchor that pins the one constant the theory
leaves free.  Running a scenario calibrates if needed, evaluates the analytic
trajectory, integrates the exact system, compares the two, and writes
deterministic CSV/JSON artifacts.
"""

from __future__ import annotations

import copy
import json
import math
import os
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .calibration import ExperimentInputs, calibrate
from .errors import ConfigError, InvalidParameterError
from .mb import (AtomGrid, FieldGrid, SimulationPlan, compare_to_analytic,
                 simulate)
from .params import (SPEED_OF_LIGHT, ControlSchedule, MediumParams,
                     SolitonConfig, make_medium_params)
from .soliton import (AlphaTrajectory, default_alpha_steps, group_velocity,
                      integrate_alpha, soliton_atoms, soliton_center,
                      soliton_fields, soliton_fwhm)

#: Environment variable overriding the default output directory.
OUTPUT_DIR_ENV = "SLOWSOL_OUT"

TRAJECTORY_COLUMNS = ("tau_s", "zeta_c_s", "z_c_m", "v_lab_mps",
                      "peak_omega_a", "decay_ratio", "validity_margin")
SNAPSHOT_COLUMNS = ("tau_s", "zeta_s", "z_m", "abs_omega_a", "arg_omega_a",
                    "abs_omega_b", "arg_omega_b", "abs_psi3")

_GRID_DEFAULTS = {"n_zeta": 384, "n_tau": 3072, "zeta_max_ws": 5.0}
_EMIT_DEFAULTS = {"snapshot_taus_s": [], "trajectory_points": 257, "grids": True}


def _fmt(x) -> str:
    """Shortest round-trip decimal form; drives byte-identical CSV output."""
    v = float(x)
    if math.isnan(v):
        return "nan"
    if math.isinf(v):
        return "inf" if v > 0 else "-inf"
    return repr(v)


def _jsonable(x):
    """Coerce report values to strict JSON (inf/nan become null)."""
    if isinstance(x, dict):
        return {k: _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else None
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    return x


@dataclass(frozen=True, eq=False)
class ScenarioConfig:
    """Validated scenario description (see `from_dict` for the schema)."""

    name: str
    medium: dict | None
    experiment: dict | None
    schedule: dict | None
    zeta0_ws: float | None
    zeta0_s: float | None
    grid: dict
    initial_atoms: str
    scheme: dict
    run_simulation: bool
    ratio_tau_s: float
    distance_tau_s: float
    compare_tau_max_s: float | None
    emit: dict
    output_dir: str | None

    @classmethod
    def from_dict(cls, raw: dict) -> "ScenarioConfig":
        """Parse and normalize a configuration mapping.

        Exactly one of ``medium`` (explicit {nu0, gamma, delta, eps0} plus a
        ``schedule``) or ``experiment`` ({omega0, tp, gamma} plus
        ``distance_anchor`` {distance_m, tau_s}) must be present.
        """
        if not isinstance(raw, dict):
            raise ConfigError("scenario config must be a JSON object")
        known = {"name", "medium", "experiment", "schedule", "zeta0_ws",
                 "zeta0_s", "grid", "initial_atoms", "simulate", "scheme",
                 "ratio_tau_s", "distance_tau_s", "compare_tau_max_s",
                 "emit", "output_dir"}
        unknown = set(raw) - known
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")

        name = raw.get("name")
        if not isinstance(name, str) or not name:
            raise ConfigError("config needs a non-empty 'name'")

        medium = raw.get("medium")
        experiment = raw.get("experiment")
        if (medium is None) == (experiment is None):
            raise ConfigError(
                "exactly one of 'medium' and 'experiment' must be present")
        if medium is not None:
            missing = {"nu0", "gamma", "delta", "eps0"} - set(medium)
            if missing:
                raise ConfigError(f"medium is missing keys: {sorted(missing)}")
            if raw.get("schedule") is None:
                raise ConfigError("explicit-medium configs need a 'schedule'")
        else:
            missing = {"omega0", "tp", "gamma"} - set(experiment)
            if missing:
                raise ConfigError(f"experiment is missing keys: {sorted(missing)}")
            anchor = experiment.get("distance_anchor")
            if (not isinstance(anchor, dict)
                    or {"distance_m", "tau_s"} - set(anchor)):
                raise ConfigError(
                    "experiment configs need distance_anchor {distance_m, tau_s}")

        if raw.get("zeta0_ws") is not None and raw.get("zeta0_s") is not None:
            raise ConfigError("give zeta0_ws or zeta0_s, not both")
        zeta0_ws = raw.get("zeta0_ws")
        zeta0_s = raw.get("zeta0_s")
        if zeta0_ws is None and zeta0_s is None:
            zeta0_ws = -3.0

        grid = dict(_GRID_DEFAULTS)
        grid.update(raw.get("grid") or {})
        if "zeta_max_ws" in grid and "zeta_max_s" in grid:
            raise ConfigError("give grid.zeta_max_ws or grid.zeta_max_s, not both")

        ratio_tau = raw.get("ratio_tau_s")
        distance_tau = raw.get("distance_tau_s")
        if experiment is not None:
            anchor_tau = experiment["distance_anchor"]["tau_s"]
            distance_tau = anchor_tau if distance_tau is None else distance_tau
        if ratio_tau is None or distance_tau is None:
            raise ConfigError("configs need ratio_tau_s and distance_tau_s")

        if "tau_max_s" not in grid:
            needed = [ratio_tau, distance_tau, raw.get("compare_tau_max_s") or 0.0]
            needed += list((raw.get("emit") or {}).get("snapshot_taus_s", []))
            grid["tau_max_s"] = 1.02 * max(needed)
        for tau in (ratio_tau, distance_tau):
            if tau > grid["tau_max_s"]:
                raise ConfigError("ratio/distance times must lie within grid.tau_max_s")

        initial_atoms = raw.get("initial_atoms", "ground")
        if initial_atoms not in ("ground", "soliton"):
            raise ConfigError("initial_atoms must be 'ground' or 'soliton'")

        scheme = raw.get("scheme") or {}
        bad = set(scheme) - {"max_growth", "max_step_change", "max_bisections"}
        if bad:
            raise ConfigError(f"unknown scheme keys: {sorted(bad)}")

        emit = dict(_EMIT_DEFAULTS)
        emit.update(raw.get("emit") or {})

        return cls(
            name=name,
            medium=copy.deepcopy(medium),
            experiment=copy.deepcopy(experiment),
            schedule=copy.deepcopy(raw.get("schedule")),
            zeta0_ws=zeta0_ws,
            zeta0_s=zeta0_s,
            grid=grid,
            initial_atoms=initial_atoms,
            scheme=copy.deepcopy(scheme),
            run_simulation=bool(raw.get("simulate", True)),
            ratio_tau_s=float(ratio_tau),
            distance_tau_s=float(distance_tau),
            compare_tau_max_s=raw.get("compare_tau_max_s"),
            emit=emit,
            output_dir=raw.get("output_dir"),
        )

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "medium": copy.deepcopy(self.medium),
            "experiment": copy.deepcopy(self.experiment),
            "schedule": copy.deepcopy(self.schedule),
            "zeta0_ws": self.zeta0_ws,
            "zeta0_s": self.zeta0_s,
            "grid": copy.deepcopy(self.grid),
            "initial_atoms": self.initial_atoms,
            "scheme": copy.deepcopy(self.scheme),
            "simulate": self.run_simulation,
            "ratio_tau_s": self.ratio_tau_s,
            "distance_tau_s": self.distance_tau_s,
            "compare_tau_max_s": self.compare_tau_max_s,
            "emit": copy.deepcopy(self.emit),
            "output_dir": self.output_dir,
        }
        return out

    @classmethod
    def from_json(cls, path: str | Path) -> "ScenarioConfig":
        with open(path, encoding="utf-8") as fh:
            try:
                return cls.from_dict(json.load(fh))
            except json.JSONDecodeError as exc:
                raise ConfigError(f"invalid JSON in {path}: {exc}") from exc


@dataclass(frozen=True)
class Nu0Calibration:
    """Coupling constant pinned by a traveled-distance anchor."""

    nu0: float
    k: float
    exp2alpha_anchor: float
    mean_velocity_mps: float


def calibrate_nu0(eps0: float, gamma: float, schedule: ControlSchedule,
                  distance_m: float, tau_s: float, delta: float = 0.0,
                  c: float = SPEED_OF_LIGHT) -> Nu0Calibration:
    """Solve the center-trajectory closed form for the coupling constant.

    Requires gamma > 0 (an undamped soliton never stops, so a distance at a
    time pins the velocity, not the coupling, and the inversion below would
    divide by zero).  Also returns the implied mean lab velocity over
    [0, tau_s].
    """
    if not gamma > 0:
        raise InvalidParameterError("distance anchoring requires gamma > 0")
    if not (distance_m > 0 and tau_s > 0):
        raise InvalidParameterError("distance anchor must be positive")
    probe = MediumParams(nu0=1.0, gamma=gamma, delta=delta, eps0=eps0)
    alpha = integrate_alpha(probe, schedule, tau_s,
                            default_alpha_steps(probe, schedule, tau_s))
    e2a = float(alpha.exp2alpha(tau_s))
    if e2a >= 1.0:
        raise InvalidParameterError("relaxation leaves the amplitude undamped; no k solves the anchor")
    k = c * (1.0 - e2a) / (4.0 * gamma * distance_m)
    nu0 = 8.0 * k * (eps0 ** 2 + delta ** 2)
    mean_v = distance_m / (tau_s + distance_m / c)
    return Nu0Calibration(nu0=nu0, k=k, exp2alpha_anchor=e2a,
                          mean_velocity_mps=mean_v)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Analytic center trajectory sampled on a tau grid."""

    taus: np.ndarray
    zeta_c: np.ndarray
    z_c_m: np.ndarray
    v_lab: np.ndarray
    peak_omega_a: np.ndarray
    decay_ratio: np.ndarray
    margin: np.ndarray


def analytic_trajectory(scfg: SolitonConfig, alpha: AlphaTrajectory,
                        taus: np.ndarray, c: float = SPEED_OF_LIGHT) -> Trajectory:
    """Per-tau peak amplitude, center, lab velocity, decay ratio, margin."""
    med = scfg.medium
    e2a = alpha.exp2alpha(taus)
    p = np.asarray(scfg.schedule(taus), dtype=float)
    zc = soliton_center(scfg, alpha, taus)
    _, v_lab = group_velocity(scfg, alpha, taus, c=c)
    peak = 2.0 * med.eps0 * e2a / np.sqrt(p * p + 1.0)
    if med.gamma > 0:
        half = (np.arcsinh(16.0 * med.eps0 * e2a / med.gamma)
                / (8.0 * med.k * med.eps0))
        margin = half / (0.5 * soliton_fwhm(med))
    else:
        margin = np.full_like(e2a, np.inf)
    return Trajectory(taus=taus, zeta_c=zc, z_c_m=c * zc, v_lab=v_lab,
                      peak_omega_a=peak, decay_ratio=e2a, margin=margin)


def write_csv(path: Path, columns: tuple[str, ...], rows) -> None:
    """UTF-8 CSV with a header row and '.' decimals; deterministic bytes."""
    lines = [",".join(columns)]
    for row in rows:
        lines.append(",".join(_fmt(v) for v in row))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def emit_trajectory(traj: Trajectory, path: Path) -> None:
    rows = zip(traj.taus, traj.zeta_c, traj.z_c_m, traj.v_lab,
               traj.peak_omega_a, traj.decay_ratio, traj.margin)
    write_csv(path, TRAJECTORY_COLUMNS, rows)


def emit_snapshots(fields: FieldGrid, atoms: AtomGrid, snapshot_taus,
                   out_dir: Path, c: float = SPEED_OF_LIGHT) -> list[str]:
    """One CSV per requested tau (nearest grid node), rows ascending in zeta."""
    names = []
    for n, tau in enumerate(snapshot_taus):
        i = int(np.argmin(np.abs(fields.taus - tau)))
        tau_node = float(fields.taus[i])
        oa = fields.omega_a[:, i]
        ob = fields.omega_b[:, i]
        p3 = np.abs(atoms.psi3[:, i])
        rows = zip(np.full_like(fields.zetas, tau_node), fields.zetas,
                   c * fields.zetas, np.abs(oa), np.angle(oa),
                   np.abs(ob), np.angle(ob), p3)
        name = f"snapshot_{n:03d}.csv"
        write_csv(out_dir / name, SNAPSHOT_COLUMNS, rows)
        names.append(name)
    return names


def emit_grids(fields: FieldGrid, atoms: AtomGrid, out_dir: Path) -> list[str]:
    """Raw grids as .npy files (timestamp-free, hence deterministic)."""
    grid_dir = out_dir / "grids"
    grid_dir.mkdir(parents=True, exist_ok=True)
    arrays = {"zetas": fields.zetas, "taus": fields.taus,
              "omega_a": fields.omega_a, "omega_b": fields.omega_b,
              "psi1": atoms.psi1, "psi2": atoms.psi2, "psi3": atoms.psi3}
    names = []
    for key, arr in arrays.items():
        np.save(grid_dir / f"{key}.npy", arr)
        names.append(f"grids/{key}.npy")
    return names


def emit_plot_data(fields: FieldGrid, atoms: AtomGrid, traj: Trajectory,
                   snapshot_taus, out_dir: Path,
                   c: float = SPEED_OF_LIGHT) -> list[str]:
    """Write the trajectory CSV and the selected snapshot CSVs."""
    out_dir.mkdir(parents=True, exist_ok=True)
    emit_trajectory(traj, out_dir / "trajectory.csv")
    return ["trajectory.csv"] + emit_snapshots(fields, atoms, snapshot_taus,
                                               out_dir, c=c)


@dataclass(frozen=True, eq=False)
class RunReport:
    """Outcome of one scenario run; ``report`` is the JSON-serialized dict."""

    name: str
    out_dir: Path
    report: dict

    @property
    def summary(self) -> dict:
        return self.report["summary"]

    @property
    def comparison(self) -> dict | None:
        return self.report.get("comparison")


def resolve_output_dir(config: ScenarioConfig, out_dir=None) -> Path:
    if out_dir is not None:
        return Path(out_dir)
    if config.output_dir:
        return Path(config.output_dir)
    env = os.environ.get(OUTPUT_DIR_ENV)
    if env:
        return Path(env) / config.name
    return Path.cwd() / "runs" / config.name


def _resolve_physics(config: ScenarioConfig):
    """Turn a config into (medium, schedule, calibration, anchor) pieces."""
    if config.experiment is not None:
        exp = config.experiment
        inputs = ExperimentInputs(omega0=float(exp["omega0"]),
                                  t_p=float(exp["tp"]),
                                  gamma=float(exp["gamma"]),
                                  delta_t=exp.get("delta_t"))
        cal = calibrate(inputs)
        schedule = ControlSchedule.constant(cal.p0)
        anchor = exp["distance_anchor"]
        nu0cal = calibrate_nu0(cal.eps0, inputs.gamma, schedule,
                               float(anchor["distance_m"]), float(anchor["tau_s"]))
        medium = make_medium_params(nu0cal.nu0, inputs.gamma, 0.0, cal.eps0)
        return medium, schedule, cal, nu0cal
    med = config.medium
    medium = make_medium_params(float(med["nu0"]), float(med["gamma"]),
                                float(med["delta"]), float(med["eps0"]))
    schedule = ControlSchedule.from_dict(config.schedule)
    return medium, schedule, None, None


def run_scenario(config: ScenarioConfig, out_dir=None,
                 c: float = SPEED_OF_LIGHT) -> RunReport:
    """Execute the full pipeline and write the artifact files.

    Outputs are deterministic for a fixed config: CSV bytes, grid arrays,
    and the report JSON are all reproducible run to run.
    """
    out = resolve_output_dir(config, out_dir)
    out.mkdir(parents=True, exist_ok=True)

    medium, schedule, cal, nu0cal = _resolve_physics(config)
    w_s = soliton_fwhm(medium)
    zeta0 = (config.zeta0_s if config.zeta0_s is not None
             else config.zeta0_ws * w_s)
    scfg = SolitonConfig(zeta0=zeta0, medium=medium, schedule=schedule)

    tau_max = float(config.grid["tau_max_s"])
    n_alpha = default_alpha_steps(medium, schedule, tau_max)
    alpha = integrate_alpha(medium, schedule, tau_max, n_alpha)

    # Trajectory grid: uniform plus the exact evaluation times, so the
    # summary numbers appear verbatim as CSV rows.
    base = np.linspace(0.0, tau_max, int(config.emit["trajectory_points"]))
    taus = np.union1d(base, [config.ratio_tau_s, config.distance_tau_s])
    traj = analytic_trajectory(scfg, alpha, taus, c=c)

    i_ratio = int(np.searchsorted(taus, config.ratio_tau_s))
    i_dist = int(np.searchsorted(taus, config.distance_tau_s))
    distance_m = float(traj.z_c_m[i_dist] - traj.z_c_m[0])
    lab_dt = (float(taus[i_dist] + traj.zeta_c[i_dist])
              - float(taus[0] + traj.zeta_c[0]))
    max_dist_m = (c / (4.0 * medium.k * medium.gamma)
                  if medium.gamma > 0 else math.inf)
    summary = {
        "ratio_tau_s": config.ratio_tau_s,
        "decay_ratio": float(traj.decay_ratio[i_ratio]),
        "distance_tau_s": config.distance_tau_s,
        "distance_m": distance_m,
        "mean_velocity_mps": distance_m / lab_dt,
        "max_distance_m": max_dist_m,
        "stop_bound_ok": bool(distance_m < max_dist_m),
        "gamma_star_over_gamma": (1.0 / (schedule.p0 ** 2 + 1.0)
                                  if schedule.kind == "constant" else None),
    }

    resolved = {
        "medium": {"nu0": medium.nu0, "gamma": medium.gamma,
                   "delta": medium.delta, "eps0": medium.eps0, "k": medium.k},
        "schedule": schedule.to_dict(),
        "zeta0_s": zeta0,
        "w_s": w_s,
        "alpha_steps": n_alpha,
    }

    report: dict = {
        "name": config.name,
        "config": config.to_dict(),
        "resolved": resolved,
        "calibration": cal.as_dict() if cal is not None else None,
        "anchor": (None if nu0cal is None else {
            "k": nu0cal.k, "nu0": nu0cal.nu0,
            "exp2alpha": nu0cal.exp2alpha_anchor,
            "mean_velocity_mps": nu0cal.mean_velocity_mps}),
        "summary": summary,
        "comparison": None,
        "files": {"trajectory": "trajectory.csv", "snapshots": [],
                  "grids": [], "report": "report.json"},
    }

    emit_trajectory(traj, out / "trajectory.csv")

    if config.run_simulation:
        grid = config.grid
        zeta_max = (float(grid["zeta_max_s"]) if "zeta_max_s" in grid
                    else float(grid["zeta_max_ws"]) * w_s)
        resolved["grid"] = {"n_zeta": int(grid["n_zeta"]),
                            "n_tau": int(grid["n_tau"]),
                            "zeta_max_s": zeta_max, "tau_max_s": tau_max}

        def boundary_a(ts):
            return np.asarray(soliton_fields(scfg, alpha, ts, 0.0).omega_a,
                              dtype=complex)

        def boundary_b(ts):
            return np.asarray(soliton_fields(scfg, alpha, ts, 0.0).omega_b,
                              dtype=complex)

        initial = None
        if config.initial_atoms == "soliton":
            def initial(zs):
                return soliton_atoms(scfg, alpha, 0.0, np.asarray(zs, dtype=float))

        plan = SimulationPlan(medium=medium, n_zeta=int(grid["n_zeta"]),
                              n_tau=int(grid["n_tau"]), zeta_max=zeta_max,
                              tau_max=tau_max, boundary_a=boundary_a,
                              boundary_b=boundary_b, initial_atoms=initial,
                              **config.scheme)
        fields, atoms = simulate(plan)
        err = compare_to_analytic(fields, scfg, alpha,
                                  tau_max=config.compare_tau_max_s)
        report["comparison"] = {
            "tau_max_s": config.compare_tau_max_s,
            "linf_in": err.linf_in, "l2_in": err.l2_in,
            "linf_out": err.linf_out, "linf_global": err.linf_global,
            "l2_global": err.l2_global, "ref_peak": err.ref_peak,
            "rows": err.rows, "in_nodes": err.in_nodes,
            "out_nodes": err.out_nodes, "margin_first": err.margin_first,
            "margin_last": err.margin_last,
        }
        snaps = emit_snapshots(fields, atoms, config.emit["snapshot_taus_s"],
                               out, c=c)
        report["files"]["snapshots"] = snaps
        if config.emit.get("grids", True):
            report["files"]["grids"] = emit_grids(fields, atoms, out)

    report = _jsonable(report)
    (out / "report.json").write_text(
        json.dumps(report, indent=2, sort_keys=True, allow_nan=False) + "\n",
        encoding="utf-8")
    return RunReport(name=config.name, out_dir=out, report=report)


def _read_csv(path: Path) -> dict[str, np.ndarray]:
    lines = path.read_text(encoding="utf-8").strip().split("\n")
    header = lines[0].split(",")
    data = np.array([[float(v) for v in line.split(",")]
                     for line in lines[1:]])
    return {name: data[:, i] for i, name in enumerate(header)}


def verify_run_dir(run_dir, rtol: float = 1e-9) -> list[str]:
    """Recompute the report's numbers from the emitted artifacts.

    Returns a list of mismatch descriptions; an empty list means every
    summary and comparison entry is reproducible within ``rtol``.
    """
    run_dir = Path(run_dir)
    report = json.loads((run_dir / "report.json").read_text(encoding="utf-8"))
    problems: list[str] = []

    def check(label: str, got: float, want) -> None:
        if want is None:
            return
        if not math.isclose(got, want, rel_tol=rtol, abs_tol=rtol):
            problems.append(f"{label}: report {want!r} vs recomputed {got!r}")

    traj = _read_csv(run_dir / report["files"]["trajectory"])
    summary = report["summary"]
    i_ratio = int(np.argmin(np.abs(traj["tau_s"] - summary["ratio_tau_s"])))
    i_dist = int(np.argmin(np.abs(traj["tau_s"] - summary["distance_tau_s"])))
    check("decay_ratio", float(traj["decay_ratio"][i_ratio]),
          summary["decay_ratio"])
    distance = float(traj["z_c_m"][i_dist] - traj["z_c_m"][0])
    check("distance_m", distance, summary["distance_m"])
    lab_dt = float((traj["tau_s"][i_dist] + traj["zeta_c_s"][i_dist])
                   - (traj["tau_s"][0] + traj["zeta_c_s"][0]))
    check("mean_velocity_mps", distance / lab_dt, summary["mean_velocity_mps"])

    if report.get("comparison") and report["files"].get("grids"):
        res = report["resolved"]
        med = res["medium"]
        medium = MediumParams(nu0=med["nu0"], gamma=med["gamma"],
                              delta=med["delta"], eps0=med["eps0"])
        schedule = ControlSchedule.from_dict(res["schedule"])
        scfg = SolitonConfig(zeta0=res["zeta0_s"], medium=medium,
                             schedule=schedule)
        grid_dir = run_dir / "grids"
        fields = FieldGrid(zetas=np.load(grid_dir / "zetas.npy"),
                           taus=np.load(grid_dir / "taus.npy"),
                           omega_a=np.load(grid_dir / "omega_a.npy"),
                           omega_b=np.load(grid_dir / "omega_b.npy"))
        alpha = integrate_alpha(medium, schedule, float(fields.taus[-1]),
                                res["alpha_steps"])
        err = compare_to_analytic(fields, scfg, alpha,
                                  tau_max=report["comparison"]["tau_max_s"])
        cmp_report = report["comparison"]
        for key, got in (("linf_in", err.linf_in), ("l2_in", err.l2_in),
                         ("linf_out", err.linf_out),
                         ("linf_global", err.linf_global),
                         ("l2_global", err.l2_global)):
            check(f"comparison.{key}", got, cmp_report[key])
    return problems


def _deep_merge(base: dict, overrides: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _deep_merge(out[key], value)
        else:
            out[key] = copy.deepcopy(value)
    return out


def run_sweep(sweep: dict, out_root, c: float = SPEED_OF_LIGHT) -> dict:
    """Run a list of configs derived from a base by per-run overrides.

    Runs execute sequentially in the listed order and land in per-run output
    directories; the merged summary is a deterministic sequential reduction.
    """
    if "base" not in sweep or "runs" not in sweep:
        raise ConfigError("sweep config needs 'base' and 'runs'")
    out_root = Path(out_root)
    out_root.mkdir(parents=True, exist_ok=True)
    entries = []
    for run in sweep["runs"]:
        if "name" not in run:
            raise ConfigError("each sweep run needs a 'name'")
        merged = _deep_merge(sweep["base"], run.get("overrides", {}))
        merged["name"] = run["name"]
        config = ScenarioConfig.from_dict(merged)
        result = run_scenario(config, out_dir=out_root / run["name"], c=c)
        entries.append({"name": run["name"],
                        "report": f"{run['name']}/report.json",
                        "summary": result.summary})
    merged_summary = {"runs": entries}
    (out_root / "summary.json").write_text(
        json.dumps(_jsonable(merged_summary), indent=2, sort_keys=True,
                   allow_nan=False) + "\n", encoding="utf-8")
    return merged_summary
