"""Command-line front end.

Subcommands: ``calibrate`` (closed-form parameter recovery), ``run`` (full
scenario pipeline), ``sweep`` (batch of derived scenarios), ``compare``
(recompute a finished run's report from its own artifacts).

Exit codes: 0 success, 1 usage or configuration error, 2 no-solution or
diverged computation (including a failed ``compare`` verification).
"""

from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from .calibration import ExperimentInputs, calibrate
from .errors import (ConfigError, DivergedError, DomainError,
                     InvalidParameterError, NoSolutionError, NumericsError)
from .scenario import ScenarioConfig, run_scenario, run_sweep, verify_run_dir

USAGE_EXIT = 1
NO_SOLUTION_EXIT = 2


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on bad flags; the CLI contract wants 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(USAGE_EXIT)


def _build_parser() -> _Parser:
    parser = _Parser(prog="slowsol",
                     description="Slow-light soliton simulation and calibration toolkit")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    cal = sub.add_parser("calibrate", help="recover (p0, eps0) from experiment observables")
    cal.add_argument("--omega0", type=float, required=True,
                     help="background control Rabi frequency [rad/s]")
    cal.add_argument("--tp", type=float, required=True,
                     help="pulse FWHM duration [s]")
    cal.add_argument("--gamma", type=float, required=True,
                     help="excited-level relaxation rate [1/s]")
    cal.add_argument("--delta-t", type=float, default=None,
                     help="reported pulse delay [s] (echoed, optional)")

    run = sub.add_parser("run", help="run one scenario config")
    run.add_argument("--config", required=True,
                     help="path to a scenario JSON, or a bundled preset name")
    run.add_argument("--out", default=None, help="output directory override")

    sweep = sub.add_parser("sweep", help="run a batch of derived scenarios")
    sweep.add_argument("--config", required=True, help="path to a sweep JSON")
    sweep.add_argument("--out", default=None, help="output root override")

    cmp_ = sub.add_parser("compare", help="verify a run's report against its artifacts")
    cmp_.add_argument("--run-dir", required=True, help="directory of a finished run")
    cmp_.add_argument("--rtol", type=float, default=1e-9,
                      help="relative tolerance of the verification")
    return parser


def load_config(ref: str) -> ScenarioConfig:
    """Load a scenario from a path, or from the bundled presets by name."""
    path = Path(ref)
    if path.exists():
        return ScenarioConfig.from_json(path)
    preset = resources.files("slowsol").joinpath(f"configs/{ref}.json")
    if preset.is_file():
        return ScenarioConfig.from_dict(json.loads(preset.read_text(encoding="utf-8")))
    raise ConfigError(f"config {ref!r} is neither a file nor a bundled preset")


def _cmd_calibrate(args) -> int:
    inputs = ExperimentInputs(omega0=args.omega0, t_p=args.tp,
                              gamma=args.gamma, delta_t=args.delta_t)
    result = calibrate(inputs)
    print(json.dumps(result.as_dict(), indent=2, sort_keys=True))
    return 0


def _cmd_run(args) -> int:
    config = load_config(args.config)
    result = run_scenario(config, out_dir=args.out)
    print(json.dumps(result.report, indent=2, sort_keys=True, allow_nan=False))
    return 0


def _cmd_sweep(args) -> int:
    path = Path(args.config)
    if not path.exists():
        raise ConfigError(f"sweep config {args.config!r} not found")
    sweep = json.loads(path.read_text(encoding="utf-8"))
    out_root = args.out or sweep.get("output_dir") or (Path.cwd() / "sweeps")
    summary = run_sweep(sweep, out_root)
    print(json.dumps(summary, indent=2, sort_keys=True, allow_nan=False))
    return 0


def _cmd_compare(args) -> int:
    run_dir = Path(args.run_dir)
    if not (run_dir / "report.json").exists():
        raise ConfigError(f"no report.json under {run_dir}")
    problems = verify_run_dir(run_dir, rtol=args.rtol)
    if problems:
        for problem in problems:
            print(f"MISMATCH {problem}", file=sys.stderr)
        return NO_SOLUTION_EXIT
    print(json.dumps({"run_dir": str(run_dir), "verified": True,
                      "rtol": args.rtol}, indent=2, sort_keys=True))
    return 0


_COMMANDS = {"calibrate": _cmd_calibrate, "run": _cmd_run,
             "sweep": _cmd_sweep, "compare": _cmd_compare}


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except (NoSolutionError, DivergedError, NumericsError) as exc:
        print(f"slowsol: {exc}", file=sys.stderr)
        return NO_SOLUTION_EXIT
    except (ConfigError, InvalidParameterError, DomainError, OSError) as exc:
        print(f"slowsol: {exc}", file=sys.stderr)
        return USAGE_EXIT


if __name__ == "__main__":
    raise SystemExit(main())
