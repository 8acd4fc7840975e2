"""Command-line front end.

Every command prints a JSON report on stdout.  Exit codes: 0 pass,
1 tolerance failure or internal inconsistency, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import commands
from .errors import ScenarioError
from .noise import NotPositiveSemidefinite
from .scenarios import BUILTIN, build_scenario, resolve_scenario, save_scenario

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_USAGE = 2


class _UsageError(Exception):
    pass


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _positive_float(text: str) -> float:
    value = float(text)
    if not value > 0:
        raise argparse.ArgumentTypeError(f"must be > 0, got {value}")
    return value


def _overrides(p: argparse.ArgumentParser, dt=True, ntraj=True) -> None:
    p.add_argument("--tol", type=_positive_float, help="override the scenario tolerance")
    if dt:
        p.add_argument("--dt", type=_positive_float, help="override the time step")
    if ntraj:
        p.add_argument("--ntraj", type=_positive_int, help="override the number of trajectories")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="gklsnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("classify", help="dephasing/decay verdicts and self-duality")
    p.add_argument("scenario", help="builtin name or scenario file")
    _overrides(p, dt=False, ntraj=False)

    p = sub.add_parser("simulate", help="run the trajectory ensemble and write CSV files")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int)
    p.add_argument("--traj-dump", action="store_true", help="also write one raw trajectory's norms")
    p.add_argument("--out", default=".", help="output directory (default: current directory)")
    _overrides(p)

    p = sub.add_parser("compare", help="ensemble vs. exact evolution and stationary state")
    p.add_argument("scenario")
    p.add_argument("--seed", type=int)
    p.add_argument("--exact-only", action="store_true", help="skip the Monte Carlo ensemble")
    _overrides(p)

    p = sub.add_parser("noise-reduce", help="minimal real-noise reduction of a covariance matrix")
    p.add_argument("matrix", help="JSON matrix file or a scenario")

    p = sub.add_parser("export", help="write a builtin scenario document")
    p.add_argument("name", choices=sorted(BUILTIN))
    p.add_argument("path")

    sub.add_parser("list", help="list builtin scenarios")
    return parser


def _dispatch(args) -> dict:
    if args.command == "list":
        return {"builtin": sorted(BUILTIN), "passed": True}
    if args.command == "export":
        save_scenario(build_scenario(args.name), args.path)
        return {"scenario": args.name, "path": args.path, "passed": True}
    if args.command == "noise-reduce":
        return commands.noise_reduce(commands.load_covariance(args.matrix))
    scenario = resolve_scenario(args.scenario)
    if args.command == "classify":
        return commands.classify(scenario) if args.tol is None else commands.classify(scenario, args.tol)
    if args.command == "simulate":
        return commands.simulate(scenario, args.out, dt=args.dt, n_traj=args.ntraj,
                                 seed=args.seed, traj_dump=args.traj_dump)
    if args.command == "compare":
        return commands.compare(scenario, dt=args.dt, n_traj=args.ntraj, seed=args.seed,
                                tol=args.tol, exact_only=args.exact_only)
    raise _UsageError(f"unknown command {args.command}")


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_PASS
    try:
        report = _dispatch(args)
    except NotPositiveSemidefinite as exc:
        print(json.dumps({"error": str(exc), "eigenvalue": exc.eigenvalue}), file=sys.stderr)
        return EXIT_USAGE
    except (ScenarioError, _UsageError, ValueError, OSError) as exc:
        print(json.dumps({"error": str(exc)}), file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps(report, indent=2))
    return EXIT_PASS if report.get("passed", True) else EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
