"""Command-line frontend: run scenarios, emit CSV/SVG, run verification.

Exit codes: 0 success, 1 verification failure, 2 usage error,
3 runtime/model error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import analysis, harness, plotting
from .integrate import IntegrationError, SolverOptions
from .models import State
from .smallmat import NotPositiveDefinite

EXIT_OK = 0
EXIT_VERIFY_FAILED = 1
EXIT_USAGE = 2
EXIT_RUNTIME = 3


def _tau_vector(text: str, dim: int) -> tuple[float, ...]:
    parts = text.split(",")
    if len(parts) != dim:
        raise harness.ScenarioError(f"--tau needs {dim} comma-separated values, got {text!r}")
    try:
        return tuple(float(p) for p in parts)
    except ValueError:
        raise harness.ScenarioError(f"--tau values must be numbers, got {text!r}") from None


def _add_output_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--out", metavar="PATH.csv", help="write the trajectory CSV here (default: stdout)")
    sub.add_argument("--plot", metavar="PATH.svg", help="also render all channels to an SVG file")
    sub.add_argument("--dump-scenario", action="store_true",
                     help="print the resolved scenario JSON and exit without simulating")


def _add_solver_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--tf", type=float, help="simulation end time in seconds")
    sub.add_argument("--rtol", type=float, help="relative tolerance (default 1e-3)")
    sub.add_argument("--atol", type=float, help="absolute tolerance (default 1e-6)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dynsim",
        description="Simulate a 4-DOF SCARA arm or a rotary inverted pendulum in open loop.",
    )
    subs = parser.add_subparsers(dest="command", required=True)

    scara = subs.add_parser("scara", help="run the built-in SCARA scenario")
    scara.add_argument("--tau", default="3,2,0,30",
                       help="constant joint torques, comma separated (default 3,2,0,30)")
    _add_solver_flags(scara)
    _add_output_flags(scara)

    pend = subs.add_parser("pendulum", help="run the built-in pendulum scenario")
    pend.add_argument("--tau", type=float, default=0.0,
                      help="constant arm torque in N*m (default 0)")
    pend.add_argument("--theta1", type=float, default=0.0,
                      help="initial pendulum angle in rad (0 = upright)")
    _add_solver_flags(pend)
    _add_output_flags(pend)

    run = subs.add_parser("run", help="execute a scenario JSON file")
    run.add_argument("file", help="scenario file (JSON)")
    _add_output_flags(run)

    verify = subs.add_parser("verify", help="run the physics verification suite")
    verify.add_argument("--json", action="store_true", help="emit the report as JSON")
    return parser


def _resolve_builtin(args: argparse.Namespace, name: str) -> harness.Scenario:
    scenario = harness.builtin_scenario(name)
    if name == "scara-paper":
        torque = harness.TorqueSchedule.constant(_tau_vector(args.tau, 4))
    else:
        torque = harness.TorqueSchedule.constant((args.tau,))
        if args.theta1 != 0.0:
            scenario = replace(
                scenario,
                initial_state=State((0.0, args.theta1), (0.0, 0.0)),
            )
    scenario = replace(scenario, torque=torque)
    if args.tf is not None:
        scenario = replace(scenario, tf=args.tf)
    opts: SolverOptions = scenario.solver_options
    if args.rtol is not None:
        opts = replace(opts, rtol=args.rtol)
    if args.atol is not None:
        opts = replace(opts, atol=args.atol)
    return replace(scenario, solver_options=opts)


def _execute(scenario: harness.Scenario, args: argparse.Namespace) -> int:
    if args.dump_scenario:
        print(json.dumps(harness.scenario_to_dict(scenario), indent=2))
        return EXIT_OK
    nt = harness.simulate(scenario)
    if args.out:
        with open(args.out, "wb") as fh:
            harness.write_csv(nt, fh)
    else:
        harness.write_csv(nt, sys.stdout.buffer)
    if args.plot:
        with open(args.plot, "wb") as fh:
            plotting.render_svg(nt, list(nt.labels), fh)
    return EXIT_OK


def _verify(args: argparse.Namespace) -> int:
    reports = analysis.run_verification()
    if args.json:
        print(json.dumps([r.to_json_dict() for r in reports], indent=2))
    else:
        for report in reports:
            print(report.text_line())
        failed = sum(not r.passed for r in reports)
        print(f"{len(reports) - failed}/{len(reports)} checks passed")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VERIFY_FAILED


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.command == "verify":
            return _verify(args)
        if args.command == "scara":
            scenario = _resolve_builtin(args, "scara-paper")
        elif args.command == "pendulum":
            scenario = _resolve_builtin(args, "pendulum-paper")
        else:
            try:
                scenario = harness.load_scenario(args.file)
            except OSError as exc:
                print(f"dynsim: cannot read scenario file {args.file}: {exc}", file=sys.stderr)
                return EXIT_USAGE
        return _execute(scenario, args)
    except (harness.ScenarioError, harness.UnknownScenario, plotting.UnknownChannel) as exc:
        print(f"dynsim: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (IntegrationError, NotPositiveDefinite, ValueError) as exc:
        print(f"dynsim: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
