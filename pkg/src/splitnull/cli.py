"""Command line front end.

Three subcommands:

``run``
    Load a problem description from JSON, iterate to the stopping rule,
    optionally write the per-iteration trace as CSV.  Exit status 0 when
    the step-norm tolerance was reached, 2 when the iteration budget ran
    out first, 1 on any error.

``oracle-example``
    Replay the bundled one-dimensional interval problem through the full
    solver stack and compare every iterate against its closed-form value.
    Exit status 0 when the worst deviation is at most 1e-9.

``check-properties``
    Run the seeded random invariant battery and print its report.  Exit
    status 0 only when every property passes.
"""

from __future__ import annotations

import argparse
import sys

from .errors import ProblemFileError, SplitNullError
from .problemfile import load_problem
from .solver import StoppingRule, run
from .trace import write_trace


def _cmd_run(args) -> int:
    try:
        problem, stop = load_problem(args.problem)
    except FileNotFoundError:
        print(f"error: problem file not found: {args.problem}", file=sys.stderr)
        return 1
    except IsADirectoryError:
        print(f"error: not a file: {args.problem}", file=sys.stderr)
        return 1
    except ProblemFileError as exc:
        print(f"error: invalid problem file: {exc}", file=sys.stderr)
        return 1

    if args.max_iters is not None:
        stop = StoppingRule(stop.tol, args.max_iters, stop.guard)
    if args.tol is not None:
        stop = StoppingRule(args.tol, stop.max_iters, stop.guard)

    try:
        result = run(problem, stop)
    except SplitNullError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1

    if args.trace is not None:
        write_trace(args.trace, result.states)

    last = result.states[-1]
    if result.converged:
        print(
            f"converged after {result.iterations} iterations, "
            f"step_norm={last.step_norm:.3e}"
        )
        return 0
    print(
        f"iteration budget exhausted after {result.iterations} iterations, "
        f"step_norm={last.step_norm:.3e}"
    )
    return 2


def _cmd_oracle_example(args) -> int:
    from .oracle import compare_trajectories

    if not 0.0 <= args.x1 <= 1.0:
        print("error: --x1 must lie in [0, 1]", file=sys.stderr)
        return 1
    if args.steps < 1:
        print("error: --steps must be positive", file=sys.stderr)
        return 1
    report = compare_trajectories(args.x1, args.steps)
    for key in ("x", "u", "z", "w", "y", "split_bound"):
        print(f"max |{key} - closed form| = {report[key]:.3e}")
    print(f"worst deviation over {report['steps']} iterations: {report['max']:.3e}")
    if report["max"] <= 1e-9:
        print("agreement within 1e-9: PASS")
        return 0
    print("agreement within 1e-9: FAIL")
    return 1


def _cmd_check_properties(args) -> int:
    from .properties import format_report, run_battery

    results = run_battery(seed=args.seed)
    print(format_report(results, args.seed))
    return 0 if all(r.passed for r in results) else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="splitnull",
        description="Hybrid projection solver for split common null point problems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="solve a problem described by a JSON file")
    p_run.add_argument("--problem", required=True, help="path to the problem JSON")
    p_run.add_argument("--trace", default=None, help="write per-iteration CSV here")
    p_run.add_argument("--max-iters", type=int, default=None, help="override iteration budget")
    p_run.add_argument("--tol", type=float, default=None, help="override step-norm tolerance")
    p_run.set_defaults(func=_cmd_run)

    p_oracle = sub.add_parser(
        "oracle-example",
        help="compare the solver against the closed-form interval example",
    )
    p_oracle.add_argument("--steps", type=int, default=1000, help="iterations to compare")
    p_oracle.add_argument("--x1", type=float, default=1.0, help="starting point in [0, 1]")
    p_oracle.set_defaults(func=_cmd_oracle_example)

    p_props = sub.add_parser(
        "check-properties", help="run the randomized invariant battery"
    )
    p_props.add_argument("--seed", type=int, default=0, help="random seed")
    p_props.set_defaults(func=_cmd_check_properties)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entrypoint() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entrypoint()
