"""Command line entry point: ``run``, ``sweep``, ``verify`` and ``front``.

Exit codes: 0 success, 1 verification failure, 2 invalid arguments.
"""
from __future__ import annotations

import argparse
import sys

from .harness import Cell, ExperimentPlan, emit, load_plan, run_plan
from .oracle import run_all_checks
from .problems import ProblemSpec, iter_pareto_front, pareto_front_size


class UsageError(Exception):
    pass


def _density_k(value: str) -> int | str:
    if value == "auto":
        return value
    try:
        k = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected 'auto' or an integer, got {value!r}") from None
    if k < 1:
        raise argparse.ArgumentTypeError("density k must be >= 1")
    return k


def _add_problem_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--problem", required=True, choices=["omm", "lotz", "ojzj"])
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, default=None)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="spea2-runtime", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="run seeded trials of one configuration")
    p.add_argument("--algorithm", choices=["spea2", "gsemo", "semo"], default="spea2")
    _add_problem_args(p)
    p.add_argument("--mu", type=int, default=None, help="offspring population size (spea2)")
    p.add_argument("--archive", type=int, default=None, help="archive size (spea2)")
    p.add_argument("--mutation", choices=["bitwise", "onebit"], default="bitwise")
    p.add_argument("--density-k", type=_density_k, default="auto")
    p.add_argument("--seed", type=int, default=0, help="master seed")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--trials", type=int, default=1)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("sweep", help="run a plan file")
    p.add_argument("--plan", required=True)
    p.add_argument("--out", default=None)
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("verify", help="cross-check fast paths against brute-force oracles")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--quick", action="store_true")

    p = sub.add_parser("front", help="print the closed-form Pareto front")
    _add_problem_args(p)
    return parser


def _cmd_run(args) -> int:
    spec = ProblemSpec(args.problem, args.m, args.n, args.k)
    if args.algorithm == "spea2":
        if args.mu is None or args.archive is None:
            raise UsageError("spea2 needs --mu and --archive")
        cell = Cell(spec, "spea2", args.mu, args.archive, args.mutation, args.density_k, args.budget)
    else:
        cell = Cell(spec, args.algorithm, budget=args.budget)
    plan = ExperimentPlan((cell,), trials_per_cell=args.trials, master_seed=args.seed)
    table = run_plan(plan, args.workers)
    text = emit(table, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    return 0


def _cmd_sweep(args) -> int:
    table = run_plan(load_plan(args.plan), args.workers)
    text = emit(table, args.format, args.out)
    if args.out is None:
        sys.stdout.write(text)
    for s in table.stats():
        print(
            f"{s.cell.describe():45s} success={s.success_rate:.2f} "
            f"median={s.median:.6g} mean={s.mean:.6g} iqr={s.iqr:.6g}",
            file=sys.stderr,
        )
    return 0


def _cmd_verify(args) -> int:
    ok = True
    for check in run_all_checks(seed=args.seed, quick=args.quick):
        status = "PASS" if check.passed else "FAIL"
        print(f"{status} {check.name}" + (f": {check.detail}" if check.detail else ""))
        ok &= check.passed
    return 0 if ok else 1


def _cmd_front(args) -> int:
    spec = ProblemSpec(args.problem, args.m, args.n, args.k)
    for v in sorted(iter_pareto_front(spec)):
        print(" ".join(map(str, v)))
    print(f"size {pareto_front_size(spec)}")
    return 0


COMMANDS = {"run": _cmd_run, "sweep": _cmd_sweep, "verify": _cmd_verify, "front": _cmd_front}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
