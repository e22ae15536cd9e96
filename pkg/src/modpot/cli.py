"""Command-line interface.

Subcommands:

* ``eval``        tabulate family functions (feedback response, optimal
                  scaling, reduced potential and its conserved-quantity
                  form) over an argument grid;
* ``synthesize``  solve a scenario's free-time (or fixed-time) synthesis
                  problem and write the trajectory CSV plus summary JSON;
* ``sweep``       re-solve a scenario across a parameter range and
                  tabulate launch point and flight time;
* ``verify``      run the self-check suite.

Exit codes: 0 success, 2 usage error, 3 infeasible problem, 4 convergence
failure.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import sys
from pathlib import Path

from .dogleg import DoglegParams, sigma
from .errors import (
    ConvergenceError,
    DomainError,
    InfeasibleError,
    IntegrationError,
    ModpotError,
)
from .potential import chi_hat, sigma_hat
from .dogleg import rho_inverse
from .projectile import (
    CostVariant,
    ProjectileScenario,
    build_context,
    default_launch_bracket,
)
from .scenario_io import (
    read_scenario,
    summary_dict,
    write_summary_json,
    write_trajectory_csv,
)
from .synthesis import (
    SolverSettings,
    VerticalLaunchProblem,
    solve_free_time,
    solve_fixed_time,
    verify_maximum_principle,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_NO_CONVERGENCE = 4

_FMT = "%.17g"


def _parse_grid(spec: str) -> list[float]:
    try:
        lo_s, hi_s, step_s = spec.split(":")
        lo, hi, step = float(lo_s), float(hi_s), float(step_s)
    except ValueError as exc:
        raise DomainError(f"grid must be lo:hi:step, got {spec!r}") from exc
    if step <= 0.0 or hi < lo:
        raise DomainError(f"empty grid {spec!r}")
    count = int(round((hi - lo) / step)) + 1
    return [lo + i * step for i in range(count)]


def _emit_table(rows: list[tuple], header: tuple[str, ...], out: str | None, fmt: str) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        for row in rows:
            lines.append(
                ",".join(_FMT % c if isinstance(c, float) else str(c) for c in row)
            )
        text = "\n".join(lines) + "\n"
    else:
        payload = [dict(zip(header, row)) for row in rows]
        text = json.dumps(payload, indent=2) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _cmd_eval(args: argparse.Namespace) -> int:
    params = DoglegParams(args.alpha, args.p)
    functions = {
        "rho_inverse": lambda x: rho_inverse(params, x),
        "sigma": lambda x: sigma(params, x),
        "chi_hat": lambda x: chi_hat(params, x),
        "sigma_hat": lambda x: sigma_hat(params, x),
    }
    fn = functions[args.fn]
    grid = _parse_grid(args.grid)
    rows = [(x, fn(x)) for x in grid]
    _emit_table(rows, ("argument", "value"), args.out, args.format)
    return EXIT_OK


def _load_scenario(args: argparse.Namespace) -> ProjectileScenario:
    scn = read_scenario(args.scenario)
    if getattr(args, "variant", None):
        scn = dataclasses.replace(scn, cost_variant=CostVariant(args.variant))
    return scn


def _solve_scenario(scn: ProjectileScenario, args: argparse.Namespace):
    ctx = build_context(scn)
    bracket = default_launch_bracket(scn)
    problem = VerticalLaunchProblem(
        ctx=ctx,
        target=(scn.x_f, scn.y_f),
        x0_bracket=bracket,
        level=scn.level,
        scenario_id=scn.scenario_id,
    )
    settings = SolverSettings(step=args.step, h_drift_tol=args.h_drift_tol)
    if getattr(args, "t_final", None) is not None:
        return solve_fixed_time(problem, args.t_final, settings)
    return solve_free_time(problem, settings)


def _cmd_synthesize(args: argparse.Namespace) -> int:
    scn = _load_scenario(args)
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = scn.scenario_id or Path(args.scenario).stem
    try:
        traj = _solve_scenario(scn, args)
    except (InfeasibleError, ConvergenceError, IntegrationError) as exc:
        code = EXIT_INFEASIBLE if isinstance(exc, InfeasibleError) else EXIT_NO_CONVERGENCE
        diagnostic = {
            "scenario_id": scn.scenario_id,
            "status": "infeasible" if code == EXIT_INFEASIBLE else "no-convergence",
            "error": str(exc),
        }
        write_summary_json(diagnostic, out_dir / f"{stem}_summary.json")
        print(f"error: {exc}", file=sys.stderr)
        return code
    report = verify_maximum_principle(build_context(scn), traj, grid_n=args.mp_grid)
    write_trajectory_csv(traj, out_dir / f"{stem}_trajectory.csv")
    summary = summary_dict(traj, report)
    write_summary_json(summary, out_dir / f"{stem}_summary.json")
    print(
        f"{stem}: x0 = {summary['x0']:.9g}, t_f = {summary['t_f']:.9g}, "
        f"h = {summary['h']:.6g}, H drift = {summary['h_drift']:.3g}, "
        f"MP violation = {summary['mp_max_violation']:.3g}"
    )
    return EXIT_OK


def _cmd_sweep(args: argparse.Namespace) -> int:
    scn = _load_scenario(args)
    if args.values:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    elif args.range:
        lo_s, hi_s, n_s = args.range.split(":")
        lo, hi, n = float(lo_s), float(hi_s), int(n_s)
        if n < 1:
            raise DomainError("range count must be >= 1")
        values = [lo + (hi - lo) * i / max(n - 1, 1) for i in range(n)]
    else:
        raise DomainError("sweep needs --values or --range")
    if not values:
        raise DomainError("empty sweep")

    rows = []
    failures: list[int] = []
    for value in values:
        try:
            swept = dataclasses.replace(scn, **{args.param: value})
            traj = _solve_scenario(swept, args)
            rows.append((value, traj.meta["x0"], traj.meta["t_f"], "ok"))
        except (ModpotError, ValueError) as exc:
            code = (
                EXIT_INFEASIBLE
                if isinstance(exc, (InfeasibleError, DomainError))
                else EXIT_NO_CONVERGENCE
            )
            failures.append(code)
            rows.append((value, float("nan"), float("nan"), f"failed: {exc}"))
    _emit_table(rows, (args.param, "x0", "t_f", "status"), args.out, args.format)
    if len(failures) == len(values):
        return max(failures)
    return EXIT_OK


def _cmd_verify(args: argparse.Namespace) -> int:
    from .verification import run_checks

    results = run_checks(args.level)
    for res in results:
        print(res.line())
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modpot",
        description=(
            "Moderated optimal control: feedback laws, moderation potentials,"
            " and the vertical take-off interception benchmark."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="tabulate a family function over a grid")
    p_eval.add_argument(
        "--fn",
        required=True,
        choices=("rho_inverse", "sigma", "chi_hat", "sigma_hat"),
    )
    p_eval.add_argument("--alpha", type=float, required=True)
    p_eval.add_argument("--p", type=float, required=True)
    p_eval.add_argument("--grid", required=True, help="lo:hi:step (inclusive)")
    p_eval.add_argument("--out", default=None)
    p_eval.add_argument("--format", choices=("csv", "json"), default="csv")

    p_syn = sub.add_parser("synthesize", help="solve a scenario's synthesis problem")
    p_syn.add_argument("--scenario", required=True)
    p_syn.add_argument("--t-final", dest="t_final", type=float, default=None)
    p_syn.add_argument("--variant", choices=[v.value for v in CostVariant], default=None)
    p_syn.add_argument("--out", default=".")
    p_syn.add_argument("--step", type=float, default=1e-3)
    p_syn.add_argument("--h-drift-tol", dest="h_drift_tol", type=float, default=1e-6)
    p_syn.add_argument("--mp-grid", dest="mp_grid", type=int, default=101)

    p_sweep = sub.add_parser("sweep", help="re-solve across a parameter range")
    p_sweep.add_argument("--scenario", required=True)
    p_sweep.add_argument(
        "--param", default="mu_ratio", choices=("mu_ratio", "c", "h", "y_f")
    )
    p_sweep.add_argument("--values", default=None, help="comma-separated values")
    p_sweep.add_argument("--range", default=None, help="lo:hi:count")
    p_sweep.add_argument("--variant", choices=[v.value for v in CostVariant], default=None)
    p_sweep.add_argument("--out", default=None)
    p_sweep.add_argument("--format", choices=("csv", "json"), default="csv")
    p_sweep.add_argument("--step", type=float, default=1e-3)
    p_sweep.add_argument("--h-drift-tol", dest="h_drift_tol", type=float, default=1e-6)

    p_verify = sub.add_parser("verify", help="run the self-check suite")
    p_verify.add_argument("--level", choices=("fast", "full"), default="fast")

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits with 2 on usage errors already; normalize other codes
        return EXIT_USAGE if exc.code not in (0,) else 0
    try:
        if args.command == "eval":
            return _cmd_eval(args)
        if args.command == "synthesize":
            return _cmd_synthesize(args)
        if args.command == "sweep":
            return _cmd_sweep(args)
        if args.command == "verify":
            return _cmd_verify(args)
        raise DomainError(f"unknown command {args.command!r}")
    except (DomainError, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InfeasibleError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (ConvergenceError, IntegrationError) as exc:
        print(f"no convergence: {exc}", file=sys.stderr)
        return EXIT_NO_CONVERGENCE


if __name__ == "__main__":
    sys.exit(main())
