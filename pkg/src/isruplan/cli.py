"""Command-line interface: plan, export, sweep, and check.

Exit codes follow the solver: 0 for an optimal (or within-gap) result,
2 for an infeasible or unbounded model, 3 when a limit cut the search
short, and 1 for usage or input errors.
"""

from __future__ import annotations

import argparse
import os
import sys

from .bnb import solve_milp
from .model import ModelError
from .mps import write_mps
from .reporting import (
    cost_breakdown,
    default_workers,
    emit_report,
    extract_plan,
    plan_to_text,
    run_sweep,
    sweep_to_csv,
    sweep_to_svg,
)
from .scenario import (
    OVERRIDE_PARAMS,
    ScenarioError,
    builtin_cislunar_case,
    load_scenario,
    with_setup_phase,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_LIMIT = 3

_STATUS_EXIT = {
    "optimal": EXIT_OK,
    "infeasible": EXIT_INFEASIBLE,
    "unbounded": EXIT_INFEASIBLE,
    "gap-limit": EXIT_LIMIT,
    "time-limit": EXIT_LIMIT,
}


def _resolve_config(args):
    if args.scenario:
        cfg = load_scenario(args.scenario)
    else:
        cfg = builtin_cislunar_case(args.variant)
    if getattr(args, "setup_phase", False):
        cfg = with_setup_phase(cfg)
    return cfg


def _add_scenario_options(sub, with_setup: bool = True) -> None:
    sub.add_argument("--scenario", help="scenario file path or builtin:<name>")
    sub.add_argument(
        "--variant",
        choices=("concentrated", "distributed"),
        default="concentrated",
        help="bundled case variant when no --scenario is given",
    )
    if with_setup:
        sub.add_argument(
            "--setup-phase",
            action="store_true",
            help="push deliveries a year out and drop preplaced plants",
        )


def _parse_grid(spec: str) -> list:
    """a:b:step ranges (inclusive of b within a half-step) or comma lists."""
    if ":" in spec:
        parts = spec.split(":")
        if len(parts) != 3:
            raise ValueError("grid must be a:b:step or v1,v2,...")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError("grid needs b >= a and step > 0")
        out = []
        v = a
        while v <= b + step * 0.5:
            out.append(round(v, 12))
            v += step
        return out
    return [float(p) for p in spec.split(",") if p.strip()]


def _cmd_plan(args) -> int:
    cfg = _resolve_config(args)
    builder, model = cfg.build_model()
    sol = solve_milp(model, rel_gap=args.gap, time_limit=args.time_limit)
    print(f"{cfg.name}: {sol.status} after {sol.nodes} nodes in {sol.wall_time:.1f}s")
    if sol.x is None:
        return _STATUS_EXIT.get(sol.status, EXIT_ERROR)
    plan = extract_plan(sol, model, cfg, builder=builder)
    breakdown = cost_breakdown(plan, cfg)
    print(f"objective ${sol.objective:,.0f}, isru mass {plan.isru_mass:,.1f} kg")
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        with open(os.path.join(args.out, "plan.txt"), "w", encoding="utf-8") as fh:
            fh.write(plan_to_text(plan))
        with open(os.path.join(args.out, "plan.csv"), "w", encoding="utf-8") as fh:
            fh.write(emit_report(plan, "csv"))
        with open(os.path.join(args.out, "breakdown.csv"), "w", encoding="utf-8") as fh:
            fh.write("component,cost\n")
            for name, value in breakdown.as_rows():
                fh.write(f"{name},{value!r}\n")
        with open(os.path.join(args.out, "solution.csv"), "w", encoding="utf-8") as fh:
            fh.write("name,value\n")
            for j, var in enumerate(model.vars):
                fh.write(f"{var.name},{float(sol.x[j])!r}\n")
        print(f"wrote plan.txt, plan.csv, breakdown.csv, solution.csv to {args.out}")
    else:
        print(plan_to_text(plan), end="")
    return _STATUS_EXIT.get(sol.status, EXIT_ERROR)


def _cmd_export(args) -> int:
    cfg = _resolve_config(args)
    _, model = cfg.build_model()
    if args.format != "mps":
        print(f"unknown export format {args.format!r}", file=sys.stderr)
        return EXIT_ERROR
    write_mps(model, args.out)
    print(f"wrote {model.n_vars} columns / {len(model.constrs)} rows to {args.out}")
    return EXIT_OK


def _cmd_sweep(args) -> int:
    try:
        grid = _parse_grid(args.grid)
    except ValueError as exc:
        print(f"bad --grid: {exc}", file=sys.stderr)
        return EXIT_ERROR
    if args.scenario:
        configs = [load_scenario(args.scenario)]
    else:
        configs = [builtin_cislunar_case(v) for v in ("concentrated", "distributed")]
    if args.setup_phase:
        configs = [with_setup_phase(c) for c in configs]
    rows = run_sweep(
        configs,
        args.param,
        grid,
        time_limit=args.time_limit,
        rel_gap=args.gap,
        workers=args.workers,
    )
    os.makedirs(args.out, exist_ok=True)
    base = os.path.join(args.out, f"sweep_{args.param}")
    with open(base + ".csv", "w", encoding="utf-8") as fh:
        fh.write(sweep_to_csv(rows))
    with open(base + ".svg", "w", encoding="utf-8") as fh:
        fh.write(sweep_to_svg(rows, title=f"objective vs {args.param}"))
    flagged = sum(1 for r in rows if r.timed_out)
    print(f"wrote {len(rows)} rows to {base}.csv and {base}.svg" + (f" ({flagged} hit the time limit)" if flagged else ""))
    worst = max((r.status for r in rows), key=lambda s: _STATUS_EXIT.get(s, EXIT_ERROR))
    return _STATUS_EXIT.get(worst, EXIT_ERROR)


def _cmd_check(args) -> int:
    cfg = _resolve_config(args)
    _, model = cfg.build_model()
    values = {}
    with open(args.solution, "r", encoding="utf-8") as fh:
        for i, line in enumerate(fh):
            line = line.strip()
            if not line or (i == 0 and line.lower() == "name,value"):
                continue
            name, _, raw = line.rpartition(",")
            values[name] = float(raw)
    missing = [v.name for v in model.vars if v.name not in values]
    if missing:
        print(f"solution file lacks {len(missing)} variables (first: {missing[0]})", file=sys.stderr)
        return EXIT_ERROR
    x = [values[v.name] for v in model.vars]
    violations = model.check_feasibility(x, tol=args.tol)
    objective = model.objective_value(x)
    if violations:
        for v in violations[:20]:
            print(f"violation: {v}")
        if len(violations) > 20:
            print(f"... and {len(violations) - 20} more")
        return EXIT_INFEASIBLE
    print(f"feasible; objective ${objective:,.2f}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="isruplan", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)

    plan = sub.add_parser("plan", help="solve a scenario and write the mission plan")
    _add_scenario_options(plan)
    plan.add_argument("--out", help="directory for plan.txt/plan.csv/breakdown.csv/solution.csv")
    plan.add_argument("--gap", type=float, default=1e-6, help="relative optimality gap")
    plan.add_argument("--time-limit", type=float, default=None, help="seconds before giving up")
    plan.set_defaults(fn=_cmd_plan)

    export = sub.add_parser("export", help="write the assembled model to a file")
    _add_scenario_options(export)
    export.add_argument("--format", default="mps", help="export format (mps)")
    export.add_argument("--out", required=True, help="output file path")
    export.set_defaults(fn=_cmd_export)

    sweep = sub.add_parser("sweep", help="re-solve across a parameter grid")
    _add_scenario_options(sweep)
    sweep.add_argument("--param", required=True, choices=OVERRIDE_PARAMS, help="parameter to sweep")
    sweep.add_argument("--grid", required=True, help="a:b:step or comma-separated multipliers")
    sweep.add_argument("--out", required=True, help="directory for sweep CSV and SVG")
    sweep.add_argument("--gap", type=float, default=1e-4, help="relative optimality gap per point")
    sweep.add_argument("--time-limit", type=float, default=120.0, help="seconds per point")
    sweep.add_argument(
        "--workers",
        type=int,
        default=None,
        help=f"parallel solves (default ISRUPLAN_WORKERS or cpu count, here {default_workers()})",
    )
    sweep.set_defaults(fn=_cmd_sweep)

    check = sub.add_parser("check", help="verify a solution file against a scenario")
    _add_scenario_options(check)
    check.add_argument("--solution", required=True, help="CSV of name,value rows")
    check.add_argument("--tol", type=float, default=1e-6, help="feasibility tolerance")
    check.set_defaults(fn=_cmd_check)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ScenarioError, ModelError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
