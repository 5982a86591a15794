"""Command-line entry point.

Subcommands: run, sweep, verify, solve, gen. Exit codes: 0 success,
1 validation error, 2 bound violation found by verify.
"""

from __future__ import annotations

import argparse
import json
import sys

from .bounds import critical_alignment, critical_mass
from .errors import Infeasible, SignalPlantError, ValidationError
from .harness import (
    DEFAULT_EPSILONS,
    SWEEP_COLUMNS,
    load_grid,
    generate_instance,
    record_rows,
    record_to_dict,
    run_scenario,
    sweep,
    verify_bounds,
)
from .numeric import format_number, parse_number
from .scenario import load_scenario, save_scenario, scenario_to_json


def _parse_classifier_flag(value: str, n_collectives: int) -> dict:
    if value == "bayes":
        return {"kind": "bayes"}
    if value in ("min_weighted", "min_of_mins"):
        return {"kind": "adversarial", "objective": value}
    if value.startswith("against_target:"):
        idx = int(value.split(":", 1)[1])
        if not (0 <= idx < n_collectives):
            raise ValidationError(f"--classifier: collective index {idx} out of range")
        return {"kind": "adversarial", "objective": "against_target", "collective": idx}
    raise ValidationError(
        f"--classifier: unknown spec {value!r} "
        "(use bayes, against_target:<c>, min_weighted, or min_of_mins)"
    )


def _cmd_run(args) -> int:
    scenario = load_scenario(args.scenario)
    if args.classifier:
        import dataclasses

        request = _parse_classifier_flag(args.classifier, len(scenario.collectives))
        scenario = dataclasses.replace(scenario, classifier=request)
    record = run_scenario(scenario)
    if args.format == "json":
        json.dump(record_to_dict(record, include_timing=True), sys.stdout, indent=2)
        sys.stdout.write("\n")
    else:
        import csv

        writer = csv.DictWriter(sys.stdout, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
        writer.writeheader()
        for row in record_rows(f"{scenario.name}[0]", scenario, record):
            writer.writerow(row)
    return 0


def _cmd_sweep(args) -> int:
    grid = load_grid(args.grid)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        rows = sweep(grid, fh, workers=args.workers)
    print(f"wrote {rows} rows to {args.output}", file=sys.stderr)
    return 0


def _cmd_verify(args) -> int:
    epsilons = DEFAULT_EPSILONS
    if args.epsilons:
        epsilons = tuple(parse_number(v, "rational") for v in args.epsilons.split(","))
    report = verify_bounds(
        n=args.n,
        seed=args.seed,
        max_x=args.max_x,
        max_y=args.max_y,
        max_m=args.max_m,
        epsilons=epsilons,
        workers=args.workers,
    )
    print(report.summary())
    if args.report:
        doc = {
            "instances": report.instances,
            "fixed": list(report.fixed_names),
            "epsilons": [format_number(e) for e in report.epsilons],
            "classifiers_checked": report.classifiers_checked,
            "checks": report.checks,
            "violations": report.violations,
            "oracle_mismatches": report.oracle_mismatches,
            "max_slack": None if report.max_slack is None else format_number(report.max_slack),
        }
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(doc, fh, indent=2)
            fh.write("\n")
    if not report.ok:
        for v in report.violations + report.oracle_mismatches:
            print(json.dumps(v), file=sys.stderr)
        return 2
    return 0


def _cmd_solve(args) -> int:
    scenario = load_scenario(args.scenario)
    e = scenario.to_ensemble()
    s_star = parse_number(args.target, scenario.mode)
    if args.quantity == "mass":
        result = critical_mass(e, args.collective, s_star, scenario.epsilon)
        label = "critical mass"
    else:
        result = critical_alignment(e, args.collective, s_star, scenario.epsilon)
        label = "critical alignment"
    doc = {
        "quantity": args.quantity,
        "collective": args.collective,
        "target_success": format_number(s_star),
        "epsilon": format_number(scenario.epsilon),
        "feasible": result.feasible,
        "value": None if result.value is None else format_number(result.value),
        "achieved_bound": format_number(result.achieved_bound),
    }
    json.dump(doc, sys.stdout, indent=2)
    sys.stdout.write("\n")
    if not result.feasible:
        print(f"{label}: infeasible (bound at supremum = {format_number(result.achieved_bound)})",
              file=sys.stderr)
    return 0


def _cmd_gen(args) -> int:
    scenario = generate_instance(args.seed, args.max_x, args.max_y, args.max_m)
    if args.output:
        save_scenario(scenario, args.output)
        print(f"wrote {args.output}", file=sys.stderr)
    else:
        sys.stdout.write(scenario_to_json(scenario))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="signalplant",
        description="Simulate and verify signal planting by multiple collectives in classification.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario and print the record")
    p_run.add_argument("scenario")
    p_run.add_argument("--classifier", help="bayes | against_target:<c> | min_weighted | min_of_mins")
    p_run.add_argument("--format", choices=("json", "csv"), default="json")
    p_run.set_defaults(func=_cmd_run)

    p_sweep = sub.add_parser("sweep", help="run a grid sweep to CSV")
    p_sweep.add_argument("grid")
    p_sweep.add_argument("-o", "--output", required=True)
    p_sweep.add_argument("--workers", type=int, default=None)
    p_sweep.set_defaults(func=_cmd_sweep)

    p_verify = sub.add_parser("verify", help="run the soundness campaign")
    p_verify.add_argument("--n", type=int, default=200)
    p_verify.add_argument("--seed", type=int, default=7)
    p_verify.add_argument("--max-x", type=int, default=6)
    p_verify.add_argument("--max-y", type=int, default=4)
    p_verify.add_argument("--max-m", type=int, default=4)
    p_verify.add_argument("--epsilons", help="comma-separated budgets, e.g. 0,1/20,3/20,3/10")
    p_verify.add_argument("--workers", type=int, default=None)
    p_verify.add_argument("--report", help="write the full JSON report here")
    p_verify.set_defaults(func=_cmd_verify)

    p_solve = sub.add_parser("solve", help="invert a bound for critical mass or alignment")
    p_solve.add_argument("quantity", choices=("mass", "alignment"))
    p_solve.add_argument("scenario")
    p_solve.add_argument("--target", required=True, help="success level S*, e.g. 0.8 or 4/5")
    p_solve.add_argument("--collective", type=int, required=True)
    p_solve.set_defaults(func=_cmd_solve)

    p_gen = sub.add_parser("gen", help="generate a reproducible random scenario")
    p_gen.add_argument("--seed", type=int, required=True)
    p_gen.add_argument("-o", "--output")
    p_gen.add_argument("--max-x", type=int, default=6)
    p_gen.add_argument("--max-y", type=int, default=4)
    p_gen.add_argument("--max-m", type=int, default=4)
    p_gen.set_defaults(func=_cmd_gen)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValidationError, Infeasible) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except SignalPlantError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
