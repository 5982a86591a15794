"""Experiment execution: scenario runs, sweeps, random instances, and the
soundness campaign.

The campaign (`verify_bounds`) is the workbench's flagship check: on each
instance it enumerates every eps-suboptimal classifier of the observed
mixture, computes every collective's success for all of them with exact
integer arithmetic over a common denominator, and asserts the closed-form
bounds plus the adversary-vs-enumeration equalities. Any violation ships
with the full reproduction scenario.

Sweeps emit one flat CSV (SWEEP_COLUMNS) consumed by the plotting package;
grid points and campaign instances fan out over a process pool, with
output order independent of worker count.
"""

from __future__ import annotations

import csv
import dataclasses
import itertools
import json
import math
import os
import random
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from . import bounds as bounds_mod
from .classifier import (
    AgainstTarget,
    Classifier,
    MinOfMins,
    MinWeighted,
    adversarial,
    bayes,
    feasible_map,
)
from .collectives import Ensemble, Strategy, mixture
from .errors import EmptyEnsemble, EmptyTargetSlice, SignalPlantError, ValidationError
from .metrics import InstanceParams, instance_params, per_collective_success, success_report
from .numeric import Num, format_number
from .presets import FIXED_REGRESSIONS
from .scenario import (
    CollectiveScenario,
    Scenario,
    TransformSpec,
    loads_scenario,
    scenario_from_dict,
    scenario_to_json,
)

WORKERS_ENV = "SIGNALPLANT_WORKERS"

DEFAULT_EPSILONS = (Fraction(0), Fraction(1, 20), Fraction(3, 20), Fraction(3, 10))

SWEEP_COLUMNS = [
    "scenario_id",
    "c",
    "alpha_c",
    "alpha_bar",
    "epsilon",
    "strategy",
    "xi_c",
    "xi",
    "beta_c",
    "delta_c",
    "p_c",
    "S_c_bayes",
    "S_c_adversarial",
    "bound",
    "slack",
    "vacuous",
    "s_min",
    "s_w",
    "s_min_bound",
    "s_w_bound_printed",
    "s_w_bound_tight",
    "error",
]


def worker_count(workers: Optional[int] = None) -> int:
    if workers is not None:
        return max(1, int(workers))
    env = os.environ.get(WORKERS_ENV)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


# ---------------------------------------------------------------------------
# Scenario runs


@dataclass(frozen=True)
class RunRecord:
    """Everything one scenario run produced: parameters, bounds, successes, slack."""

    scenario_name: str
    digest: str
    params: InstanceParams
    bounds: bounds_mod.BoundReport
    successes: dict
    slacks: dict
    requested: str
    wall_time: float


def _classifier_key(request: dict) -> str:
    if request["kind"] == "bayes":
        return "bayes"
    if request["kind"] == "external":
        return "external"
    if request["objective"] == "against_target":
        return f"against_target:{request['collective']}"
    return request["objective"]


def run_scenario(s: Scenario) -> RunRecord:
    """Compute mixture, classifiers, successes, parameters and bounds.

    Deterministic; the canonical serialization (wall time excluded) is
    byte-identical across repeated runs.
    """
    started = time.perf_counter()
    e = s.to_ensemble()
    if e.size == 0:
        raise EmptyEnsemble("run_scenario needs at least one collective")
    params = instance_params(e, s.parsed_overrides())
    report = bounds_mod.bound_report(e, s.epsilon, params)
    mix = mixture(e)
    eps = s.epsilon

    classifiers = {"bayes": bayes(mix)}
    for i in range(e.size):
        classifiers[f"against_target:{i}"] = adversarial(mix, eps, AgainstTarget(e, i))
    classifiers["min_weighted"] = adversarial(mix, eps, MinWeighted(e))
    classifiers["min_of_mins"] = adversarial(mix, eps, MinOfMins(e))
    if s.classifier["kind"] == "external":
        fkeys = {str(x): x for x in e.base.space.features}
        assignment = {fkeys[k]: y for k, y in s.classifier["assignment"].items()}
        classifiers["external"] = Classifier(e.base.space, assignment, "external")

    successes = {key: success_report(m, e) for key, m in classifiers.items()}
    slacks = {}
    for key, rep in successes.items():
        per = []
        for i, pb in enumerate(report.per_collective):
            per.append(rep.per_collective[i] - pb.bound if pb.applicable else None)
        slacks[key] = tuple(per)
    return RunRecord(
        scenario_name=s.name,
        digest=s.digest(),
        params=params,
        bounds=report,
        successes=successes,
        slacks=slacks,
        requested=_classifier_key(s.classifier),
        wall_time=time.perf_counter() - started,
    )


def _num_or_none(x):
    return None if x is None else format_number(x)


def record_to_dict(record: RunRecord, include_timing: bool = False) -> dict:
    """Canonical JSON form of a run; wall time only on request (nondeterministic)."""
    doc = {
        "scenario": record.scenario_name,
        "digest": record.digest,
        "requested_classifier": record.requested,
        "epsilon": format_number(record.bounds.epsilon),
        "params": {
            "alpha_bar": format_number(record.params.alpha_bar),
            "xi": format_number(record.params.xi),
            "xi_c": [format_number(v) for v in record.params.xi_c],
            "beta_c": [format_number(v) for v in record.params.beta_c],
            "delta_c": [format_number(v) for v in record.params.delta_c],
            "delta_defined": list(record.params.delta_defined),
            "p_c": [format_number(v) for v in record.params.p_c],
        },
        "bounds": {
            "per_collective": [
                {
                    "strategy": pb.strategy.value,
                    "bound": _num_or_none(pb.bound),
                    "applicable": pb.applicable,
                    "reason": pb.reason,
                    "rarity_term": _num_or_none(pb.rarity_term),
                    "overlap_term": _num_or_none(pb.overlap_term),
                    "vacuous": pb.vacuous,
                }
                for pb in record.bounds.per_collective
            ],
            "s_min_bound": _num_or_none(record.bounds.s_min_bound),
            "s_w_bound_printed": _num_or_none(record.bounds.s_w_bound_printed),
            "s_w_bound_tightened": _num_or_none(record.bounds.s_w_bound_tightened),
        },
        "successes": {
            key: {
                "per_collective": [format_number(v) for v in rep.per_collective],
                "s_min": format_number(rep.s_min),
                "s_weighted": format_number(rep.s_weighted),
            }
            for key, rep in sorted(record.successes.items())
        },
        "slacks": {
            key: [_num_or_none(v) for v in per]
            for key, per in sorted(record.slacks.items())
        },
    }
    if include_timing:
        doc["wall_time_seconds"] = record.wall_time
    return doc


# ---------------------------------------------------------------------------
# Sweeps


@dataclass(frozen=True)
class SweepGrid:
    """Cross-product sweep over a base scenario.

    Axis order in the expansion is fixed: epsilon, then per-collective
    masses by index, then target patterns, then kernel patterns.
    """

    scenario: Scenario
    epsilon_axis: Optional[tuple] = None
    alpha_axes: Optional[dict] = None
    target_axes: Optional[tuple] = None
    kernel_axes: Optional[tuple] = None

    def expand(self):
        s = self.scenario
        eps_values = self.epsilon_axis if self.epsilon_axis is not None else (s.epsilon,)
        alpha_axes = self.alpha_axes or {}
        alpha_indices = sorted(alpha_axes)
        alpha_lists = [alpha_axes[i] for i in alpha_indices]
        target_values = self.target_axes if self.target_axes is not None else (None,)
        kernel_values = self.kernel_axes if self.kernel_axes is not None else (None,)
        ordinal = 0
        for eps in eps_values:
            for alpha_combo in itertools.product(*alpha_lists):
                for targets in target_values:
                    for kernels in kernel_values:
                        collectives = list(s.collectives)
                        for idx, mass in zip(alpha_indices, alpha_combo):
                            collectives[idx] = dataclasses.replace(collectives[idx], mass=mass)
                        if targets is not None:
                            collectives = [
                                dataclasses.replace(c, target=t)
                                for c, t in zip(collectives, targets)
                            ]
                        if kernels is not None:
                            collectives = [
                                dataclasses.replace(c, transform=k)
                                for c, k in zip(collectives, kernels)
                            ]
                        variant = dataclasses.replace(
                            s, collectives=tuple(collectives), epsilon=eps
                        )
                        yield ordinal, f"{s.name}[{ordinal}]", variant
                        ordinal += 1


def record_rows(scenario_id: str, s: Scenario, record: RunRecord) -> list:
    """Flatten one run into sweep rows, one per collective."""

    def fmt(x):
        if x is None:
            return ""
        if isinstance(x, bool):
            return "1" if x else "0"
        if isinstance(x, str):
            return x
        return repr(float(x))

    s_min = record.successes["min_of_mins"].s_min
    s_w = record.successes["min_weighted"].s_weighted
    rows = []
    for i, c in enumerate(s.collectives):
        pb = record.bounds.per_collective[i]
        s_adv = record.successes[f"against_target:{i}"].per_collective[i]
        rows.append(
            {
                "scenario_id": scenario_id,
                "c": str(i),
                "alpha_c": fmt(c.mass),
                "alpha_bar": fmt(record.params.alpha_bar),
                "epsilon": fmt(s.epsilon),
                "strategy": c.strategy.value,
                "xi_c": fmt(record.params.xi_c[i]),
                "xi": fmt(record.params.xi),
                "beta_c": fmt(record.params.beta_c[i]),
                "delta_c": fmt(record.params.delta_c[i]),
                "p_c": fmt(record.params.p_c[i]),
                "S_c_bayes": fmt(record.successes["bayes"].per_collective[i]),
                "S_c_adversarial": fmt(s_adv),
                "bound": fmt(pb.bound),
                "slack": fmt(s_adv - pb.bound if pb.applicable else None),
                "vacuous": fmt(pb.vacuous) if pb.applicable else "",
                "s_min": fmt(s_min),
                "s_w": fmt(s_w),
                "s_min_bound": fmt(record.bounds.s_min_bound),
                "s_w_bound_printed": fmt(record.bounds.s_w_bound_printed),
                "s_w_bound_tight": fmt(record.bounds.s_w_bound_tightened),
                "error": "",
            }
        )
    return rows


def _sweep_worker(payload):
    scenario_id, text = payload
    s = loads_scenario(text)
    try:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", EmptyTargetSlice)
            record = run_scenario(s)
        return record_rows(scenario_id, s, record)
    except SignalPlantError as exc:
        row = {col: "" for col in SWEEP_COLUMNS}
        row["scenario_id"] = scenario_id
        row["error"] = f"{type(exc).__name__}: {exc}"
        return [row]


def sweep(grid: SweepGrid, out, workers: Optional[int] = None) -> int:
    """Run every grid point and stream CSV rows to `out` in grid order.

    Failures at individual points become rows with the error column set;
    the sweep keeps going. Returns the number of data rows written.
    """
    writer = csv.DictWriter(out, fieldnames=SWEEP_COLUMNS, lineterminator="\n")
    writer.writeheader()
    payloads = []
    for _, scenario_id, variant in grid.expand():
        # serialize eagerly so worker failures cannot reorder output
        payloads.append((scenario_id, scenario_to_json(variant)))
    n_workers = worker_count(workers)
    if n_workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = pool.map(_sweep_worker, payloads, chunksize=max(1, len(payloads) // (4 * n_workers) or 1))
            all_rows = list(results)
    else:
        all_rows = [_sweep_worker(p) for p in payloads]
    count = 0
    for rows in all_rows:
        for row in rows:
            writer.writerow(row)
            count += 1
    return count


def grid_from_dict(doc: dict, base_dir: str = ".") -> SweepGrid:
    if not isinstance(doc, dict):
        raise ValidationError("grid document must be a JSON object")
    sdoc = doc.get("scenario")
    if isinstance(sdoc, str):
        from .scenario import load_scenario

        scenario = load_scenario(os.path.join(base_dir, sdoc))
    elif isinstance(sdoc, dict):
        scenario = scenario_from_dict(sdoc)
    else:
        raise ValidationError("grid: 'scenario' must be a path or an inline object")
    axes = doc.get("axes", {})
    if not isinstance(axes, dict):
        raise ValidationError("grid.axes: must be an object")
    from .numeric import parse_number

    epsilon_axis = None
    if "epsilon" in axes:
        epsilon_axis = tuple(parse_number(v, scenario.mode) for v in axes["epsilon"])
        for v in epsilon_axis:
            if not (0 <= v < 0.5):
                raise ValidationError(f"grid.axes.epsilon: value {v} outside [0, 0.5)")
    alpha_axes = None
    if "alpha" in axes:
        if not isinstance(axes["alpha"], dict):
            raise ValidationError("grid.axes.alpha: must map collective index to a value list")
        alpha_axes = {}
        for key, values in axes["alpha"].items():
            idx = int(key)
            if not (0 <= idx < len(scenario.collectives)):
                raise ValidationError(f"grid.axes.alpha.{key}: collective index out of range")
            alpha_axes[idx] = tuple(parse_number(v, scenario.mode) for v in values)
    target_axes = None
    if "targets" in axes:
        patterns = []
        for pi, pattern in enumerate(axes["targets"]):
            if len(pattern) != len(scenario.collectives):
                raise ValidationError(f"grid.axes.targets[{pi}]: need one target per collective")
            for t in pattern:
                if t not in scenario.labels:
                    raise ValidationError(f"grid.axes.targets[{pi}]: unknown label {t!r}")
            patterns.append(tuple(pattern))
        target_axes = tuple(patterns)
    kernel_axes = None
    if "kernels" in axes:
        from .scenario import _parse_transform

        fkeys = {str(x): x for x in scenario.features}
        patterns = []
        for pi, pattern in enumerate(axes["kernels"]):
            if len(pattern) != len(scenario.collectives):
                raise ValidationError(f"grid.axes.kernels[{pi}]: need one transform per collective")
            patterns.append(
                tuple(
                    _parse_transform(td, f"grid.axes.kernels[{pi}][{ci}]", fkeys, scenario.mode)
                    for ci, td in enumerate(pattern)
                )
            )
        kernel_axes = tuple(patterns)
    return SweepGrid(scenario, epsilon_axis, alpha_axes, target_axes, kernel_axes)


def load_grid(path) -> SweepGrid:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            doc = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ValidationError(
                f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}"
            ) from exc
    return grid_from_dict(doc, os.path.dirname(os.path.abspath(str(path))))


# ---------------------------------------------------------------------------
# Random instances


def generate_instance(
    seed: int,
    max_x: int = 6,
    max_y: int = 4,
    max_m: int = 4,
    strategies: Sequence = (Strategy.FEATURE_LABEL, Strategy.FEATURE_ONLY),
) -> Scenario:
    """Reproducible random rational instance within the given space limits.

    Weights are small-denominator rationals with a healthy share of exact
    zeros, transforms are deterministic maps or half-half two-point
    kernels, targets may collide across collectives. Identical seeds give
    byte-identical scenarios.
    """
    if max_x < 2 or max_y < 2 or max_m < 1:
        raise ValidationError("limits must allow |X| >= 2, |Y| >= 2, M >= 1")
    strategies = tuple(strategies)
    rng = random.Random(seed)
    nx = rng.randint(2, max_x)
    ny = rng.randint(2, max_y)
    m = rng.randint(1, max_m)
    features = tuple(f"x{i}" for i in range(nx))
    labels = tuple(range(ny))
    weights = {}
    for x in features:
        for y in labels:
            w = rng.randint(-3, 9)
            if w > 0:
                weights[(x, y)] = Fraction(w)
    if not weights:
        weights[(features[0], labels[0])] = Fraction(1)
    mass_numerators = [rng.randint(1, 20) for _ in range(m)]
    total_num = sum(mass_numerators)
    denominator = total_num + rng.randint(1, 3 * total_num)
    collectives = []
    for k in mass_numerators:
        target = rng.choice(labels)
        if rng.random() < 0.7:
            transform = TransformSpec(
                "map", mapping={x: rng.choice(features) for x in features}
            )
        else:
            rows = {}
            for x in features:
                a = rng.choice(features)
                b = rng.choice(features)
                if a == b:
                    rows[x] = {a: Fraction(1)}
                else:
                    rows[x] = {a: Fraction(1, 2), b: Fraction(1, 2)}
            transform = TransformSpec("rows", rows=rows)
        strategy = rng.choice(strategies)
        collectives.append(
            CollectiveScenario(Fraction(k, denominator), target, strategy, transform)
        )
    return Scenario(
        name=f"gen-{seed}",
        mode="rational",
        features=features,
        labels=labels,
        base_weights=weights,
        collectives=tuple(collectives),
        epsilon=Fraction(0),
    )


# ---------------------------------------------------------------------------
# Soundness campaign


@dataclass
class VerificationReport:
    """Aggregate outcome of a soundness campaign."""

    instances: int
    fixed_names: tuple
    epsilons: tuple
    classifiers_checked: int
    checks: int
    violations: list
    oracle_mismatches: list
    max_slack: Optional[Num]

    @property
    def ok(self) -> bool:
        return not self.violations and not self.oracle_mismatches

    def summary(self) -> str:
        lines = [
            f"instances: {self.instances} ({len(self.fixed_names)} fixed + "
            f"{self.instances - len(self.fixed_names)} random)",
            f"epsilons: {', '.join(format_number(e) for e in self.epsilons)}",
            f"classifiers enumerated: {self.classifiers_checked}",
            f"inequality checks: {self.checks}",
            f"violations: {len(self.violations)}",
            f"oracle mismatches: {len(self.oracle_mismatches)}",
        ]
        if self.max_slack is not None:
            lines.append(f"max observed slack (worst-case success - bound): {format_number(self.max_slack)}")
        return "\n".join(lines)


def _verify_instance(s: Scenario, epsilons: Sequence) -> dict:
    """Enumerate every eps-suboptimal classifier and check all bounds exactly.

    Per-collective successes over the enumeration are accumulated as
    integers over one common denominator, so every comparison against the
    rational bounds is exact. Checking the enumeration minimum is
    equivalent to checking each classifier: successes only differ at
    points with more than one feasible label.
    """
    if s.mode != "rational":
        raise ValidationError("the soundness campaign requires rational mode")
    result = {
        "name": s.name,
        "classifiers": 0,
        "checks": 0,
        "violations": [],
        "oracle_mismatches": [],
        "max_slack": None,
    }
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", EmptyTargetSlice)
        e = s.to_ensemble()
        mix = mixture(e)
        params = instance_params(e)
        emissions = [e.emission(i) for i in range(e.size)]
        targets = [c.target for c in e.collectives]
        abar = e.total_mass

        for eps in epsilons:
            report = bounds_mod.bound_report(e, eps, params)
            fmap = feasible_map(mix, eps)
            points = list(fmap)
            # zero-mixture-mass points take the lowest-index label by
            # convention; emissions may still charge them, so they enter
            # every classifier's success as one shared constant
            off_points = [x for x in e.base.space.features if x not in fmap]
            denom = math.lcm(
                *(
                    emissions[i].mass[x].denominator
                    for i in range(e.size)
                    for x in e.base.space.features
                ),
                1,
            )
            contrib = {
                x: {
                    y: tuple(
                        int(emissions[i].mass[x] * denom) if targets[i] == y else 0
                        for i in range(e.size)
                    )
                    for y in fmap[x]
                }
                for x in points
            }
            wmass = {
                x: {
                    y: sum(
                        (
                            e.collectives[i].mass * emissions[i].mass[x]
                            for i in range(e.size)
                            if targets[i] == y
                        ),
                        Fraction(0),
                    )
                    for y in fmap[x]
                }
                for x in points
            }
            # covers every alpha_i * emission_i(x) product by construction
            wden = math.lcm(*(c.mass.denominator * denom for c in e.collectives), 1)
            wcontrib = {
                x: {y: int(w * wden) for y, w in row.items()} for x, row in wmass.items()
            }

            fixed = [x for x in points if len(fmap[x]) == 1]
            free = [x for x in points if len(fmap[x]) > 1]
            base_totals = [0] * e.size
            base_w = 0
            fill_label = e.base.space.labels[0]
            for x in off_points:
                for c in range(e.size):
                    if targets[c] == fill_label:
                        base_totals[c] += int(emissions[c].mass[x] * denom)
                base_w += int(
                    sum(
                        (
                            e.collectives[i].mass * emissions[i].mass[x]
                            for i in range(e.size)
                            if targets[i] == fill_label
                        ),
                        Fraction(0),
                    )
                    * wden
                )
            for x in fixed:
                y = fmap[x][0]
                row = contrib[x][y]
                for c in range(e.size):
                    base_totals[c] += row[c]
                base_w += wcontrib[x][y]

            min_per_c = None
            min_of_min = None
            min_w = None
            count = 0
            for combo in itertools.product(*(fmap[x] for x in free)):
                totals = list(base_totals)
                w_total = base_w
                for x, y in zip(free, combo):
                    row = contrib[x][y]
                    for c in range(e.size):
                        totals[c] += row[c]
                    w_total += wcontrib[x][y]
                if min_per_c is None:
                    min_per_c = totals
                else:
                    min_per_c = [min(a, b) for a, b in zip(min_per_c, totals)]
                worst = min(totals)
                if min_of_min is None or worst < min_of_min:
                    min_of_min = worst
                if min_w is None or w_total < min_w:
                    min_w = w_total
                count += 1
            result["classifiers"] += count

            def as_frac(value, d):
                return Fraction(value, d)

            eps_str = format_number(eps)

            def violation(kind, c_index, observed, bound_value):
                result["violations"].append(
                    {
                        "instance": s.name,
                        "epsilon": eps_str,
                        "kind": kind,
                        "collective": c_index,
                        "observed_min": format_number(observed),
                        "bound": format_number(bound_value),
                        "scenario": s.to_jsonable(),
                    }
                )

            for i, pb in enumerate(report.per_collective):
                if not pb.applicable:
                    continue
                observed = as_frac(min_per_c[i], denom)
                result["checks"] += 1
                if observed < pb.bound:
                    violation("per_collective", i, observed, pb.bound)
                slack = observed - pb.bound
                if result["max_slack"] is None or slack > result["max_slack"]:
                    result["max_slack"] = slack
            if report.s_min_bound is not None:
                observed = as_frac(min_of_min, denom)
                result["checks"] += 1
                if observed < report.s_min_bound:
                    violation("s_min", None, observed, report.s_min_bound)
            if report.s_w_bound_printed is not None:
                observed = as_frac(min_w, wden) / abar
                result["checks"] += 1
                if observed < report.s_w_bound_printed:
                    violation("s_w_printed", None, observed, report.s_w_bound_printed)
                result["checks"] += 1
                if observed < report.s_w_bound_tightened:
                    violation("s_w_tightened", None, observed, report.s_w_bound_tightened)

            def mismatch(kind, c_index, via_adversary, via_enumeration):
                result["oracle_mismatches"].append(
                    {
                        "instance": s.name,
                        "epsilon": eps_str,
                        "kind": kind,
                        "collective": c_index,
                        "adversarial": format_number(via_adversary),
                        "enumeration_min": format_number(via_enumeration),
                        "scenario": s.to_jsonable(),
                    }
                )

            for i in range(e.size):
                adv = adversarial(mix, eps, AgainstTarget(e, i))
                val = per_collective_success(adv, e, i)
                if val != as_frac(min_per_c[i], denom):
                    mismatch("against_target", i, val, as_frac(min_per_c[i], denom))
            adv_w = adversarial(mix, eps, MinWeighted(e))
            val = success_report(adv_w, e).s_weighted
            if val != as_frac(min_w, wden) / abar:
                mismatch("min_weighted", None, val, as_frac(min_w, wden) / abar)
            adv_m = adversarial(mix, eps, MinOfMins(e))
            val = success_report(adv_m, e).s_min
            if val != as_frac(min_of_min, denom):
                mismatch("min_of_mins", None, val, as_frac(min_of_min, denom))
    return result


def _verify_worker(payload):
    text, eps_strs = payload
    s = loads_scenario(text)
    epsilons = [Fraction(v) for v in eps_strs]
    return _verify_instance(s, epsilons)


def verify_bounds(
    n: int,
    seed: int,
    max_x: int = 6,
    max_y: int = 4,
    max_m: int = 4,
    epsilons: Optional[Sequence] = None,
    workers: Optional[int] = None,
    include_fixed: bool = True,
) -> VerificationReport:
    """Soundness campaign over the fixed regressions plus n random instances."""
    eps_list = tuple(epsilons) if epsilons is not None else DEFAULT_EPSILONS
    scenarios = []
    fixed_names = ()
    if include_fixed:
        fixed = [build() for build in FIXED_REGRESSIONS]
        fixed_names = tuple(s.name for s in fixed)
        scenarios.extend(fixed)
    scenarios.extend(generate_instance(seed + i, max_x, max_y, max_m) for i in range(n))
    eps_strs = [format_number(v) for v in eps_list]
    payloads = [(scenario_to_json(s), eps_strs) for s in scenarios]
    n_workers = worker_count(workers)
    if n_workers > 1 and len(payloads) > 1:
        with ProcessPoolExecutor(max_workers=n_workers) as pool:
            results = list(
                pool.map(_verify_worker, payloads, chunksize=max(1, len(payloads) // (4 * n_workers) or 1))
            )
    else:
        results = [_verify_worker(p) for p in payloads]
    violations = []
    mismatches = []
    classifiers = 0
    checks = 0
    max_slack = None
    for r in results:
        classifiers += r["classifiers"]
        checks += r["checks"]
        violations.extend(r["violations"])
        mismatches.extend(r["oracle_mismatches"])
        if r["max_slack"] is not None and (max_slack is None or r["max_slack"] > max_slack):
            max_slack = r["max_slack"]
    return VerificationReport(
        instances=len(scenarios),
        fixed_names=fixed_names,
        epsilons=eps_list,
        classifiers_checked=classifiers,
        checks=checks,
        violations=violations,
        oracle_mismatches=mismatches,
        max_slack=max_slack,
    )


# ---------------------------------------------------------------------------
# Finite-sample companion


@dataclass(frozen=True)
class EmpiricalRunRecord:
    """Plug-in classifier fitted on mixture samples, scored against the true base."""

    scenario_name: str
    n_samples: int
    seed: int
    successes: object
    classifier: Classifier


def empirical_sample_run(s: Scenario, n_samples: int, seed: int) -> EmpiricalRunRecord:
    """Draw i.i.d. mixture samples, fit the plug-in argmax classifier, and
    report exact successes against the true base distribution.

    The plug-in need not be eps-suboptimal for the true mixture, so no
    bound is asserted.
    """
    if n_samples < 1:
        raise ValidationError("n_samples must be at least 1")
    e = s.to_ensemble()
    mix = mixture(e)
    cells = list(mix.mass.keys())
    weights = [float(mix.mass[cell]) for cell in cells]
    rng = random.Random(seed)
    draws = rng.choices(cells, weights=weights, k=n_samples)
    counts = {}
    for cell in draws:
        counts[cell] = counts.get(cell, 0) + 1
    assignment = {}
    for x in e.base.space.features:
        row = [(counts.get((x, y), 0), -e.base.space.label_index(y), y) for y in e.base.space.labels]
        best = max(row)
        if best[0] == 0:
            assignment[x] = e.base.space.labels[0]
        else:
            assignment[x] = best[2]
    m = Classifier(e.base.space, assignment, "external:empirical")
    return EmpiricalRunRecord(s.name, n_samples, seed, success_report(m, e), m)
