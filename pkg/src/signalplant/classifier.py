"""The firm's classifier family under a total-variation suboptimality budget.

A classifier with budget eps may argmax any conditional within TV distance
eps of the observed mixture conditional, independently at each feature
point. The flip radius of a label is the least TV perturbation making it a
(possibly tied) argmax; a label is feasible when its radius is at most eps,
ties at the boundary included (the adversary wins ties). Zero-mixture-mass
feature points always receive the lowest-index label.

Worst-case members of the family are built per point:

- against_target: avoid one collective's target wherever feasible,
- min_weighted: minimize the mass-weighted average success,
- min_of_mins: minimize the worst per-collective success.

The brute-force enumeration of the whole family doubles as the oracle the
worst-case constructions are checked against.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Union

from .collectives import Ensemble, Strategy, actioned_distribution, mixture, signal_set
from .errors import InvalidEpsilon, TooManyClassifiers, UndefinedConditional, ValidationError
from .numeric import Num, is_positive, zero
from .space import (
    ConditionalTable,
    JointDistribution,
    conditional_y_given_x,
    marginal_x,
)

ENUMERATION_CAP = 1_000_000


@dataclass(frozen=True)
class EpsilonBudget:
    """Suboptimality budget; any classifier is at worst 0.5-suboptimal, so eps < 0.5."""

    value: Num

    def __post_init__(self):
        if not (0 <= self.value < Fraction(1, 2)):
            raise InvalidEpsilon(f"epsilon must lie in [0, 0.5), got {self.value}")


def as_epsilon(eps) -> EpsilonBudget:
    if isinstance(eps, EpsilonBudget):
        return eps
    return EpsilonBudget(eps)


@dataclass(frozen=True)
class Classifier:
    """A total map from feature points to labels, with its provenance."""

    space: object
    assignment: Mapping
    provenance: str

    def __post_init__(self):
        for x in self.space.features:
            if x not in self.assignment:
                raise ValidationError(f"assignment missing feature point {x!r}")
            if self.assignment[x] not in self.space.labels:
                raise ValidationError(f"assignment at {x!r} is not a declared label")

    def __call__(self, x):
        return self.assignment[x]


@dataclass(frozen=True)
class FlipRadiusTable:
    """Minimal TV perturbation of each conditional making each label an argmax."""

    space: object
    radii: Mapping


@dataclass(frozen=True)
class AgainstTarget:
    ensemble: Ensemble
    c_index: int


@dataclass(frozen=True)
class MinWeighted:
    ensemble: Ensemble


@dataclass(frozen=True)
class MinOfMins:
    ensemble: Ensemble


Objective = Union[AgainstTarget, MinWeighted, MinOfMins]


def _radius_of_label(row: Mapping, labels, y) -> Num:
    """Least TV budget making y a (possibly tied) argmax of the row.

    Minimizes max(D(t), I(t)) over thresholds t, where D(t) is the mass cut
    from labels above t and I(t) the lift needed to raise y to t. Both are
    piecewise linear, so the optimum sits at a probability level or at a
    segment crossing; all candidates are evaluated exactly.
    """
    py = row[y]
    others = [row[yy] for yy in labels if yy != y]
    if not others:
        return py - py  # zero of the right numeric type
    top = max(others)
    if py >= top:
        return py - py
    levels = sorted({v for v in others if v > py})
    candidates = [py] + levels
    pts = [py] + levels
    for i in range(len(pts) - 1):
        hi = pts[i + 1]
        above = [v for v in others if v >= hi]
        crossing = (sum(above) + py) / (len(above) + 1)
        if pts[i] <= crossing <= hi:
            candidates.append(crossing)
    best = None
    for t in candidates:
        cut = sum((v - t for v in others if v > t), py - py)
        lift = t - py
        worst = cut if cut > lift else lift
        if best is None or worst < best:
            best = worst
    return best


def bayes(p: JointDistribution) -> Classifier:
    """Exact argmax of the conditional; ties and zero-mass points take the lowest-index label."""
    cond = conditional_y_given_x(p)
    assignment = {}
    for x in p.space.features:
        if x in cond.rows:
            row = cond.rows[x]
            best = max(row.values())
            assignment[x] = next(y for y in p.space.labels if row[y] == best)
        else:
            assignment[x] = p.space.labels[0]
    return Classifier(p.space, assignment, "bayes")


def flip_radius(p: JointDistribution, x, y) -> Num:
    """Minimal TV perturbation of the conditional at x under which y becomes an argmax."""
    cond = conditional_y_given_x(p)
    row = cond.row(x)
    if y not in p.space.labels:
        raise ValidationError(f"unknown label {y!r}")
    return _radius_of_label(row, p.space.labels, y)


def flip_radius_table(p: JointDistribution) -> FlipRadiusTable:
    """All flip radii over the support of the feature marginal."""
    cond = conditional_y_given_x(p)
    radii = {}
    for x, row in cond.rows.items():
        for y in p.space.labels:
            radii[(x, y)] = _radius_of_label(row, p.space.labels, y)
    return FlipRadiusTable(p.space, radii)


def feasible_labels(p: JointDistribution, x, eps) -> set:
    """Labels an eps-suboptimal classifier may output at x; boundary ties included."""
    budget = as_epsilon(eps)
    cond = conditional_y_given_x(p)
    row = cond.row(x)
    return {y for y in p.space.labels if _radius_of_label(row, p.space.labels, y) <= budget.value}


def feasible_map(p: JointDistribution, eps, region: Optional[Iterable] = None) -> dict:
    """Per-point feasible label tuples (declared label order) over a region.

    Region defaults to the support of the feature marginal; it must not
    contain zero-mass points.
    """
    budget = as_epsilon(eps)
    cond = conditional_y_given_x(p)
    if region is None:
        region = [x for x in p.space.features if x in cond.rows]
    out = {}
    for x in region:
        row = cond.row(x)
        out[x] = tuple(
            y for y in p.space.labels if _radius_of_label(row, p.space.labels, y) <= budget.value
        )
    return out


def is_epsilon_suboptimal(m: Classifier, p: JointDistribution, eps, region: Optional[Iterable] = None) -> bool:
    """True iff some conditional within TV eps of p's makes m an argmax everywhere on the region."""
    budget = as_epsilon(eps)
    cond = conditional_y_given_x(p)
    if region is None:
        region = [x for x in p.space.features if x in cond.rows]
    for x in region:
        row = cond.row(x)
        if _radius_of_label(row, p.space.labels, m.assignment[x]) > budget.value:
            return False
    return True


def enumerate_suboptimal(
    p: JointDistribution,
    eps,
    region: Optional[Iterable] = None,
    cap: int = ENUMERATION_CAP,
):
    """All eps-suboptimal classifiers on the region, as the Cartesian product
    of per-point feasible labels. Off-region points get the lowest-index label.

    Raises TooManyClassifiers before yielding anything if the product
    exceeds the cap.
    """
    fmap = feasible_map(p, eps, region)
    count = 1
    for labels in fmap.values():
        count *= len(labels)
        if count > cap:
            raise TooManyClassifiers(f"enumeration would exceed cap {cap}")
    points = list(fmap.keys())
    base_assignment = {x: p.space.labels[0] for x in p.space.features}

    def generate():
        for index, combo in enumerate(itertools.product(*(fmap[x] for x in points))):
            assignment = dict(base_assignment)
            assignment.update(zip(points, combo))
            yield Classifier(p.space, assignment, f"enumerated:{index}")

    return generate()


def _off_support_fill(p: JointDistribution) -> dict:
    return {x: p.space.labels[0] for x in p.space.features}


def adversarial(p: JointDistribution, eps, objective: Objective) -> Classifier:
    """A worst-case eps-suboptimal classifier for the given objective.

    p must be the observed mixture of the objective's ensemble. The
    against_target and min_weighted objectives are exact per-point
    minimizers; min_of_mins picks the target whose dedicated adversary ends
    worst, which the enumeration oracle confirms is the exact minimum.
    """
    budget = as_epsilon(eps)
    if isinstance(objective, MinOfMins):
        e = objective.ensemble
        best = None
        for c_index in range(e.size):
            m = adversarial(p, budget, AgainstTarget(e, c_index))
            score = _success_against(e, c_index, m)
            if best is None or score < best[0]:
                best = (score, m)
        if best is None:
            raise ValidationError("min_of_mins needs at least one collective")
        return Classifier(p.space, best[1].assignment, "adversarial:min_of_mins")

    fmap = feasible_map(p, budget)
    assignment = _off_support_fill(p)
    if isinstance(objective, AgainstTarget):
        target = objective.ensemble.collectives[objective.c_index].target
        for x, labels in fmap.items():
            dodge = [y for y in labels if y != target]
            assignment[x] = dodge[0] if dodge else target
        return Classifier(p.space, assignment, f"adversarial:against_target:{objective.c_index}")
    if isinstance(objective, MinWeighted):
        e = objective.ensemble
        emissions = [e.emission(i) for i in range(e.size)]
        for x, labels in fmap.items():
            costs = []
            for y in labels:
                cost = sum(
                    (c.mass * emissions[i].mass[x] for i, c in enumerate(e.collectives) if c.target == y),
                    zero(p.mode),
                )
                costs.append((cost, e.base.space.label_index(y), y))
            assignment[x] = min(costs)[2]
        return Classifier(p.space, assignment, "adversarial:min_weighted")
    raise ValidationError(f"unknown adversarial objective {objective!r}")


def _success_against(e: Ensemble, c_index: int, m: Classifier) -> Num:
    lam = e.emission(c_index)
    target = e.collectives[c_index].target
    return sum(
        (w for x, w in lam.mass.items() if w != 0 and m.assignment[x] == target),
        zero(e.base.mode),
    )


@dataclass(frozen=True)
class ScoreDecomposition:
    """Unnormalized mixture scores at one feature point, split by target alignment."""

    scores: Mapping
    aligned: Num
    contradicting: Num


def score_decomposition(e: Ensemble, c_index: int, x) -> ScoreDecomposition:
    """Per-label mixture masses N(y|x), plus the aligned and contradicting
    collective feature masses at x, relative to collective c's target."""
    e.base.space.require_feature(x)
    target = e.collectives[c_index].target
    mix = mixture(e)
    scores = {y: mix.mass[(x, y)] for y in e.base.space.labels}
    aligned = zero(e.base.mode)
    contradicting = zero(e.base.mode)
    for j, c in enumerate(e.collectives):
        pjx = marginal_x(actioned_distribution(e.base, c)).mass[x]
        if c.target == target:
            aligned += c.mass * pjx
        else:
            contradicting += c.mass * pjx
    return ScoreDecomposition(scores, aligned, contradicting)


def sufficient_condition_holds(e: Ensemble, c_index: int, x, eps) -> bool:
    """Margin test that forces every eps-suboptimal classifier to the
    collective's target at x.

    Feature-label collectives use the mixture-score margin; feature-only
    collectives use the preimage-ratio form on their signal set. Both are
    evaluated strictly, matching the tie-including feasibility convention.
    """
    budget = as_epsilon(eps)
    c = e.collectives[c_index]
    space = e.base.space
    space.require_feature(x)
    two_eps = 2 * budget.value
    if c.strategy is Strategy.FEATURE_LABEL:
        mix = mixture(e)
        px = mix.feature_mass(x)
        n_target = mix.mass[(x, c.target)]
        return all(
            n_target - mix.mass[(x, y)] > two_eps * px for y in space.labels if y != c.target
        )
    if x not in signal_set(e.base, c):
        return False
    lam = e.emission(c_index)
    if not is_positive(lam.mass[x], e.base.mode):
        return False
    cond = conditional_y_given_x(e.base)
    p_min = min(cond.rows[xx][c.target] for xx in cond.rows)
    alpha_bar = e.total_mass
    base_x = e.base.feature_mass(x)
    s_ctr = zero(e.base.mode)
    for j, other in enumerate(e.collectives):
        if other.target != c.target:
            s_ctr += other.mass * marginal_x(actioned_distribution(e.base, other)).mass[x]
    lhs = c.mass * p_min * (1 - two_eps) * lam.mass[x]
    rhs = ((1 - alpha_bar) * (1 + two_eps - 2 * p_min) + two_eps * alpha_bar) * base_x
    rhs += (1 + two_eps) * s_ctr
    return lhs > rhs
