"""Per-collective and global success, and the instance constants bounds consume.

Success of one collective is the base-population probability that the
classifier maps the transformed feature to the target label. Global
success is either the worst collective's value or the mass-weighted
average. The instance constants (signal rarity, cross-collective overlap,
target alignment, suboptimality gap, minimal target conditional) are
computed as the tightest admissible values for the instance; callers may
override them upward for what-if analysis, never downward.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .classifier import Classifier
from .collectives import CollectiveSpec, Ensemble, actioned_distribution, signal_set
from .errors import EmptyEnsemble, UndefinedGap, ValidationError
from .numeric import Num, zero
from .space import JointDistribution, conditional_y_given_x, marginal_x


@dataclass(frozen=True)
class InstanceParams:
    """Tightest instance constants for one ensemble.

    delta_c entries are 0 wherever delta_defined is False (signal set with
    no base mass); the bound term they feed is multiplied by xi_c = 0
    there, so the substitution never changes a bound value.
    """

    xi_c: tuple
    delta_c: tuple
    delta_defined: tuple
    p_c: tuple
    beta_c: tuple
    xi: Num
    alpha_bar: Num
    mode: str


@dataclass(frozen=True)
class SuccessReport:
    """Per-collective successes plus the two global aggregates."""

    per_collective: tuple
    s_min: Num
    s_weighted: Num
    provenance: str


def per_collective_success(m: Classifier, e: Ensemble, c_index: int) -> Num:
    """Probability over the base features that m maps the transformed point to the target."""
    lam = e.emission(c_index)
    target = e.collectives[c_index].target
    return sum(
        (w for x, w in lam.mass.items() if w != 0 and m.assignment[x] == target),
        zero(e.base.mode),
    )


def global_min(successes: Sequence) -> Num:
    if not successes:
        raise EmptyEnsemble("no collectives to aggregate")
    return min(successes)


def global_weighted(e: Ensemble, successes: Sequence) -> Num:
    if not successes or e.size == 0:
        raise EmptyEnsemble("no collectives to aggregate")
    if len(successes) != e.size:
        raise ValidationError("one success value per collective required")
    weighted = sum(
        (c.mass * s for c, s in zip(e.collectives, successes)), zero(e.base.mode)
    )
    return weighted / e.total_mass


def success_report(m: Classifier, e: Ensemble) -> SuccessReport:
    per = tuple(per_collective_success(m, e, i) for i in range(e.size))
    return SuccessReport(per, global_min(per), global_weighted(e, per), m.provenance)


def compute_xi_c(base: JointDistribution, c: CollectiveSpec) -> Num:
    """Base feature mass of the collective's signal set (tightest rarity constant)."""
    points = signal_set(base, c).points
    marg = marginal_x(base)
    return sum((marg.mass[x] for x in points), zero(base.mode))


def compute_global_xi(e: Ensemble) -> Num:
    """Largest feature mass any other collective's actioned distribution
    places on a collective's signal set (tightest overlap constant); 0 for
    a single collective."""
    if e.size <= 1:
        return zero(e.base.mode)
    sets = [signal_set(e.base, c).points for c in e.collectives]
    marginals = [marginal_x(actioned_distribution(e.base, c)) for c in e.collectives]
    best = zero(e.base.mode)
    for c_index in range(e.size):
        for j in range(e.size):
            if j == c_index:
                continue
            cross = sum((marginals[j].mass[x] for x in sets[c_index]), zero(e.base.mode))
            if cross > best:
                best = cross
    return best


def compute_beta(e: Ensemble, c_index: int) -> Num:
    """Total mass of the other collectives sharing collective c's target."""
    target = e.collectives[c_index].target
    return sum(
        (c.mass for j, c in enumerate(e.collectives) if j != c_index and c.target == target),
        zero(e.base.mode),
    )


def compute_delta(base: JointDistribution, c: CollectiveSpec) -> Num:
    """Worst shortfall of the target's base conditional on the signal set.

    The max ranges over all labels including the target, so the value is
    never negative; it is 0 exactly when the target is optimal everywhere
    on the signal set.
    """
    points = signal_set(base, c).points
    cond = conditional_y_given_x(base)
    on_support = [x for x in points if x in cond.rows]
    if not on_support:
        raise UndefinedGap("signal set carries no base feature mass")
    worst = None
    for x in on_support:
        row = cond.rows[x]
        gap = max(row.values()) - row[c.target]
        if worst is None or gap > worst:
            worst = gap
    return worst


def compute_p(base: JointDistribution, c: CollectiveSpec) -> Num:
    """Minimal base conditional of the target over the feature support.

    A zero value means the positivity assumption fails and the
    feature-only bound is inapplicable; callers flag rather than raise.
    """
    cond = conditional_y_given_x(base)
    return min(cond.rows[x][c.target] for x in cond.rows)


def instance_params(e: Ensemble, overrides: Optional[dict] = None) -> InstanceParams:
    """Assemble all instance constants; overrides (xi, xi_c) must be admissible,
    i.e. at least the computed tightest values."""
    xi_c = []
    delta_c = []
    delta_defined = []
    p_c = []
    beta_c = []
    for i, c in enumerate(e.collectives):
        xi_c.append(compute_xi_c(e.base, c))
        try:
            delta_c.append(compute_delta(e.base, c))
            delta_defined.append(True)
        except UndefinedGap:
            delta_c.append(zero(e.base.mode))
            delta_defined.append(False)
        p_c.append(compute_p(e.base, c))
        beta_c.append(compute_beta(e, i))
    xi = compute_global_xi(e)
    overrides = overrides or {}
    if "xi" in overrides:
        if overrides["xi"] < xi:
            raise ValidationError(
                f"xi override {overrides['xi']} below tightest admissible value {xi}"
            )
        xi = overrides["xi"]
    if "xi_c" in overrides:
        for i, value in overrides["xi_c"].items():
            if value < xi_c[i]:
                raise ValidationError(
                    f"xi_c[{i}] override {value} below tightest admissible value {xi_c[i]}"
                )
            xi_c[i] = value
    return InstanceParams(
        xi_c=tuple(xi_c),
        delta_c=tuple(delta_c),
        delta_defined=tuple(delta_defined),
        p_c=tuple(p_c),
        beta_c=tuple(beta_c),
        xi=xi,
        alpha_bar=e.total_mass,
        mode=e.base.mode,
    )
