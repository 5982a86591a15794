"""Collectives, their editing strategies, and the observed mixture.

A collective is a population fraction that rewrites its contributed data
before the firm sees it. Two strategies are supported:

- feature-label: every contributed pair becomes (g(x), target),
- feature-only: pairs already labeled with the target get their feature
  pushed through g; all other pairs pass through unchanged.

The firm trains on the mixture of the untouched base distribution and the
actioned distributions, weighted by collective masses.
"""

from __future__ import annotations

import enum
import warnings
from dataclasses import dataclass
from typing import Mapping

from .errors import EmptyTargetSlice, InvalidMass, MassOverflow, SpaceMismatch, ValidationError
from .numeric import Num, is_positive, one, zero
from .space import (
    DataSpace,
    FeatureDistribution,
    FeatureKernel,
    JointDistribution,
    marginal_x,
    pushforward,
)


class Strategy(enum.Enum):
    FEATURE_LABEL = "feature_label"
    FEATURE_ONLY = "feature_only"


@dataclass(frozen=True)
class CollectiveSpec:
    """One collective: mass, target label, feature transform, strategy."""

    mass: Num
    target: object
    transform: FeatureKernel
    strategy: Strategy

    def __post_init__(self):
        if not self.mass > 0:
            raise InvalidMass(f"collective mass must be positive, got {self.mass}")
        if self.mass >= 1:
            raise InvalidMass(f"collective mass must be below 1, got {self.mass}")
        if self.target not in self.transform.space.labels:
            raise ValidationError(f"target {self.target!r} is not a declared label")


@dataclass(frozen=True)
class Ensemble:
    """An ordered family of collectives acting on a shared base distribution."""

    base: JointDistribution
    collectives: tuple

    def __post_init__(self):
        object.__setattr__(self, "collectives", tuple(self.collectives))
        for i, c in enumerate(self.collectives):
            if c.transform.space != self.base.space:
                raise SpaceMismatch(f"collective {i} uses a different data space")
            if c.transform.mode != self.base.mode:
                raise ValidationError(f"collective {i} transform mode differs from base mode")
        total = sum((c.mass for c in self.collectives), zero(self.base.mode))
        if total >= 1:
            raise MassOverflow(f"collective masses sum to {total} >= 1")

    @property
    def size(self) -> int:
        return len(self.collectives)

    @property
    def total_mass(self) -> Num:
        return sum((c.mass for c in self.collectives), zero(self.base.mode))

    def emission(self, c_index: int) -> FeatureDistribution:
        """Where collective c sends base feature mass: the pushforward of P0^X through its transform."""
        c = self.collectives[c_index]
        return pushforward(marginal_x(self.base), c.transform)


@dataclass(frozen=True)
class SignalSet:
    """The feature points a collective can plant signals on."""

    space: DataSpace
    points: frozenset

    def __contains__(self, x) -> bool:
        return x in self.points


def actioned_distribution(base: JointDistribution, c: CollectiveSpec) -> JointDistribution:
    """The collective's contributed distribution after applying its strategy to the base."""
    space = base.space
    mode = base.mode
    if c.strategy is Strategy.FEATURE_LABEL:
        mass = {cell: zero(mode) for cell in space.cells()}
        for x in space.features:
            px = base.feature_mass(x)
            if px == 0:
                continue
            for xp, w in c.transform.rows[x].items():
                if w != 0:
                    mass[(xp, c.target)] += px * w
        return JointDistribution(space, mass, mode)
    # feature-only: move the target-labeled slice, copy everything else
    slice_total = base.label_mass(c.target)
    if not is_positive(slice_total, mode):
        warnings.warn(
            f"feature-only collective with zero base mass on target {c.target!r}; action is a no-op",
            EmptyTargetSlice,
            stacklevel=2,
        )
        return base
    mass = {}
    for x, y in space.cells():
        mass[(x, y)] = base.mass[(x, y)] if y != c.target else zero(mode)
    for x in space.features:
        w_slice = base.mass[(x, c.target)]
        if w_slice == 0:
            continue
        for xp, w in c.transform.rows[x].items():
            if w != 0:
                mass[(xp, c.target)] += w_slice * w
    return JointDistribution(space, mass, mode)


def signal_set(base: JointDistribution, c: CollectiveSpec) -> SignalSet:
    """Image of the alterable features: all of X for feature-label, the
    target slice's support for feature-only."""
    space = base.space
    if c.strategy is Strategy.FEATURE_LABEL:
        sources = space.features
    else:
        sources = [x for x in space.features if is_positive(base.mass[(x, c.target)], base.mode)]
    return SignalSet(space, c.transform.image(sources))


def mixture(e: Ensemble) -> JointDistribution:
    """The firm-observed blend of the base and all actioned distributions."""
    mode = e.base.mode
    remaining = one(mode) - e.total_mass
    mass = {cell: remaining * w for cell, w in e.base.mass.items()}
    for c in e.collectives:
        actioned = actioned_distribution(e.base, c)
        for cell, w in actioned.mass.items():
            if w != 0:
                mass[cell] += c.mass * w
    return JointDistribution(e.base.space, mass, mode)
