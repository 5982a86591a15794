"""Finite discrete probability machinery over a feature-label space.

Joints, marginals, conditionals, total-variation distance, and stochastic
kernel pushforwards, all as dense tables over a declared finite space.
Values are immutable after construction and every operation is a pure
function, so objects are safe to share across workers.

Conventions:

- Distributions are dense: every declared cell is present, zeros included,
  and zero entries are preserved exactly by normalization.
- Conditional rows exist only for feature points with positive marginal
  mass; querying elsewhere raises UndefinedConditional rather than
  inventing a uniform or zero row.
- A deterministic feature map is the one-hot special case of a kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping

from .errors import (
    EmptyDistribution,
    InvalidMass,
    SpaceMismatch,
    UndefinedConditional,
    ValidationError,
)
from .numeric import JOINT_SUM_TOL, Num, check_mode, is_positive, zero

Feature = Hashable
Label = Hashable


@dataclass(frozen=True)
class DataSpace:
    """The finite product space of feature points and labels."""

    features: tuple
    labels: tuple

    def __post_init__(self):
        object.__setattr__(self, "features", tuple(self.features))
        object.__setattr__(self, "labels", tuple(self.labels))
        if not self.features or not self.labels:
            raise ValidationError("feature and label lists must be non-empty")
        if len(set(self.features)) != len(self.features):
            raise ValidationError("duplicate feature identifiers")
        if len(set(self.labels)) != len(self.labels):
            raise ValidationError("duplicate label identifiers")

    def label_index(self, y: Label) -> int:
        try:
            return self.labels.index(y)
        except ValueError:
            raise ValidationError(f"unknown label {y!r}") from None

    def require_feature(self, x: Feature) -> None:
        if x not in self.features:
            raise ValidationError(f"unknown feature point {x!r}")

    def cells(self):
        for x in self.features:
            for y in self.labels:
                yield (x, y)


def _require_same_space(a: DataSpace, b: DataSpace) -> None:
    if a != b:
        raise SpaceMismatch("objects are defined over different data spaces")


@dataclass(frozen=True)
class JointDistribution:
    """Probability mass function over feature-label pairs."""

    space: DataSpace
    mass: Mapping
    mode: str

    def __post_init__(self):
        check_mode(self.mode)

    def feature_mass(self, x: Feature) -> Num:
        return sum((self.mass[(x, y)] for y in self.space.labels), zero(self.mode))

    def label_mass(self, y: Label) -> Num:
        return sum((self.mass[(x, y)] for x in self.space.features), zero(self.mode))


@dataclass(frozen=True)
class FeatureDistribution:
    """Probability mass function over feature points."""

    space: DataSpace
    mass: Mapping
    mode: str

    def support(self) -> tuple:
        return tuple(x for x in self.space.features if is_positive(self.mass[x], self.mode))


@dataclass(frozen=True)
class ConditionalTable:
    """Label conditionals, one row per feature point with positive marginal."""

    space: DataSpace
    rows: Mapping
    mode: str

    def row(self, x: Feature) -> Mapping:
        self.space.require_feature(x)
        if x not in self.rows:
            raise UndefinedConditional(f"conditional undefined at zero-mass point {x!r}")
        return self.rows[x]


@dataclass(frozen=True)
class FeatureKernel:
    """Stochastic kernel on the feature space: one distribution over X per point."""

    space: DataSpace
    rows: Mapping
    mode: str = "rational"

    def __post_init__(self):
        check_mode(self.mode)
        for x in self.space.features:
            if x not in self.rows:
                raise ValidationError(f"kernel row missing for feature point {x!r}")
            row = self.rows[x]
            total = zero(self.mode)
            for xp, w in row.items():
                self.space.require_feature(xp)
                if w < 0:
                    raise InvalidMass(f"negative kernel mass at {x!r} -> {xp!r}")
                total += w
            if self.mode == "rational":
                if total != 1:
                    raise ValidationError(f"kernel row at {x!r} sums to {total}, not 1")
            elif abs(total - 1.0) > 1e-9:
                raise ValidationError(f"kernel row at {x!r} sums to {total!r}, not 1")

    @classmethod
    def deterministic(cls, space: DataSpace, mapping: Mapping, mode: str = "rational"):
        """One-hot kernel for a feature map x -> mapping[x]."""
        rows = {}
        for x in space.features:
            if x not in mapping:
                raise ValidationError(f"map missing source point {x!r}")
            space.require_feature(mapping[x])
            rows[x] = {mapping[x]: 1 if mode == "rational" else 1.0}
        return cls(space, rows, mode)

    @classmethod
    def identity(cls, space: DataSpace, mode: str = "rational"):
        return cls.deterministic(space, {x: x for x in space.features}, mode)

    @classmethod
    def constant(cls, space: DataSpace, target: Feature, mode: str = "rational"):
        return cls.deterministic(space, {x: target for x in space.features}, mode)

    def image(self, sources: Iterable) -> frozenset:
        """Feature points reachable with strictly positive kernel mass."""
        out = set()
        for x in sources:
            for xp, w in self.rows[x].items():
                if is_positive(w, self.mode):
                    out.add(xp)
        return frozenset(out)


def build_joint(space: DataSpace, weights: Mapping, mode: str = "rational") -> JointDistribution:
    """Normalize nonnegative cell weights into a joint distribution.

    Cells absent from `weights` get exact zero. Zero entries survive
    normalization unchanged.
    """
    check_mode(mode)
    for key in weights:
        if not (isinstance(key, tuple) and len(key) == 2):
            raise ValidationError(f"weight key {key!r} is not an (x, y) pair")
        x, y = key
        space.require_feature(x)
        if y not in space.labels:
            raise ValidationError(f"unknown label {y!r} in weights")
    mass = {}
    total = zero(mode)
    for cell in space.cells():
        w = weights.get(cell, zero(mode))
        if w < 0:
            raise InvalidMass(f"negative weight at {cell!r}")
        mass[cell] = w
        total += w
    if not is_positive(total, mode):
        raise EmptyDistribution("all weights are zero")
    normalized = {cell: w / total for cell, w in mass.items()}
    return JointDistribution(space, normalized, mode)


def build_feature_distribution(space: DataSpace, weights: Mapping, mode: str = "rational") -> FeatureDistribution:
    """Normalize nonnegative feature weights into a feature distribution."""
    check_mode(mode)
    mass = {}
    total = zero(mode)
    for x in space.features:
        w = weights.get(x, zero(mode))
        if w < 0:
            raise InvalidMass(f"negative weight at {x!r}")
        mass[x] = w
        total += w
    if not is_positive(total, mode):
        raise EmptyDistribution("all weights are zero")
    return FeatureDistribution(space, {x: w / total for x, w in mass.items()}, mode)


def marginal_x(p: JointDistribution) -> FeatureDistribution:
    """Project a joint onto the feature axis by row summation."""
    mass = {}
    for x in p.space.features:
        mass[x] = sum((p.mass[(x, y)] for y in p.space.labels), zero(p.mode))
    return FeatureDistribution(p.space, mass, p.mode)


def conditional_y_given_x(p: JointDistribution) -> ConditionalTable:
    """Label conditionals on the support of the feature marginal.

    Rows are dense over the label set; zero-mass feature points get no row.
    """
    marg = marginal_x(p)
    rows = {}
    for x in p.space.features:
        px = marg.mass[x]
        if not is_positive(px, p.mode):
            continue
        rows[x] = {y: p.mass[(x, y)] / px for y in p.space.labels}
    return ConditionalTable(p.space, rows, p.mode)


def tv_distance(a: Mapping, b: Mapping) -> Num:
    """Total-variation distance between two distributions over the same label set."""
    if set(a.keys()) != set(b.keys()):
        raise SpaceMismatch("label sets differ")
    diff = sum(abs(a[y] - b[y]) for y in a)
    return diff / 2


def pushforward(d: FeatureDistribution, k: FeatureKernel) -> FeatureDistribution:
    """Push a feature distribution through a kernel: result(x') = sum_x d(x) k(x)(x')."""
    _require_same_space(d.space, k.space)
    out = {x: zero(d.mode) for x in d.space.features}
    for x in d.space.features:
        dx = d.mass[x]
        if dx == 0:
            continue
        for xp, w in k.rows[x].items():
            if w != 0:
                out[xp] += dx * w
    return FeatureDistribution(d.space, out, d.mode)


def check_normalized(p: JointDistribution) -> None:
    """Assert the joint's normalization invariant for its mode."""
    total = sum(p.mass.values())
    if p.mode == "rational":
        if total != 1:
            raise ValidationError(f"joint masses sum to {total}, not 1")
    elif abs(total - 1.0) > JOINT_SUM_TOL:
        raise ValidationError(f"joint masses sum to {total!r}, beyond tolerance {JOINT_SUM_TOL}")
