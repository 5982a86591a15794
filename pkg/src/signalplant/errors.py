"""Semantic exception hierarchy.

Public functions never raise bare ValueError/KeyError for contract
violations; they raise one of these so callers can react precisely.
"""


class SignalPlantError(Exception):
    """Base error for this package."""


class ValidationError(SignalPlantError, ValueError):
    """Inputs violate a documented contract (domain, shape, schema)."""


class EmptyDistribution(ValidationError):
    """All weights are zero; no distribution can be normalized."""


class InvalidMass(ValidationError):
    """A negative weight or an out-of-range collective mass."""


class SpaceMismatch(ValidationError):
    """Two objects disagree on the feature or label space."""


class UndefinedConditional(SignalPlantError, LookupError):
    """Conditional queried at a feature point with zero marginal mass."""


class MassOverflow(ValidationError):
    """Collective masses sum to 1 or more; no base population remains."""


class EmptyEnsemble(ValidationError):
    """An operation that needs at least one collective got none."""


class InvalidEpsilon(ValidationError):
    """Suboptimality budget outside [0, 0.5)."""


class TooManyClassifiers(SignalPlantError):
    """Enumeration would exceed the configured cap."""


class UndefinedGap(SignalPlantError):
    """Signal set carries no base mass; the suboptimality gap has no value."""


class PositivityViolated(SignalPlantError):
    """Minimal target conditional is zero; the feature-only bound is void."""


class PreconditionUnmet(SignalPlantError):
    """A theorem precondition fails; the bound is reported inapplicable."""


class BoundUnavailable(SignalPlantError):
    """A global bound was requested but some per-collective bound is inapplicable."""


class Infeasible(SignalPlantError):
    """No admissible parameter value reaches the requested success level."""


class EmptyTargetSlice(UserWarning):
    """Feature-only strategy with zero base mass on the target label; no-op."""
