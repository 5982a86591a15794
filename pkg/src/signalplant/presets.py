"""Built-in example scenarios, also shipped as JSON under scenarios/.

t1/t2/t3 are the small regression instances the test suite pins exact
values for; the climate scenario is a narrative toy (neighborhood records,
intervention labels) at the same desk scale.
"""

from __future__ import annotations

from fractions import Fraction as F

from .collectives import Strategy
from .scenario import CollectiveScenario, Scenario, TransformSpec

_T_FEATURES = ("x0", "x1", "s")
_T_LABELS = (0, 1)
_T_WEIGHTS = {
    ("x0", 0): F(45, 100),
    ("x0", 1): F(5, 100),
    ("x1", 0): F(5, 100),
    ("x1", 1): F(40, 100),
    ("s", 0): F(4, 100),
    ("s", 1): F(1, 100),
}


def _collective(mass, target, strategy=Strategy.FEATURE_LABEL, transform=None):
    return CollectiveScenario(
        mass=mass,
        target=target,
        strategy=strategy,
        transform=transform or TransformSpec("constant", to="s"),
    )


def t1_single() -> Scenario:
    """One collective of mass 0.1 planting label 1 on the rare point s."""
    return Scenario(
        name="t1_single",
        mode="rational",
        features=_T_FEATURES,
        labels=_T_LABELS,
        base_weights=dict(_T_WEIGHTS),
        collectives=(_collective(F(1, 10), 1),),
        epsilon=F(0),
    )


def t2_contested() -> Scenario:
    """Two equal collectives planting opposite labels on the same point."""
    return Scenario(
        name="t2_contested",
        mode="rational",
        features=_T_FEATURES,
        labels=_T_LABELS,
        base_weights=dict(_T_WEIGHTS),
        collectives=(_collective(F(1, 10), 1), _collective(F(1, 10), 0)),
        epsilon=F(0),
    )


def t3_aligned() -> Scenario:
    """Two equal collectives planting the same label on the same point."""
    return Scenario(
        name="t3_aligned",
        mode="rational",
        features=_T_FEATURES,
        labels=_T_LABELS,
        base_weights=dict(_T_WEIGHTS),
        collectives=(_collective(F(1, 10), 1), _collective(F(1, 10), 1)),
        epsilon=F(0),
    )


def climate_toy() -> Scenario:
    """Neighborhood associations steering an intervention classifier.

    Feature points are record profiles; the rare "flood_evidence" profile is
    the waterfront association's planted signal. Labels are interventions.
    One association edits labels too (feature-label); the hillside one can
    only edit its records (feature-only).
    """
    features = ("waterfront", "hillside", "downtown", "flood_evidence", "heat_survey")
    labels = ("shade_trees", "cool_roofs", "cooling_centers", "rain_gardens")
    weights = {
        ("waterfront", "shade_trees"): F(4, 100),
        ("waterfront", "cool_roofs"): F(6, 100),
        ("waterfront", "cooling_centers"): F(5, 100),
        ("waterfront", "rain_gardens"): F(10, 100),
        ("hillside", "shade_trees"): F(14, 100),
        ("hillside", "cool_roofs"): F(8, 100),
        ("hillside", "cooling_centers"): F(5, 100),
        ("hillside", "rain_gardens"): F(3, 100),
        ("downtown", "shade_trees"): F(10, 100),
        ("downtown", "cool_roofs"): F(16, 100),
        ("downtown", "cooling_centers"): F(12, 100),
        ("downtown", "rain_gardens"): F(2, 100),
        ("flood_evidence", "shade_trees"): F(1, 100),
        ("flood_evidence", "cool_roofs"): F(1, 100),
        ("flood_evidence", "cooling_centers"): F(1, 100),
        ("flood_evidence", "rain_gardens"): F(2, 100),
    }
    waterfront = CollectiveScenario(
        mass=F(8, 100),
        target="rain_gardens",
        strategy=Strategy.FEATURE_LABEL,
        transform=TransformSpec("constant", to="flood_evidence"),
    )
    hillside = CollectiveScenario(
        mass=F(6, 100),
        target="shade_trees",
        strategy=Strategy.FEATURE_ONLY,
        transform=TransformSpec(
            "map",
            mapping={
                "waterfront": "heat_survey",
                "hillside": "heat_survey",
                "downtown": "heat_survey",
                "flood_evidence": "heat_survey",
                "heat_survey": "heat_survey",
            },
        ),
    )
    return Scenario(
        name="climate_toy",
        mode="rational",
        features=features,
        labels=labels,
        base_weights=weights,
        collectives=(waterfront, hillside),
        epsilon=F(1, 20),
    )


FIXED_REGRESSIONS = (t1_single, t2_contested, t3_aligned)
