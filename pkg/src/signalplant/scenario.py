"""Scenario files: load, validate, and canonically serialize experiment inputs.

A scenario is a JSON document describing the data space, base weights,
collectives, suboptimality budget, and a classifier request. Rational
literals survive round trips as "p/q" strings, so rational-mode scenarios
stay exact on disk. Serialization is canonical (fixed key order), which
makes scenario digests and generator reproducibility byte-stable.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .collectives import CollectiveSpec, Ensemble, Strategy
from .errors import MassOverflow, ValidationError
from .numeric import Num, check_mode, format_number, parse_number
from .space import DataSpace, FeatureKernel, build_joint

CLASSIFIER_KINDS = ("bayes", "adversarial", "external")
ADVERSARIAL_OBJECTIVES = ("against_target", "min_weighted", "min_of_mins")


@dataclass(frozen=True)
class TransformSpec:
    """Serializable kernel description: identity, constant, map, or full rows."""

    kind: str
    to: Optional[object] = None
    mapping: Optional[Mapping] = None
    rows: Optional[Mapping] = None

    def build(self, space: DataSpace, mode: str) -> FeatureKernel:
        if self.kind == "identity":
            return FeatureKernel.identity(space, mode)
        if self.kind == "constant":
            return FeatureKernel.constant(space, self.to, mode)
        if self.kind == "map":
            return FeatureKernel.deterministic(space, self.mapping, mode)
        if self.kind == "rows":
            return FeatureKernel(space, self.rows, mode)
        raise ValidationError(f"unknown transform kind {self.kind!r}")

    def to_jsonable(self):
        if self.kind == "identity":
            return {"kind": "identity"}
        if self.kind == "constant":
            return {"kind": "constant", "to": self.to}
        if self.kind == "map":
            return {"kind": "map", "mapping": {str(x): xp for x, xp in self.mapping.items()}}
        return {
            "kind": "rows",
            "rows": {
                str(x): {str(xp): format_number(w) for xp, w in row.items()}
                for x, row in self.rows.items()
            },
        }


@dataclass(frozen=True)
class CollectiveScenario:
    mass: Num
    target: object
    strategy: Strategy
    transform: TransformSpec


@dataclass(frozen=True)
class Scenario:
    """A fully validated experiment input."""

    name: str
    mode: str
    features: tuple
    labels: tuple
    base_weights: Mapping
    collectives: tuple
    epsilon: Num
    classifier: Mapping = field(default_factory=lambda: {"kind": "bayes"})
    overrides: Optional[Mapping] = None

    def space(self) -> DataSpace:
        return DataSpace(self.features, self.labels)

    def to_ensemble(self) -> Ensemble:
        space = self.space()
        base = build_joint(space, self.base_weights, self.mode)
        specs = []
        for c in self.collectives:
            kernel = c.transform.build(space, self.mode)
            specs.append(CollectiveSpec(c.mass, c.target, kernel, c.strategy))
        return Ensemble(base, tuple(specs))

    def to_jsonable(self) -> dict:
        doc = {
            "name": self.name,
            "mode": self.mode,
            "space": {"features": list(self.features), "labels": list(self.labels)},
            "base_weights": {
                str(x): {
                    str(y): format_number(self.base_weights[(x, y)])
                    for y in self.labels
                    if (x, y) in self.base_weights
                }
                for x in self.features
            },
            "collectives": [
                {
                    "mass": format_number(c.mass),
                    "target": c.target,
                    "strategy": c.strategy.value,
                    "transform": c.transform.to_jsonable(),
                }
                for c in self.collectives
            ],
            "epsilon": format_number(self.epsilon),
            "classifier": dict(self.classifier),
        }
        if self.overrides:
            over = {}
            if "xi" in self.overrides:
                over["xi"] = format_number(self.overrides["xi"])
            if "xi_c" in self.overrides:
                over["xi_c"] = {
                    str(i): format_number(v) for i, v in sorted(self.overrides["xi_c"].items())
                }
            doc["overrides"] = over
        return doc

    def digest(self) -> str:
        return hashlib.sha256(scenario_to_json(self).encode("utf-8")).hexdigest()[:16]

    def parsed_overrides(self) -> Optional[dict]:
        if not self.overrides:
            return None
        out = {}
        if "xi" in self.overrides:
            out["xi"] = self.overrides["xi"]
        if "xi_c" in self.overrides:
            out["xi_c"] = dict(self.overrides["xi_c"])
        return out


def scenario_to_json(s: Scenario) -> str:
    return json.dumps(s.to_jsonable(), indent=2, ensure_ascii=False) + "\n"


def save_scenario(s: Scenario, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(scenario_to_json(s))


def _fail(path: str, message: str):
    raise ValidationError(f"{path}: {message}")


def _key_lookup(values, kind: str, path: str):
    table = {}
    for v in values:
        key = str(v)
        if key in table:
            _fail(path, f"{kind} identifiers collide on string form {key!r}")
        table[key] = v
    return table


def scenario_from_dict(doc: dict, name_hint: str = "scenario") -> Scenario:
    if not isinstance(doc, dict):
        _fail("$", "scenario document must be a JSON object")
    name = doc.get("name", name_hint)
    mode = doc.get("mode", "rational")
    try:
        check_mode(mode)
    except ValidationError as exc:
        _fail("mode", str(exc))

    space_doc = doc.get("space")
    if not isinstance(space_doc, dict):
        _fail("space", "missing or not an object")
    features = space_doc.get("features")
    labels = space_doc.get("labels")
    if not isinstance(features, list) or not features:
        _fail("space.features", "must be a non-empty list")
    if not isinstance(labels, list) or not labels:
        _fail("space.labels", "must be a non-empty list")
    features = tuple(features)
    labels = tuple(labels)
    try:
        DataSpace(features, labels)
    except ValidationError as exc:
        _fail("space", str(exc))
    fkeys = _key_lookup(features, "feature", "space.features")
    lkeys = _key_lookup(labels, "label", "space.labels")

    weights_doc = doc.get("base_weights")
    if not isinstance(weights_doc, dict):
        _fail("base_weights", "missing or not an object")
    base_weights = {}
    for xkey, row in weights_doc.items():
        if xkey not in fkeys:
            _fail(f"base_weights.{xkey}", "unknown feature point")
        if not isinstance(row, dict):
            _fail(f"base_weights.{xkey}", "row must be an object of label -> weight")
        for ykey, raw in row.items():
            if ykey not in lkeys:
                _fail(f"base_weights.{xkey}.{ykey}", "unknown label")
            base_weights[(fkeys[xkey], lkeys[ykey])] = parse_number(raw, mode)

    coll_doc = doc.get("collectives", [])
    if not isinstance(coll_doc, list):
        _fail("collectives", "must be a list")
    collectives = []
    for i, cd in enumerate(coll_doc):
        path = f"collectives[{i}]"
        if not isinstance(cd, dict):
            _fail(path, "must be an object")
        if "mass" not in cd:
            _fail(f"{path}.mass", "missing")
        mass = parse_number(cd["mass"], mode)
        if not mass > 0:
            _fail(f"{path}.mass", f"must be positive, got {cd['mass']!r}")
        target = cd.get("target")
        if target not in labels:
            _fail(f"{path}.target", f"unknown label {target!r}")
        strategy_raw = cd.get("strategy", "feature_label")
        try:
            strategy = Strategy(strategy_raw)
        except ValueError:
            _fail(f"{path}.strategy", f"unknown strategy {strategy_raw!r}")
        transform = _parse_transform(cd.get("transform"), f"{path}.transform", fkeys, mode)
        collectives.append(CollectiveScenario(mass, target, strategy, transform))

    total = sum(c.mass for c in collectives)
    if collectives and total >= 1:
        raise MassOverflow(f"collectives: masses sum to {format_number(total)} >= 1")

    epsilon = parse_number(doc.get("epsilon", 0), mode)
    if not (0 <= epsilon < 0.5):
        _fail("epsilon", f"must lie in [0, 0.5), got {doc.get('epsilon')!r}")

    classifier = _parse_classifier(doc.get("classifier", {"kind": "bayes"}), len(collectives), fkeys, labels)

    overrides = None
    if "overrides" in doc:
        od = doc["overrides"]
        if not isinstance(od, dict):
            _fail("overrides", "must be an object")
        overrides = {}
        if "xi" in od:
            overrides["xi"] = parse_number(od["xi"], mode)
        if "xi_c" in od:
            if not isinstance(od["xi_c"], dict):
                _fail("overrides.xi_c", "must map collective index to value")
            parsed = {}
            for key, raw in od["xi_c"].items():
                try:
                    idx = int(key)
                except (TypeError, ValueError):
                    _fail(f"overrides.xi_c.{key}", "index must be an integer")
                if not (0 <= idx < len(collectives)):
                    _fail(f"overrides.xi_c.{key}", "collective index out of range")
                parsed[idx] = parse_number(raw, mode)
            overrides["xi_c"] = parsed

    scenario = Scenario(
        name=str(name),
        mode=mode,
        features=features,
        labels=labels,
        base_weights=base_weights,
        collectives=tuple(collectives),
        epsilon=epsilon,
        classifier=classifier,
        overrides=overrides,
    )
    # surface joint-level problems (all-zero weights, negatives) at load time
    scenario.to_ensemble()
    return scenario


def _parse_transform(td, path: str, fkeys, mode: str) -> TransformSpec:
    if not isinstance(td, dict) or "kind" not in td:
        _fail(path, "must be an object with a 'kind'")
    kind = td["kind"]
    if kind == "identity":
        return TransformSpec("identity")
    if kind == "constant":
        to = td.get("to")
        if str(to) not in fkeys:
            _fail(f"{path}.to", f"unknown feature point {to!r}")
        return TransformSpec("constant", to=fkeys[str(to)])
    if kind == "map":
        mapping_doc = td.get("mapping")
        if not isinstance(mapping_doc, dict):
            _fail(f"{path}.mapping", "must be an object of source -> image")
        mapping = {}
        for xkey, xp in mapping_doc.items():
            if xkey not in fkeys:
                _fail(f"{path}.mapping.{xkey}", "unknown source feature point")
            if str(xp) not in fkeys:
                _fail(f"{path}.mapping.{xkey}", f"unknown image feature point {xp!r}")
            mapping[fkeys[xkey]] = fkeys[str(xp)]
        missing = [x for x in fkeys.values() if x not in mapping]
        if missing:
            _fail(f"{path}.mapping", f"missing source points: {missing!r}")
        return TransformSpec("map", mapping=mapping)
    if kind == "rows":
        rows_doc = td.get("rows")
        if not isinstance(rows_doc, dict):
            _fail(f"{path}.rows", "must be an object of source -> distribution")
        rows = {}
        for xkey, row_doc in rows_doc.items():
            if xkey not in fkeys:
                _fail(f"{path}.rows.{xkey}", "unknown source feature point")
            if not isinstance(row_doc, dict):
                _fail(f"{path}.rows.{xkey}", "row must be an object")
            row = {}
            for xpkey, raw in row_doc.items():
                if xpkey not in fkeys:
                    _fail(f"{path}.rows.{xkey}.{xpkey}", "unknown image feature point")
                row[fkeys[xpkey]] = parse_number(raw, mode)
            rows[fkeys[xkey]] = row
        return TransformSpec("rows", rows=rows)
    _fail(path, f"unknown transform kind {kind!r}")


def _parse_classifier(cd, n_collectives: int, fkeys, labels) -> dict:
    if not isinstance(cd, dict) or "kind" not in cd:
        _fail("classifier", "must be an object with a 'kind'")
    kind = cd["kind"]
    if kind not in CLASSIFIER_KINDS:
        _fail("classifier.kind", f"unknown kind {kind!r}")
    if kind == "bayes":
        return {"kind": "bayes"}
    if kind == "adversarial":
        objective = cd.get("objective")
        if objective not in ADVERSARIAL_OBJECTIVES:
            _fail("classifier.objective", f"unknown objective {objective!r}")
        out = {"kind": "adversarial", "objective": objective}
        if objective == "against_target":
            idx = cd.get("collective")
            if not isinstance(idx, int) or not (0 <= idx < n_collectives):
                _fail("classifier.collective", f"collective index out of range: {idx!r}")
            out["collective"] = idx
        return out
    assignment_doc = cd.get("assignment")
    if not isinstance(assignment_doc, dict):
        _fail("classifier.assignment", "must map every feature point to a label")
    assignment = {}
    for xkey, y in assignment_doc.items():
        if xkey not in fkeys:
            _fail(f"classifier.assignment.{xkey}", "unknown feature point")
        if y not in labels:
            _fail(f"classifier.assignment.{xkey}", f"unknown label {y!r}")
        assignment[xkey] = y
    missing = [k for k in fkeys if k not in assignment]
    if missing:
        _fail("classifier.assignment", f"missing feature points: {missing!r}")
    return {"kind": "external", "assignment": assignment}


def loads_scenario(text: str, name_hint: str = "scenario") -> Scenario:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"JSON parse error at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    return scenario_from_dict(doc, name_hint)


def load_scenario(path) -> Scenario:
    with open(path, "r", encoding="utf-8") as fh:
        text = fh.read()
    import os

    hint = os.path.splitext(os.path.basename(str(path)))[0]
    return loads_scenario(text, hint)
