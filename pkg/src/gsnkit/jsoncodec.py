"""JSON codec for structures, patterns, rules, and reports (.gsn.json).

Elements are {id, kind, statement, undeveloped}; relationships are
{source, target, kind}; the document kind distinguishes assurance cases
from patterns. Round-trips are lossless for valid inputs.
"""

from __future__ import annotations

import json

from .detection import EvaluationReport, EvaluationRow
from .metrics import DetectionRule, MetricThreshold
from .model import (
    ElementKind,
    GoalStructure,
    GsnElement,
    GsnRelationship,
    PatternDocument,
    RelationshipKind,
)


def structure_to_json(doc: GoalStructure | PatternDocument) -> dict:
    if isinstance(doc, PatternDocument):
        structure, kind = doc.structure, "Pattern"
        extra = {"placeholders": sorted(doc.placeholders)}
    else:
        structure, kind = doc, "AssuranceCase"
        extra = {}
    return {
        "kind": kind,
        "name": structure.name,
        "elements": [
            {"id": el.id, "kind": el.kind.value, "statement": el.statement, "undeveloped": el.undeveloped}
            for el in structure.elements
        ],
        "relationships": [
            {"source": r.source, "target": r.target, "kind": r.kind.value}
            for r in structure.relationships
        ],
        **extra,
    }


def structure_from_json(data: dict) -> GoalStructure | PatternDocument:
    structure = GoalStructure(
        name=data.get("name", ""),
        elements=tuple(
            GsnElement(
                id=el["id"],
                kind=ElementKind(el["kind"]),
                statement=el["statement"],
                undeveloped=bool(el.get("undeveloped", False)),
            )
            for el in data.get("elements", ())
        ),
        relationships=tuple(
            GsnRelationship(source=r["source"], target=r["target"], kind=RelationshipKind(r["kind"]))
            for r in data.get("relationships", ())
        ),
    )
    if data.get("kind") == "Pattern":
        return PatternDocument.from_structure(structure)
    return structure


def rule_to_json(rule: DetectionRule) -> dict:
    return {"clauses": [{"metric": c.metric, "threshold": c.threshold} for c in rule.clauses]}


def rule_from_json(data: dict) -> DetectionRule:
    return DetectionRule(
        tuple(MetricThreshold(c["metric"], c["threshold"]) for c in data["clauses"])
    )


def report_to_json(report: EvaluationReport) -> dict:
    return {"rows": [dict(row.__dict__) for row in report.rows]}


def report_from_json(data: dict) -> EvaluationReport:
    return EvaluationReport(rows=tuple(EvaluationRow(**row) for row in data["rows"]))


def dumps(obj, **kwargs) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, **kwargs) + "\n"
