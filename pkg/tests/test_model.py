import random

import pytest

from gsnkit.errors import MalformedPlaceholder
from gsnkit.model import (
    ElementKind,
    GoalStructure,
    GsnElement,
    GsnRelationship,
    RelationshipKind,
    extract_placeholders,
    next_id,
    statistics,
    validate,
)
from gsnkit.corpus import ACAS_PATTERN, ALARP_PATTERN, GPCA_CASE, CASES

from gen import random_structure


def goal(element_id, statement="claim holds", undeveloped=False):
    return GsnElement(element_id, ElementKind.GOAL, statement, undeveloped)


def rel(source, target, kind=RelationshipKind.SUPPORTED_BY):
    return GsnRelationship(source, target, kind)


def test_minimal_single_goal_is_valid():
    structure = GoalStructure("min", (goal("G1"),))
    assert validate(structure) == []


def test_supported_by_to_context_is_rejected():
    structure = GoalStructure(
        "bad",
        (goal("G1"), GsnElement("C1", ElementKind.CONTEXT, "ctx")),
        (rel("G1", "C1"),),
    )
    codes = [v.code for v in validate(structure)]
    assert "illegal-supported-by" in codes


def test_cycle_detected():
    structure = GoalStructure(
        "cycle",
        (goal("G1"), goal("G2"), goal("G3")),
        (rel("G1", "G2"), rel("G2", "G3"), rel("G3", "G2")),
    )
    codes = [v.code for v in validate(structure)]
    assert "cycle" in codes


def test_duplicate_id_and_empty_statement():
    structure = GoalStructure("dup", (goal("G1"), goal("G1"), goal("G2", "   ")))
    codes = [v.code for v in validate(structure)]
    assert "duplicate-id" in codes
    assert "empty-statement" in codes


def test_undeveloped_restricted_to_goal_and_strategy():
    structure = GoalStructure(
        "ud",
        (goal("G1"), GsnElement("Sn1", ElementKind.SOLUTION, "evidence", undeveloped=True)),
        (rel("G1", "Sn1"),),
    )
    codes = [v.code for v in validate(structure)]
    assert "undeveloped-kind" in codes


def test_undeveloped_with_children_is_a_warning_only():
    structure = GoalStructure(
        "warn",
        (goal("G1", undeveloped=True), goal("G2")),
        (rel("G1", "G2"),),
    )
    violations = validate(structure)
    assert [v.code for v in violations] == ["undeveloped-with-children"]
    assert violations[0].severity == "warning"


def test_multiple_roots_and_unreachable():
    structure = GoalStructure("two", (goal("G1"), goal("G2")))
    codes = [v.code for v in validate(structure)]
    assert "multiple-roots" in codes

    structure = GoalStructure(
        "orphan",
        (goal("G1"), goal("G2"), GsnElement("Sn1", ElementKind.SOLUTION, "ev")),
        (rel("G1", "G2"),),
    )
    codes = [v.code for v in validate(structure)]
    assert "unreachable" in codes


def test_self_loop_and_dangling():
    structure = GoalStructure("bad", (goal("G1"), goal("G2")), (rel("G1", "G1"), rel("G2", "G9")))
    codes = [v.code for v in validate(structure)]
    assert "self-loop" in codes
    assert "dangling-endpoint" in codes


def test_validate_is_order_insensitive_and_deterministic():
    rng = random.Random(7)
    structure = random_structure(rng)
    shuffled_elements = list(structure.elements)
    shuffled_rels = list(structure.relationships)
    rng.shuffle(shuffled_elements)
    rng.shuffle(shuffled_rels)
    shuffled = GoalStructure(structure.name, tuple(shuffled_elements), tuple(shuffled_rels))
    assert validate(structure) == validate(shuffled)
    assert statistics(structure).element_count == statistics(shuffled).element_count
    assert statistics(structure).per_kind == statistics(shuffled).per_kind


def test_extract_placeholders():
    structure = GoalStructure("p", (goal("G1", "System {X} is acceptably safe"),))
    assert extract_placeholders(structure) == {"X"}
    assert extract_placeholders(GoalStructure("n", (goal("G1", "no braces"),))) == frozenset()


def test_malformed_placeholder_raises():
    structure = GoalStructure("m", (goal("G1", "broken {X statement"),))
    with pytest.raises(MalformedPlaceholder):
        extract_placeholders(structure)
    with pytest.raises(MalformedPlaceholder):
        extract_placeholders(GoalStructure("m2", (goal("G1", "stray } here"),)))


def test_dataset_shaped_fixture_counts():
    acas = statistics(ACAS_PATTERN)
    assert acas.placeholder_count == 10
    assert acas.element_count == 22

    alarp = statistics(ALARP_PATTERN)
    assert alarp.element_count == 18

    gpca = statistics(GPCA_CASE)
    assert gpca.element_count == 27
    assert gpca.relationship_count == 26


def test_every_bundled_structure_validates():
    for case in CASES.values():
        assert [v for v in validate(case) if v.severity == "error"] == []


def test_next_id_prefixes():
    structure = GoalStructure("ids", (goal("G1"),))
    assert next_id(structure, ElementKind.GOAL) == "G2"
    assert next_id(structure, ElementKind.STRATEGY) == "S1"
    assert next_id(structure, ElementKind.SOLUTION) == "Sn1"
    assert next_id(structure, ElementKind.JUSTIFICATION) == "J1"
