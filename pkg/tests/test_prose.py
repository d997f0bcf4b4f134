import random

import pytest

from gsnkit.errors import InvalidStructure
from gsnkit.model import ElementKind, GoalStructure, GsnElement, GsnRelationship, RelationshipKind, statistics
from gsnkit.prose import FormalizedText, has_errors, parse, serialize
from gsnkit.corpus import ACAS_CASE, PATTERNS

from gen import random_pattern, random_structure


def test_minimal_serialization():
    structure = GoalStructure("min", (GsnElement("G1", ElementKind.GOAL, "C is safe"),))
    text = serialize(structure)
    assert text.text == 'AssuranceCase: min\nGoal(G1, "C is safe")\n'


def test_relationship_line_added():
    structure = GoalStructure(
        "two",
        (
            GsnElement("G1", ElementKind.GOAL, "claim"),
            GsnElement("S1", ElementKind.STRATEGY, "approach"),
        ),
        (GsnRelationship("G1", "S1", RelationshipKind.SUPPORTED_BY),),
    )
    assert serialize(structure).lines[-1] == "SupportedBy(G1, S1)"


def test_line_count_is_elements_plus_relationships_plus_header():
    stats = statistics(ACAS_CASE)
    text = serialize(ACAS_CASE)
    assert len(text.text.splitlines()) == stats.element_count + stats.relationship_count + 1


def test_serialize_rejects_invalid():
    structure = GoalStructure("bad", (GsnElement("G1", ElementKind.GOAL, "a"), GsnElement("G2", ElementKind.GOAL, "b")))
    with pytest.raises(InvalidStructure):
        serialize(structure)


def test_dangling_endpoint_diagnostic_points_at_line():
    source = 'AssuranceCase: x\nGoal(G1, "x")\nSupportedBy(G1, G9)\n'
    _doc, diagnostics = parse(source)
    dangling = [d for d in diagnostics if "dangling" in d.message]
    assert dangling and dangling[0].line == 3


def test_parse_accumulates_and_never_aborts():
    source = "\n".join(
        [
            "AssuranceCase: messy",
            'Goal(G1, "ok")',
            'Widget(W1, "unknown kind")',
            "not a statement at all",
            'Goal(G1, "duplicate")',
            "SupportedBy(G1, Nope)",
        ]
    )
    doc, diagnostics = parse(source)
    messages = " | ".join(d.message for d in diagnostics)
    assert "unknown statement kind" in messages
    assert "does not match the grammar" in messages
    assert "duplicate id" in messages
    assert "dangling" in messages
    assert doc.elements[0].id == "G1"


def test_canonical_roundtrip_of_case_fixture():
    text = serialize(ACAS_CASE)
    doc, diagnostics = parse(text.text)
    assert not has_errors(diagnostics)
    assert doc == ACAS_CASE
    stats = statistics(doc)
    assert (stats.element_count, stats.relationship_count) == (24, 23)


def test_pattern_header_roundtrip():
    pattern = PATTERNS["gpca-safety"]
    text = serialize(pattern)
    assert text.kind == "Pattern"
    doc, diagnostics = parse(text.text)
    assert not has_errors(diagnostics)
    assert doc == pattern


def test_escaping_quotes_and_comments():
    structure = GoalStructure(
        "esc", (GsnElement("G1", ElementKind.GOAL, 'the "safe" state \\ holds'),)
    )
    text = serialize(structure)
    doc, diagnostics = parse("# leading comment\n" + text.text)
    assert not has_errors(diagnostics)
    assert doc.elements[0].statement == 'the "safe" state \\ holds'


def test_random_roundtrip_and_idempotence():
    rng = random.Random(42)
    for _ in range(100):
        structure = random_structure(rng)
        text = serialize(structure)
        doc, diagnostics = parse(text.text)
        assert not has_errors(diagnostics)
        assert doc == structure
        assert serialize(doc).text == text.text


def test_random_pattern_roundtrip():
    rng = random.Random(43)
    for _ in range(50):
        pattern = random_pattern(rng)
        text = serialize(pattern)
        doc, diagnostics = parse(text.text)
        assert not has_errors(diagnostics)
        assert doc == pattern


def test_fuzzed_text_never_crashes():
    rng = random.Random(44)
    alphabet = 'Goal(G1, "x")\nSupportedBy #{},'
    for _ in range(200):
        source = "".join(rng.choice(alphabet) for _ in range(rng.randrange(0, 120)))
        doc, diagnostics = parse(source)
        assert doc is not None


def test_formalized_text_body_excludes_header():
    text = serialize(ACAS_CASE)
    assert isinstance(text, FormalizedText)
    assert "AssuranceCase" in text.text
    assert "AssuranceCase" not in text.body
