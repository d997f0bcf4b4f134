import random

import pytest

from gsnkit.backends import MockBackend
from gsnkit.corpus import ACAS_KNOWLEDGE, PATTERNS
from gsnkit.errors import MissingInput, ReplyUnparseable
from gsnkit.instantiation import (
    DomainKnowledge,
    PromptTask,
    build_prompt,
    generate_case,
    substitute,
)
from gsnkit.metrics import DetectionRule
from gsnkit.model import (
    DEVELOPABLE_KINDS,
    ElementKind,
    GoalStructure,
    GsnElement,
    PatternDocument,
    extract_placeholders,
    is_valid,
)
from gsnkit.prose import serialize

from gen import random_bindings, random_pattern

ACAS = PATTERNS["acas-xu-threat-identification"]


def test_full_substitution_yields_closed_case():
    case = substitute(ACAS, ACAS_KNOWLEDGE.bindings)
    assert extract_placeholders(case) == frozenset()
    assert is_valid(case)
    assert not any(el.undeveloped for el in case.elements)
    assert "ACAS Xu" in case.element("G1").statement


def test_partial_substitution_marks_goals_and_strategies_undeveloped():
    bindings = dict(ACAS_KNOWLEDGE.bindings)
    del bindings["Threat 1"]
    case = substitute(ACAS, bindings)
    for el in case.elements:
        has_placeholder = "{" in el.statement
        if el.kind in DEVELOPABLE_KINDS:
            assert el.undeveloped == has_placeholder
        else:
            assert not el.undeveloped


def test_substitute_structure_invariants_random():
    rng = random.Random(31)
    for _ in range(100):
        pattern = random_pattern(rng)
        bindings = random_bindings(rng, pattern)
        # leave a random subset unbound
        for name in list(bindings):
            if rng.random() < 0.4:
                del bindings[name]
        case = substitute(pattern, bindings)
        assert len(case.elements) == len(pattern.structure.elements)
        assert case.relationships == pattern.structure.relationships
        for before, after in zip(pattern.structure.elements, case.elements):
            assert (before.id, before.kind) == (after.id, after.kind)


def test_longest_binding_name_wins():
    pattern = PatternDocument.from_structure(
        GoalStructure("tiny", (GsnElement("G1", ElementKind.GOAL, "{Asset} and {Asset 2}"),))
    )
    case = substitute(pattern, {"Asset": "short", "Asset 2": "long"})
    assert case.element("G1").statement == "short and long"


def test_prompt_is_deterministic_zero_shot_with_steps():
    first = build_prompt(PromptTask.INSTANTIATE, ACAS, knowledge=ACAS_KNOWLEDGE)
    second = build_prompt(PromptTask.INSTANTIATE, ACAS, knowledge=ACAS_KNOWLEDGE)
    assert first == second
    assert "Example:" not in first.system and "Example:" not in first.user
    for n in (1, 2, 3, 4):
        assert f"Step {n}." in first.system
    assert ACAS_KNOWLEDGE.system_name in first.system
    assert serialize(ACAS).body.splitlines()[0] in first.user


def test_detect_prompt_carries_rule_and_both_texts():
    rule = DetectionRule.uniform(0.4)
    prompts = build_prompt(
        PromptTask.DETECT, ACAS, case=substitute(ACAS, ACAS_KNOWLEDGE.bindings), rule=rule
    )
    assert "superior or equal to 0.4" in prompts.system
    assert prompts.system.count("superior or equal to") == 2  # one clause per metric
    assert "Formalized assurance case pattern:" in prompts.user
    assert "Formalized assurance case:" in prompts.user


def test_prompt_missing_inputs():
    with pytest.raises(MissingInput):
        build_prompt(PromptTask.INSTANTIATE, ACAS)
    with pytest.raises(MissingInput):
        build_prompt(PromptTask.DETECT, ACAS, case=substitute(ACAS, {}))


def test_generate_case_parses_backend_reply():
    expected = substitute(ACAS, ACAS_KNOWLEDGE.bindings)
    backend = MockBackend(["```\n" + serialize(expected).text + "```"])
    structure, diagnostics, raw = generate_case(ACAS, ACAS_KNOWLEDGE, backend)
    assert structure == expected
    assert not any(d.severity == "Error" for d in diagnostics)
    assert raw.startswith("```")
    system_prompt, user_prompt = backend.calls[0]
    assert "Step 1." in system_prompt and "Pattern:" in user_prompt


def test_generate_case_surfaces_diagnostics_not_exceptions():
    reply = 'AssuranceCase: broken\nGoal(G1, "claim")\nSupportedBy(G1, G9)\n'
    structure, diagnostics, _ = generate_case(ACAS, ACAS_KNOWLEDGE, MockBackend([reply]))
    assert structure.elements  # best-effort result is still returned
    assert any(d.severity == "Error" for d in diagnostics)


def test_generate_case_unusable_reply_raises():
    with pytest.raises(ReplyUnparseable):
        generate_case(ACAS, ACAS_KNOWLEDGE, MockBackend(["I rewrote your argument in prose."]))


def test_knowledge_validation():
    with pytest.raises(ValueError):
        DomainKnowledge(system_name="x", bindings={"": "value"})
