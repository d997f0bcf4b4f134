"""Pattern instantiation: deterministic substitution, prompt building, and
generation through a pluggable chat-completion backend."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import MissingInput, ReplyUnparseable
from .metrics import DetectionRule
from .model import (
    DEVELOPABLE_KINDS,
    GoalStructure,
    GsnElement,
    PatternDocument,
    statement_placeholders,
)
from .prose import FormalizedText, ParseDiagnostic, parse, serialize
from .backends import ChatBackend, GenerationBackendConfig


@dataclass(frozen=True)
class DomainKnowledge:
    system_name: str
    facts: tuple[str, ...] = ()
    bindings: dict[str, str] = field(default_factory=dict)

    def __post_init__(self):
        for key in self.bindings:
            if not key:
                raise ValueError("binding keys must be non-empty")


class PromptTask(Enum):
    INSTANTIATE = "Instantiate"
    DETECT = "Detect"


@dataclass(frozen=True)
class PromptPair:
    system: str
    user: str


def substitute(pattern: PatternDocument, bindings: dict[str, str]) -> GoalStructure:
    """Replace bound `{name}` tokens in every statement.

    Goals and strategies left with unbound placeholders are marked
    undeveloped; other kinds keep their placeholders as-is (the decorator
    is restricted to goals and strategies). Element and relationship
    counts, ids, and kinds are never changed.
    """
    new_elements = []
    for el in pattern.structure.elements:
        statement = el.statement
        for name in sorted(bindings, key=len, reverse=True):
            statement = statement.replace("{" + name + "}", bindings[name])
        remaining = statement_placeholders(statement)
        undeveloped = el.undeveloped or (bool(remaining) and el.kind in DEVELOPABLE_KINDS)
        new_elements.append(GsnElement(el.id, el.kind, statement, undeveloped=undeveloped))
    return replace(pattern.structure, elements=tuple(new_elements))


_REASONING_STEPS = {
    PromptTask.INSTANTIATE: (
        "Step 1. Read the formalized pattern and list every placeholder it contains.",
        "Step 2. For each placeholder, select the replacement from the domain information below.",
        "Step 3. Rewrite every statement with its placeholders replaced, keeping ids, kinds, and relationships unchanged.",
        "Step 4. Output the complete instantiated assurance case, one statement per line, in the formalized format only.",
    ),
    PromptTask.DETECT: (
        "Step 1. Read the formalized assurance case pattern and the formalized assurance case.",
        "Step 2. Compare the two texts and compute each similarity metric named in the rule below.",
        "Step 3. Check each metric value against its threshold.",
        "Step 4. Apply the rule and state the verdict as a single word: DETECTED or NOT_DETECTED, followed by one line per metric in the form 'metric = value'.",
    ),
}

_GSN_CONTEXT = """\
An assurance case in Goal Structuring Notation is a goal structure built from six element kinds:
Goal (a claim), Strategy (the inference between a goal and its supporting goals), Solution (an
evidence item), Context, Assumption, and Justification. Goals and strategies may carry an
Undeveloped decorator meaning their argument is not yet elaborated. Elements are connected by
SupportedBy relationships (inferential support) and InContextOf relationships (contextual
attachment). An assurance case pattern is a goal structure whose statements contain {placeholder}
tokens to be replaced with system-specific content."""

_FORMALIZATION_RULES = """\
The formalized format has one statement per line. The first line is a header, either
'AssuranceCase: <name>' or 'Pattern: <name>'. Element declarations are written
Kind(Id, "Statement") where Kind is one of Goal, Strategy, Solution, Context, Assumption,
Justification. The decorator line Undeveloped(Id) marks an element undeveloped. Relationship
lines are SupportedBy(ParentId, ChildId) and InContextOf(SourceId, ContextId). Double quotes
inside statements are escaped as \\"."""


def _rule_sentence(rule: DetectionRule) -> str:
    clause_texts = [
        f"the value of {c.metric} is superior or equal to {c.threshold:g}" for c in rule.clauses
    ]
    return (
        "If " + " AND ".join(clause_texts) + ", then conclude that the formalized "
        "assurance case pattern has been detected in the formalized assurance case. "
        "Otherwise, conclude that the formalized assurance case pattern has not been "
        "detected in the formalized assurance case."
    )


def build_prompt(
    task: PromptTask,
    pattern: PatternDocument,
    case: GoalStructure | None = None,
    knowledge: DomainKnowledge | None = None,
    rule: DetectionRule | None = None,
) -> PromptPair:
    """Deterministic zero-shot prompt pair with an explicit step list.

    No worked examples are ever included; the system prompt carries, in
    order, the reasoning steps, GSN context, formalization rules, and
    domain information.
    """
    if task is PromptTask.DETECT:
        if case is None or rule is None:
            raise MissingInput("detection prompts need both a case and a rule")
    else:
        if knowledge is None:
            raise MissingInput("instantiation prompts need domain knowledge")

    sections = ["You manage assurance cases in Goal Structuring Notation.", ""]
    sections.append("Follow these steps:")
    sections.extend(_REASONING_STEPS[task])
    sections.extend(["", _GSN_CONTEXT, "", _FORMALIZATION_RULES])
    if task is PromptTask.DETECT:
        sections.extend(["", "Detection rule:", _rule_sentence(rule)])
    if knowledge is not None:
        sections.extend(["", f"Domain information for the system '{knowledge.system_name}':"])
        for fact in knowledge.facts:
            sections.append(f"- {fact}")
        for name in sorted(knowledge.bindings):
            sections.append(f"- Placeholder '{name}' stands for: {knowledge.bindings[name]}")
    system_prompt = "\n".join(sections)

    user_sections = ["Formalized assurance case pattern:", serialize(pattern).text.rstrip("\n")]
    if task is PromptTask.DETECT:
        user_sections.extend(["", "Formalized assurance case:", serialize(case).text.rstrip("\n")])
    else:
        user_sections.extend(
            ["", "Produce the instantiated assurance case in the formalized format, nothing else."]
        )
    return PromptPair(system=system_prompt, user="\n".join(user_sections))


def generate_case(
    pattern: PatternDocument,
    knowledge: DomainKnowledge,
    backend: ChatBackend | GenerationBackendConfig,
) -> tuple[GoalStructure, list[ParseDiagnostic], str]:
    """Ask the backend for an instantiated case and parse its reply.

    Returns (structure, diagnostics, raw reply); the raw reply is kept so
    a user can refine it manually when diagnostics contain errors.
    """
    if isinstance(backend, GenerationBackendConfig):
        backend = ChatBackend(backend)
    prompts = build_prompt(PromptTask.INSTANTIATE, pattern, knowledge=knowledge)
    reply = backend.complete(prompts.system, prompts.user)
    cleaned = _strip_fences(reply)
    doc, diagnostics = parse(cleaned)
    structure = doc.structure if isinstance(doc, PatternDocument) else doc
    if not structure.elements:
        raise ReplyUnparseable(reply)
    return structure, diagnostics, reply


def _strip_fences(reply: str) -> str:
    """Drop Markdown code fences some backends wrap around the prose."""
    lines = [line for line in reply.splitlines() if not line.strip().startswith("```")]
    return "\n".join(lines)


__all__ = [
    "DomainKnowledge",
    "PromptTask",
    "PromptPair",
    "FormalizedText",
    "substitute",
    "build_prompt",
    "generate_case",
]
