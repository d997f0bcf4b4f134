"""Canonical structured-prose codec for goal structures and patterns.

Grammar, one statement per line:

    AssuranceCase: <name>        (or  Pattern: <name>)  -- header, first line
    Goal(G1, "Statement text")                          -- element declaration
    Undeveloped(G1)                                     -- decorator
    SupportedBy(G1, S1)                                 -- relationships
    InContextOf(G1, C1)
    # comment

Double quotes inside statements are escaped as \\" (and backslash as \\\\).
Canonical form is UTF-8, LF line endings, elements in breadth-first order
from the root with children sorted by id, then relationships sorted by
(source, target, kind), single trailing newline.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass

from .errors import InvalidStructure
from .model import (
    ElementKind,
    GoalStructure,
    GsnElement,
    GsnRelationship,
    PatternDocument,
    RelationshipKind,
    Violation,
    errors_of,
    validate,
)

HEADER_CASE = "AssuranceCase"
HEADER_PATTERN = "Pattern"

_SAFE_ID_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")
_HEADER_RE = re.compile(r"(AssuranceCase|Pattern):\s*(.*)\Z")
_ELEMENT_RE = re.compile(
    r"(Goal|Strategy|Solution|Context|Assumption|Justification)"
    r"\((\S+?), \"((?:[^\"\\]|\\.)*)\"\)\Z"
)
_UNDEVELOPED_RE = re.compile(r"Undeveloped\((\S+?)\)\Z")
_RELATIONSHIP_RE = re.compile(r"(SupportedBy|InContextOf)\((\S+?), (\S+?)\)\Z")
_KIND_WORD_RE = re.compile(r"([A-Za-z]+)\s*\(")


@dataclass(frozen=True)
class FormalizedText:
    kind: str  # HEADER_CASE or HEADER_PATTERN
    name: str
    lines: tuple[str, ...]  # body lines, header excluded

    @property
    def header(self) -> str:
        return f"{self.kind}: {self.name}"

    @property
    def text(self) -> str:
        """Full canonical document, trailing newline included."""
        return "\n".join((self.header, *self.lines)) + "\n"

    @property
    def body(self) -> str:
        """Header-free text, the input to similarity metrics."""
        return "\n".join(self.lines)


@dataclass(frozen=True)
class ParseDiagnostic:
    line: int
    column: int
    message: str
    severity: str = "Error"  # "Error" | "Warning"


def _escape(statement: str) -> str:
    return statement.replace("\\", "\\\\").replace('"', '\\"')


def _unescape(raw: str) -> str:
    return re.sub(r"\\(.)", r"\1", raw)


def serialize(doc: GoalStructure | PatternDocument) -> FormalizedText:
    """Render the canonical prose form; raises InvalidStructure on bad input."""
    if isinstance(doc, PatternDocument):
        structure, kind = doc.structure, HEADER_PATTERN
    else:
        structure, kind = doc, HEADER_CASE

    violations = errors_of(validate(structure))
    for el in structure.elements:
        if not _SAFE_ID_RE.match(el.id):
            violations.append(Violation("unserializable-id", (el.id,), f"id {el.id!r} not expressible in prose"))
    if violations:
        raise InvalidStructure(violations)

    by_id = structure.by_id()
    order: list[str] = []
    seen = {structure.root().id}
    queue = deque(seen)
    while queue:
        current = queue.popleft()
        order.append(current)
        for child in structure.children(current):
            if child not in seen:
                seen.add(child)
                queue.append(child)

    lines: list[str] = []
    for element_id in order:
        el = by_id[element_id]
        lines.append(f'{el.kind.value}({el.id}, "{_escape(el.statement)}")')
        if el.undeveloped:
            lines.append(f"Undeveloped({el.id})")
    for rel in sorted(structure.relationships, key=lambda r: (r.source, r.target, r.kind.value)):
        lines.append(f"{rel.kind.value}({rel.source}, {rel.target})")
    return FormalizedText(kind=kind, name=structure.name, lines=tuple(lines))


def parse(source: str) -> tuple[GoalStructure | PatternDocument, list[ParseDiagnostic]]:
    """Parse prose into a structure, accumulating diagnostics instead of aborting.

    A best-effort structure is always returned; it is guaranteed valid only
    when no Error-severity diagnostic is present.
    """
    diagnostics: list[ParseDiagnostic] = []
    name = ""
    doc_kind: str | None = None
    elements: list[GsnElement] = []
    element_lines: dict[str, int] = {}
    undeveloped: set[str] = set()
    relationships: list[tuple[GsnRelationship, int]] = []

    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue

        header = _HEADER_RE.match(line)
        if header:
            if doc_kind is not None:
                diagnostics.append(ParseDiagnostic(lineno, 1, "duplicate header line"))
            else:
                doc_kind, name = header.group(1), header.group(2).strip()
            continue

        element = _ELEMENT_RE.match(line)
        if element:
            kind = ElementKind(element.group(1))
            element_id = element.group(2)
            statement = _unescape(element.group(3))
            if element_id in element_lines:
                diagnostics.append(ParseDiagnostic(lineno, 1, f"duplicate id {element_id!r}"))
                continue
            element_lines[element_id] = lineno
            elements.append(GsnElement(id=element_id, kind=kind, statement=statement))
            continue

        marker = _UNDEVELOPED_RE.match(line)
        if marker:
            element_id = marker.group(1)
            if element_id not in element_lines:
                diagnostics.append(ParseDiagnostic(lineno, 1, f"Undeveloped refers to unknown id {element_id!r}"))
            else:
                undeveloped.add(element_id)
            continue

        relationship = _RELATIONSHIP_RE.match(line)
        if relationship:
            kind = RelationshipKind(relationship.group(1))
            rel = GsnRelationship(source=relationship.group(2), target=relationship.group(3), kind=kind)
            relationships.append((rel, lineno))
            continue

        word = _KIND_WORD_RE.match(line)
        if word and word.group(1) not in (
            "Goal", "Strategy", "Solution", "Context", "Assumption",
            "Justification", "Undeveloped", "SupportedBy", "InContextOf",
        ):
            diagnostics.append(ParseDiagnostic(lineno, 1, f"unknown statement kind {word.group(1)!r}"))
        else:
            diagnostics.append(ParseDiagnostic(lineno, 1, f"line does not match the grammar: {line!r}"))

    if doc_kind is None:
        diagnostics.append(ParseDiagnostic(1, 1, "missing header line (AssuranceCase: / Pattern:)"))
        doc_kind = HEADER_CASE

    known = set(element_lines)
    kept: list[GsnRelationship] = []
    for rel, lineno in relationships:
        if rel.source not in known or rel.target not in known:
            missing = rel.source if rel.source not in known else rel.target
            diagnostics.append(ParseDiagnostic(lineno, 1, f"dangling relationship endpoint {missing!r}"))
        else:
            kept.append(rel)

    structure = GoalStructure(
        name=name,
        elements=tuple(
            GsnElement(el.id, el.kind, el.statement, undeveloped=el.id in undeveloped)
            for el in elements
        ),
        relationships=tuple(kept),
    )

    for violation in validate(structure):
        lineno = element_lines.get(violation.ids[0], 0) if violation.ids else 0
        severity = "Error" if violation.severity == "error" else "Warning"
        # Duplicates and dangling endpoints were already reported with line info.
        if violation.code in ("duplicate-id", "dangling-endpoint"):
            continue
        diagnostics.append(ParseDiagnostic(lineno, 1, violation.message, severity=severity))

    if doc_kind == HEADER_PATTERN:
        try:
            return PatternDocument.from_structure(structure), diagnostics
        except Exception as exc:  # malformed placeholders stay diagnosable
            diagnostics.append(ParseDiagnostic(0, 1, str(exc)))
            return PatternDocument(structure=structure), diagnostics
    return structure, diagnostics


def has_errors(diagnostics: list[ParseDiagnostic]) -> bool:
    return any(d.severity == "Error" for d in diagnostics)
