"""GSN domain model: elements, relationships, goal structures, patterns.

Structures are immutable value objects; editing means building a new value.
Validation is data-producing (a list of violations), never exception-based,
so arbitrary candidate structures can be inspected.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass, field, replace
from enum import Enum

from .errors import MalformedPlaceholder


class ElementKind(Enum):
    GOAL = "Goal"
    STRATEGY = "Strategy"
    SOLUTION = "Solution"
    CONTEXT = "Context"
    ASSUMPTION = "Assumption"
    JUSTIFICATION = "Justification"


class RelationshipKind(Enum):
    SUPPORTED_BY = "SupportedBy"
    IN_CONTEXT_OF = "InContextOf"


#: Kinds that may carry the undeveloped decorator.
DEVELOPABLE_KINDS = frozenset({ElementKind.GOAL, ElementKind.STRATEGY})

#: Legal (source kind, target kind) pairs for SupportedBy.
SUPPORTED_BY_PAIRS = frozenset(
    {
        (ElementKind.GOAL, ElementKind.GOAL),
        (ElementKind.GOAL, ElementKind.STRATEGY),
        (ElementKind.GOAL, ElementKind.SOLUTION),
        (ElementKind.STRATEGY, ElementKind.GOAL),
    }
)

#: Legal source and target kinds for InContextOf.
IN_CONTEXT_OF_SOURCES = frozenset({ElementKind.GOAL, ElementKind.STRATEGY})
IN_CONTEXT_OF_TARGETS = frozenset(
    {ElementKind.CONTEXT, ElementKind.ASSUMPTION, ElementKind.JUSTIFICATION}
)

#: Id prefixes used by the auto-id helper, one counter per kind.
ID_PREFIXES = {
    ElementKind.GOAL: "G",
    ElementKind.STRATEGY: "S",
    ElementKind.SOLUTION: "Sn",
    ElementKind.CONTEXT: "C",
    ElementKind.ASSUMPTION: "A",
    ElementKind.JUSTIFICATION: "J",
}

PLACEHOLDER_RE = re.compile(r"\{([A-Za-z0-9_ -]+)\}")


@dataclass(frozen=True)
class GsnElement:
    id: str
    kind: ElementKind
    statement: str
    undeveloped: bool = False


@dataclass(frozen=True)
class GsnRelationship:
    source: str
    target: str
    kind: RelationshipKind


@dataclass(frozen=True, eq=False)
class GoalStructure:
    name: str
    elements: tuple[GsnElement, ...] = ()
    relationships: tuple[GsnRelationship, ...] = ()

    def __eq__(self, other):
        """Structural equality: element/relationship order is irrelevant."""
        if not isinstance(other, GoalStructure):
            return NotImplemented
        return (
            self.name == other.name
            and frozenset(self.elements) == frozenset(other.elements)
            and frozenset(self.relationships) == frozenset(other.relationships)
        )

    def __hash__(self):
        return hash((self.name, frozenset(self.elements), frozenset(self.relationships)))

    def element(self, element_id: str) -> GsnElement:
        for el in self.elements:
            if el.id == element_id:
                return el
        raise KeyError(element_id)

    def by_id(self) -> dict[str, GsnElement]:
        return {el.id: el for el in self.elements}

    def children(self, element_id: str) -> list[str]:
        """Targets of outgoing relationships, sorted lexicographically."""
        return sorted(r.target for r in self.relationships if r.source == element_id)

    def root(self) -> GsnElement:
        """The unique goal with no incoming SupportedBy edge.

        Only meaningful on structures where validate() returns no errors.
        """
        supported = {r.target for r in self.relationships if r.kind is RelationshipKind.SUPPORTED_BY}
        roots = [el for el in self.elements if el.kind is ElementKind.GOAL and el.id not in supported]
        if len(roots) != 1:
            raise ValueError(f"structure {self.name!r} has {len(roots)} root candidates")
        return roots[0]


@dataclass(frozen=True)
class PatternDocument:
    structure: GoalStructure
    placeholders: frozenset[str] = field(default_factory=frozenset)

    @classmethod
    def from_structure(cls, structure: GoalStructure) -> "PatternDocument":
        return cls(structure=structure, placeholders=extract_placeholders(structure))


@dataclass(frozen=True)
class Violation:
    code: str
    ids: tuple[str, ...]
    message: str
    severity: str = "error"  # "error" | "warning"


@dataclass(frozen=True)
class StructureStats:
    element_count: int
    relationship_count: int
    per_kind: dict[ElementKind, int]
    placeholder_count: int


def validate(structure: GoalStructure) -> list[Violation]:
    """Check every well-formedness invariant; return an order-normalized list.

    An empty result means the structure is valid. Warning-severity entries
    (undeveloped element with children) do not make a structure invalid.
    """
    out: list[Violation] = []
    seen: dict[str, GsnElement] = {}
    for el in structure.elements:
        if not el.id:
            out.append(Violation("empty-id", (el.id,), "element id is empty"))
        if el.id in seen:
            out.append(Violation("duplicate-id", (el.id,), f"id {el.id!r} used more than once"))
        seen[el.id] = el
        if not el.statement.strip():
            out.append(Violation("empty-statement", (el.id,), f"element {el.id!r} has an empty statement"))
        if el.undeveloped and el.kind not in DEVELOPABLE_KINDS:
            out.append(
                Violation(
                    "undeveloped-kind",
                    (el.id,),
                    f"{el.kind.value} {el.id!r} cannot carry the undeveloped decorator",
                )
            )

    ids = set(seen)
    for rel in structure.relationships:
        pair = (rel.source, rel.target)
        if rel.source == rel.target:
            out.append(Violation("self-loop", pair, f"relationship {rel.source!r} -> itself"))
            continue
        if rel.source not in ids or rel.target not in ids:
            missing = rel.source if rel.source not in ids else rel.target
            out.append(Violation("dangling-endpoint", pair, f"relationship endpoint {missing!r} does not exist"))
            continue
        src, tgt = seen[rel.source], seen[rel.target]
        if rel.kind is RelationshipKind.SUPPORTED_BY:
            if (src.kind, tgt.kind) not in SUPPORTED_BY_PAIRS:
                out.append(
                    Violation(
                        "illegal-supported-by",
                        pair,
                        f"SupportedBy not permitted from {src.kind.value} to {tgt.kind.value}",
                    )
                )
        else:
            if src.kind not in IN_CONTEXT_OF_SOURCES or tgt.kind not in IN_CONTEXT_OF_TARGETS:
                out.append(
                    Violation(
                        "illegal-in-context-of",
                        pair,
                        f"InContextOf not permitted from {src.kind.value} to {tgt.kind.value}",
                    )
                )

    # Acyclicity of the SupportedBy subgraph (only over resolvable endpoints).
    support = [
        r
        for r in structure.relationships
        if r.kind is RelationshipKind.SUPPORTED_BY
        and r.source in ids
        and r.target in ids
        and r.source != r.target
    ]
    cycle = _find_cycle(ids, support)
    if cycle:
        out.append(Violation("cycle", tuple(cycle), "SupportedBy subgraph contains a cycle"))

    supported_targets = {r.target for r in support}
    roots = sorted(
        el.id
        for el in structure.elements
        if el.kind is ElementKind.GOAL and el.id and el.id not in supported_targets
    )
    if not roots:
        out.append(Violation("no-root", (), "no goal free of incoming SupportedBy edges"))
    elif len(roots) > 1:
        out.append(Violation("multiple-roots", tuple(roots), "more than one root goal"))
    else:
        reachable = {roots[0]}
        frontier = deque(reachable)
        adjacency: dict[str, list[str]] = {}
        for r in structure.relationships:
            adjacency.setdefault(r.source, []).append(r.target)
        while frontier:
            for nxt in adjacency.get(frontier.popleft(), ()):
                if nxt in ids and nxt not in reachable:
                    reachable.add(nxt)
                    frontier.append(nxt)
        for el in structure.elements:
            if el.id and el.id not in reachable:
                out.append(Violation("unreachable", (el.id,), f"element {el.id!r} is not reachable from the root"))

    has_children = {r.source for r in structure.relationships}
    for el in structure.elements:
        if el.undeveloped and el.kind in DEVELOPABLE_KINDS and el.id in has_children:
            out.append(
                Violation(
                    "undeveloped-with-children",
                    (el.id,),
                    f"element {el.id!r} is marked undeveloped but has children",
                    severity="warning",
                )
            )

    out.sort(key=lambda v: (v.code, v.ids))
    return out


def errors_of(violations: list[Violation]) -> list[Violation]:
    return [v for v in violations if v.severity == "error"]


def is_valid(structure: GoalStructure) -> bool:
    return not errors_of(validate(structure))


def _find_cycle(ids: set[str], support: list[GsnRelationship]) -> list[str]:
    adjacency: dict[str, list[str]] = {i: [] for i in ids}
    for r in support:
        adjacency[r.source].append(r.target)
    WHITE, GREY, BLACK = 0, 1, 2
    color = {i: WHITE for i in ids}
    stack: list[str] = []

    def visit(node: str) -> list[str]:
        color[node] = GREY
        stack.append(node)
        for nxt in adjacency[node]:
            if color[nxt] == GREY:
                return stack[stack.index(nxt):]
            if color[nxt] == WHITE:
                found = visit(nxt)
                if found:
                    return found
        color[node] = BLACK
        stack.pop()
        return []

    for node in sorted(ids):
        if color[node] == WHITE:
            found = visit(node)
            if found:
                return found
    return []


def extract_placeholders(structure: GoalStructure) -> frozenset[str]:
    """All distinct `{name}` tokens across element statements."""
    names: set[str] = set()
    for el in structure.elements:
        names.update(statement_placeholders(el.statement))
    return frozenset(names)


def statement_placeholders(statement: str) -> frozenset[str]:
    _check_braces(statement)
    return frozenset(PLACEHOLDER_RE.findall(statement))


def _check_braces(statement: str) -> None:
    depth = 0
    for ch in statement:
        if ch == "{":
            depth += 1
            if depth > 1:
                raise MalformedPlaceholder(f"nested '{{' in {statement!r}")
        elif ch == "}":
            depth -= 1
            if depth < 0:
                raise MalformedPlaceholder(f"unmatched '}}' in {statement!r}")
    if depth != 0:
        raise MalformedPlaceholder(f"unmatched '{{' in {statement!r}")


def statistics(structure: GoalStructure) -> StructureStats:
    per_kind = {kind: 0 for kind in ElementKind}
    for el in structure.elements:
        per_kind[el.kind] += 1
    return StructureStats(
        element_count=len(structure.elements),
        relationship_count=len(structure.relationships),
        per_kind=per_kind,
        placeholder_count=len(extract_placeholders(structure)),
    )


def next_id(structure: GoalStructure, kind: ElementKind) -> str:
    """Fresh id of the form G1, S1, Sn1, C1... advancing past existing ids."""
    prefix = ID_PREFIXES[kind]
    taken = {el.id for el in structure.elements}
    n = 1
    while f"{prefix}{n}" in taken:
        n += 1
    return f"{prefix}{n}"


def with_element(structure: GoalStructure, element: GsnElement) -> GoalStructure:
    return replace(structure, elements=structure.elements + (element,))


def with_relationship(structure: GoalStructure, rel: GsnRelationship) -> GoalStructure:
    return replace(structure, relationships=structure.relationships + (rel,))
