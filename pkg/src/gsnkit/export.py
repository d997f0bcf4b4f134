"""Diagram exporters: Graphviz DOT and a self-contained layered SVG.

Shapes follow GSN notation: rectangle for goals, parallelogram for
strategies, circle/ellipse for solutions, rounded shapes for contextual
elements, solid arrowheads for SupportedBy, hollow arrowheads for
InContextOf, and a hollow diamond under undeveloped elements.
"""

from __future__ import annotations

from .errors import InvalidStructure
from .model import (
    ElementKind,
    GoalStructure,
    RelationshipKind,
    errors_of,
    validate,
)

_DOT_SHAPES = {
    ElementKind.GOAL: 'shape=box',
    ElementKind.STRATEGY: 'shape=parallelogram',
    ElementKind.SOLUTION: 'shape=ellipse',
    ElementKind.CONTEXT: 'shape=box, style=rounded',
    ElementKind.ASSUMPTION: 'shape=ellipse, style=dashed',
    ElementKind.JUSTIFICATION: 'shape=ellipse, style=dotted',
}

UNDEVELOPED_GLYPH = "◇"  # hollow diamond


def _require_valid(structure: GoalStructure) -> None:
    violations = errors_of(validate(structure))
    if violations:
        raise InvalidStructure(violations)


def export_dot(structure: GoalStructure) -> str:
    _require_valid(structure)
    lines = [f'digraph "{structure.name}" {{', "  rankdir=TB;"]
    for el in sorted(structure.elements, key=lambda e: e.id):
        label = f"{el.id}\\n{el.statement}"
        if el.undeveloped:
            label += f"\\n{UNDEVELOPED_GLYPH}"
        lines.append(f'  "{el.id}" [{_DOT_SHAPES[el.kind]}, label="{_dot_escape(label)}"];')
    for rel in sorted(structure.relationships, key=lambda r: (r.source, r.target, r.kind.value)):
        head = "normal" if rel.kind is RelationshipKind.SUPPORTED_BY else "empty"
        lines.append(f'  "{rel.source}" -> "{rel.target}" [arrowhead={head}];')
    lines.append("}")
    return "\n".join(lines) + "\n"


def _dot_escape(text: str) -> str:
    return text.replace('"', '\\"')


def layout_ranks(structure: GoalStructure) -> dict[str, int]:
    """Longest-path depth from the root for every element id."""
    ranks = {structure.root().id: 0}
    # Relax edges until stable; graphs are small (tens of nodes) and acyclic.
    changed = True
    while changed:
        changed = False
        for rel in structure.relationships:
            if rel.source in ranks:
                depth = ranks[rel.source] + 1
                if depth > ranks.get(rel.target, -1):
                    ranks[rel.target] = depth
                    changed = True
    return ranks


NODE_W = 150
NODE_H = 60
H_GAP = 30
V_GAP = 70
MARGIN = 20


def layout_positions(structure: GoalStructure) -> dict[str, tuple[float, float]]:
    """Deterministic layered layout: rank by depth, barycenter order in a rank."""
    ranks = layout_ranks(structure)
    layers: dict[int, list[str]] = {}
    for element_id, rank in ranks.items():
        layers.setdefault(rank, []).append(element_id)

    parents: dict[str, list[str]] = {}
    for rel in structure.relationships:
        parents.setdefault(rel.target, []).append(rel.source)

    order: dict[str, float] = {}
    for rank in sorted(layers):
        layer = sorted(layers[rank])
        if rank > 0:
            def barycenter(element_id: str) -> float:
                ups = [order[p] for p in parents.get(element_id, ()) if p in order]
                return sum(ups) / len(ups) if ups else 0.0

            layer.sort(key=lambda element_id: (barycenter(element_id), element_id))
        for idx, element_id in enumerate(layer):
            order[element_id] = float(idx)
        layers[rank] = layer

    positions: dict[str, tuple[float, float]] = {}
    for rank, layer in layers.items():
        for idx, element_id in enumerate(layer):
            x = MARGIN + idx * (NODE_W + H_GAP)
            y = MARGIN + rank * (NODE_H + V_GAP)
            positions[element_id] = (x, y)
    return positions


def export_svg(structure: GoalStructure) -> str:
    _require_valid(structure)
    positions = layout_positions(structure)
    width = max(x for x, _ in positions.values()) + NODE_W + MARGIN
    height = max(y for _, y in positions.values()) + NODE_H + MARGIN

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        "  <defs>",
        '    <marker id="solid" markerWidth="10" markerHeight="10" refX="9" refY="3" orient="auto">'
        '<path d="M0,0 L9,3 L0,6 Z" fill="black"/></marker>',
        '    <marker id="hollow" markerWidth="10" markerHeight="10" refX="9" refY="3" orient="auto">'
        '<path d="M0,0 L9,3 L0,6 Z" fill="white" stroke="black"/></marker>',
        "  </defs>",
    ]

    centers = {eid: (x + NODE_W / 2, y + NODE_H / 2) for eid, (x, y) in positions.items()}
    for rel in sorted(structure.relationships, key=lambda r: (r.source, r.target, r.kind.value)):
        (x1, y1), (x2, y2) = centers[rel.source], centers[rel.target]
        marker = "solid" if rel.kind is RelationshipKind.SUPPORTED_BY else "hollow"
        parts.append(
            f'  <line class="edge" data-kind="{rel.kind.value}" x1="{x1}" y1="{y1}" '
            f'x2="{x2}" y2="{y2}" stroke="black" marker-end="url(#{marker})"/>'
        )

    for el in sorted(structure.elements, key=lambda e: e.id):
        x, y = positions[el.id]
        parts.append(f'  <g class="node" data-id="{el.id}" data-kind="{el.kind.value}">')
        parts.append(_node_shape(el.kind, x, y))
        parts.append(
            f'    <text x="{x + NODE_W / 2}" y="{y + NODE_H / 2}" text-anchor="middle" '
            f'font-size="10">{_xml_escape(el.id)}: {_xml_escape(_clip(el.statement))}</text>'
        )
        if el.undeveloped:
            cx = x + NODE_W / 2
            top = y + NODE_H
            parts.append(
                f'    <path class="undeveloped" d="M{cx},{top} l8,8 l-8,8 l-8,-8 Z" '
                'fill="white" stroke="black"/>'
            )
        parts.append("  </g>")

    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _node_shape(kind: ElementKind, x: float, y: float) -> str:
    if kind is ElementKind.GOAL:
        return f'    <rect x="{x}" y="{y}" width="{NODE_W}" height="{NODE_H}" fill="white" stroke="black"/>'
    if kind is ElementKind.STRATEGY:
        skew = 15
        points = f"{x + skew},{y} {x + NODE_W},{y} {x + NODE_W - skew},{y + NODE_H} {x},{y + NODE_H}"
        return f'    <polygon points="{points}" fill="white" stroke="black"/>'
    if kind is ElementKind.CONTEXT:
        return (
            f'    <rect x="{x}" y="{y}" width="{NODE_W}" height="{NODE_H}" rx="15" '
            'fill="white" stroke="black"/>'
        )
    cx, cy = x + NODE_W / 2, y + NODE_H / 2
    return (
        f'    <ellipse cx="{cx}" cy="{cy}" rx="{NODE_W / 2}" ry="{NODE_H / 2}" '
        'fill="white" stroke="black"/>'
    )


def _clip(statement: str, limit: int = 40) -> str:
    return statement if len(statement) <= limit else statement[: limit - 1] + "…"


def _xml_escape(text: str) -> str:
    return text.replace("&", "&amp;").replace("<", "&lt;").replace(">", "&gt;")
