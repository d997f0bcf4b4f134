/** Client-side mirror of the GSN relationship rule table, used to reject
 * illegal drops immediately; the service's validate endpoint remains the
 * authority after every committed edit. */

import type { ElementKind, RelationshipKind, StructureJson } from "./types.js";

const SUPPORTED_BY_PAIRS = new Set([
  "Goal>Goal",
  "Goal>Strategy",
  "Goal>Solution",
  "Strategy>Goal",
]);

const IN_CONTEXT_OF_SOURCES = new Set<ElementKind>(["Goal", "Strategy"]);
const IN_CONTEXT_OF_TARGETS = new Set<ElementKind>([
  "Context",
  "Assumption",
  "Justification",
]);

export const DEVELOPABLE_KINDS = new Set<ElementKind>(["Goal", "Strategy"]);

export const ID_PREFIXES: Record<ElementKind, string> = {
  Goal: "G",
  Strategy: "S",
  Solution: "Sn",
  Context: "C",
  Assumption: "A",
  Justification: "J",
};

/** Empty string means the connection is legal; otherwise the rejection message. */
export function connectionError(
  sourceKind: ElementKind,
  targetKind: ElementKind,
  relationship: RelationshipKind,
): string {
  if (relationship === "SupportedBy") {
    if (!SUPPORTED_BY_PAIRS.has(`${sourceKind}>${targetKind}`)) {
      return `SupportedBy not permitted from ${sourceKind} to ${targetKind}`;
    }
    return "";
  }
  if (!IN_CONTEXT_OF_SOURCES.has(sourceKind) || !IN_CONTEXT_OF_TARGETS.has(targetKind)) {
    return `InContextOf not permitted from ${sourceKind} to ${targetKind}`;
  }
  return "";
}

export function undevelopedError(kind: ElementKind): string {
  return DEVELOPABLE_KINDS.has(kind)
    ? ""
    : `${kind} cannot carry the undeveloped decorator`;
}

/** Fresh id of the form G1, S1, Sn1... advancing past taken ids, matching
 * the service's auto-id helper. */
export function nextId(structure: StructureJson, kind: ElementKind): string {
  const prefix = ID_PREFIXES[kind];
  const taken = new Set(structure.elements.map((e) => e.id));
  let n = 1;
  while (taken.has(`${prefix}${n}`)) n += 1;
  return `${prefix}${n}`;
}
