/** JSON schema mirrored from the service; the client adds no fields of its own. */

export type ElementKind =
  | "Goal"
  | "Strategy"
  | "Solution"
  | "Context"
  | "Assumption"
  | "Justification";

export type RelationshipKind = "SupportedBy" | "InContextOf";

export interface ElementJson {
  id: string;
  kind: ElementKind;
  statement: string;
  undeveloped: boolean;
}

export interface RelationshipJson {
  source: string;
  target: string;
  kind: RelationshipKind;
}

export interface StructureJson {
  kind: "AssuranceCase" | "Pattern";
  name: string;
  elements: ElementJson[];
  relationships: RelationshipJson[];
  placeholders?: string[];
}

export interface ViolationJson {
  code: string;
  ids: string[];
  message: string;
  severity: "error" | "warning";
}

export interface DiagnosticJson {
  line: number;
  column: number;
  message: string;
  severity: "Error" | "Warning";
}

export interface MetricResultJson {
  metric: string;
  value: number;
  threshold: number;
  satisfied: boolean;
}

export interface DetectRunJson {
  detected: boolean;
  model_verdict: boolean | null;
  results: MetricResultJson[];
}

export interface DetectPatternJson {
  pattern: string;
  majority: boolean;
  runs: DetectRunJson[];
}

export interface DetectResponseJson {
  case: string;
  patterns: DetectPatternJson[];
  detected: string[];
}

export interface ApiErrorBody {
  code: string;
  message: string;
  details: Record<string, unknown>;
}

/** Order-insensitive structural equality, matching the service's semantics. */
export function structuresEqual(a: StructureJson, b: StructureJson): boolean {
  if (a.name !== b.name) return false;
  const elementKey = (e: ElementJson) =>
    JSON.stringify([e.id, e.kind, e.statement, e.undeveloped]);
  const relationshipKey = (r: RelationshipJson) =>
    JSON.stringify([r.source, r.target, r.kind]);
  const sortedA = a.elements.map(elementKey).sort();
  const sortedB = b.elements.map(elementKey).sort();
  const relsA = a.relationships.map(relationshipKey).sort();
  const relsB = b.relationships.map(relationshipKey).sort();
  return (
    JSON.stringify(sortedA) === JSON.stringify(sortedB) &&
    JSON.stringify(relsA) === JSON.stringify(relsB)
  );
}

export function cloneStructure(structure: StructureJson): StructureJson {
  return JSON.parse(JSON.stringify(structure)) as StructureJson;
}
