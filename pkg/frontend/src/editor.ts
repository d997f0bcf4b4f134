/** Editor session state: canvas structure, selection, undo/redo, and the
 * live prose preview kept equal to serialize(structure) after every
 * committed edit. Illegal actions throw before any state changes. */

import type { ServiceClient } from "./client.js";
import { connectionError, nextId, undevelopedError } from "./rules.js";
import type {
  ElementKind,
  RelationshipKind,
  StructureJson,
  ViolationJson,
} from "./types.js";
import { cloneStructure } from "./types.js";

export class EditorError extends Error {}

export class Editor {
  structure: StructureJson;
  selection: string | null = null;
  dirty = false;
  prose = "";
  violations: ViolationJson[] = [];

  private undoStack: StructureJson[] = [];
  private redoStack: StructureJson[] = [];

  constructor(
    private readonly client: ServiceClient,
    name: string,
  ) {
    this.structure = { kind: "AssuranceCase", name, elements: [], relationships: [] };
  }

  private element(id: string) {
    const found = this.structure.elements.find((e) => e.id === id);
    if (!found) throw new EditorError(`no element ${id}`);
    return found;
  }

  /** Snapshot, apply, then refresh prose and violations from the service. */
  private async commit(mutate: () => void): Promise<void> {
    const before = cloneStructure(this.structure);
    mutate();
    this.undoStack.push(before);
    this.redoStack = [];
    this.dirty = true;
    await this.refresh();
  }

  private async refresh(): Promise<void> {
    // Violations are surfaced inline and never block further editing.
    const checked = await this.client.validate(this.structure);
    this.violations = checked.violations;
    this.prose = checked.valid ? await this.client.serialize(this.structure) : this.prose;
  }

  /** Add an element; except for the first root goal, a parent and legal
   * relationship are required so the canvas never holds unreachable nodes. */
  async addElement(
    kind: ElementKind,
    statement: string,
    parentId: string | null = null,
    relationship: RelationshipKind = "SupportedBy",
  ): Promise<string> {
    if (parentId === null) {
      if (this.structure.elements.length > 0) {
        throw new EditorError("only the first element may be dropped without a parent");
      }
      if (kind !== "Goal") throw new EditorError("the root element must be a Goal");
    } else {
      const parent = this.element(parentId);
      const problem = connectionError(parent.kind, kind, relationship);
      if (problem) throw new EditorError(problem);
    }
    const id = nextId(this.structure, kind);
    await this.commit(() => {
      this.structure.elements.push({ id, kind, statement, undeveloped: false });
      if (parentId !== null) {
        this.structure.relationships.push({ source: parentId, target: id, kind: relationship });
      }
    });
    this.selection = id;
    return id;
  }

  /** Connect two existing elements; illegal drops are rejected at drop time. */
  async connect(
    sourceId: string,
    targetId: string,
    relationship: RelationshipKind,
  ): Promise<void> {
    const source = this.element(sourceId);
    const target = this.element(targetId);
    const problem = connectionError(source.kind, target.kind, relationship);
    if (problem) throw new EditorError(problem);
    if (
      this.structure.relationships.some(
        (r) => r.source === sourceId && r.target === targetId && r.kind === relationship,
      )
    ) {
      throw new EditorError("that relationship already exists");
    }
    await this.commit(() => {
      this.structure.relationships.push({ source: sourceId, target: targetId, kind: relationship });
    });
  }

  async editStatement(id: string, statement: string): Promise<void> {
    this.element(id);
    await this.commit(() => {
      this.element(id).statement = statement;
    });
  }

  async toggleUndeveloped(id: string): Promise<void> {
    const target = this.element(id);
    const problem = undevelopedError(target.kind);
    if (problem) throw new EditorError(problem);
    await this.commit(() => {
      const el = this.element(id);
      el.undeveloped = !el.undeveloped;
    });
  }

  /** Delete an element together with every relationship touching it. */
  async deleteElement(id: string): Promise<void> {
    this.element(id);
    await this.commit(() => {
      this.structure.elements = this.structure.elements.filter((e) => e.id !== id);
      this.structure.relationships = this.structure.relationships.filter(
        (r) => r.source !== id && r.target !== id,
      );
    });
    if (this.selection === id) this.selection = null;
  }

  get canUndo(): boolean {
    return this.undoStack.length > 0;
  }

  get canRedo(): boolean {
    return this.redoStack.length > 0;
  }

  async undo(): Promise<void> {
    const previous = this.undoStack.pop();
    if (!previous) throw new EditorError("nothing to undo");
    this.redoStack.push(cloneStructure(this.structure));
    this.structure = previous;
    await this.refresh();
  }

  async redo(): Promise<void> {
    const next = this.redoStack.pop();
    if (!next) throw new EditorError("nothing to redo");
    this.undoStack.push(cloneStructure(this.structure));
    this.structure = next;
    await this.refresh();
  }
}
