/** Browser wiring: palette, canvas, prose preview, detection panel, export.
 * All state lives in Editor/DetectionPanel; this file only binds the DOM. */

import { HttpServiceClient } from "./client.js";
import { DetectionPanel, SLIDER_STEP } from "./detection.js";
import { Editor, EditorError } from "./editor.js";
import { exportJson, importJson, rasterizePng } from "./export.js";
import type { ElementKind, RelationshipKind } from "./types.js";

const KINDS: ElementKind[] = [
  "Goal",
  "Strategy",
  "Solution",
  "Context",
  "Assumption",
  "Justification",
];

function download(filename: string, content: string | Uint8Array, type: string): void {
  const blob = new Blob([content as BlobPart], { type });
  const url = URL.createObjectURL(blob);
  const link = document.createElement("a");
  link.href = url;
  link.download = filename;
  link.click();
  URL.revokeObjectURL(url);
}

export function mount(root: HTMLElement, baseUrl: string, token?: string): void {
  const client = new HttpServiceClient(baseUrl, token);
  const editor = new Editor(client, "untitled");
  const panel = new DetectionPanel(client);

  root.innerHTML = `
    <div class="palette"></div>
    <div class="canvas"></div>
    <pre class="prose"></pre>
    <div class="violations"></div>
    <div class="detection">
      <label>BLEU <input class="bleu" type="range" min="0" max="1" step="${SLIDER_STEP}"></label>
      <label>cosine <input class="cosine" type="range" min="0" max="1" step="${SLIDER_STEP}"></label>
      <button class="run-detect">Detect</button>
      <pre class="verdict"></pre>
    </div>
    <div class="exports">
      <button class="export-json">JSON</button>
      <button class="export-svg">SVG</button>
      <button class="export-png">PNG</button>
      <input class="import-json" type="file" accept="application/json">
    </div>
  `;

  const canvas = root.querySelector(".canvas") as HTMLElement;
  const prose = root.querySelector(".prose") as HTMLElement;
  const violations = root.querySelector(".violations") as HTMLElement;

  async function render(): Promise<void> {
    prose.textContent = editor.prose;
    violations.textContent = editor.violations
      .map((v) => `${v.severity}: ${v.message}`)
      .join("\n");
    try {
      canvas.innerHTML = await client.exportSvg(editor.structure);
    } catch {
      canvas.textContent = "(structure not yet renderable)";
    }
  }

  function report(err: unknown): void {
    violations.textContent =
      err instanceof EditorError || err instanceof Error ? err.message : String(err);
  }

  const palette = root.querySelector(".palette") as HTMLElement;
  for (const kind of KINDS) {
    const button = document.createElement("button");
    button.textContent = kind;
    button.addEventListener("click", async () => {
      const parent = editor.selection;
      const relationship: RelationshipKind =
        kind === "Context" || kind === "Assumption" || kind === "Justification"
          ? "InContextOf"
          : "SupportedBy";
      try {
        await editor.addElement(kind, `New ${kind.toLowerCase()}`, parent, relationship);
        await render();
      } catch (err) {
        report(err);
      }
    });
    palette.appendChild(button);
  }

  (root.querySelector(".run-detect") as HTMLElement).addEventListener("click", async () => {
    const bleu = Number((root.querySelector(".bleu") as HTMLInputElement).value);
    const cosine = Number((root.querySelector(".cosine") as HTMLInputElement).value);
    panel.setSliders(bleu, cosine);
    await panel.run({ case: editor.structure }, { candidates: [] });
    (root.querySelector(".verdict") as HTMLElement).textContent = panel.renderText();
  });

  (root.querySelector(".export-json") as HTMLElement).addEventListener("click", () => {
    download(`${editor.structure.name}.gsn.json`, exportJson(editor.structure), "application/json");
  });
  (root.querySelector(".export-svg") as HTMLElement).addEventListener("click", async () => {
    download(`${editor.structure.name}.svg`, await client.exportSvg(editor.structure), "image/svg+xml");
  });
  (root.querySelector(".export-png") as HTMLElement).addEventListener("click", async () => {
    const svg = await client.exportSvg(editor.structure);
    download(`${editor.structure.name}.png`, await rasterizePng(svg), "image/png");
  });
  (root.querySelector(".import-json") as HTMLInputElement).addEventListener("change", async (event) => {
    const file = (event.target as HTMLInputElement).files?.[0];
    if (!file) return;
    try {
      editor.structure = importJson(await file.text());
      await render();
    } catch (err) {
      report(err);
    }
  });

  void render();
}
