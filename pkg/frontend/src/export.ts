/** Export panel: JSON and SVG come from the service; PNG is rasterized
 * client-side from the SVG markup, completing the format list. */

import type { ServiceClient } from "./client.js";
import type { StructureJson } from "./types.js";

export function exportJson(structure: StructureJson): string {
  return JSON.stringify(structure, null, 2) + "\n";
}

export function importJson(text: string): StructureJson {
  const data = JSON.parse(text) as StructureJson;
  if (!Array.isArray(data.elements) || !Array.isArray(data.relationships)) {
    throw new Error("not a structure document: elements/relationships missing");
  }
  for (const el of data.elements) {
    if (typeof el.id !== "string" || typeof el.statement !== "string") {
      throw new Error(`malformed element ${JSON.stringify(el)}`);
    }
  }
  return data;
}

export function exportSvg(client: ServiceClient, structure: StructureJson): Promise<string> {
  return client.exportSvg(structure);
}

/** Minimal surface of the canvas/image APIs the rasterizer needs, so tests
 * can substitute fakes and browsers use the real DOM implementations. */
export interface RasterContext {
  fillStyle: string;
  fillRect(x: number, y: number, w: number, h: number): void;
  drawImage(image: unknown, x: number, y: number): void;
}

export interface RasterCanvas {
  getContext(kind: "2d"): RasterContext | null;
  toDataURL(type: string): string;
}

export interface RasterDeps {
  createCanvas(width: number, height: number): RasterCanvas;
  loadImage(svgText: string): Promise<unknown>;
}

function browserDeps(): RasterDeps {
  return {
    createCanvas(width, height) {
      const canvas = document.createElement("canvas");
      canvas.width = width;
      canvas.height = height;
      // HTMLCanvasElement satisfies the narrowed surface at runtime.
      return canvas as unknown as RasterCanvas;
    },
    loadImage(svgText) {
      return new Promise((resolve, reject) => {
        const blob = new Blob([svgText], { type: "image/svg+xml;charset=utf-8" });
        const url = URL.createObjectURL(blob);
        const img = new Image();
        img.onload = () => {
          URL.revokeObjectURL(url);
          resolve(img);
        };
        img.onerror = () => {
          URL.revokeObjectURL(url);
          reject(new Error("SVG did not load"));
        };
        img.src = url;
      });
    },
  };
}

function svgSize(svgText: string): { width: number; height: number } {
  const width = /width="(\d+)/.exec(svgText);
  const height = /height="(\d+)/.exec(svgText);
  return {
    width: width ? Number(width[1]) : 800,
    height: height ? Number(height[1]) : 600,
  };
}

/** Rasterize SVG markup to PNG bytes (base64-decoded from a data URL). */
export async function rasterizePng(
  svgText: string,
  deps: RasterDeps = browserDeps(),
): Promise<Uint8Array> {
  const { width, height } = svgSize(svgText);
  const canvas = deps.createCanvas(width, height);
  const ctx = canvas.getContext("2d");
  if (!ctx) throw new Error("2d canvas context unavailable");
  ctx.fillStyle = "#ffffff";
  ctx.fillRect(0, 0, width, height);
  ctx.drawImage(await deps.loadImage(svgText), 0, 0);
  const dataUrl = canvas.toDataURL("image/png");
  const base64 = dataUrl.slice(dataUrl.indexOf(",") + 1);
  const bytes = atob(base64);
  return Uint8Array.from(bytes, (ch) => ch.charCodeAt(0));
}
