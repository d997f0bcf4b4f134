/** Detection panel model: two threshold sliders in [0, 1] with 0.05 steps,
 * a run counter, and a renderable result showing per-metric values and the
 * verdict. The service computes everything. */

import type { DetectRequest, ServiceClient } from "./client.js";
import type { DetectResponseJson, StructureJson } from "./types.js";

export const SLIDER_STEP = 0.05;

/** Clamp to [0, 1] and snap to the slider's 0.05 grid. */
export function clampSlider(value: number): number {
  const clamped = Math.min(1, Math.max(0, value));
  return Math.round(clamped / SLIDER_STEP) * SLIDER_STEP;
}

export class DetectionPanel {
  bleuThreshold = 0.2;
  cosineThreshold = 0.2;
  runs = 1;
  result: DetectResponseJson | null = null;
  error: string | null = null; // shown non-modally; editor state untouched

  constructor(private readonly client: ServiceClient) {}

  setSliders(bleu: number, cosine: number): void {
    this.bleuThreshold = clampSlider(bleu);
    this.cosineThreshold = clampSlider(cosine);
  }

  async run(
    target: { case?: StructureJson; case_name?: string },
    candidates: { patterns?: StructureJson[]; candidates?: string[] },
  ): Promise<DetectResponseJson | null> {
    const request: DetectRequest = {
      ...target,
      ...candidates,
      thresholds: { bleu: this.bleuThreshold, cosine: this.cosineThreshold },
      runs: this.runs,
    };
    try {
      this.result = await this.client.detect(request);
      this.error = null;
    } catch (err) {
      this.result = null;
      this.error = err instanceof Error ? err.message : String(err);
    }
    return this.result;
  }

  /** Plain-text rendering of the panel: verdict plus one line per metric. */
  renderText(): string {
    if (this.error) return `error: ${this.error}`;
    if (!this.result) return "no result";
    const lines: string[] = [];
    for (const pattern of this.result.patterns) {
      lines.push(`${pattern.pattern}: ${pattern.majority ? "detected" : "not detected"}`);
      for (const metric of pattern.runs[0].results) {
        const op = metric.satisfied ? ">=" : "<";
        lines.push(`  ${metric.metric} = ${metric.value.toFixed(4)} (${op} ${metric.threshold})`);
      }
    }
    return lines.join("\n");
  }
}
