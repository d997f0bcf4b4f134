/** Thin fetch client for the gsnkit HTTP JSON API. All domain logic stays
 * server-side; this module only moves JSON. */

import type {
  ApiErrorBody,
  DetectResponseJson,
  DiagnosticJson,
  StructureJson,
  ViolationJson,
} from "./types.js";

export class ServiceError extends Error {
  constructor(
    public readonly code: string,
    message: string,
    public readonly status: number,
  ) {
    super(message);
  }
}

export interface DetectRequest {
  case?: StructureJson;
  case_name?: string;
  patterns?: StructureJson[];
  candidates?: string[];
  thresholds?: Record<string, number>;
  threshold?: number;
  runs?: number;
}

export interface ServiceClient {
  parse(text: string): Promise<{ structure: StructureJson; diagnostics: DiagnosticJson[] }>;
  serialize(structure: StructureJson): Promise<string>;
  validate(structure: StructureJson): Promise<{ valid: boolean; violations: ViolationJson[] }>;
  exportSvg(structure: StructureJson): Promise<string>;
  detect(request: DetectRequest): Promise<DetectResponseJson>;
}

export class HttpServiceClient implements ServiceClient {
  constructor(
    private readonly baseUrl: string,
    private readonly token?: string,
  ) {}

  private async post<T>(path: string, body: unknown, asText = false): Promise<T> {
    const headers: Record<string, string> = { "Content-Type": "application/json" };
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    const response = await fetch(this.baseUrl + path, {
      method: "POST",
      headers,
      body: JSON.stringify(body),
    });
    if (!response.ok) {
      let error: ApiErrorBody = { code: "BadRequest", message: response.statusText, details: {} };
      try {
        error = (await response.json()) as ApiErrorBody;
      } catch {
        /* non-JSON error body: keep the status text */
      }
      throw new ServiceError(error.code, error.message, response.status);
    }
    return (asText ? response.text() : response.json()) as Promise<T>;
  }

  parse(text: string) {
    return this.post<{ structure: StructureJson; diagnostics: DiagnosticJson[] }>("/parse", {
      text,
    });
  }

  async serialize(structure: StructureJson): Promise<string> {
    const body = await this.post<{ text: string }>("/serialize", { structure });
    return body.text;
  }

  validate(structure: StructureJson) {
    return this.post<{ valid: boolean; violations: ViolationJson[] }>("/validate", { structure });
  }

  exportSvg(structure: StructureJson): Promise<string> {
    return this.post<string>("/export", { structure, format: "svg" }, true);
  }

  detect(request: DetectRequest): Promise<DetectResponseJson> {
    return this.post<DetectResponseJson>("/detect", request);
  }
}
