/** HTTP client for the motion engine.
 *
 * Every request the editor makes goes through one Transport function,
 * so tests can swap it for a fixture-backed fake and audit that the UI
 * never computes motion data on its own.
 */

import type {
  LibraryResponse,
  MetricsBody,
  MetricsResponse,
  ModelInfo,
  SequenceBody,
  SynthesisResult,
  SynthesizeBody,
  TrajectoryStored,
  TrajectoryUploadBody,
} from "./types.js";

export type Transport = (
  method: string,
  path: string,
  body?: unknown,
) => Promise<{ status: number; body: any }>;

export class ApiError extends Error {
  constructor(
    public readonly status: number,
    message: string,
  ) {
    super(message);
    this.name = "ApiError";
  }
}

export function fetchTransport(baseUrl: string): Transport {
  const root = baseUrl.replace(/\/+$/, "");
  return async (method, path, body) => {
    const resp = await fetch(root + path, {
      method,
      headers: body === undefined ? undefined : { "content-type": "application/json" },
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    return { status: resp.status, body: await resp.json() };
  };
}

export class EngineClient {
  constructor(private readonly transport: Transport) {}

  private async call<T>(method: string, path: string, body?: unknown): Promise<T> {
    const { status, body: payload } = await this.transport(method, path, body);
    if (status >= 400) {
      const message =
        payload && typeof payload.error === "string" ? payload.error : `HTTP ${status}`;
      throw new ApiError(status, message);
    }
    return payload as T;
  }

  getModel(): Promise<ModelInfo> {
    return this.call("GET", "/model");
  }

  getLibrary(id: string): Promise<LibraryResponse> {
    return this.call("GET", `/libraries/${id}`);
  }

  synthesize(body: SynthesizeBody): Promise<SynthesisResult> {
    return this.call("POST", "/synthesize", body);
  }

  sequence(body: SequenceBody): Promise<SynthesisResult> {
    return this.call("POST", "/sequence", body);
  }

  uploadTrajectory(body: TrajectoryUploadBody): Promise<TrajectoryStored> {
    return this.call("POST", "/trajectories", body);
  }

  metrics(body: MetricsBody): Promise<MetricsResponse> {
    return this.call("POST", "/metrics", body);
  }
}
